use std::collections::BTreeMap;

use ogring::kog::{count_kog, count_kog_by_search, enumerate_kog, KogTableau, PieriTable};
use ogring::partition::{SkewShiftedShape, StrictPartition};
use proptest::prelude::*;

fn sp(parts: &[u32]) -> StrictPartition {
    StrictPartition::from_set(parts).unwrap()
}

fn all_partitions(max_part: u32) -> Vec<StrictPartition> {
    (0u32..1 << max_part).map(StrictPartition::from_mask).collect()
}

fn brute_force_count(shape: &SkewShiftedShape, i: u32) -> u64 {
    let boxes = shape.boxes();
    let total = (i as u64).pow(boxes.len() as u32);
    let mut count = 0;
    for code in 0..total {
        let mut rest = code;
        let mut labels = BTreeMap::new();
        for &b in &boxes {
            labels.insert(b, (rest % i as u64) as u32 + 1);
            rest /= i as u64;
        }
        let t = KogTableau::new(shape.clone(), labels).unwrap();
        if t.content() == (1..=i).collect() && t.is_valid() {
            count += 1;
        }
    }
    count
}

#[test]
fn search_matches_exhaustive_labelings() {
    let parts = all_partitions(5);
    let mut compared = 0;
    for outer in &parts {
        for inner in &parts {
            let Ok(shape) = SkewShiftedShape::new(outer.clone(), inner.clone()) else { continue };
            let size = shape.size();
            if size == 0 || size > 7 {
                continue;
            }
            for i in 1..=size.min(4) {
                assert_eq!(count_kog(&shape, i), brute_force_count(&shape, i), "{shape}, i = {i}");
                compared += 1;
            }
        }
    }
    assert!(compared > 100);
}

#[test]
fn row_count_matches_search_on_rims() {
    let parts = all_partitions(9);
    let mut compared = 0;
    for outer in parts.iter().filter(|p| p.size() <= 30) {
        for inner in &parts {
            let Ok(shape) = SkewShiftedShape::new(outer.clone(), inner.clone()) else { continue };
            if !shape.is_rim() || shape.size() == 0 || shape.size() > 12 {
                continue;
            }
            for i in 1..=shape.size().min(9) {
                assert_eq!(count_kog(&shape, i), count_kog_by_search(&shape, i), "{shape}, i = {i}");
                compared += 1;
            }
        }
    }
    assert!(compared > 1000);
}

#[test]
fn enumerated_tableaux_satisfy_definition_and_remark() {
    let parts = all_partitions(7);
    for outer in &parts {
        for inner in &parts {
            let Ok(shape) = SkewShiftedShape::new(outer.clone(), inner.clone()) else { continue };
            if !shape.is_rim() || shape.size() == 0 || shape.size() > 9 {
                continue;
            }
            let cells = shape.boxes();
            for i in 1..=shape.size().min(6) {
                for t in enumerate_kog(&shape, i) {
                    assert!(t.is_valid(), "{shape}\n{t}");
                    assert_eq!(t.content(), (1..=i).collect());
                    for &(r, c) in &cells {
                        let v = t.label((r, c)).unwrap();
                        let sw: Vec<u32> = t.south_west((r, c)).iter().map(|&b| t.label(b).unwrap()).collect();
                        if c > 0 && t.label((r, c - 1)).is_some() {
                            assert!(sw.iter().all(|&w| v >= w), "left neighbour rule\n{t}");
                        }
                        if t.label((r + 1, c)).is_some() {
                            assert!(sw.iter().all(|&w| v <= w), "below neighbour rule\n{t}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn example_counts_up_to_ten() {
    for r in 1..=10u32 {
        for m in r + 1..=r + 4 {
            let one = SkewShiftedShape::new(sp(&[m + 1, r]), sp(&[m])).unwrap();
            assert_eq!(count_kog(&one, r + 1), 2, "{one}");
            if r >= 2 {
                let two = SkewShiftedShape::new(sp(&[m + 2, r]), sp(&[m])).unwrap();
                assert_eq!(count_kog(&two, r + 1), 3, "{two}");
            }
        }
    }
}

fn truncated(table: &PieriTable, lambda: &[u32], i: u32) -> BTreeMap<StrictPartition, i64> {
    let mask = sp(lambda).to_mask(table.n()).unwrap();
    table.row(mask, i, 1).iter().map(|&(nu, c)| (StrictPartition::from_mask(nu), c)).collect()
}

fn insert(map: &mut BTreeMap<StrictPartition, i64>, n: u32, parts: &[u32], c: i64) {
    let p = sp(parts);
    if p.is_in_range(n) {
        *map.entry(p).or_default() += c;
    }
}

fn squares_closed_form(n: u32, i: u32) -> BTreeMap<StrictPartition, i64> {
    let mut m = BTreeMap::new();
    insert(&mut m, n, &[2 * i], 1);
    for k in 1..i {
        insert(&mut m, n, &[i + k, i - k], 2);
    }
    insert(&mut m, n, &[i + 1, i], -1);
    for k in 2..i {
        insert(&mut m, n, &[i + k, i - k + 1], -3);
    }
    insert(&mut m, n, &[2 * i, 1], -2);
    m
}

fn products_closed_form(n: u32, i: u32, mm: u32) -> BTreeMap<StrictPartition, i64> {
    let mut m = BTreeMap::new();
    insert(&mut m, n, &[mm + i], 1);
    insert(&mut m, n, &[mm, i], 1);
    for k in 1..i {
        insert(&mut m, n, &[mm + k, i - k], 2);
    }
    insert(&mut m, n, &[mm + 1, i], -2);
    for k in 2..i {
        insert(&mut m, n, &[mm + k, i - k + 1], -3);
    }
    insert(&mut m, n, &[mm + i, 1], -2);
    m
}

#[test]
fn squares_closed_form_up_to_twelve() {
    for n in 3..=12 {
        let table = PieriTable::new(n);
        for i in 2..n {
            assert_eq!(truncated(&table, &[i], i), squares_closed_form(n, i), "n = {n}, i = {i}");
        }
        assert_eq!(table.coefficients(&sp(&[1]), 1).unwrap(), [(sp(&[2]), 1)].into_iter().collect());
        assert!(table.coefficients(&sp(&[n]), n).unwrap().is_empty());
    }
}

#[test]
fn products_closed_form_up_to_twelve() {
    for n in 3..=12 {
        let table = PieriTable::new(n);
        for mm in 2..=n {
            let mut expect = BTreeMap::new();
            insert(&mut expect, n, &[mm + 1], 1);
            insert(&mut expect, n, &[mm, 1], 1);
            insert(&mut expect, n, &[mm + 1, 1], -1);
            assert_eq!(table.coefficients(&sp(&[mm]), 1).unwrap(), expect, "n = {n}, m = {mm}");
            for i in 2..mm {
                assert_eq!(truncated(&table, &[mm], i), products_closed_form(n, i, mm), "n = {n}, i = {i}, m = {mm}");
            }
        }
    }
}

fn apply(table: &PieriTable, x: &BTreeMap<u32, i64>, i: u32) -> BTreeMap<u32, i64> {
    let mut out = BTreeMap::new();
    for (&lambda, &c) in x {
        for &(nu, d) in table.row(lambda, i, u32::MAX).iter() {
            *out.entry(nu).or_default() += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed), ..ProptestConfig::default() })]

    #[test]
    fn pieri_operators_commute(n in 2u32..=10, seed_mask in any::<u32>(), i in 1u32..=10, j in 1u32..=10) {
        let i = 1 + (i - 1) % n;
        let j = 1 + (j - 1) % n;
        // Keep λ small so the full expansion stays cheap.
        let lambda = seed_mask & ((1 << n) - 1) & 0b1_0110_1011;
        let table = PieriTable::new(n);
        let start: BTreeMap<u32, i64> = [(lambda, 1)].into_iter().collect();
        let ij = apply(&table, &apply(&table, &start, i), j);
        let ji = apply(&table, &apply(&table, &start, j), i);
        prop_assert_eq!(ij, ji);
    }
}
