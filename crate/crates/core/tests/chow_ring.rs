use std::collections::BTreeMap;

use num_bigint::BigInt;
use ogring::chow::RawCombination;
use ogring::params::reduce_pow2;
use ogring::{ChowElement, ChowRing, CoeffMode, RewriteOrder, RingParams, SquareFreeMonomial, Valuation};
use proptest::prelude::*;

/// Straightforward rewriting of one multiset, kept independent of the engine.
fn naive(n: u32, counts: &mut BTreeMap<u32, u32>, c: i64, out: &mut BTreeMap<u32, i64>) {
    if c == 0 || counts.keys().any(|&i| i > n) {
        return;
    }
    let Some((&i, _)) = counts.iter().find(|(_, &k)| k >= 2) else {
        let mask = counts.keys().fold(0u32, |m, &i| m | 1 << (i - 1));
        *out.entry(mask).or_default() += c;
        return;
    };
    let mut base = counts.clone();
    *base.get_mut(&i).unwrap() -= 2;
    base.retain(|_, k| *k > 0);
    let sign = |j: u32| if j % 2 == 0 { 1 } else { -1 };
    let mut branch = |extra: &[u32], coef: i64| {
        let mut next = base.clone();
        for &e in extra {
            *next.entry(e).or_default() += 1;
        }
        naive(n, &mut next, c * coef, out);
    };
    branch(&[2 * i], sign(i + 1));
    for k in 1..i {
        branch(&[i - k, i + k], 2 * sign(k + 1));
    }
}

fn naive_normalize(n: u32, raw: &[(Vec<u32>, i64)]) -> BTreeMap<u32, i64> {
    let mut out = BTreeMap::new();
    for (set, c) in raw {
        let mut counts = BTreeMap::new();
        for &i in set {
            *counts.entry(i).or_default() += 1;
        }
        naive(n, &mut counts, *c, &mut out);
    }
    out.retain(|_, c| *c != 0);
    out
}

fn to_raw(raw: &[(Vec<u32>, i64)]) -> RawCombination {
    raw.iter().map(|(s, c)| (s.iter().map(|&i| i64::from(i)).collect(), BigInt::from(*c))).collect()
}

fn as_map(x: &ChowElement) -> BTreeMap<u32, i64> {
    x.sorted_terms().into_iter().map(|(m, c)| (m.0, i64::try_from(c).unwrap())).collect()
}

fn raw_strategy(max_n: u32) -> impl Strategy<Value = (u32, Vec<(Vec<u32>, i64)>)> {
    (2..=max_n).prop_flat_map(|n| {
        let term = (prop::collection::vec(1..=n, 0..=6), -5i64..=5);
        (Just(n), prop::collection::vec(term, 1..=3))
    })
}

fn element(ring: &ChowRing, raw: &[(Vec<u32>, i64)]) -> ChowElement {
    ring.normalize(&to_raw(raw)).unwrap()
}

#[test]
fn relation_examples() {
    let ring = ChowRing::new(RingParams::exact(4).unwrap());
    let sq = |i: u32| ring.mul_generator(&ring.generator(i), i);
    assert_eq!(sq(1), ring.generator(2));
    let e = |s: &[u32]| ring.monomial(SquareFreeMonomial::from_indices(s, 4).unwrap(), BigInt::from(1));
    assert_eq!(sq(2), e(&[4]).scale(&BigInt::from(-1)).checked_add(&e(&[1, 3]).scale(&BigInt::from(2))).unwrap());
    assert!(sq(4).is_zero());
    assert_eq!(ring.point().degree_top(), BigInt::from(1));
}

#[test]
fn point_is_top_degree() {
    for n in 2..=8 {
        let ring = ChowRing::new(RingParams::exact(n).unwrap());
        assert_eq!(ring.point().degrees(), vec![n * (n + 1) / 2]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn matches_naive_rewriting((n, raw) in raw_strategy(6)) {
        let ring = ChowRing::new(RingParams::exact(n).unwrap());
        prop_assert_eq!(as_map(&element(&ring, &raw)), naive_normalize(n, &raw));
    }

    #[test]
    fn rewrite_order_is_irrelevant((n, raw) in raw_strategy(6), seed in any::<u64>()) {
        let ring = ChowRing::new(RingParams::exact(n).unwrap());
        let raw = to_raw(&raw);
        let a = ring.normalize_with(&raw, RewriteOrder::LargestFirst).unwrap();
        prop_assert_eq!(&a, &ring.normalize_with(&raw, RewriteOrder::SmallestFirst).unwrap());
        prop_assert_eq!(&a, &ring.normalize_with(&raw, RewriteOrder::Seeded(seed)).unwrap());
    }

    #[test]
    fn normalizing_a_normal_form_is_identity((n, raw) in raw_strategy(6)) {
        let ring = ChowRing::new(RingParams::exact(n).unwrap());
        let a = element(&ring, &raw);
        let again: RawCombination = a.sorted_terms().into_iter().map(|(m, c)| (m.indices().into_iter().map(i64::from).collect(), c)).collect();
        prop_assert_eq!(ring.normalize(&again).unwrap(), a);
    }

    #[test]
    fn ring_axioms((n, ra) in raw_strategy(8), rb in prop::collection::vec((prop::collection::vec(1u32..=8, 0..=5), -5i64..=5), 1..=3), rc in prop::collection::vec((prop::collection::vec(1u32..=8, 0..=5), -5i64..=5), 1..=3)) {
        let ring = ChowRing::new(RingParams::exact(n).unwrap());
        let (a, b, c) = (element(&ring, &ra), element(&ring, &rb), element(&ring, &rc));
        prop_assert_eq!(ring.mul(&ring.mul(&a, &b).unwrap(), &c).unwrap(), ring.mul(&a, &ring.mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(ring.mul(&a, &b).unwrap(), ring.mul(&b, &a).unwrap());
        prop_assert_eq!(
            ring.mul(&a, &b.checked_add(&c).unwrap()).unwrap(),
            ring.mul(&a, &b).unwrap().checked_add(&ring.mul(&a, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(ring.mul(&ring.one(), &a).unwrap(), a);
    }

    #[test]
    fn products_are_graded(n in 2u32..=8, s in prop::collection::vec(1u32..=8, 1..=6)) {
        let ring = ChowRing::new(RingParams::exact(n).unwrap());
        let x = ring.product_of_generators(s.iter().copied());
        let degree: u32 = s.iter().sum();
        prop_assert!(x.is_zero() || x.degrees() == vec![degree]);
    }

    #[test]
    fn modulus_agrees_with_exact((n, ra) in raw_strategy(8), rb in prop::collection::vec((prop::collection::vec(1u32..=8, 0..=5), -5i64..=5), 1..=3), k in prop::sample::select(vec![8u32, 16]), p in 1u64..=4) {
        let exact = ChowRing::new(RingParams::exact(n).unwrap());
        let modular = ChowRing::new(RingParams::new(n, CoeffMode::Modulus(k)).unwrap());
        let e = exact.pow(&exact.mul(&element(&exact, &ra), &element(&exact, &rb)).unwrap(), p).unwrap();
        let m = modular.pow(&modular.mul(&element(&modular, &ra), &element(&modular, &rb)).unwrap(), p).unwrap();
        let reduce = |x: &ChowElement| -> BTreeMap<u32, BigInt> {
            x.sorted_terms().into_iter().map(|(mono, c)| (mono.0, reduce_pow2(&c, k))).filter(|(_, c)| *c != BigInt::from(0)).collect()
        };
        prop_assert_eq!(reduce(&e), reduce(&m));
    }

    #[test]
    fn valuation_matches_reduction((n, raw) in raw_strategy(6), k in 0u32..=6) {
        let ring = ChowRing::new(RingParams::exact(n).unwrap());
        let a = element(&ring, &raw).scale(&(BigInt::from(1) << k));
        let v = a.two_adic_valuation();
        prop_assert!(v.is_at_least(k));
        if let Valuation::Exact(v) = v {
            prop_assert!(a.reduce_mod_pow2(v).is_zero());
            prop_assert!(!a.reduce_mod_pow2(v + 1).is_zero());
        } else {
            prop_assert!(a.is_zero());
        }
    }
}
