//! Pieri closed forms, the KOG examples, and the quadratic relations modulo `I²`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use ogring::{
    chow_eval, count_kog, count_kog_by_search, enumerate_kog, eval_expression, psi_substitute, ChowRing, GeneratorExpression as E,
    PieriTable, ReesElement, ReesRing, Result, RingParams, SkewShiftedShape, StrictPartition,
};
use rand::Rng;
use serde_json::json;

use super::{certificate, chow_congruence, with, partition_map, rees_congruence, rng, PROPERTY_CASES};
use crate::certificate::{val, Job, Outcome, VerificationCertificate};
use crate::context::Context;

fn sp(parts: &[u32]) -> StrictPartition {
    StrictPartition::from_set(parts).unwrap()
}

fn insert(map: &mut BTreeMap<StrictPartition, i64>, n: u32, parts: &[u32], c: i64) {
    let p = sp(parts);
    if p.is_in_range(n) {
        *map.entry(p).or_default() += c;
    }
    map.retain(|_, c| *c != 0);
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
    if i == 1 {
        insert(&mut m, n, &[mm + 1], 1);
        insert(&mut m, n, &[mm, 1], 1);
        insert(&mut m, n, &[mm + 1, 1], -1);
        return m;
    }
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

/// `ē_i ē_λ` by enumerating every `ν ⊆ [1, n]` with `|ν| < bound` and counting tableaux by search.
fn tableau_pieri(n: u32, lambda: &StrictPartition, i: u32, bound: u32) -> BTreeMap<StrictPartition, i64> {
    let mut out = BTreeMap::new();
    for mask in 0u32..1 << n {
        let nu = StrictPartition::from_mask(mask);
        if nu.size() >= bound || !nu.contains(lambda) {
            continue;
        }
        let shape = SkewShiftedShape::new(nu.clone(), lambda.clone()).unwrap();
        let c = count_kog_by_search(&shape, i) as i64;
        if c != 0 {
            let sign = if (shape.size() - i) % 2 == 0 { 1 } else { -1 };
            out.insert(nu, sign * c);
        }
    }
    out
}

fn table_pieri(table: &PieriTable, lambda: &StrictPartition, i: u32, bound: u32) -> BTreeMap<StrictPartition, i64> {
    let mask = lambda.to_mask(table.n()).unwrap();
    let extra = bound.saturating_sub(lambda.size() + i + 1);
    table
        .row(mask, i, extra)
        .iter()
        .map(|&(nu, c)| (StrictPartition::from_mask(nu), c))
        .filter(|(nu, _)| nu.size() < bound)
        .collect()
}

/// Compares the Pieri table, the tableau search and a closed form below `|ν| < bound`.
fn three_way(table: &PieriTable, lambda: &StrictPartition, i: u32, bound: u32, closed: BTreeMap<StrictPartition, i64>) -> Outcome {
    let n = table.n();
    let by_table = table_pieri(table, lambda, i, bound);
    let by_search = tableau_pieri(n, lambda, i, bound);
    let ok = by_table == closed && by_search == closed;
    Ok((
        ok,
        json!({
            "truncation": if bound == u32::MAX { json!("none") } else { json!(format!("|nu| < {bound}")) },
            "closed_form": partition_map(&closed),
            "pieri_table": partition_map(&by_table),
            "tableau_search": partition_map(&by_search),
        }),
    ))
}

fn example_counts(r: u32, second: bool) -> Outcome {
    let mut counts = Vec::new();
    let expect = if second { 3 } else { 2 };
    let mut ok = true;
    for m in r + 1..=r + 4 {
        let outer = if second { sp(&[m + 2, r]) } else { sp(&[m + 1, r]) };
        let shape = SkewShiftedShape::new(outer, sp(&[m]))?;
        let (a, b) = (count_kog(&shape, r + 1), count_kog_by_search(&shape, r + 1));
        ok &= a == expect && b == expect;
        counts.push(json!({ "shape": shape.to_string(), "count": a, "search": b }));
    }
    Ok((ok, json!({ "expected": expect, "shapes": counts })))
}

fn definition_and_remark(n: u32) -> Outcome {
    let top = n.min(6);
    let parts: Vec<StrictPartition> = (0u32..1 << top).map(StrictPartition::from_mask).collect();
    let (mut tableaux, mut ok) = (0u64, true);
    for outer in &parts {
        for inner in &parts {
            let Ok(shape) = SkewShiftedShape::new(outer.clone(), inner.clone()) else { continue };
            if !shape.is_rim() || shape.size() == 0 || shape.size() > 8 {
                continue;
            }
            let cells = shape.boxes();
            for i in 1..=shape.size().min(5) {
                let all = enumerate_kog(&shape, i);
                ok &= all.len() as u64 == count_kog(&shape, i);
                for t in all {
                    tableaux += 1;
                    ok &= t.is_valid() && t.content() == (1..=i).collect();
                    for &(r, c) in &cells {
                        let v = t.label((r, c)).unwrap();
                        let sw: Vec<u32> = t.south_west((r, c)).iter().map(|&b| t.label(b).unwrap()).collect();
                        if c > 0 && t.label((r, c - 1)).is_some() {
                            ok &= sw.iter().all(|&w| v >= w);
                        }
                        if t.label((r + 1, c)).is_some() {
                            ok &= sw.iter().all(|&w| v <= w);
                        }
                    }
                }
            }
        }
    }
    Ok((ok, json!({ "parts_up_to": top, "tableaux": tableaux })))
}

/// Builds `Σ c · t^{[t]} · f(S)` as an expression, dropping terms with an index above `n`.
fn expr(n: u32, terms: &[(i64, bool, Vec<u32>, Vec<u32>)]) -> E {
    let kept: Vec<E> = terms
        .iter()
        .filter(|(c, _, f, g)| *c != 0 && f.iter().chain(g).all(|&j| j <= n))
        .map(|(c, t, f, g)| {
            let mut v = vec![E::int(*c)];
            if *t {
                v.push(E::T);
            }
            v.extend(f.iter().map(|&j| E::F(j)));
            v.extend(g.iter().map(|&j| E::G(j)));
            E::Product(v)
        })
        .collect();
    if kept.is_empty() {
        E::int(0)
    } else {
        E::Sum(kept)
    }
}

fn sign(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Right-hand side of the `f(i)²` relation modulo `I²`, in products of `f`.
fn squares_rhs(n: u32, i: u32) -> E {
    let mut terms = vec![(sign(i - 1), false, vec![2 * i], vec![])];
    for k in 1..i {
        terms.push((2, false, vec![i + k, i - k], vec![]));
        terms.push((-1, true, vec![i + k, i - k + 1], vec![]));
    }
    if i % 2 == 0 {
        terms.push((1, true, vec![2 * i + 1], vec![]));
    }
    expr(n, &terms)
}

/// The same relation written with `g`.
fn squares_rhs_g(n: u32, i: u32, with_t_term: bool) -> E {
    let mut terms = vec![(sign(i - 1), false, vec![2 * i], vec![])];
    for k in 1..i {
        terms.push((1, false, vec![i + k], vec![i - k]));
    }
    if with_t_term && i % 2 == 0 {
        terms.push((1, true, vec![2 * i + 1], vec![]));
    }
    expr(n, &terms)
}

/// `Σ c f_{λ}` for partitions `λ`, each term optionally times `t`.
fn schubert_sum(ring: &ReesRing, terms: &[(i64, bool, Vec<u32>)]) -> Result<ReesElement> {
    let mut out = ring.zero();
    for (c, t, parts) in terms {
        let mut x = ring.f_partition(&sp(parts)).scale(&BigInt::from(*c));
        if *t {
            x = x.mul_t();
        }
        out = out.checked_add(&x)?;
    }
    Ok(out)
}

fn fpair(ring: &ReesRing, a: u32, b: u32) -> Result<ReesElement> {
    ring.pieri_mul(a, &ring.f(b))
}

fn squares_corollary(ring: &ReesRing, i: u32) -> Outcome {
    let lhs = fpair(ring, i, i)?;
    let mut terms = vec![(1, false, vec![2 * i])];
    for k in 1..i {
        terms.push((2, false, vec![i + k, i - k]));
        terms.push((-1, true, vec![i + k, i - k + 1]));
    }
    rees_congruence(&lhs, &schubert_sum(ring, &terms)?, 2)
}

fn products_corollary(ring: &ReesRing, i: u32, m: u32) -> Outcome {
    let lhs = fpair(ring, i, m)?;
    if i == 1 {
        let rhs = schubert_sum(ring, &[(1, false, vec![m + 1]), (1, false, vec![m, 1]), (-1, true, vec![m + 1, 1])])?;
        let diff = lhs.checked_sub(&rhs)?;
        return Ok((diff.is_zero(), json!({ "exact": true, "difference_terms": diff.len() })));
    }
    let mut terms = vec![(1, false, vec![m + i]), (1, false, vec![m, i])];
    for k in 1..i {
        terms.push((2, false, vec![m + k, i - k]));
    }
    for k in 2..i {
        terms.push((1, true, vec![m + k, i - k + 1]));
    }
    rees_congruence(&lhs, &schubert_sum(ring, &terms)?, 2)
}

/// `f_{m,i} - f(m) f(i)` against its expansion in products of `f`.
fn commas(ring: &ReesRing, i: u32, m: u32) -> Outcome {
    let n = ring.params().n;
    let lhs = ring.f_partition(&sp(&[m, i])).checked_sub(&fpair(ring, m, i)?)?;
    if i == 1 {
        let minus = expr(n, &[(-1, false, vec![m + 1], vec![]), (-1, true, vec![1, m + 1], vec![]), (1, true, vec![m + 2], vec![])]);
        let plus = expr(n, &[(1, false, vec![m + 1], vec![]), (-1, true, vec![1, m + 1], vec![]), (1, true, vec![m + 2], vec![])]);
        let plus = eval_expression(&plus, ring)?;
        let gap = plus.checked_sub(&lhs)?.ideal_valuation();
        return with(
            rees_congruence(&lhs, &eval_expression(&minus, ring)?, 2),
            json!({ "sign_of_f(m+1)": -1, "plus_sign_valuation": val(gap) }),
        );
    }
    let rhs = {
        let mut terms = vec![(sign(i), false, vec![m + i], vec![])];
        for k in 1..i {
            terms.push((-2, false, vec![m + k, i - k], vec![]));
        }
        for k in 2..i {
            terms.push((-1, true, vec![m + k, i - k + 1], vec![]));
        }
        if i % 2 == 1 {
            terms.push((-1, true, vec![m + i + 1], vec![]));
        }
        expr(n, &terms)
    };
    rees_congruence(&lhs, &eval_expression(&rhs, ring)?, 2)
}

fn relation_mod4(n: u32, i: u32) -> Outcome {
    let ring = ChowRing::new(RingParams::exact(n)?);
    let square = ring.mul_generator(&ring.generator(i), i);
    let psi_rhs = chow_eval(&psi_substitute(&squares_rhs(n, i)), &ring)?;
    let mut terms = vec![E::Product(vec![E::int(sign(i + 1)), E::Ei(2 * i)])];
    for k in 1..i {
        if i + k <= n {
            terms.push(E::Product(vec![E::int(2 * sign(k + 1)), E::Ei(i - k), E::Ei(i + k)]));
        }
    }
    let terms: Vec<E> = terms.into_iter().filter(|t| !matches!(t, E::Product(v) if v.iter().any(|x| matches!(x, E::Ei(j) if *j > n)))).collect();
    let relation = chow_eval(&E::Sum(terms), &ring)?;
    let (a, wa) = chow_congruence(&psi_rhs, &relation, 2)?;
    let (b, wb) = chow_congruence(&psi_rhs, &square, 2)?;
    Ok((a && b, json!({ "psi_rhs_vs_relation": wa, "psi_rhs_vs_square": wb })))
}

fn pieri_commute(n: u32, seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_pieri_commute");
    let mut failures = 0;
    for _ in 0..PROPERTY_CASES {
        let nn = rng.gen_range(2..=n.clamp(2, 9));
        let table = PieriTable::new(nn);
        // Small λ keeps full expansions cheap.
        let lambda = rng.gen::<u32>() & ((1 << nn) - 1) & 0b1_0110_1011;
        let (i, j) = (rng.gen_range(1..=nn), rng.gen_range(1..=nn));
        let apply = |x: &BTreeMap<u32, i64>, i: u32| {
            let mut out: BTreeMap<u32, i64> = BTreeMap::new();
            for (&l, &c) in x {
                for &(nu, d) in table.row(l, i, u32::MAX).iter() {
                    *out.entry(nu).or_default() += c * d;
                }
            }
            out.retain(|_, c| *c != 0);
            out
        };
        let start: BTreeMap<u32, i64> = [(lambda, 1)].into_iter().collect();
        if apply(&apply(&start, i), j) != apply(&apply(&start, j), i) {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "cases": PROPERTY_CASES, "failures": failures, "seed": seed })))
}

pub fn suite_appendix_pieri(ctx: &Context) -> Result<VerificationCertificate> {
    let n = ctx.n();
    if !(2..=16).contains(&n) {
        return Err(ogring::Error::UnsupportedRank(n));
    }
    let seed = ctx.seed();
    let table = PieriTable::new(n);
    let ring = ReesRing::new(RingParams::exact(n)?);
    let (table, ring) = (&table, &ring);
    let mut jobs: Vec<Job<'_>> = Vec::new();

    for r in 1..=10 {
        jobs.push(Job::computed(format!("ex_kogt_one_r{r:02}"), "ex:KOGT (1): C = 2", move || example_counts(r, false)));
        if r >= 2 {
            jobs.push(Job::computed(format!("ex_kogt_two_r{r:02}"), "ex:KOGT (2): C = 3", move || example_counts(r, true)));
        }
    }
    jobs.push(Job::computed("kog_definition_and_remark", "dfn:KOG, koggreaterorless", move || definition_and_remark(n)));

    let one = sp(&[1]);
    let top = sp(&[n]);
    jobs.push(Job::computed("pieri_e1_squared", "ktheorysquaresbarek: ē_1² = ē_2", move || {
        let mut closed = BTreeMap::new();
        insert(&mut closed, n, &[2], 1);
        three_way(table, &one, 1, u32::MAX, closed)
    }));
    jobs.push(Job::computed("pieri_en_squared", "ktheorysquaresbarek: ē_n² = 0", move || {
        three_way(table, &top, n, u32::MAX, BTreeMap::new())
    }));
    for i in 2..n {
        jobs.push(Job::computed(format!("pieri_square_i{i:02}"), "ktheorysquaresbarek: ē_i² mod K^(2i+2)", move || {
            three_way(table, &sp(&[i]), i, 2 * i + 2, squares_closed_form(n, i))
        }));
    }
    for m in 2..=n {
        jobs.push(Job::computed(format!("pieri_product_i01_m{m:02}"), "ktheoryproductsbarek: ē_1 ē_m", move || {
            three_way(table, &sp(&[m]), 1, u32::MAX, products_closed_form(n, 1, m))
        }));
        for i in 2..m {
            jobs.push(Job::computed(
                format!("pieri_product_i{i:02}_m{m:02}"),
                "ktheoryproductsbarek: ē_i ē_m mod K^(i+m+2)",
                move || three_way(table, &sp(&[m]), i, i + m + 2, products_closed_form(n, i, m)),
            ));
        }
    }

    jobs.push(Job::computed("rees_f1_squared", "ktheorysquaresckcommas: f(1)² = f(2)", move || {
        let d = fpair(ring, 1, 1)?.checked_sub(&ring.f(2))?;
        Ok((d.is_zero(), json!({ "exact": true, "difference_terms": d.len() })))
    }));
    jobs.push(Job::computed("rees_fn_squared", "ktheorysquaresckcommas: f(n)² = 0", move || {
        let d = fpair(ring, n, n)?;
        Ok((d.is_zero(), json!({ "exact": true, "difference_terms": d.len() })))
    }));
    for i in 2..n {
        jobs.push(Job::computed(format!("rees_square_i{i:02}"), "ktheorysquaresckcommas: f(i)² mod I²", move || {
            squares_corollary(ring, i)
        }));
    }
    for m in 2..=n {
        jobs.push(Job::computed(format!("rees_product_i01_m{m:02}"), "ktheoryproductsckcommas: f(m)f(1)", move || {
            products_corollary(ring, 1, m)
        }));
        jobs.push(Job::computed(format!("commas_i01_m{m:02}"), "ktheorycommasckproducts: f_{m,1} - f(m)f(1) mod I²", move || {
            commas(ring, 1, m)
        }));
        for i in 2..m {
            jobs.push(Job::computed(format!("rees_product_i{i:02}_m{m:02}"), "ktheoryproductsckcommas: f(m)f(i) mod I²", move || {
                products_corollary(ring, i, m)
            }));
            jobs.push(Job::computed(format!("commas_i{i:02}_m{m:02}"), "ktheorycommasckproducts: f_{m,i} - f(m)f(i) mod I²", move || {
                commas(ring, i, m)
            }));
        }
    }
    for i in 2..n {
        jobs.push(Job::computed(format!("squares_products_i{i:02}"), "ktheorysquaresckproducts: f(i)² mod I²", move || {
            rees_congruence(&fpair(ring, i, i)?, &eval_expression(&squares_rhs(n, i), ring)?, 2)
        }));
        jobs.push(Job::computed(format!("krelationinbar_i{i:02}"), "krelationinbar: f(i)² mod I², g-form", move || {
            rees_congruence(&fpair(ring, i, i)?, &eval_expression(&squares_rhs_g(n, i, true), ring)?, 2)
        }));
        jobs.push(Job::computed(format!("relationinbar_mod4_i{i:02}"), "relationinbar vs ψ(ktheorysquaresckproducts) mod 4", move || {
            relation_mod4(n, i)
        }));
    }
    for i in (n / 2).max(1)..=n {
        jobs.push(Job::computed(
            format!("krelationinbar_large_i{i:02}"),
            "krelationinbarlargeimodsquare: f(i)² mod I², i >= n/2",
            move || rees_congruence(&fpair(ring, i, i)?, &eval_expression(&squares_rhs_g(n, i, false), ring)?, 2),
        ));
    }
    for i in 1..=n {
        jobs.push(Job::computed(format!("krelationinbar_modi_i{i:02}"), "krelationinbarmodi: f(i)² ≡ f(2i) mod I", move || {
            rees_congruence(&fpair(ring, i, i)?, &ring.f(2 * i), 1)
        }));
    }
    jobs.push(Job::computed("prop_pieri_commute", "pieriformulaktheory: ē_i ē_j ē_λ = ē_j ē_i ē_λ", move || pieri_commute(n, seed)));

    Ok(certificate("appendix_pieri", ctx, jobs))
}
