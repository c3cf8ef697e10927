//! Congruences in the Chow ring of the split variety.

use num_bigint::BigInt;
use ogring::chow::RawCombination;
use ogring::params::{pow2, reduce_pow2, two_adic_factorial};
use ogring::{
    res, shat, shat_set, ChowElement, ChowRing, CoeffMode, GeneratorExpression as E, Result, RewriteOrder, RingParams,
    SquareFreeMonomial, Valuation,
};
use rand::Rng;
use serde_json::json;

use super::{all_of, big, certificate, chow_congruence, rng, star_instances, with, PROPERTY_CASES};
use crate::certificate::{at_least, val, Job, Outcome, VerificationCertificate};
use crate::context::Context;

fn interval(a: u32, b: u32) -> Vec<u32> {
    (a..=b).collect()
}

fn factorial(k: u32) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn monomial(ring: &ChowRing, set: &[u32], c: BigInt) -> Result<ChowElement> {
    Ok(ring.monomial(SquareFreeMonomial::from_indices(set, ring.params().n)?, c))
}

/// `e(i)^j ≡ 2^{v(j!)} Σ e(J) mod 2^{v(j!)+1}` read in the square-free basis.
fn eij_structure(ctx: &Context, i: u32, j: u32, refine: Option<(&[u32], &[u32])>) -> Outcome {
    let n = ctx.n();
    let x = ctx.chow_word(0, &vec![i; j as usize])?;
    let vj = two_adic_factorial(u64::from(j));
    let reduced = x.reduce_mod_pow2(vj + 1);
    let above: u32 = ((1u64 << n) - (1u64 << i)) as u32;
    let (mut bad_coefficient, mut misses_above, mut bad_refinement) = (0, 0, 0);
    for (mono, c) in reduced.terms() {
        if reduce_pow2(c, vj + 1) != pow2(vj) {
            bad_coefficient += 1;
        }
        if mono.0 & above == 0 {
            misses_above += 1;
        }
        if let Some((inner, i3bar)) = refine {
            let idx = mono.indices();
            let inside = idx.iter().all(|k| inner.contains(k));
            let meets = idx.iter().any(|k| i3bar.contains(k));
            if !(inside || meets) {
                bad_refinement += 1;
            }
        }
    }
    let (ok_v, wv) = at_least(x.two_adic_valuation(), vj)?;
    let ok = ok_v && bad_coefficient == 0 && misses_above == 0 && bad_refinement == 0;
    Ok((
        ok,
        json!({
            "valuation": wv["valuation"],
            "v_j_factorial": vj,
            "support_mod_2^(v+1)": reduced.len(),
            "coefficients_not_2^v": bad_coefficient,
            "support_missing_[i+1,n]": misses_above,
            "refinement_violations": bad_refinement,
        }),
    ))
}

fn eonenj_chow(ctx: &Context, j: u32) -> Outcome {
    let (n, ring) = (ctx.n(), ctx.chow());
    let fam = ctx.families()?;
    let vj = two_adic_factorial(u64::from(j));
    let x = ctx.chow_word(u64::from(n * j), &[])?;
    let mut rhs = ring.generator(n);
    for _ in 1..j {
        let mut next = ring.zero();
        for &i in &fam.i0 {
            next = next.checked_add(&ring.mul_generator(&ring.mul_generator(&rhs, n - i), i))?;
        }
        rhs = next;
    }
    let rhs = rhs.scale(&(BigInt::from(-i64::from(j)) * pow2(j - 1)));
    all_of(vec![
        ("membership".into(), at_least(x.two_adic_valuation(), j + vj - 1)),
        ("congruence".into(), chow_congruence(&x, &rhs, j + vj)),
    ])
}

fn star_chow(n: u32, seed: u64) -> Outcome {
    let ring = ChowRing::new(RingParams::new(n, CoeffMode::Modulus(1))?);
    let instances = star_instances(n, seed);
    let mut failures: Vec<Vec<u32>> = Vec::new();
    for set in &instances {
        if !ring.product_of_generators(set.iter().copied()).is_zero() {
            failures.push(set.clone());
        }
    }
    Ok((
        failures.is_empty(),
        json!({
            "instances": instances.len(),
            "sampling": if n <= 8 { "exhaustive" } else { "random" },
            "seed": seed,
            "failures": failures.len(),
            "first_failure": failures.first(),
        }),
    ))
}

/// `w ≡ ind X · p mod 2 ind X`, and the point coefficient is not divisible by `2 ind X`.
pub(crate) fn point_congruence(ctx: &Context) -> Outcome {
    let m = ctx.m()?;
    let w = ctx.w()?;
    let ring = ctx.chow();
    let target = ring.point().scale(&pow2(m));
    let (ok, mut witness) = chow_congruence(&w, &target, m + 1)?;
    let top = w.degree_top();
    let strict = reduce_pow2(&top, m + 1) != BigInt::from(0);
    witness["point_coefficient_mod_2^(m+1)"] = big(&reduce_pow2(&top, m + 1));
    witness["point_coefficient_not_divisible_by_2ind"] = json!(strict);
    witness["m"] = json!(m);
    witness["degrees"] = json!(w.degrees());
    Ok((ok && strict, witness))
}

fn torsion_cor(ctx: &Context) -> Outcome {
    let fam = ctx.families()?;
    let m = ctx.m()?;
    let q = ctx.quarter_square();
    let n = ctx.n();
    let first = at_least(ctx.chow_shat(q, &fam.j)?.two_adic_valuation(), m + 1);
    let size = fam.j.len() as u32;
    let v_q = ctx.chow_word(q, &[])?.two_adic_valuation();
    let v_qn = ctx.chow_word(q - u64::from(n), &[])?.two_adic_valuation();
    let bound = |v: Valuation, extra: u32| -> Outcome {
        let lower = match v {
            Valuation::Exact(k) | Valuation::AtLeast(k) => k,
            Valuation::Infinite => u32::MAX / 2,
        };
        Ok((lower + extra > m, json!({ "v": val(v), "plus": extra, "must_exceed": m })))
    };
    all_of(vec![
        ("e1^(n²/4) res Ŝ(J) ≡ 0 mod 2 ind X".into(), first),
        ("|J| + v(e1^(n²/4)) > m".into(), bound(v_q, size)),
        ("|J| + 1 + v(e1^(n²/4-n)) > m".into(), bound(v_qn, size + 1)),
    ])
}

fn shat_linear_part(ctx: &Context) -> Outcome {
    let n = ctx.n();
    let ring = ChowRing::new(RingParams::exact(n)?);
    let mut ok = true;
    for i in 1..=n {
        let r = res(&shat(i, n)?, &ring)?;
        ok &= r.homogeneous_component(i) == ring.generator(i).scale(&BigInt::from(2));
    }
    let mut examples = json!({});
    if n == 8 {
        let s7 = res(&shat(7, 8)?, &ring)?;
        let e7 = res(&E::Sum(vec![E::Ci(7), E::Product(vec![E::int(6), E::Ci(8)])]), &ring)?;
        let s6 = res(&shat(6, 8)?, &ring)?;
        let e6 = res(&E::Sum(vec![E::Ci(6), E::Product(vec![E::int(5), E::Ci(7)]), E::Product(vec![E::int(10), E::Ci(8)])]), &ring)?;
        ok &= s7 == e7 && s6 == e6;
        examples = json!({ "shat7": shat(7, 8)?.to_string(), "shat6": shat(6, 8)?.to_string() });
    }
    Ok((ok, json!({ "indices": n, "examples": examples })))
}

fn shat23(ctx: &Context) -> Outcome {
    let n = ctx.n();
    let ring = ChowRing::new(RingParams::exact(n)?);
    let got = res(&shat_set(&[2, 3], n)?, &ring)?;
    let expect = ogring::chow_eval(
        &E::Product(vec![
            E::int(4),
            E::Sum(vec![E::Ei(2), E::Ei(3)]),
            E::Sum(vec![E::Ei(3), E::Product(vec![E::int(2), E::Ei(4)]), E::Ei(5)]),
        ]),
        &ring,
    )?;
    Ok((got == expect, json!({ "terms": got.len() })))
}

fn random_raw(rng: &mut impl Rng, n: u32) -> RawCombination {
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let len = rng.gen_range(0..=6);
            let set: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=i64::from(n))).collect();
            (set, BigInt::from(rng.gen_range(-5i64..=5)))
        })
        .collect()
}

fn raw_of(x: &ChowElement) -> RawCombination {
    x.sorted_terms().into_iter().map(|(m, c)| (m.indices().into_iter().map(i64::from).collect(), c)).collect()
}

fn confluence(seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_confluence");
    let mut failures = 0;
    for _ in 0..PROPERTY_CASES {
        let n = rng.gen_range(2..=6);
        let ring = ChowRing::new(RingParams::exact(n)?);
        let raw = random_raw(&mut rng, n);
        let a = ring.normalize_with(&raw, RewriteOrder::LargestFirst)?;
        let b = ring.normalize_with(&raw, RewriteOrder::SmallestFirst)?;
        let c = ring.normalize_with(&raw, RewriteOrder::Seeded(rng.gen()))?;
        let again = ring.normalize(&raw_of(&a))?;
        if a != b || a != c || a != again {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "cases": PROPERTY_CASES, "failures": failures, "seed": seed, "max_n": 6 })))
}

fn ring_axioms(seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_ring_axioms");
    let mut failures = 0;
    for _ in 0..PROPERTY_CASES {
        let n = rng.gen_range(2..=8);
        let ring = ChowRing::new(RingParams::exact(n)?);
        let a = ring.normalize(&random_raw(&mut rng, n))?;
        let b = ring.normalize(&random_raw(&mut rng, n))?;
        let c = ring.normalize(&random_raw(&mut rng, n))?;
        let assoc = ring.mul(&ring.mul(&a, &b)?, &c)? == ring.mul(&a, &ring.mul(&b, &c)?)?;
        let comm = ring.mul(&a, &b)? == ring.mul(&b, &a)?;
        let dist = ring.mul(&a, &b.checked_add(&c)?)? == ring.mul(&a, &b)?.checked_add(&ring.mul(&a, &c)?)?;
        let unit = ring.mul(&ring.one(), &a)? == a;
        if !(assoc && comm && dist && unit) {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "cases": PROPERTY_CASES, "failures": failures, "seed": seed, "max_n": 8 })))
}

fn reduced_terms(x: &ChowElement, k: u32) -> Vec<(SquareFreeMonomial, BigInt)> {
    let mut v: Vec<(SquareFreeMonomial, BigInt)> =
        x.sorted_terms().into_iter().map(|(m, c)| (m, reduce_pow2(&c, k))).filter(|(_, c)| *c != BigInt::from(0)).collect();
    v.sort_by_key(|(m, _)| m.0);
    v
}

fn modulus_soundness(seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_modulus_soundness");
    let mut failures = 0;
    for case in 0..PROPERTY_CASES {
        let k = if case % 2 == 0 { 8 } else { 16 };
        let n = rng.gen_range(2..=8);
        let exact = ChowRing::new(RingParams::exact(n)?);
        let modular = ChowRing::new(RingParams::new(n, CoeffMode::Modulus(k))?);
        let (ra, rb) = (random_raw(&mut rng, n), random_raw(&mut rng, n));
        let e = exact.mul(&exact.normalize(&ra)?, &exact.normalize(&rb)?)?;
        let p = rng.gen_range(1..=4);
        let e = exact.pow(&e, p)?;
        let md = modular.mul(&modular.normalize(&ra)?, &modular.normalize(&rb)?)?;
        let md = modular.pow(&md, p)?;
        if reduced_terms(&e, k) != reduced_terms(&md, k) {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "cases": PROPERTY_CASES, "failures": failures, "seed": seed, "moduli": [8, 16] })))
}

fn random_x_expr(rng: &mut impl Rng, n: u32, depth: u32) -> E {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => E::E1,
            1 => E::Ci(rng.gen_range(1..=n)),
            2 => E::Ei(rng.gen_range(1..=n)),
            _ => E::int(rng.gen_range(-3..=3)),
        };
    }
    let parts = (0..rng.gen_range(2..=3)).map(|_| random_x_expr(rng, n, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        E::Sum(parts)
    } else {
        E::Product(parts)
    }
}

fn res_properties(seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_res");
    let (mut hom_failures, mut val_failures) = (0, 0);
    for _ in 0..PROPERTY_CASES {
        let n = rng.gen_range(2..=8);
        let ring = ChowRing::new(RingParams::exact(n)?);
        let a = random_x_expr(&mut rng, n, 2);
        let b = random_x_expr(&mut rng, n, 2);
        let (ra, rb) = (res(&a, &ring)?, res(&b, &ring)?);
        let prod = res(&E::Product(vec![a.clone(), b.clone()]), &ring)? == ring.mul(&ra, &rb)?;
        let sum = res(&E::Sum(vec![a, b]), &ring)? == ra.checked_add(&rb)?;
        if !(prod && sum) {
            hom_failures += 1;
        }
        let set: Vec<u32> = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
        if !res(&shat_set(&set, n)?, &ring)?.two_adic_valuation().is_at_least(set.len() as u32) {
            val_failures += 1;
        }
    }
    Ok((
        hom_failures == 0 && val_failures == 0,
        json!({ "cases": PROPERTY_CASES, "homomorphism_failures": hom_failures, "valuation_failures": val_failures, "seed": seed }),
    ))
}

pub fn suite_chow_congruences(ctx: &Context) -> Result<VerificationCertificate> {
    let n = ctx.n();
    let fam = ctx.families()?;
    let m = ctx.m()?;
    let q = ctx.quarter_square();
    let seed = ctx.seed();
    let v = n.trailing_zeros();
    let ring = ctx.chow();
    let mut jobs: Vec<Job<'_>> = Vec::new();

    for &i in &fam.i0 {
        for j in 2..=4u32 {
            jobs.push(Job::computed(
                format!("eij_chow_i{i:02}_j{j}"),
                "lemK:eij: e(i)^j ≡ 2^v(j!) Σ e(J) mod 2^(v(j!)+1), J ∩ [i+1,n] ≠ ∅",
                move || eij_structure(ctx, i, j, None),
            ));
        }
    }
    if fam.i2.is_empty() {
        jobs.push(Job::skipped("eij_chow_i2_refinement", "lemK:eij: i ∈ I2, J ⊂ I1 ∪ I2 or J ∩ Ī3 ≠ ∅", "I2 is empty for this n"));
    } else {
        let mut inner = fam.i1.clone();
        inner.extend(&fam.i2);
        for &i in &fam.i2 {
            for j in 2..=4u32 {
                let (inner, i3bar) = (inner.clone(), fam.i3bar.clone());
                jobs.push(Job::computed(
                    format!("eij_chow_i2_i{i:02}_j{j}"),
                    "lemK:eij: i ∈ I2, J ⊂ I1 ∪ I2 or J ∩ Ī3 ≠ ∅",
                    move || eij_structure(ctx, i, j, Some((&inner, &i3bar))),
                ));
            }
        }
    }
    for j in 2..=n / 4 {
        jobs.push(Job::computed(
            format!("eonenj_chow_j{j:02}"),
            "lemK:eonenj: e(1)^(nj) ≡ -j 2^(j-1) (Σ_{I0} e(i)e(n-i))^(j-1) e(n) mod 2^(j+v(j!))",
            move || eonenj_chow(ctx, j),
        ));
    }
    jobs.push(Job::computed("eonenj_chow_quarter_square", "lemK:eonenj: v(e(1)^(n²/4)) >= n/2-2", move || {
        at_least(ctx.chow_word(q, &[])?.two_adic_valuation(), n / 2 - 2)
    }));
    jobs.push(Job::computed("eonenj_chow_quarter_square_minus_n", "lemK:eonenj: v(e(1)^(n²/4-n)) >= n/2-1-v(n)", move || {
        at_least(ctx.chow_word(q - u64::from(n), &[])?.two_adic_valuation(), n / 2 - 1 - v)
    }));

    let mut i3_half = fam.i3.clone();
    i3_half.push(n / 2);
    jobs.push(Job::computed(
        "propK_eoneeIthree_chow",
        "propK:eoneeIthree: e(1)^(n²/4-n) e(I3) e(n/2) ≡ -(n/4-1)! 2^(n/4-2) e([n/4+2,n]) mod 2^(n/2-v(n))",
        move || {
            let x = ctx.chow_word(q - u64::from(n), &i3_half)?;
            let rhs = monomial(ring, &interval(n / 4 + 2, n), -factorial(n / 4 - 1) * pow2(n / 4 - 2))?;
            all_of(vec![
                ("membership".into(), at_least(x.two_adic_valuation(), n / 2 - v - 1)),
                ("congruence".into(), chow_congruence(&x, &rhs, n / 2 - v)),
            ])
        },
    ));
    {
        let i3 = fam.i3.clone();
        jobs.push(Job::computed(
            "eonepower",
            "lem:eonepower: e(1)^(n²/4-n) res(Ŝ(I3)) e(n/2) ≡ 2^(3n/4-v(n)) e([n/4+2,n]) mod 2^(3n/4-v(n)+1)",
            move || {
                let x = ctx.chow_shat(q - u64::from(n), &i3)?;
                let xe = ring.mul_generator(&x, n / 2);
                let rhs = monomial(ring, &interval(n / 4 + 2, n), pow2(3 * n / 4 - v))?;
                all_of(vec![
                    ("membership".into(), at_least(x.two_adic_valuation(), 3 * n / 4 - v)),
                    ("congruence".into(), chow_congruence(&xe, &rhs, 3 * n / 4 - v + 1)),
                ])
            },
        ));
    }
    jobs.push(Job::computed("ijmultisubsetnew_chow", "lemK:ijmultisubsetnew: e(J) ≡ 0 mod 2 under (∗)", move || star_chow(n, seed)));

    if n >= 16 {
        jobs.push(Job::computed("indXplus1_chow", "lem:indXplus1: e(1)^(n²/4-1) res(Ŝ(I3 ∪ I4 ∪ {2,3})) ≡ ind X e([1,n]) mod 2 ind X", move || {
            point_congruence(ctx)
        }));
    } else {
        jobs.push(Job::computed("indXplus1n8_eonefifteen", "lem:indXplus1n8: e(1)^15 res(Ŝ([6,7] ∪ {2,3})) ≡ 2^4 e([1,8]) mod 2^5", move || {
            point_congruence(ctx)
        }));
        jobs.push(Job::computed("indXplus1n8_eone8_shat67", "lem:indXplus1n8: e(1)^8 res(Ŝ([6,7])) ≡ 2² e([6,8]) mod 2³", move || {
            let x = ctx.chow_shat(8, &[6, 7])?;
            chow_congruence(&x, &monomial(ring, &[6, 7, 8], BigInt::from(4))?, 3)
        }));
        jobs.push(Job::computed(
            "indXplus1n8_vanishing_chow",
            "lem:indXplus1n8: e(2)²e(4)e(8), e(4)²e(8), e(8)², e(3)²e(6), e(6)² ≡ 0 mod 2",
            move || {
                let sets: [&[u32]; 5] = [&[2, 2, 4, 8], &[4, 4, 8], &[8, 8], &[3, 3, 6], &[6, 6]];
                let mut parts = Vec::new();
                for s in sets {
                    parts.push((format!("{s:?}"), at_least(ctx.chow_word(0, s)?.two_adic_valuation(), 1)));
                }
                all_of(parts)
            },
        ));
    }
    jobs.push(Job::computed(
        "eonenjtorsioncor",
        "lem:eonenjtorsioncor: e(1)^(n²/4) res(S̃(J)) ≡ 0 and the Q-part is ≡ 0 mod 2 ind X",
        move || with(torsion_cor(ctx), json!({ "m": m })),
    ));
    jobs.push(Job::computed("steenrodshortenedformula", "eq:steenrodshortenedformula: Ŝ(i) = Σ_j binom(i-1,j) c(i+j)", move || {
        shat_linear_part(ctx)
    }));
    jobs.push(Job::computed("shat23", "eq:shat23: res(Ŝ({2,3})) = 2²(e(2)+e(3))(e(3)+2e(4)+e(5))", move || shat23(ctx)));

    jobs.push(Job::computed("prop_confluence", "property: relationinbar rewriting is confluent and idempotent", move || confluence(seed)));
    jobs.push(Job::computed("prop_ring_axioms", "property: CH(X̄) satisfies the commutative ring axioms", move || ring_axioms(seed)));
    jobs.push(Job::computed("prop_modulus_soundness", "property: mod 2^K arithmetic agrees with exact arithmetic reduced mod 2^K", move || {
        modulus_soundness(seed)
    }));
    jobs.push(Job::computed("prop_res", "eq:rescitwoe: res is a ring map; v(res Ŝ(L)) >= |L|", move || res_properties(seed)));

    Ok(certificate("chow", ctx, jobs))
}
