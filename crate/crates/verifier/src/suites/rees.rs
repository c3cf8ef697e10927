//! Congruences in the extended Rees ring.

use num_bigint::BigInt;
use ogring::params::{pow2, two_adic_factorial};
use ogring::{
    chow_eval, eval_expression, psi_substitute, ChowRing, CoeffMode, GeneratorExpression as E, ReesElement, ReesKey, ReesRing,
    Result, RingParams, StrictPartition, Valuation,
};
use rand::Rng;
use serde_json::json;

use super::{all_of, certificate, rees_congruence, rng, star_instances, with, PROPERTY_CASES};
use crate::certificate::{at_least, val, Job, Outcome, VerificationCertificate};
use crate::context::{Context, Word};

fn interval(a: u32, b: u32) -> Vec<u32> {
    (a..=b).collect()
}

fn factorial(k: u32) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn word_valuation(ctx: &Context, w: &Word, bound: u32) -> Outcome {
    let x = ctx.rees_word(w)?;
    with(at_least(x.ideal_valuation(), bound), json!({ "expression": w.expr().to_string() }))
}

fn word_congruence(ctx: &Context, w: &Word, rhs: &ReesElement, n: u32) -> Outcome {
    let x = ctx.rees_word(w)?;
    with(rees_congruence(&x, rhs, n), json!({ "expression": w.expr().to_string() }))
}

/// `h · x` with `h = Σ_{i ∈ I0} f(i) g(n - i)`.
fn apply_h(ring: &ReesRing, i0: &[u32], x: &ReesElement) -> Result<ReesElement> {
    let n = ring.params().n;
    let mut out = ring.zero();
    for &i in i0 {
        out = out.checked_add(&ring.pieri_mul(i, &ring.mul_g(n - i, x)?)?)?;
    }
    Ok(out)
}

fn eonenj(ctx: &Context, j: u32) -> Outcome {
    let (n, ring) = (ctx.n(), ctx.rees());
    let fam = ctx.families()?;
    let vj = two_adic_factorial(u64::from(j));
    let x = ctx.rees_word(&Word::new(u64::from(n * j), &[], &[]))?;
    let mut rhs = ring.f(n);
    for _ in 1..j {
        rhs = apply_h(ring, &fam.i0, &rhs)?;
    }
    let rhs = rhs.scale(&BigInt::from(-i64::from(j)));
    all_of(vec![
        ("membership".into(), at_least(x.ideal_valuation(), j + vj - 1)),
        ("congruence".into(), rees_congruence(&x, &rhs, j + vj)),
    ])
}

/// The multiset instances of condition (∗) must all vanish modulo `I`.
fn star_rees(n: u32, seed: u64) -> Outcome {
    let ring = ReesRing::new(RingParams::new(n, CoeffMode::Modulus(1))?);
    let instances = star_instances(n, seed);
    let mut failures: Vec<Vec<u32>> = Vec::new();
    for set in &instances {
        let x = ring.mul_f_set(set, &ring.one())?;
        if !x.is_zero() {
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

/// `c · t^q · f(S)`.
fn t_word(ctx: &Context, c: BigInt, q: u32, set: &[u32]) -> Result<ReesElement> {
    Ok(ctx.rees_word(&Word::new(0, set, &[]))?.scale(&c).mul_t_pow(q))
}

/// Harness words whose `ψ`-images are compared with their Rees valuations.
fn harness_words(ctx: &Context) -> Result<Vec<Word>> {
    let n = ctx.n();
    let fam = ctx.families()?;
    let q = ctx.quarter_square();
    let mut words = Vec::new();
    for &i in &fam.i0 {
        for j in 2..=4 {
            words.push(Word::new(0, &vec![i; j], &[]));
        }
    }
    for &i in &fam.i1 {
        for j in 2..=3 {
            let mut f = vec![i; j];
            f.extend(&fam.i3bar);
            words.push(Word::new(0, &f, &vec![n - i; j]));
        }
    }
    for j in 2..=n / 4 {
        words.push(Word::new(u64::from(n * j), &[], &[]));
    }
    words.push(Word::new(q - u64::from(n), &[], &[]));
    let mut i3_half = fam.i3.clone();
    i3_half.push(n / 2);
    words.push(Word::new(q - u64::from(n), &i3_half, &[]));
    words.push(Word::new(q - u64::from(n), &[], &fam.i3));
    words.push(Word::new(q - u64::from(n), &[n / 2], &fam.i3));
    words.push(Word::new(q - 1, &[], &fam.j));
    words.push(Word::new(q - 2, &[], &fam.j_prime()));
    if n == 8 {
        words.push(Word::new(8, &[], &[6, 7]));
    }
    Ok(words)
}

fn psi_harness(ctx: &Context) -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for w in harness_words(ctx)? {
        let vk = ctx.rees_word(&w)?.ideal_valuation();
        let vc = ctx.psi_word(&w)?.two_adic_valuation();
        let pass = psi_dominates(vc, vk);
        ok &= pass;
        rows.push(json!({ "expression": w.expr().to_string(), "v_K": val(vk), "v_psi": val(vc), "pass": pass }));
    }
    Ok((ok, json!({ "expressions": rows })))
}

/// `vc >= vk`, where truncated valuations count as their lower bounds when that decides it.
fn psi_dominates(vc: Valuation, vk: Valuation) -> bool {
    match vk {
        Valuation::Exact(k) => vc.is_at_least(k),
        Valuation::AtLeast(k) => vc.is_at_least(k),
        Valuation::Infinite => vc == Valuation::Infinite,
    }
}

fn random_word(rng: &mut impl Rng, n: u32, len: usize, with_t: bool) -> E {
    let mut v = Vec::new();
    for _ in 0..len {
        let roll = rng.gen_range(0..if with_t { 5 } else { 4 });
        v.push(match roll {
            0 | 1 => E::F(rng.gen_range(1..=n)),
            2 | 3 => E::G(rng.gen_range(1..=n)),
            _ => E::T,
        });
    }
    if rng.gen_bool(0.3) {
        v.push(E::int(1 << rng.gen_range(0..3)));
    }
    E::Product(v)
}

/// A random homogeneous element: a few Schubert terms at one grade.
fn random_element(rng: &mut impl Rng, ring: &ReesRing) -> Result<ReesElement> {
    let n = ring.params().n;
    let dim = ring.params().dim_x() as i32;
    let grade = rng.gen_range(0..=dim);
    let mut out = ring.zero();
    for _ in 0..rng.gen_range(1..=4) {
        let lambda = StrictPartition::from_mask(rng.gen_range(0..1u32 << n));
        if (lambda.size() as i32) < grade {
            continue;
        }
        let odd = 2 * rng.gen_range(0i64..8) + 1;
        let c = BigInt::from(if rng.gen_bool(0.5) { odd } else { -odd }) << rng.gen_range(0..5);
        out = out.checked_add(&ring.term(&lambda, grade, c)?)?;
    }
    Ok(out)
}

/// `x ∈ I^N` by listing the subgroup generators `2^{N-q} t^q ē_λ u^{l+q}` of `I^N ∩ K̃^l`
/// coordinate by coordinate.
fn oracle_member(x: &ReesElement, n_pow: u32) -> bool {
    let n = x.params().n;
    let Some(grade) = x.grades().first().copied() else { return true };
    let mut needed = std::collections::HashMap::new();
    for mask in 0u32..1 << n {
        let size = StrictPartition::from_mask(mask).size() as i32;
        let mut gcd: Option<u32> = None;
        for q in 0..=n_pow as i32 {
            if grade + q <= size || grade + q <= 0 {
                let e = n_pow - q as u32;
                gcd = Some(gcd.map_or(e, |g: u32| g.min(e)));
            }
        }
        needed.insert(mask, gcd);
    }
    x.terms().all(|(k, c): (ReesKey, &BigInt)| match needed[&k.lambda] {
        Some(e) => (c % pow2(e)) == BigInt::from(0),
        None => false,
    })
}

fn valuation_oracle(seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_valuation_oracle");
    let rings: Vec<ReesRing> = (2..=5).map(|n| ReesRing::new(RingParams::exact(n).unwrap())).collect();
    let mut failures = 0;
    for case in 0..PROPERTY_CASES {
        let ring = &rings[rng.gen_range(0..rings.len())];
        let x = if case % 2 == 0 {
            random_element(&mut rng, ring)?
        } else {
            let n = ring.params().n;
            let len = rng.gen_range(1..=5);
            eval_expression(&random_word(&mut rng, n, len, true), ring)?
        };
        let closed = match x.ideal_valuation() {
            Valuation::Exact(v) => v.min(6),
            _ => 6,
        };
        let oracle = (0..=6).rev().find(|&nn| oracle_member(&x, nn)).unwrap_or(0);
        if closed != oracle {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "cases": PROPERTY_CASES, "failures": failures, "seed": seed, "max_n": 5, "max_power": 6 })))
}

fn valuation_shifts(seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_valuation_shift");
    let rings: Vec<ReesRing> = (2..=6).map(|n| ReesRing::new(RingParams::exact(n).unwrap())).collect();
    let mut failures = 0;
    let two = BigInt::from(2);
    let mut cases = 0;
    while cases < PROPERTY_CASES {
        let ring = &rings[rng.gen_range(0..rings.len())];
        let x = random_element(&mut rng, ring)?;
        let Valuation::Exact(v) = x.ideal_valuation() else { continue };
        cases += 1;
        let i = rng.gen_range(1..=ring.params().n);
        let shifted = x.scale(&two).ideal_valuation() == Valuation::Exact(v + 1) && x.mul_t().ideal_valuation() == Valuation::Exact(v + 1);
        let pieri = ring.pieri_mul(i, &x)?.ideal_valuation().is_at_least(v);
        let g = ring.mul_g(i, &x)?.ideal_valuation().is_at_least(v + 1);
        if !(shifted && pieri && g) {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "cases": cases, "failures": failures, "seed": seed })))
}

fn psi_random(seed: u64) -> Outcome {
    let mut rng = rng(seed, "prop_psi_random_words");
    let mut failures = 0;
    for _ in 0..PROPERTY_CASES {
        let n = rng.gen_range(2..=6);
        let params = RingParams::exact(n)?;
        let (rees, chow) = (ReesRing::new(params), ChowRing::new(params));
        let len = rng.gen_range(1..=6);
        let w = random_word(&mut rng, n, len, true);
        let vk = eval_expression(&w, &rees)?.ideal_valuation();
        let vc = chow_eval(&psi_substitute(&w), &chow)?.two_adic_valuation();
        if !psi_dominates(vc, vk) {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "cases": PROPERTY_CASES, "failures": failures, "seed": seed })))
}

pub fn suite_rees_congruences(ctx: &Context) -> Result<VerificationCertificate> {
    let n = ctx.n();
    let fam = ctx.families()?;
    let m = ctx.m()?;
    let q = ctx.quarter_square();
    let seed = ctx.seed();
    let v = n.trailing_zeros();
    let mut jobs: Vec<Job<'_>> = Vec::new();

    for &i in &fam.i0 {
        for j in 2..=4u32 {
            let vj = two_adic_factorial(u64::from(j));
            jobs.push(Job::computed(format!("eij_i{i:02}_j{j}"), "lemK:eij: v_K(f(i)^j) >= v(j!)", move || {
                word_valuation(ctx, &Word::new(0, &vec![i; j as usize], &[]), vj)
            }));
        }
    }
    for &i in &fam.i1 {
        for j in 2..=3u32 {
            let bound = two_adic_factorial(u64::from(j)) + j + 1;
            let mut f = vec![i; j as usize];
            f.extend(&fam.i3bar);
            let w = Word::new(0, &f, &vec![n - i; j as usize]);
            jobs.push(Job::computed(
                format!("eij_ithree_i1_i{i:02}_j{j}"),
                "lemK:eijIthree: f(i)^j g(n-i)^j f(Ī3) ≡ 0 mod I^(v(j!)+j+1), i ∈ I1",
                move || word_valuation(ctx, &w, bound),
            ));
        }
    }
    if fam.i2.is_empty() {
        jobs.push(Job::skipped("eij_ithree_i2", "lemK:eijIthree: i ∈ I2 case", "I2 is empty for this n"));
    } else {
        for &i in &fam.i2 {
            for j in 2..=3u32 {
                let bound = two_adic_factorial(u64::from(j)) + j;
                let mut f = vec![i; j as usize];
                f.extend(&fam.i3bar);
                let w = Word::new(0, &f, &vec![n - i; j as usize]);
                jobs.push(Job::computed(
                    format!("eij_ithree_i2_i{i:02}_j{j}"),
                    "lemK:eijIthree: i ∈ I2, Σ a(J) f(J) f(Ī3) with a(J) ∈ I^(v(j!)+j)",
                    move || word_valuation(ctx, &w, bound),
                ));
            }
        }
    }
    for j in 2..=n / 4 {
        jobs.push(Job::computed(
            format!("eonenj_j{j:02}"),
            "lemK:eonenj: f(1)^(nj) ≡ -j (Σ_{I0} f(i)g(n-i))^(j-1) f(n) mod I^(j+v(j!))",
            move || eonenj(ctx, j),
        ));
    }
    jobs.push(Job::computed("eonenj_quarter_square", "lemK:eonenj: v_K(f(1)^(n²/4)) >= n/2-2", move || {
        word_valuation(ctx, &Word::new(q, &[], &[]), n / 2 - 2)
    }));
    jobs.push(Job::computed("eonenj_quarter_square_minus_n", "lemK:eonenj: v_K(f(1)^(n²/4-n)) >= n/2-1-v(n)", move || {
        word_valuation(ctx, &Word::new(q - u64::from(n), &[], &[]), n / 2 - 1 - v)
    }));

    let low = interval(n / 4 + 2, n / 2 - 1);
    let high = interval(n / 2, n);
    let mut i3_half = fam.i3.clone();
    i3_half.push(n / 2);
    {
        let (w, low, high) = (Word::new(q - u64::from(n), &i3_half, &[]), low.clone(), high.clone());
        jobs.push(Job::computed(
            "propK_eoneeIthree",
            "propK:eoneeIthree: f(1)^(n²/4-n) f(I3) f(n/2) ≡ -(n/4-1)! f([n/2,n]) g([n/4+2,n/2-1]) mod I^(n/2-v(n))",
            move || {
                let rhs = ctx.rees_word(&Word::new(0, &high, &low))?.scale(&-factorial(n / 4 - 1));
                all_of(vec![
                    ("membership".into(), word_valuation(ctx, &w, n / 2 - v - 1)),
                    ("congruence".into(), word_congruence(ctx, &w, &rhs, n / 2 - v)),
                ])
            },
        ));
    }
    {
        let (i3, low, high) = (fam.i3.clone(), low.clone(), high.clone());
        jobs.push(Job::computed(
            "cor_fonepower",
            "cor:fonepower: f(1)^(n²/4-n) g(I3) f(n/2) ≡ 2^(n/2-v(n)+2) f([n/2,n]) g([n/4+2,n/2-1]) mod I^(3n/4-v(n)+1)",
            move || {
                let rhs = ctx.rees_word(&Word::new(0, &high, &low))?.scale(&pow2(n / 2 - v + 2));
                all_of(vec![
                    ("membership".into(), word_valuation(ctx, &Word::new(q - u64::from(n), &[], &i3), 3 * n / 4 - v)),
                    ("congruence".into(), word_congruence(ctx, &Word::new(q - u64::from(n), &[n / 2], &i3), &rhs, 3 * n / 4 - v + 1)),
                ])
            },
        ));
    }
    jobs.push(Job::computed("ijmultisubsetnew_rees", "lemK:ijmultisubsetnew: f(J) ≡ 0 mod I under (∗)", move || star_rees(n, seed)));

    let line = interval(2, n);
    if n >= 16 {
        jobs.push(Job::computed("indXplus1_a", "lemK:indXplus1 (a): f(1)^(n²/4-1) g(I3 ∪ I4 ∪ {2,3}) ≡ 0 mod I^(m+1)", move || {
            with(at_least(ctx.y()?.ideal_valuation(), m + 1), json!({ "m": m }))
        }));
        jobs.push(Job::computed(
            "indXplus1_b",
            "lemK:indXplus1 (b): f(1)^(n²/4-2) g(I3 ∪ I4 ∪ {2,4}) ≡ 2^(m-2) t² f([2,n]) mod I^(m+1)",
            move || with(rees_congruence(&ctx.z()?, &t_word(ctx, pow2(m - 2), 2, &line)?, m + 1), json!({ "m": m })),
        ));
    } else {
        jobs.push(Job::computed("indXplus1n8_fonefifteen1", "lemK:indXplus1n8: f(1)^15 g([6,7] ∪ {2,3}) ≡ 0 mod I^5", move || {
            at_least(ctx.y()?.ideal_valuation(), 5)
        }));
        jobs.push(Job::computed(
            "indXplus1n8_fonefifteen2",
            "lemK:indXplus1n8: f(1)^14 g([6,7] ∪ {2,4}) ≡ 2² t² f([2,8]) mod I^5",
            move || rees_congruence(&ctx.z()?, &t_word(ctx, BigInt::from(4), 2, &line)?, 5),
        ));
        jobs.push(Job::computed("indXplus1n8_f1_8_g67", "lemK:indXplus1n8: f(1)^8 g([6,7]) ≡ 2² f([6,8]) mod I³", move || {
            word_congruence(ctx, &Word::new(8, &[], &[6, 7]), &t_word(ctx, BigInt::from(4), 0, &[6, 7, 8])?, 3)
        }));
        jobs.push(Job::computed(
            "indXplus1n8_vanishing",
            "lemK:indXplus1n8: f(2)²f(4)f(8), f(4)²f(8), f(8)², f(3)²f(6), f(6)² ≡ 0 mod I",
            move || {
                let sets: [&[u32]; 5] = [&[2, 2, 4, 8], &[4, 4, 8], &[8, 8], &[3, 3, 6], &[6, 6]];
                all_of(sets.iter().map(|s| (format!("{s:?}"), word_valuation(ctx, &Word::new(0, s, &[]), 1))).collect())
            },
        ));
    }

    jobs.push(Job::computed("prop_valuation_oracle", "property: v_K closed form vs subgroup membership, n <= 5, N <= 6", move || valuation_oracle(seed)));
    jobs.push(Job::computed("prop_valuation_shift", "property: v_K(2x) = v_K(tx) = v_K(x)+1; v_K(f(i)x) >= v_K(x); v_K(g(i)x) >= v_K(x)+1", move || {
        valuation_shifts(seed)
    }));
    jobs.push(Job::computed("prop_psi_random_words", "morphismpsi: v(ψ(E)) >= v_K(E), random words", move || psi_random(seed)));
    jobs.push(Job::computed("psi_compat_harness", "morphismpsi: v(ψ(E)) >= v_K(E), harness expressions", move || psi_harness(ctx)));

    Ok(certificate("rees", ctx, jobs))
}

