//! The four verification suites.

pub mod appendix;
pub mod chow;
pub mod main_theorem;
pub mod rees;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use ogring::{ChowElement, ReesElement, StrictPartition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::certificate::{at_least, Job, Outcome, VerificationCertificate};
use crate::context::Context;

/// Random cases per property check.
pub const PROPERTY_CASES: usize = 500;

pub(crate) fn certificate(suite: &str, ctx: &Context, jobs: Vec<Job<'_>>) -> VerificationCertificate {
    VerificationCertificate { suite: suite.into(), n: ctx.n(), engine: ctx.engine(), checks: crate::certificate::run_jobs(jobs) }
}

/// A generator for one property check, derived from the run seed and the check name.
pub(crate) fn rng(seed: u64, name: &str) -> ChaCha8Rng {
    let stream = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `lhs ≡ rhs mod I^N`, witnessed by `v_K(lhs - rhs)`.
pub(crate) fn rees_congruence(lhs: &ReesElement, rhs: &ReesElement, n: u32) -> Outcome {
    at_least(lhs.checked_sub(rhs)?.ideal_valuation(), n)
}

/// `lhs ≡ rhs mod 2^k`, witnessed by `v(lhs - rhs)`.
pub(crate) fn chow_congruence(lhs: &ChowElement, rhs: &ChowElement, k: u32) -> Outcome {
    at_least(lhs.checked_sub(rhs)?.two_adic_valuation(), k)
}

pub(crate) fn partition_map(map: &BTreeMap<StrictPartition, i64>) -> Value {
    Value::Object(map.iter().map(|(p, c)| (p.to_string(), json!(c))).collect::<Map<_, _>>())
}

pub(crate) fn big(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(x) => json!(x),
        Err(_) => json!(c.to_string()),
    }
}

/// Adds fields to an object witness.
pub(crate) fn with(mut outcome: Outcome, fields: Value) -> Outcome {
    if let (Ok((_, Value::Object(w))), Value::Object(extra)) = (&mut outcome, fields) {
        w.extend(extra);
    }
    outcome
}

/// Combines several sub-claims: passes when all pass; witnesses keyed by name.
pub(crate) fn all_of(parts: Vec<(String, Outcome)>) -> Outcome {
    let mut ok = true;
    let mut w = Map::new();
    for (name, part) in parts {
        let (pass, witness) = part?;
        ok &= pass;
        w.insert(name, witness);
    }
    Ok((ok, Value::Object(w)))
}

/// Multisets `J ⊆ [1, n]` satisfying condition (∗): some `k` has multiplicity at least 2 and
/// every `j ∈ (k, n]` occurs exactly once. Exhaustive for `n <= 8` (multiplicity of `k` in
/// {2, 3}, smaller indices at most twice); otherwise `PROPERTY_CASES` seeded samples.
pub(crate) fn star_instances(n: u32, seed: u64) -> Vec<Vec<u32>> {
    use rand::Rng;
    let build = |k: u32, mult_k: u32, lower: &[u32]| {
        let mut set = Vec::new();
        for (j, &c) in (1..k).zip(lower) {
            set.extend(std::iter::repeat(j).take(c as usize));
        }
        set.extend(std::iter::repeat(k).take(mult_k as usize));
        set.extend(k + 1..=n);
        set
    };
    let mut out = Vec::new();
    if n <= 8 {
        for k in 1..=n {
            for mult_k in 2..=3 {
                for code in 0..3u32.pow(k - 1) {
                    let lower: Vec<u32> = (0..k - 1).map(|d| code / 3u32.pow(d) % 3).collect();
                    out.push(build(k, mult_k, &lower));
                }
            }
        }
    } else {
        let mut gen = rng(seed, "ijmultisubsetnew");
        for _ in 0..PROPERTY_CASES {
            let k = gen.gen_range(1..=n);
            let mult_k = gen.gen_range(2..=3);
            let lower: Vec<u32> = (1..k).map(|_| gen.gen_range(0..=2)).collect();
            out.push(build(k, mult_k, &lower));
        }
    }
    out
}
