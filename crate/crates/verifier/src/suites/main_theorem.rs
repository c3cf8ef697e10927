//! The computational steps behind the non-injectivity example.

use num_bigint::BigInt;
use num_integer::Integer;
use ogring::params::pow2;
use ogring::rees::IdealBucket;
use ogring::{deg_over_index, torsion_index, ReesElement, Result};
use serde_json::json;

use super::chow::point_congruence;
use super::{all_of, big, certificate, rees_congruence, with};
use crate::certificate::{at_least, val, Job, Outcome, VerificationCertificate};
use crate::context::Context;

fn expected_j(ctx: &Context) -> Result<Vec<u32>> {
    let fam = ctx.families()?;
    let mut j = vec![2, 3];
    if ctx.n() == 8 {
        j.extend([6, 7]);
    } else {
        j.extend(&fam.i3);
        j.extend(&fam.i4);
    }
    j.sort_unstable();
    Ok(j)
}

fn bucket(buckets: &[IdealBucket], depth: u32, like: &ReesElement) -> ReesElement {
    buckets.iter().find(|b| b.depth == depth).map(|b| b.part.clone()).unwrap_or_else(|| like.scale(&BigInt::from(0)))
}

/// Exact quotient `c / 2^k`, or an error when `2^k` does not divide `c`.
fn divide(c: &BigInt, k: u32, what: &str) -> Result<BigInt> {
    let (q, r) = c.div_rem(&pow2(k));
    if r != BigInt::from(0) {
        return Err(ogring::Error::NotDivisible { value: format!("{what} = {c}"), divisor: format!("2^{k}") });
    }
    Ok(q)
}

/// Every computed step of the divisibility argument for `y`.
fn gk_steps(ctx: &Context) -> Outcome {
    let ring = ctx.rees();
    let m = ctx.m()?;
    let dim = ctx.params().dim_x() as i32;
    let y = ctx.y()?;
    let z = ctx.z()?;

    let v_y = at_least(y.ideal_valuation(), m + 1)?;
    if !v_y.0 {
        return Ok((false, json!({ "y_in_I^(m+1)": v_y.1 })));
    }
    let buckets = ring.canonical_ideal_decomposition(&y, m + 1, 3)?;
    let y1 = bucket(&buckets, 2, &y).checked_add(&bucket(&buckets, 3, &y))?;
    let coords = ring.express_in_point_line_basis(&y1, dim - 3)?;
    let a = divide(&coords.line, m - 1, "line coordinate of y'")?;
    let b = divide(&coords.point, m - 2, "point coordinate of y'")?;

    let tf1z = ring.pieri_mul(1, &z.mul_t())?;
    let line_target = ring.line_class(dim - 3).scale(&pow2(m - 1));
    let point_target = ring.point_class(dim - 3).scale(&pow2(m - 2));
    let two_z = rees_congruence(&z.scale(&BigInt::from(2)), &line_target, m + 2);
    let t_f1_z = rees_congruence(&tf1z, &point_target, m + 2);

    let r = y1.checked_sub(&z.scale(&(BigInt::from(2) * &a)))?.checked_sub(&tf1z.scale(&b))?;
    let r_member = at_least(r.ideal_valuation(), m + 2)?;
    let mut parts = vec![
        ("y_in_I^(m+1)".to_string(), Ok(v_y)),
        ("2z ≡ 2^(m-1) t² ℓ u^(dim-1) mod I^(m+2)".to_string(), two_z),
        ("t f(1) z ≡ 2^(m-2) t³ p u^dim mod I^(m+2)".to_string(), t_f1_z),
        ("y' - 2az - b t f(1) z ∈ I^(m+2)".to_string(), Ok(r_member.clone())),
    ];
    let mut coefficients = json!({
        "a": big(&a),
        "b": big(&b),
        "line_coordinate": big(&coords.line),
        "point_coordinate": big(&coords.point),
        "buckets": buckets.iter().map(|b| json!({ "depth": b.depth, "two_power": b.two_power, "terms": b.part.len() })).collect::<Vec<_>>(),
    });
    if r_member.0 {
        let buckets = ring.canonical_ideal_decomposition(&r, m + 2, 3)?;
        let y2 = bucket(&buckets, 3, &r);
        let coords = ring.express_in_point_line_basis(&y2, dim - 3)?;
        let b_prime = divide(&coords.point, m - 1, "point coordinate of y''")?;
        parts.push(("y'' has no line component".to_string(), Ok((coords.line == BigInt::from(0), json!({ "line": big(&coords.line) })))));
        parts.push((
            "2^(m-1) t³ p u^dim ≡ 2 t f(1) z mod I^(m+3)".to_string(),
            rees_congruence(&ring.point_class(dim - 3).scale(&pow2(m - 1)), &tf1z.scale(&BigInt::from(2)), m + 3),
        ));
        let rest = y2.checked_sub(&tf1z.scale(&(BigInt::from(2) * &b_prime)))?;
        parts.push(("y'' - 2b' t f(1) z ∈ I^(m+3)".to_string(), at_least(rest.ideal_valuation(), m + 3)));
        coefficients["b_prime"] = big(&b_prime);
    }
    with(all_of(parts), json!({ "m": m, "coefficients": coefficients }))
}

pub fn suite_main_theorem(ctx: &Context) -> Result<VerificationCertificate> {
    let n = ctx.n();
    let fam = ctx.families()?;
    let m = ctx.m()?;
    let q = ctx.quarter_square();
    let dim = ctx.params().dim_x();
    let v = n.trailing_zeros();
    let mut jobs: Vec<Job<'_>> = Vec::new();

    {
        let j = fam.j.clone();
        jobs.push(Job::computed("setJ", "eq:setJcases: J = [2,3] ∪ I3 ∪ I4, or {2,3,6,7} at n = 8", move || {
            let expected = expected_j(ctx)?;
            Ok((j == expected, json!({ "J": j, "J_prime": fam.j_prime() })))
        }));
    }
    let size = ctx.families()?.j.len() as u32;
    jobs.push(Job::computed("sizeofJset", "eq:sizeofJset: |J| = n/2 - v(n) + 3", move || {
        Ok((size == n / 2 - v + 3, json!({ "size": size, "expected": n / 2 - v + 3 })))
    }));
    let sum: u64 = ctx.families()?.j.iter().map(|&x| u64::from(x)).sum();
    jobs.push(Job::computed("degree_arithmetic", "eq:elementx: (n²/4 - 1) + ΣJ = dim X - 3", move || {
        Ok((q - 1 + sum == u64::from(dim) - 3, json!({ "exponent": q - 1, "sum_J": sum, "dim_X": dim })))
    }));
    jobs.push(Job::computed("torsionindex", "torsionindex: ind X = 2^(n - 2v(n) + 2)", move || {
        let ind = torsion_index(n)?;
        let paper = match n {
            8 => Some(BigInt::from(16)),
            16 => Some(BigInt::from(1024)),
            _ => None,
        };
        let ok = ind == pow2(m) && paper.as_ref().map_or(true, |p| *p == ind);
        Ok((ok, json!({ "ind_X": big(&ind), "m": m })))
    }));
    jobs.push(Job::computed("elementx", "eq:elementx: res(x) = 2^|J| e(1)^(n²/4-1) e(J) lies in codimension dim X - 3", move || {
        let fam = ctx.families()?;
        let x = ctx.chow_word(q - 1, &fam.j)?.scale(&pow2(fam.j.len() as u32));
        let degrees = x.degrees();
        let word_degree = q as u32 - 1 + fam.j.iter().sum::<u32>();
        let ok = word_degree == dim - 3 && (x.is_zero() || degrees == vec![dim - 3]);
        Ok((ok, json!({
            "word_degree": word_degree,
            "degrees": degrees,
            "valuation": val(x.two_adic_valuation()),
            "vanishes_in_coefficients": x.is_zero(),
        })))
    }));
    jobs.push(Job::computed(
        "propGK_steps",
        "prop:GK: y = 2^(m+1) y0 + 2^m t y1 + 2^(m-1) t² y2 + 2^(m-2) t³ y3; y' = a(2^(m-1) t²) ℓ u^(dim-1) + b(2^(m-2) t³) p u^dim; y'' = b'(2^(m-1) t³) p u^dim",
        move || gk_steps(ctx),
    ));
    jobs.push(Job::computed("propGK_z_valuation", "prop:GK: v_K(z) >= m", move || at_least(ctx.z()?.ideal_valuation(), m)));
    jobs.push(Job::computed("propchow_reduction", "prop:chow: e(1)^(n²/4-1) res(Ŝ(J)) ≡ ind X e([1,n]) mod 2 ind X", move || {
        point_congruence(ctx)
    }));
    jobs.push(Job::computed("propchow_deg_over_index", "prop:chow: (deg/ind X)(e(1)^(n²/4-1) res(Ŝ(J))) = 1", move || {
        let w = ctx.w()?;
        let d = deg_over_index(&w)?;
        Ok((d == 1, json!({ "deg_over_index": d, "point_coefficient": big(&w.degree_top()) })))
    }));
    jobs.push(Job::structural(
        "propGK_y_in_IX",
        "prop:GK: y ∈ I(X), via twoindextindex applied to the computed decomposition",
        json!({ "assumption": "I(X̄)^(m+1) ∩ K̃^(dim X-3)(X) and I(X̄)^(m+3) ∩ K̃^(dim X-3)(X) lie in I(X)", "computed_in": "propGK_steps" }),
    ));
    jobs.push(Job::structural(
        "remark_proofKpart",
        "rem:proofKpart: (2^(m-1) ℓ) u^(dim-3), (2^(m-2) p) u^(dim-3) ∈ I(X)",
        json!({ "assumption": "2z, ē(1) z ∈ I(X)", "computed_in": "propGK_steps" }),
    ));
    jobs.push(Job::structural(
        "mainthm",
        "mainthm: φ is not injective for n a power of two, n >= 8",
        json!({ "assumption": "φ(x) is divisible by 2 in GK(X) while deg/ind X of x is 1", "computed_in": ["propGK_steps", "propchow_deg_over_index"] }),
    ));

    Ok(certificate("main_theorem", ctx, jobs))
}
