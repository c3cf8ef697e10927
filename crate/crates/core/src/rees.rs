//! The extended Rees ring `K̃(X̄) = ⊕_l K(X̄)^{(l)} u^l` of the topological filtration,
//! with `t = u^{-1}` and the ideal `I = (2, t)`.
//!
//! Elements are sparse maps `(λ, l) ↦ c` for `c · ē_λ u^l`, where `ē_λ` is the K-theoretic
//! Schubert class of the strict partition `λ` (a bitmask) and `l ≤ |λ|`. The t-depth of
//! a term is its gap `|λ| - l`, and
//!
//! ```text
//! I^N ∩ K̃^l = Σ_q 2^{N-q} t^q K̃^{l+q}
//! ```
//!
//! is coordinate-wise in this basis, so `v_K(c ē_λ u^l) = v_2(c) + gap`.
//!
//! In `Modulus(K)` mode the ring is `K̃/I^K`: terms with gap `>= K` are dropped and the
//! remaining coefficients are residues modulo `2^{K - gap}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::{mask_degree, mask_indices};
use crate::error::{Error, Result};
use crate::kog::PieriTable;
use crate::params::{pow2, reduce_pow2, two_adic, CoeffMode, RingParams, Valuation};
use crate::partition::StrictPartition;

/// Key of a basis element `ē_λ u^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReesKey {
    pub lambda: u32,
    pub grade: i32,
}

impl ReesKey {
    pub fn size(&self) -> u32 {
        mask_degree(self.lambda)
    }

    /// `|λ| - l`, the largest `q` with `ē_λ u^l ∈ t^q K̃^{l+q}`.
    pub fn gap(&self) -> i64 {
        i64::from(self.size()) - i64::from(self.grade)
    }

    pub fn partition(&self) -> StrictPartition {
        StrictPartition::from_mask(self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesElement {
    params: RingParams,
    terms: HashMap<ReesKey, BigInt>,
}

impl ReesElement {
    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ReesKey, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, lambda: &StrictPartition, grade: i32) -> BigInt {
        match lambda.to_mask(self.params.n) {
            Some(mask) => self.terms.get(&ReesKey { lambda: mask, grade }).cloned().unwrap_or_default(),
            None => BigInt::zero(),
        }
    }

    /// Terms sorted by grade, then `|λ|`, then the parts of `λ` lexicographically.
    pub fn sorted_terms(&self) -> Vec<(ReesKey, BigInt)> {
        let mut keys: Vec<ReesKey> = self.terms.keys().copied().collect();
        keys.sort_by_cached_key(|k| (k.grade, k.size(), k.partition()));
        keys.into_iter().map(|k| (k, self.terms[&k].clone())).collect()
    }

    pub fn grades(&self) -> Vec<i32> {
        let mut g: Vec<i32> = self.terms.keys().map(|k| k.grade).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn is_homogeneous(&self) -> bool {
        self.grades().len() <= 1
    }

    pub fn graded_component(&self, grade: i32) -> ReesElement {
        let terms = self.terms.iter().filter(|(k, _)| k.grade == grade).map(|(k, c)| (*k, c.clone())).collect();
        ReesElement { params: self.params, terms }
    }

    /// Largest `N` with `x ∈ I^N`: the minimum over terms of `v_2(c) + gap`.
    pub fn ideal_valuation(&self) -> Valuation {
        let mut v = Valuation::Infinite;
        for (k, c) in &self.terms {
            let value = two_adic(c).expect("zero coefficients are never stored") as i64 + k.gap();
            v = v.min(Valuation::Exact(value as u32));
        }
        match (v, self.params.coeff_mode) {
            (Valuation::Infinite, CoeffMode::Modulus(k)) => Valuation::AtLeast(k),
            _ => v,
        }
    }

    /// `x ≡ y mod I^N`. Errors when the working precision cannot decide it.
    pub fn congruent_mod_ideal(&self, other: &ReesElement, n: u32) -> Result<bool> {
        let v = self.checked_sub(other)?.ideal_valuation();
        if !v.decides(n) {
            let k = match self.params.coeff_mode {
                CoeffMode::Modulus(k) => k,
                CoeffMode::Exact => unreachable!("exact valuations always decide"),
            };
            return Err(Error::ModulusTooSmall { k, required: n });
        }
        Ok(v.is_at_least(n))
    }

    pub fn scale(&self, s: &BigInt) -> ReesElement {
        let mut out = ReesElement { params: self.params, terms: HashMap::with_capacity(self.terms.len()) };
        if s.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.add_term(*k, c * s);
        }
        out
    }

    /// Multiplication by `t`: every grade drops by one.
    pub fn mul_t(&self) -> ReesElement {
        let mut out = ReesElement { params: self.params, terms: HashMap::with_capacity(self.terms.len()) };
        for (k, c) in &self.terms {
            out.add_term(ReesKey { lambda: k.lambda, grade: k.grade - 1 }, c.clone());
        }
        out
    }

    pub fn mul_t_pow(&self, q: u32) -> ReesElement {
        (0..q).fold(self.clone(), |acc, _| acc.mul_t())
    }

    /// Reinterprets the element in another coefficient mode (reducing if needed).
    pub fn with_mode(&self, mode: CoeffMode) -> ReesElement {
        let mut out = ReesElement { params: self.params.with_mode(mode), terms: HashMap::new() };
        for (k, c) in &self.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn checked_add(&self, other: &ReesElement) -> Result<ReesElement> {
        check_params(self.params, other.params)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ReesElement) -> Result<ReesElement> {
        check_params(self.params, other.params)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c);
        }
        Ok(out)
    }

    fn add_term(&mut self, key: ReesKey, c: BigInt) {
        let gap = key.gap();
        assert!(gap >= 0, "grade {} exceeds |λ| = {}", key.grade, key.size());
        if c.is_zero() {
            return;
        }
        let precision = match self.params.coeff_mode {
            CoeffMode::Exact => None,
            CoeffMode::Modulus(k) => {
                if gap >= i64::from(k) {
                    return;
                }
                Some(k - gap as u32)
            }
        };
        let entry = self.terms.entry(key).or_default();
        *entry += c;
        if let Some(p) = precision {
            *entry = reduce_pow2(entry, p);
        }
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Canonical text: `coef*E[λ1,...]u^l` joined by ` + `, or `0`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.sorted_terms()
            .iter()
            .map(|(k, c)| {
                let parts: Vec<String> = k.partition().parts().iter().map(|p| p.to_string()).collect();
                format!("{c}*E[{}]u^{}", parts.join(","), k.grade)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// JSON form `[{"partition":[...],"grade":l,"coef":"<decimal>"}]` in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .sorted_terms()
            .into_iter()
            .map(|(k, c)| JsonTerm { partition: k.partition().parts().to_vec(), grade: k.grade, coef: c.to_string() })
            .collect();
        serde_json::to_value(terms).expect("plain data serializes")
    }
}

impl fmt::Display for ReesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    partition: Vec<u32>,
    grade: i32,
    coef: String,
}

fn check_params(a: RingParams, b: RingParams) -> Result<()> {
    if a != b {
        return Err(Error::ParamsMismatch { left: a.n, right: b.n });
    }
    Ok(())
}

impl Add for &ReesElement {
    type Output = ReesElement;

    /// Panics on mismatched rings; see [`ReesElement::checked_add`].
    fn add(self, rhs: &ReesElement) -> ReesElement {
        self.checked_add(rhs).expect("adding elements of different Rees rings")
    }
}

impl Sub for &ReesElement {
    type Output = ReesElement;

    fn sub(self, rhs: &ReesElement) -> ReesElement {
        self.checked_sub(rhs).expect("subtracting elements of different Rees rings")
    }
}

impl Neg for &ReesElement {
    type Output = ReesElement;

    fn neg(self) -> ReesElement {
        self.scale(&BigInt::from(-1))
    }
}

/// Coordinates against the line and point classes of a given grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointLineCoordinates {
    pub line: BigInt,
    pub point: BigInt,
}

/// One summand `2^{two_power} t^depth y_depth` of a decomposition of an element of `I^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBucket {
    pub depth: u32,
    pub two_power: u32,
    /// The terms assigned to this bucket, as they appear in `x`.
    pub part: ReesElement,
    /// `y_depth`, with `part = 2^{two_power} t^depth y_depth`; exact coefficients.
    pub quotient: ReesElement,
}

/// Arithmetic context: parameters plus the Pieri table for `n`.
pub struct ReesRing {
    params: RingParams,
    pieri: PieriTable,
    top_classes: OnceLock<(ReesElement, ReesElement)>,
}

impl fmt::Debug for ReesRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReesRing").field("params", &self.params).field("pieri", &self.pieri).finish()
    }
}

impl ReesRing {
    pub fn new(params: RingParams) -> Self {
        ReesRing { params, pieri: PieriTable::new(params.n), top_classes: OnceLock::new() }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn pieri_table(&self) -> &PieriTable {
        &self.pieri
    }

    pub fn zero(&self) -> ReesElement {
        ReesElement { params: self.params, terms: HashMap::new() }
    }

    pub fn one(&self) -> ReesElement {
        self.term(&StrictPartition::empty(), 0, BigInt::one()).unwrap()
    }

    /// `c · ē_λ u^l`; zero when `λ` has parts above `n`.
    pub fn term(&self, lambda: &StrictPartition, grade: i32, c: BigInt) -> Result<ReesElement> {
        let mut out = self.zero();
        let Some(mask) = lambda.to_mask(self.params.n) else { return Ok(out) };
        let key = ReesKey { lambda: mask, grade };
        if key.gap() < 0 {
            return Err(Error::MalformedInput(format!("ē_{lambda} u^{grade} is not in K̃^{grade}: grade exceeds |λ|")));
        }
        out.add_term(key, c);
        Ok(out)
    }

    /// `f(i) = ē(i) u^i`; zero for `i > n`.
    pub fn f(&self, i: u32) -> ReesElement {
        if i == 0 || i > self.params.n {
            return self.zero();
        }
        self.term(&StrictPartition::single(i), i as i32, BigInt::one()).unwrap()
    }

    /// `f_λ = ē_λ u^{|λ|}`.
    pub fn f_partition(&self, lambda: &StrictPartition) -> ReesElement {
        self.term(lambda, lambda.size() as i32, BigInt::one()).unwrap()
    }

    pub fn t(&self) -> ReesElement {
        self.one().mul_t()
    }

    /// `g(i) = 2 f(i) - t f(i+1)`.
    pub fn g(&self, i: u32) -> ReesElement {
        self.mul_g(i, &self.one()).expect("unit is well formed")
    }

    /// `f(i) · x` by the Pieri rule (grade rises by `i`). `i = n + 1` gives zero.
    pub fn pieri_mul(&self, i: u32, x: &ReesElement) -> Result<ReesElement> {
        check_params(self.params.with_mode(x.params.coeff_mode), x.params)?;
        if i == 0 {
            return Err(Error::IndexOutOfRange { index: 0, bound: self.params.n + 1 });
        }
        let mut out = ReesElement { params: x.params, terms: HashMap::new() };
        if i > self.params.n {
            return Ok(out);
        }
        for (k, c) in &x.terms {
            // In K̃/I^K the result gap is gap + (|ν/λ| - i), so only |ν/λ| <= i + K - 1 - gap survives.
            let extra = match x.params.coeff_mode {
                CoeffMode::Exact => u32::MAX,
                CoeffMode::Modulus(kk) => (i64::from(kk) - 1 - k.gap()) as u32,
            };
            for &(nu, d) in self.pieri.row(k.lambda, i, extra).iter() {
                out.add_term(ReesKey { lambda: nu, grade: k.grade + i as i32 }, c * d);
            }
        }
        Ok(out)
    }

    /// `g(i) · x = 2 f(i) x - t f(i+1) x`.
    pub fn mul_g(&self, i: u32, x: &ReesElement) -> Result<ReesElement> {
        if i == 0 || i > self.params.n {
            return Err(Error::IndexOutOfRange { index: i64::from(i), bound: self.params.n });
        }
        let a = self.pieri_mul(i, x)?.scale(&BigInt::from(2));
        let b = self.pieri_mul(i + 1, x)?.mul_t();
        a.checked_sub(&b)
    }

    /// `f(1)^k · x`.
    pub fn pieri_pow(&self, i: u32, k: u64, x: &ReesElement) -> Result<ReesElement> {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = self.pieri_mul(i, &acc)?;
        }
        Ok(acc)
    }

    /// `f(L) · x = ∏_{l ∈ L} f(l) · x`.
    pub fn mul_f_set(&self, set: &[u32], x: &ReesElement) -> Result<ReesElement> {
        let mut acc = x.clone();
        for &i in set.iter().rev() {
            acc = self.pieri_mul(i, &acc)?;
        }
        Ok(acc)
    }

    /// `g(L) · x`.
    pub fn mul_g_set(&self, set: &[u32], x: &ReesElement) -> Result<ReesElement> {
        let mut acc = x.clone();
        for &i in set.iter().rev() {
            acc = self.mul_g(i, &acc)?;
        }
        Ok(acc)
    }

    /// Exact products `ℓ̄ = ∏_{i=2}^n ē(i)` and `p̄ = ∏_{i=1}^n ē(i)` at their natural grades.
    fn top_classes(&self) -> &(ReesElement, ReesElement) {
        self.top_classes.get_or_init(|| {
            let exact = ReesRing::new(self.params.with_mode(CoeffMode::Exact));
            let unit = exact.one();
            let line: Vec<u32> = (2..=self.params.n).collect();
            let line = exact.mul_f_set(&line, &unit).unwrap();
            let point = exact.pieri_mul(1, &line).unwrap();
            (line, point)
        })
    }

    /// `ℓ̄ u^l`, in this ring's coefficient mode.
    pub fn line_class(&self, grade: i32) -> ReesElement {
        regrade(&self.top_classes().0, grade, self.params)
    }

    /// `p̄ u^l`, in this ring's coefficient mode.
    pub fn point_class(&self, grade: i32) -> ReesElement {
        regrade(&self.top_classes().1, grade, self.params)
    }

    /// Writes a homogeneous `x` of grade `l`, supported in sizes `>= dim - 1`, as
    /// `a · ℓ̄ u^l + b · p̄ u^l`. In modulus mode `a` and `b` are residues modulo the
    /// powers of 2 that the working precision determines.
    pub fn express_in_point_line_basis(&self, x: &ReesElement, grade: i32) -> Result<PointLineCoordinates> {
        check_params(self.params.with_mode(x.params.coeff_mode), x.params)?;
        let dim = self.params.dim_x();
        let full = self.params.full_mask();
        let staircase_minus_one = full & !1;
        for (k, _) in x.terms() {
            if k.grade != grade {
                return Err(Error::Inconsistent(format!("term of grade {} in an element of grade {grade}", k.grade)));
            }
            if k.size() + 1 < dim {
                return Err(Error::Inconsistent(format!("term {} below the line class", k.partition())));
            }
        }
        let (line, point) = self.top_classes();
        let coef = |e: &ReesElement, mask: u32| -> BigInt {
            e.terms().find(|(k, _)| k.lambda == mask).map(|(_, c)| c.clone()).unwrap_or_default()
        };
        // ℓ̄ = α ē_{[2,n]} + β ē_{[1,n]},  p̄ = γ ē_{[1,n]}.
        let alpha = coef(line, staircase_minus_one);
        let beta = coef(line, full);
        let gamma = coef(point, full);
        if !(alpha.abs().is_one() && gamma.abs().is_one()) {
            return Err(Error::Inconsistent(format!("unexpected top classes: α = {alpha}, γ = {gamma}")));
        }
        let big_a = coef(x, staircase_minus_one);
        let big_b = coef(x, full);
        let mut a = &big_a * &alpha;
        let mut b = (&big_b - &a * &beta) * &gamma;
        if let CoeffMode::Modulus(k) = self.params.coeff_mode {
            let gap_line = i64::from(dim) - 1 - i64::from(grade);
            let gap_point = i64::from(dim) - i64::from(grade);
            a = reduce_pow2(&a, (i64::from(k) - gap_line).max(0) as u32);
            b = reduce_pow2(&b, (i64::from(k) - gap_point).max(0) as u32);
        }
        let rebuilt = self.line_class(grade).scale(&a).checked_add(&self.point_class(grade).scale(&b))?;
        if rebuilt != *x {
            return Err(Error::Inconsistent("nonzero remainder against the point and line classes".into()));
        }
        Ok(PointLineCoordinates { line: a, point: b })
    }

    /// Splits `x ∈ I^N` (homogeneous) as `Σ_q 2^{N-q} t^q y_q`, putting each term in
    /// bucket `min(gap, q_max)`. Empty buckets are omitted.
    pub fn canonical_ideal_decomposition(&self, x: &ReesElement, n: u32, q_max: u32) -> Result<Vec<IdealBucket>> {
        let v = x.ideal_valuation();
        if !v.is_at_least(n) || !v.decides(n) {
            return Err(Error::ValuationTooSmall { found: v.to_string(), required: n });
        }
        if !x.is_homogeneous() {
            return Err(Error::MalformedInput("decomposition needs a homogeneous element".into()));
        }
        let mut parts: Vec<ReesElement> = (0..=q_max).map(|_| ReesElement { params: x.params, terms: HashMap::new() }).collect();
        let exact = x.params.with_mode(CoeffMode::Exact);
        let mut quotients: Vec<ReesElement> = (0..=q_max).map(|_| ReesElement { params: exact, terms: HashMap::new() }).collect();
        for (k, c) in x.terms() {
            let q = (k.gap() as u32).min(q_max);
            let two_power = n.saturating_sub(q);
            let (quo, rem) = c.div_rem(&pow2(two_power));
            if !rem.is_zero() {
                return Err(Error::NotDivisible { value: c.to_string(), divisor: format!("2^{two_power}") });
            }
            parts[q as usize].terms.insert(k, c.clone());
            quotients[q as usize].terms.insert(ReesKey { lambda: k.lambda, grade: k.grade + q as i32 }, quo);
        }
        Ok(parts
            .into_iter()
            .zip(quotients)
            .enumerate()
            .filter(|(_, (p, _))| !p.is_zero())
            .map(|(q, (part, quotient))| IdealBucket { depth: q as u32, two_power: n.saturating_sub(q as u32), part, quotient })
            .collect())
    }

    /// Parses the canonical text form.
    pub fn parse_text(&self, text: &str) -> Result<ReesElement> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = self.zero();
        if cleaned == "0" || cleaned.is_empty() {
            return Ok(out);
        }
        for piece in cleaned.split('+') {
            let (coef, rest) = piece.split_once("*E[").ok_or_else(|| Error::Parse(format!("bad term `{piece}`")))?;
            let (parts, grade) = rest.split_once("]u^").ok_or_else(|| Error::Parse(format!("bad term `{piece}`")))?;
            let c: BigInt = coef.parse().map_err(|_| Error::Parse(format!("bad coefficient `{coef}`")))?;
            let grade: i32 = grade.parse().map_err(|_| Error::Parse(format!("bad grade `{grade}`")))?;
            let parts: Vec<u32> = if parts.is_empty() {
                Vec::new()
            } else {
                parts
                    .split(',')
                    .map(|s| s.parse::<u32>().map_err(|_| Error::Parse(format!("bad part `{s}`"))))
                    .collect::<Result<_>>()?
            };
            out = out.checked_add(&self.term(&StrictPartition::new(parts)?, grade, c)?)?;
        }
        Ok(out)
    }

    pub fn from_json(&self, value: &serde_json::Value) -> Result<ReesElement> {
        let terms: Vec<JsonTerm> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = self.zero();
        for t in terms {
            let c: BigInt = t.coef.parse().map_err(|_| Error::Parse(format!("bad coefficient `{}`", t.coef)))?;
            out = out.checked_add(&self.term(&StrictPartition::new(t.partition)?, t.grade, c)?)?;
        }
        Ok(out)
    }
}

/// Moves every term of a homogeneous exact element to grade `l`, reducing into `params`.
fn regrade(x: &ReesElement, grade: i32, params: RingParams) -> ReesElement {
    let mut out = ReesElement { params, terms: HashMap::new() };
    for (k, c) in &x.terms {
        out.add_term(ReesKey { lambda: k.lambda, grade }, c.clone());
    }
    out
}

/// Indices of a partition mask, largest part first.
pub fn mask_parts(mask: u32) -> Vec<u32> {
    let mut v: Vec<u32> = mask_indices(mask).collect();
    v.reverse();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u32) -> ReesRing {
        ReesRing::new(RingParams::exact(n).unwrap())
    }

    fn sp(parts: &[u32]) -> StrictPartition {
        StrictPartition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn pieri_mul_examples() {
        let r = ring(8);
        assert_eq!(r.pieri_mul(1, &r.f(1)).unwrap(), r.f(2));
        assert!(r.pieri_mul(8, &r.f(8)).unwrap().is_zero());
        assert!(r.pieri_mul(9, &r.f(3)).unwrap().is_zero());
        assert!(r.pieri_mul(0, &r.f(3)).is_err());
        let m = 4;
        let got = r.pieri_mul(1, &r.f(m)).unwrap();
        let expect = &(&r.f(m + 1) + &r.f_partition(&sp(&[m, 1]))) - &r.term(&sp(&[m + 1, 1]), (m + 1) as i32, BigInt::one()).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn t_and_g() {
        let r = ring(6);
        assert_eq!(r.t().ideal_valuation(), Valuation::Exact(1));
        assert!(r.zero().mul_t().is_zero());
        assert_eq!(r.g(6), r.f(6).scale(&BigInt::from(2)));
        for i in 1..=6 {
            assert_eq!(r.g(i).ideal_valuation(), Valuation::Exact(1));
            assert_eq!(r.g(i).mul_t().ideal_valuation(), Valuation::Exact(2));
        }
        let x = r.f(3).mul_t();
        assert_eq!(x.sorted_terms()[0].0.grade, 2);
    }

    #[test]
    fn valuation_closed_form() {
        let r = ring(5);
        let x = r.term(&sp(&[4, 1]), 2, BigInt::from(8)).unwrap();
        assert_eq!(x.ideal_valuation(), Valuation::Exact(6));
        assert_eq!(r.zero().ideal_valuation(), Valuation::Infinite);
        assert!(r.term(&sp(&[2]), 3, BigInt::one()).is_err());
        assert!(r.term(&sp(&[6]), 6, BigInt::one()).unwrap().is_zero());
    }

    #[test]
    fn congruence_examples() {
        let r = ring(8);
        for i in 1..=8 {
            let sq = r.pieri_mul(i, &r.f(i)).unwrap();
            assert!(sq.congruent_mod_ideal(&r.f(2 * i), 1).unwrap(), "i = {i}");
        }
    }

    #[test]
    fn graded_components() {
        let r = ring(5);
        let x = &r.f(1) + &r.f(2).mul_t();
        assert_eq!(x.graded_component(1), x);
        assert!(x.graded_component(2).is_zero());
        assert!(x.is_homogeneous());
    }

    #[test]
    fn modulus_mode_drops_deep_terms() {
        let r = ReesRing::new(RingParams::new(5, CoeffMode::Modulus(3)).unwrap());
        assert!(r.t().mul_t_pow(2).is_zero());
        let x = r.f(2).mul_t().scale(&BigInt::from(5));
        assert_eq!(x.coefficient(&sp(&[2]), 1), BigInt::one());
        assert_eq!(r.zero().ideal_valuation(), Valuation::AtLeast(3));
        assert!(r.zero().congruent_mod_ideal(&r.zero(), 4).is_err());
    }

    #[test]
    fn point_and_line_coordinates() {
        for n in 2..=6 {
            let r = ring(n);
            let dim = r.params().dim_x() as i32;
            for grade in [dim - 1, dim - 3] {
                let p = r.point_class(grade);
                let l = r.line_class(grade);
                let c = r.express_in_point_line_basis(&p, grade).unwrap();
                assert_eq!((c.line, c.point), (BigInt::zero(), BigInt::one()));
                let c = r.express_in_point_line_basis(&l, grade).unwrap();
                assert_eq!((c.line, c.point), (BigInt::one(), BigInt::zero()));
                let mix = &l.scale(&BigInt::from(-3)) + &p.scale(&BigInt::from(7));
                let c = r.express_in_point_line_basis(&mix, grade).unwrap();
                assert_eq!((c.line, c.point), (BigInt::from(-3), BigInt::from(7)));
            }
            assert!(r.express_in_point_line_basis(&r.f(1), 1).is_err());
        }
    }

    #[test]
    fn decomposition_buckets() {
        let r = ring(5);
        let x = r.f_partition(&sp(&[3, 1])).scale(&BigInt::from(16));
        let b = r.canonical_ideal_decomposition(&x, 4, 3).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].depth, 0);
        assert_eq!(b[0].quotient, r.f_partition(&sp(&[3, 1])));
        let y = r.f_partition(&sp(&[5, 1])).mul_t_pow(3).scale(&BigInt::from(2));
        let b = r.canonical_ideal_decomposition(&y, 4, 3).unwrap();
        assert_eq!((b.len(), b[0].depth, b[0].two_power), (1, 3, 1));
        assert_eq!(b[0].quotient, r.f_partition(&sp(&[5, 1])));
        let deep = r.f_partition(&sp(&[5, 1])).mul_t_pow(4);
        assert!(matches!(r.canonical_ideal_decomposition(&deep, 4, 3), Err(Error::NotDivisible { .. })));
        assert!(r.canonical_ideal_decomposition(&r.f(1), 1, 3).is_err());
    }

    #[test]
    fn text_and_json_round_trip() {
        let r = ring(6);
        let x = &r.mul_g(2, &r.f(3)).unwrap() + &r.t();
        assert_eq!(r.parse_text(&x.to_text()).unwrap(), x);
        assert_eq!(r.from_json(&x.to_json()).unwrap(), x);
        assert_eq!(r.t().to_text(), "1*E[]u^-1");
    }
}
