//! Chow ring of the split maximal orthogonal grassmannian.
//!
//! The ring is generated by special Schubert classes `e(1), ..., e(n)` subject to
//!
//! ```text
//! e(i)^2 = (-1)^(i+1) e(2i) + 2 * sum_{k=1}^{i-1} (-1)^(k+1) e(i-k) e(i+k),   e(j) = 0 for j > n,
//! ```
//!
//! and is free abelian on the square-free products `e(I)`, `I ⊆ [1, n]`. Monomials are
//! stored as bitmasks (bit `i - 1` stands for `e(i)`).

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{reduce_pow2, two_adic, CoeffMode, RingParams, Valuation};

/// A square-free product `e(I)`; bit `i - 1` is set iff `i ∈ I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareFreeMonomial(pub u32);

impl SquareFreeMonomial {
    pub const UNIT: SquareFreeMonomial = SquareFreeMonomial(0);

    /// Builds `e(I)` from distinct indices in `[1, n]`.
    pub fn from_indices(indices: &[u32], n: u32) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i64::from(i), bound: n });
            }
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return Err(Error::MalformedInput(format!("index {i} repeated in a square-free monomial")));
            }
            mask |= bit;
        }
        Ok(SquareFreeMonomial(mask))
    }

    /// The interval `e([a, b])`; empty when `b < a`.
    pub fn interval(a: u32, b: u32) -> Self {
        SquareFreeMonomial((a..=b).fold(0, |m, i| m | (1 << (i - 1))))
    }

    pub fn indices(&self) -> Vec<u32> {
        mask_indices(self.0).collect()
    }

    pub fn degree(&self) -> u32 {
        mask_indices(self.0).sum()
    }

    pub fn contains(&self, i: u32) -> bool {
        i >= 1 && i <= 32 && self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_unit(&self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for SquareFreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[")?;
        for (pos, i) in mask_indices(self.0).enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// Indices `i` with bit `i - 1` set, increasing.
pub fn mask_indices(mask: u32) -> impl Iterator<Item = u32> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            Some(b + 1)
        }
    })
}

pub fn mask_degree(mask: u32) -> u32 {
    mask_indices(mask).sum()
}

/// Compares same-degree index multisets by their descending-sorted sequences.
fn descending_lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Sort key used by the canonical text form: degree, then descending-lex.
fn canonical_order(a: &u32, b: &u32) -> Ordering {
    let (da, db) = (mask_degree(*a), mask_degree(*b));
    da.cmp(&db).then_with(|| {
        let ia: Vec<u32> = mask_indices(*a).collect();
        let ib: Vec<u32> = mask_indices(*b).collect();
        descending_lex_cmp(&ia, &ib)
    })
}

/// Which repeated index the rewriting engine rewrites first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    LargestFirst,
    SmallestFirst,
    /// Pseudo-random choice among repeated indices, reproducible from the seed.
    Seeded(u64),
}

/// A formal integer combination of index multisets, the input of [`ChowRing::normalize`].
/// Entries larger than `n` are legal and denote zero.
pub type RawCombination = Vec<(Vec<i64>, BigInt)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowElement {
    params: RingParams,
    terms: HashMap<u32, BigInt>,
}

impl ChowElement {
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

    pub fn terms(&self) -> impl Iterator<Item = (SquareFreeMonomial, &BigInt)> {
        self.terms.iter().map(|(m, c)| (SquareFreeMonomial(*m), c))
    }

    /// Terms in canonical order: by degree, then descending-lex on the index set.
    pub fn sorted_terms(&self) -> Vec<(SquareFreeMonomial, BigInt)> {
        let mut masks: Vec<u32> = self.terms.keys().copied().collect();
        masks.sort_by(canonical_order);
        masks.into_iter().map(|m| (SquareFreeMonomial(m), self.terms[&m].clone())).collect()
    }

    pub fn coefficient(&self, mono: SquareFreeMonomial) -> BigInt {
        self.terms.get(&mono.0).cloned().unwrap_or_default()
    }

    /// Coefficient of the point class `p = e([1, n])`.
    pub fn degree_top(&self) -> BigInt {
        self.coefficient(SquareFreeMonomial(self.params.full_mask()))
    }

    pub fn homogeneous_component(&self, degree: u32) -> ChowElement {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| mask_degree(**m) == degree)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        ChowElement { params: self.params, terms }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(|m| mask_degree(*m)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Minimum 2-adic valuation of the coefficients. Coefficient-wise divisibility is
    /// divisibility in the ring because the square-free monomials form a basis.
    pub fn two_adic_valuation(&self) -> Valuation {
        let mut v = Valuation::Infinite;
        for c in self.terms.values() {
            v = v.min(Valuation::Exact(two_adic(c).expect("zero coefficients are never stored")));
        }
        match (v, self.params.coeff_mode) {
            (Valuation::Infinite, CoeffMode::Modulus(k)) => Valuation::AtLeast(k),
            _ => v,
        }
    }

    /// Reduces the coefficients modulo `2^k`, giving an element in modulus mode.
    pub fn reduce_mod_pow2(&self, k: u32) -> ChowElement {
        let params = self.params.with_mode(CoeffMode::Modulus(k));
        let mut out = ChowElement { params, terms: HashMap::new() };
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> ChowElement {
        let mut out = ChowElement { params: self.params, terms: HashMap::with_capacity(self.terms.len()) };
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn checked_add(&self, other: &ChowElement) -> Result<ChowElement> {
        check_params(self.params, other.params)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ChowElement) -> Result<ChowElement> {
        check_params(self.params, other.params)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        Ok(out)
    }

    /// Whether `self ≡ other (mod 2^k)` coefficient-wise.
    pub fn congruent_mod_pow2(&self, other: &ChowElement, k: u32) -> Result<bool> {
        Ok(self.checked_sub(other)?.two_adic_valuation().is_at_least(k))
    }

    fn add_term(&mut self, mask: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let modulus = match self.params.coeff_mode {
            CoeffMode::Exact => None,
            CoeffMode::Modulus(k) => Some(k),
        };
        let entry = self.terms.entry(mask).or_default();
        *entry += c;
        if let Some(k) = modulus {
            *entry = reduce_pow2(entry, k);
        }
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// Canonical text: `coef*e[i1,i2,...]` terms joined by ` + `, or `0`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.sorted_terms()
            .iter()
            .map(|(m, c)| format!("{c}*{m}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// JSON array form `[{"mono":[...],"coef":"<decimal>"}]`, canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| JsonTerm { mono: m.indices(), coef: c.to_string() })
            .collect();
        serde_json::to_value(terms).expect("plain data serializes")
    }
}

impl fmt::Display for ChowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    mono: Vec<u32>,
    coef: String,
}

fn check_params(a: RingParams, b: RingParams) -> Result<()> {
    if a != b {
        return Err(Error::ParamsMismatch { left: a.n, right: b.n });
    }
    Ok(())
}

impl Add for &ChowElement {
    type Output = ChowElement;

    /// Panics when the operands come from different rings; see [`ChowElement::checked_add`].
    fn add(self, rhs: &ChowElement) -> ChowElement {
        self.checked_add(rhs).expect("adding elements of different Chow rings")
    }
}

impl Sub for &ChowElement {
    type Output = ChowElement;

    fn sub(self, rhs: &ChowElement) -> ChowElement {
        self.checked_sub(rhs).expect("subtracting elements of different Chow rings")
    }
}

impl Neg for &ChowElement {
    type Output = ChowElement;

    fn neg(self) -> ChowElement {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul<&BigInt> for &ChowElement {
    type Output = ChowElement;

    fn mul(self, rhs: &BigInt) -> ChowElement {
        self.scale(rhs)
    }
}

type GeneratorProduct = Arc<Vec<(u32, BigInt)>>;

/// Arithmetic context: parameters plus a shared cache of `e(i) · e(I)` normal forms.
pub struct ChowRing {
    params: RingParams,
    cache: DashMap<(u32, u32), GeneratorProduct>,
}

impl fmt::Debug for ChowRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChowRing").field("params", &self.params).field("cached", &self.cache.len()).finish()
    }
}

impl ChowRing {
    pub fn new(params: RingParams) -> Self {
        ChowRing { params, cache: DashMap::new() }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn zero(&self) -> ChowElement {
        ChowElement { params: self.params, terms: HashMap::new() }
    }

    pub fn one(&self) -> ChowElement {
        self.monomial(SquareFreeMonomial::UNIT, BigInt::one())
    }

    pub fn monomial(&self, mono: SquareFreeMonomial, coef: BigInt) -> ChowElement {
        let mut out = self.zero();
        out.add_term(mono.0, coef);
        out
    }

    /// `e(i)`, zero for `i > n`.
    pub fn generator(&self, i: u32) -> ChowElement {
        if i == 0 || i > self.params.n {
            return self.zero();
        }
        self.monomial(SquareFreeMonomial(1 << (i - 1)), BigInt::one())
    }

    /// `e(I)` for an index set given as an iterator (entries above `n` give zero).
    pub fn product_of_generators(&self, indices: impl IntoIterator<Item = u32>) -> ChowElement {
        let mut acc = self.one();
        for i in indices {
            acc = self.mul_generator(&acc, i);
        }
        acc
    }

    /// Point class `p = e([1, n])`.
    pub fn point(&self) -> ChowElement {
        self.monomial(SquareFreeMonomial(self.params.full_mask()), BigInt::one())
    }

    /// Rewrites a formal combination of multisets into the square-free basis,
    /// always rewriting the largest repeated index first.
    pub fn normalize(&self, raw: &RawCombination) -> Result<ChowElement> {
        self.normalize_with(raw, RewriteOrder::LargestFirst)
    }

    pub fn normalize_with(&self, raw: &RawCombination, order: RewriteOrder) -> Result<ChowElement> {
        let n = self.params.n;
        let mut pending: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (multiset, c) in raw {
            let mut idx = Vec::with_capacity(multiset.len());
            let mut vanishes = false;
            for &i in multiset {
                if i <= 0 {
                    return Err(Error::MalformedInput(format!("index {i} is not positive")));
                }
                if i > i64::from(n) {
                    vanishes = true;
                } else {
                    idx.push(i as u32);
                }
            }
            if !vanishes {
                idx.sort_unstable();
                push_pending(&mut pending, idx, c.clone());
            }
        }
        let mut out = self.zero();
        let mut step: u64 = 0;
        while let Some((multiset, c)) = pending.pop_last() {
            let repeated = repeated_indices(&multiset);
            if repeated.is_empty() {
                let mask = multiset.iter().fold(0u32, |m, &i| m | (1 << (i - 1)));
                out.add_term(mask, c);
                continue;
            }
            let i = match order {
                RewriteOrder::LargestFirst => *repeated.last().unwrap(),
                RewriteOrder::SmallestFirst => repeated[0],
                RewriteOrder::Seeded(seed) => {
                    step += 1;
                    let h = splitmix(seed ^ step.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                    repeated[(h % repeated.len() as u64) as usize]
                }
            };
            for (replacement, factor) in square_rewrite(i, n) {
                let mut next = multiset.clone();
                remove_one(&mut next, i);
                remove_one(&mut next, i);
                next.extend(replacement);
                next.sort_unstable();
                debug_assert_eq!(next.iter().sum::<u32>(), multiset.iter().sum::<u32>());
                debug_assert_eq!(
                    descending_lex_cmp(&next, &multiset),
                    Ordering::Greater,
                    "rewrite step must increase the monomial"
                );
                push_pending(&mut pending, next, &c * factor);
            }
        }
        Ok(out)
    }

    /// Normal form of `e(i) · e(I)` (exact coefficients), memoized.
    fn generator_product(&self, i: u32, mask: u32) -> GeneratorProduct {
        if let Some(hit) = self.cache.get(&(i, mask)) {
            return Arc::clone(hit.value());
        }
        let n = self.params.n;
        let bit = 1u32 << (i - 1);
        let result: Vec<(u32, BigInt)> = if mask & bit == 0 {
            vec![(mask | bit, BigInt::one())]
        } else {
            // e(i) * e(i) * e(rest): expand the square and multiply the pieces back in.
            let rest = mask & !bit;
            let mut acc: HashMap<u32, BigInt> = HashMap::new();
            for (replacement, factor) in square_rewrite(i, n) {
                let mut partial: Vec<(u32, BigInt)> = vec![(rest, factor)];
                for j in replacement {
                    let mut next: HashMap<u32, BigInt> = HashMap::new();
                    for (m, c) in &partial {
                        for (m2, c2) in self.generator_product(j, *m).iter() {
                            *next.entry(*m2).or_default() += c * c2;
                        }
                    }
                    partial = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                }
                for (m, c) in partial {
                    *acc.entry(m).or_default() += c;
                }
            }
            if let CoeffMode::Modulus(k) = self.params.coeff_mode {
                acc.values_mut().for_each(|c| *c = reduce_pow2(c, k));
            }
            let mut v: Vec<(u32, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        let result = Arc::new(result);
        self.cache.insert((i, mask), Arc::clone(&result));
        result
    }

    /// A modulus ring caches reduced products, so its results only hold modulo its own `K`.
    fn output_params(&self, a: RingParams) -> RingParams {
        match (self.params.coeff_mode, a.coeff_mode) {
            (CoeffMode::Modulus(k), CoeffMode::Exact) => a.with_mode(CoeffMode::Modulus(k)),
            (CoeffMode::Modulus(k), CoeffMode::Modulus(j)) => a.with_mode(CoeffMode::Modulus(k.min(j))),
            _ => a,
        }
    }

    /// `a · e(i)`; zero for `i > n`.
    pub fn mul_generator(&self, a: &ChowElement, i: u32) -> ChowElement {
        let mut out = self.zero();
        out.params = self.output_params(a.params);
        if i == 0 || i > self.params.n {
            return out;
        }
        for (m, c) in &a.terms {
            for (m2, c2) in self.generator_product(i, *m).iter() {
                out.add_term(*m2, c * c2);
            }
        }
        out
    }

    /// `a · e(I)` for a square-free monomial.
    pub fn mul_monomial(&self, a: &ChowElement, mono: SquareFreeMonomial) -> ChowElement {
        mask_indices(mono.0).fold(a.clone(), |acc, i| self.mul_generator(&acc, i))
    }

    pub fn mul(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement> {
        check_params(a.params, b.params)?;
        check_params(self.params.with_mode(a.params.coeff_mode), a.params)?;
        let mut out = self.zero();
        out.params = self.output_params(a.params);
        // Iterate over the smaller operand's monomials.
        let (big, small) = if a.terms.len() >= b.terms.len() { (a, b) } else { (b, a) };
        for (m, c) in &small.terms {
            let part = self.mul_monomial(big, SquareFreeMonomial(*m));
            for (m2, c2) in part.terms {
                out.add_term(m2, c2 * c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, a: &ChowElement, k: u64) -> Result<ChowElement> {
        let mut acc = self.one();
        acc.params = self.output_params(a.params);
        if a.terms.len() == 1 {
            // Single term: multiply the monomial in generator by generator.
            let (m, c) = a.terms.iter().next().unwrap();
            for _ in 0..k {
                acc = self.mul_monomial(&acc, SquareFreeMonomial(*m));
            }
            return Ok(acc.scale(&num_traits::pow(c.clone(), k as usize)));
        }
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Parses the canonical text form (indices may repeat or exceed `n`) and normalizes it.
    pub fn parse_text(&self, text: &str) -> Result<ChowElement> {
        let raw = parse_raw(text)?;
        let mut out = self.normalize(&raw)?;
        if let CoeffMode::Modulus(_) = self.params.coeff_mode {
            out = out.reduce_mod_pow2_in(self.params);
        }
        Ok(out)
    }

    pub fn from_json(&self, value: &serde_json::Value) -> Result<ChowElement> {
        let terms: Vec<JsonTerm> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut raw = RawCombination::new();
        for t in terms {
            let c: BigInt = t.coef.parse().map_err(|_| Error::Parse(format!("bad coefficient `{}`", t.coef)))?;
            raw.push((t.mono.into_iter().map(i64::from).collect(), c));
        }
        self.normalize(&raw)
    }
}

impl ChowElement {
    fn reduce_mod_pow2_in(&self, params: RingParams) -> ChowElement {
        let mut out = ChowElement { params, terms: HashMap::new() };
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

/// Terms of `e(i)^2` as (indices, coefficient), dropping indices above `n`.
fn square_rewrite(i: u32, n: u32) -> Vec<(Vec<u32>, BigInt)> {
    let mut out = Vec::new();
    if 2 * i <= n {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        out.push((vec![2 * i], BigInt::from(sign)));
    }
    for k in 1..i {
        if i + k > n {
            break;
        }
        let sign = if k % 2 == 1 { 2 } else { -2 };
        out.push((vec![i - k, i + k], BigInt::from(sign)));
    }
    out
}

fn push_pending(pending: &mut BTreeMap<Vec<u32>, BigInt>, key: Vec<u32>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match pending.entry(key) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn repeated_indices(sorted: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = sorted.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
    out.dedup();
    out
}

fn remove_one(v: &mut Vec<u32>, i: u32) {
    let pos = v.iter().position(|&x| x == i).expect("index present");
    v.remove(pos);
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Parses `coef*e[...] + coef*e[...]` (also `e[...]`, `-e[...]`, `0`) into a raw combination.
pub fn parse_raw(text: &str) -> Result<RawCombination> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned == "0" || cleaned.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = RawCombination::new();
    // Split on '+' outside brackets; a '-' directly after '+' or at the start is a sign.
    let mut depth = 0;
    let mut current = String::new();
    let mut pieces = Vec::new();
    for ch in cleaned.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if ch == '+' && depth == 0 {
            pieces.push(std::mem::take(&mut current));
        } else {
            current.push(ch);
        }
    }
    pieces.push(current);
    for piece in pieces {
        if piece.is_empty() {
            return Err(Error::Parse(format!("empty term in `{text}`")));
        }
        let (coef_str, mono_str) = match piece.find("e[") {
            Some(pos) => (&piece[..pos], &piece[pos..]),
            None => return Err(Error::Parse(format!("term `{piece}` has no e[...]"))),
        };
        let coef_str = coef_str.strip_suffix('*').unwrap_or(coef_str);
        let coef: BigInt = match coef_str {
            "" => BigInt::one(),
            "-" => BigInt::from(-1),
            s => s.parse().map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?,
        };
        let inner = mono_str
            .strip_prefix("e[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad monomial `{mono_str}`")))?;
        let indices: Vec<i64> = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|s| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad index `{s}`"))))
                .collect::<Result<_>>()?
        };
        out.push((indices, coef));
    }
    Ok(out)
}
