//! Linear parts of integral Steenrod representatives, the restriction map to the split
//! variety, and the torsion index.

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::Zero;

use crate::chow::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::expr::{chow_eval, restrict_expression, GeneratorExpression};
use crate::params::RingParams;

/// `Ŝ(i) = Σ_{j=0}^{i-1} binom(i-1, j) c(i+j)`, dropping `c(k)` for `k > n`.
pub fn shat(i: u32, n: u32) -> Result<GeneratorExpression> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i64::from(i), bound: n });
    }
    let terms = (0..i)
        .take_while(|j| i + j <= n)
        .map(|j| {
            let b = binomial(u64::from(i - 1), u64::from(j));
            GeneratorExpression::Product(vec![GeneratorExpression::Int(BigInt::from(b)), GeneratorExpression::Ci(i + j)])
        })
        .collect();
    Ok(GeneratorExpression::Sum(terms))
}

/// `Ŝ(L) = ∏_{l ∈ L} Ŝ(l)`.
pub fn shat_set(set: &[u32], n: u32) -> Result<GeneratorExpression> {
    Ok(GeneratorExpression::Product(set.iter().map(|&l| shat(l, n)).collect::<Result<_>>()?))
}

/// Restriction to the split variety: `c(i) ↦ 2 e(i)`, `e ↦ e(1)`, evaluated in `ring`.
pub fn res(expr: &GeneratorExpression, ring: &ChowRing) -> Result<ChowElement> {
    chow_eval(&restrict_expression(expr)?, ring)
}

/// `ind X = 2^{n - 2 v(n) + 2}` for `n` a power of two (`n >= 4`).
pub fn torsion_index(n: u32) -> Result<BigInt> {
    RingParams::exact(n)?.ind_x().ok_or(Error::NotPowerOfTwo(n))
}

/// `(deg / ind X)(a) ∈ Z/2`: the point coefficient divided by `ind X`, mod 2.
pub fn deg_over_index(a: &ChowElement) -> Result<u8> {
    let n = a.params().n;
    let ind = torsion_index(n)?;
    let top = a.degree_top();
    let (q, r) = top.div_rem(&ind);
    if !r.is_zero() {
        return Err(Error::NotDivisible { value: top.to_string(), divisor: ind.to_string() });
    }
    Ok(if q.is_even() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::SquareFreeMonomial;
    use crate::expr::GeneratorExpression as E;
    use crate::params::CoeffMode;

    fn chow(n: u32) -> ChowRing {
        ChowRing::new(RingParams::exact(n).unwrap())
    }

    #[test]
    fn shat_values() {
        let r = chow(8);
        let s7 = res(&shat(7, 8).unwrap(), &r).unwrap();
        let expect = res(&E::Sum(vec![E::Ci(7), E::Product(vec![E::int(6), E::Ci(8)])]), &r).unwrap();
        assert_eq!(s7, expect);
        let s6 = res(&shat(6, 8).unwrap(), &r).unwrap();
        let expect = res(
            &E::Sum(vec![E::Ci(6), E::Product(vec![E::int(5), E::Ci(7)]), E::Product(vec![E::int(10), E::Ci(8)])]),
            &r,
        )
        .unwrap();
        assert_eq!(s6, expect);
        assert_eq!(res(&shat(8, 8).unwrap(), &r).unwrap(), res(&E::Ci(8), &r).unwrap());
        assert!(shat(9, 8).is_err());
        assert!(shat(0, 8).is_err());
    }

    #[test]
    fn shat_23_restriction() {
        let r = chow(8);
        let got = res(&shat_set(&[2, 3], 8).unwrap(), &r).unwrap();
        let expect = chow_eval(
            &E::Product(vec![
                E::int(4),
                E::Sum(vec![E::Ei(2), E::Ei(3)]),
                E::Sum(vec![E::Ei(3), E::Product(vec![E::int(2), E::Ei(4)]), E::Ei(5)]),
            ]),
            &r,
        )
        .unwrap();
        assert_eq!(got, expect);
        assert_eq!(res(&shat_set(&[], 8).unwrap(), &r).unwrap(), r.one());
    }

    #[test]
    fn res_examples() {
        let r = chow(6);
        assert_eq!(res(&E::Ci(3), &r).unwrap(), r.generator(3).scale(&BigInt::from(2)));
        assert_eq!(res(&E::pow(E::E1, 2), &r).unwrap(), r.generator(2));
        assert!(res(&E::F(1), &r).is_err());
        assert!(res(&E::Ci(7), &r).unwrap().is_zero());
    }

    #[test]
    fn torsion_indices() {
        assert_eq!(torsion_index(8).unwrap(), BigInt::from(16));
        assert_eq!(torsion_index(16).unwrap(), BigInt::from(1024));
        assert_eq!(torsion_index(32).unwrap(), BigInt::from(1u64 << 24));
        assert_eq!(torsion_index(12), Err(Error::NotPowerOfTwo(12)));
    }

    #[test]
    fn deg_over_index_values() {
        let r = chow(8);
        let p = SquareFreeMonomial(r.params().full_mask());
        assert_eq!(deg_over_index(&r.monomial(p, BigInt::from(16))).unwrap(), 1);
        assert_eq!(deg_over_index(&r.monomial(p, BigInt::from(32))).unwrap(), 0);
        assert!(deg_over_index(&r.monomial(p, BigInt::from(8))).is_err());
        let m = ChowRing::new(RingParams::new(8, CoeffMode::Modulus(7)).unwrap());
        assert_eq!(deg_over_index(&m.monomial(p, BigInt::from(-112))).unwrap(), 1);
    }
}
