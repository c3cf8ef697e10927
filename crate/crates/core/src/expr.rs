//! Generator expressions shared by the Rees ring and the Chow ring.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chow::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::rees::{ReesElement, ReesRing};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorExpression {
    Int(BigInt),
    /// `f(i) = ē(i) u^i` in the Rees ring.
    F(u32),
    /// `g(i) = 2 f(i) - t f(i+1)` in the Rees ring.
    G(u32),
    T,
    /// The Chow-ring class `e` of the non-split variety (restricts to `e(1)`).
    E1,
    /// `e(i)` in the Chow ring of the split variety.
    Ei(u32),
    /// The Chern class `c(i)` (restricts to `2 e(i)`).
    Ci(u32),
    Sum(Vec<GeneratorExpression>),
    Product(Vec<GeneratorExpression>),
    Power(Box<GeneratorExpression>, u64),
}

use GeneratorExpression as E;

impl GeneratorExpression {
    pub fn int(c: i64) -> Self {
        E::Int(BigInt::from(c))
    }

    pub fn pow(base: GeneratorExpression, k: u64) -> Self {
        E::Power(Box::new(base), k)
    }

    pub fn f_set(set: &[u32]) -> Self {
        E::Product(set.iter().map(|&i| E::F(i)).collect())
    }

    pub fn g_set(set: &[u32]) -> Self {
        E::Product(set.iter().map(|&i| E::G(i)).collect())
    }

    pub fn e_set(set: &[u32]) -> Self {
        E::Product(set.iter().map(|&i| E::Ei(i)).collect())
    }

    pub fn times(self, other: GeneratorExpression) -> Self {
        match self {
            E::Product(mut v) => {
                v.push(other);
                E::Product(v)
            }
            s => E::Product(vec![s, other]),
        }
    }

    pub fn plus(self, other: GeneratorExpression) -> Self {
        match self {
            E::Sum(mut v) => {
                v.push(other);
                E::Sum(v)
            }
            s => E::Sum(vec![s, other]),
        }
    }

    /// Whether every symbol is one of `F`, `G`, `T`.
    pub fn is_rees_side(&self) -> bool {
        match self {
            E::Int(_) | E::F(_) | E::G(_) | E::T => true,
            E::E1 | E::Ei(_) | E::Ci(_) => false,
            E::Sum(v) | E::Product(v) => v.iter().all(|e| e.is_rees_side()),
            E::Power(b, _) => b.is_rees_side(),
        }
    }

    /// Grade in the Rees ring when the expression is homogeneous (`f(i)`, `g(i)`: `i`; `t`: `-1`).
    pub fn rees_grade(&self) -> Option<i64> {
        match self {
            E::Int(c) => (!c.is_zero()).then_some(0),
            E::F(i) | E::G(i) => Some(i64::from(*i)),
            E::T => Some(-1),
            E::E1 | E::Ei(_) | E::Ci(_) => None,
            E::Sum(v) => {
                let grades: Vec<Option<i64>> = v.iter().map(|e| e.rees_grade()).collect();
                let first = *grades.first()?;
                grades.iter().all(|g| *g == first).then_some(first).flatten()
            }
            E::Product(v) => v.iter().map(|e| e.rees_grade()).sum(),
            E::Power(b, k) => b.rees_grade().map(|g| g * *k as i64),
        }
    }

    fn check_index(i: u32, n: u32) -> Result<()> {
        if i == 0 || i > n + 1 {
            return Err(Error::IndexOutOfRange { index: i64::from(i), bound: n + 1 });
        }
        Ok(())
    }

    /// Applies the expression, read as a multiplication operator, to `acc`.
    fn apply_rees(&self, ring: &ReesRing, acc: &ReesElement) -> Result<ReesElement> {
        let n = ring.params().n;
        match self {
            E::Int(c) => Ok(acc.scale(c)),
            E::F(i) => {
                Self::check_index(*i, n)?;
                ring.pieri_mul(*i, acc)
            }
            E::G(i) => {
                Self::check_index(*i, n)?;
                if *i > n {
                    return Ok(acc.scale(&BigInt::zero()));
                }
                ring.mul_g(*i, acc)
            }
            E::T => Ok(acc.mul_t()),
            E::E1 | E::Ei(_) | E::Ci(_) => Err(Error::WrongSide { symbol: self.to_string(), ring: "Rees ring" }),
            E::Sum(v) => {
                let mut out = acc.scale(&BigInt::zero());
                for e in v {
                    out = out.checked_add(&e.apply_rees(ring, acc)?)?;
                }
                Ok(out)
            }
            E::Product(v) => v.iter().try_fold(acc.clone(), |a, e| e.apply_rees(ring, &a)),
            E::Power(b, k) => (0..*k).try_fold(acc.clone(), |a, _| b.apply_rees(ring, &a)),
        }
    }

    fn apply_chow(&self, ring: &ChowRing, acc: &ChowElement) -> Result<ChowElement> {
        let n = ring.params().n;
        match self {
            E::Int(c) => Ok(acc.scale(c)),
            E::Ei(i) => {
                Self::check_index(*i, n)?;
                Ok(ring.mul_generator(acc, *i))
            }
            E::F(_) | E::G(_) | E::T | E::E1 | E::Ci(_) => {
                Err(Error::WrongSide { symbol: self.to_string(), ring: "Chow ring of the split variety" })
            }
            E::Sum(v) => {
                let mut out = acc.scale(&BigInt::zero());
                for e in v {
                    out = out.checked_add(&e.apply_chow(ring, acc)?)?;
                }
                Ok(out)
            }
            E::Product(v) => v.iter().try_fold(acc.clone(), |a, e| e.apply_chow(ring, &a)),
            E::Power(b, k) => (0..*k).try_fold(acc.clone(), |a, _| b.apply_chow(ring, &a)),
        }
    }
}

impl fmt::Display for GeneratorExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[E], sep: &str| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(sep);
        match self {
            E::Int(c) => write!(f, "{c}"),
            E::F(i) => write!(f, "f({i})"),
            E::G(i) => write!(f, "g({i})"),
            E::T => write!(f, "t"),
            E::E1 => write!(f, "e"),
            E::Ei(i) => write!(f, "e({i})"),
            E::Ci(i) => write!(f, "c({i})"),
            E::Sum(v) if v.is_empty() => write!(f, "0"),
            E::Product(v) if v.is_empty() => write!(f, "1"),
            E::Sum(v) => write!(f, "({})", join(v, " + ")),
            E::Product(v) => write!(f, "{}", join(v, "*")),
            E::Power(b, k) => write!(f, "({b})^{k}"),
        }
    }
}

/// Value of a Rees-side expression (symbols `F`, `G`, `T` and integers).
pub fn eval_expression(expr: &GeneratorExpression, ring: &ReesRing) -> Result<ReesElement> {
    expr.apply_rees(ring, &ring.one())
}

/// `E · x` for a Rees-side expression `E`.
pub fn apply_expression(expr: &GeneratorExpression, ring: &ReesRing, x: &ReesElement) -> Result<ReesElement> {
    expr.apply_rees(ring, x)
}

/// `E · a` for a split Chow-side expression `E`.
pub fn chow_apply(expr: &GeneratorExpression, ring: &ChowRing, a: &ChowElement) -> Result<ChowElement> {
    expr.apply_chow(ring, a)
}

/// Value of a split Chow-side expression (symbols `Ei` and integers).
pub fn chow_eval(expr: &GeneratorExpression, ring: &ChowRing) -> Result<ChowElement> {
    expr.apply_chow(ring, &ring.one())
}

/// The image under `K̃(X̄) → GK(X̄) ≅ CH(X̄)`: `f(i) ↦ e(i)`, `g(i) ↦ 2 e(i)`, `t ↦ 0`.
/// Chow-side symbols are left unchanged.
pub fn psi_substitute(expr: &GeneratorExpression) -> GeneratorExpression {
    match expr {
        E::F(i) => E::Ei(*i),
        E::G(i) => E::Product(vec![E::Int(BigInt::from(2)), E::Ei(*i)]),
        E::T => E::Int(BigInt::zero()),
        E::Sum(v) => E::Sum(v.iter().map(psi_substitute).collect()),
        E::Product(v) => E::Product(v.iter().map(psi_substitute).collect()),
        E::Power(b, k) => E::Power(Box::new(psi_substitute(b)), *k),
        other => other.clone(),
    }
}

/// `res`: `c(i) ↦ 2 e(i)`, `e ↦ e(1)`, `e(i) ↦ e(i)`, as an expression.
pub fn restrict_expression(expr: &GeneratorExpression) -> Result<GeneratorExpression> {
    Ok(match expr {
        E::Ci(i) => E::Product(vec![E::Int(BigInt::from(2)), E::Ei(*i)]),
        E::E1 => E::Ei(1),
        E::F(_) | E::G(_) | E::T => {
            return Err(Error::WrongSide { symbol: expr.to_string(), ring: "Chow ring of the non-split variety" })
        }
        E::Sum(v) => E::Sum(v.iter().map(restrict_expression).collect::<Result<_>>()?),
        E::Product(v) => E::Product(v.iter().map(restrict_expression).collect::<Result<_>>()?),
        E::Power(b, k) => E::Power(Box::new(restrict_expression(b)?), *k),
        other => other.clone(),
    })
}

impl From<i64> for GeneratorExpression {
    fn from(c: i64) -> Self {
        E::Int(BigInt::from(c))
    }
}

impl GeneratorExpression {
    pub fn one() -> Self {
        E::Int(BigInt::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::RingParams;

    #[test]
    fn rees_examples() {
        let r = ReesRing::new(RingParams::exact(8).unwrap());
        assert_eq!(eval_expression(&E::pow(E::F(1), 2), &r).unwrap(), r.f(2));
        assert!(eval_expression(&E::Product(vec![E::F(8), E::F(8)]), &r).unwrap().is_zero());
        assert!(eval_expression(&E::F(9), &r).unwrap().is_zero());
        assert!(eval_expression(&E::F(10), &r).is_err());
        assert!(matches!(eval_expression(&E::Ei(2), &r), Err(Error::WrongSide { .. })));
        let v = eval_expression(&E::pow(E::F(1), 16), &r).unwrap().ideal_valuation();
        assert!(v.is_at_least(2));
    }

    #[test]
    fn chow_examples() {
        let c = ChowRing::new(RingParams::exact(6).unwrap());
        assert_eq!(chow_eval(&E::pow(E::Ei(1), 2), &c).unwrap(), c.generator(2));
        assert!(matches!(chow_eval(&E::Ci(2), &c), Err(Error::WrongSide { .. })));
        assert!(matches!(chow_eval(&E::E1, &c), Err(Error::WrongSide { .. })));
        assert!(matches!(chow_eval(&E::F(1), &c), Err(Error::WrongSide { .. })));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_substitute(&E::F(3)), E::Ei(3));
        assert_eq!(psi_substitute(&E::G(3)), E::Product(vec![E::int(2), E::Ei(3)]));
        let c = ChowRing::new(RingParams::exact(6).unwrap());
        let tx = E::Product(vec![E::T, E::F(2), E::G(1)]);
        assert!(chow_eval(&psi_substitute(&tx), &c).unwrap().is_zero());
    }

    #[test]
    fn grades() {
        assert_eq!(E::Product(vec![E::T, E::F(2), E::G(3)]).rees_grade(), Some(4));
        assert_eq!(E::pow(E::F(1), 5).rees_grade(), Some(5));
        assert_eq!(E::Sum(vec![E::F(2), E::F(1)]).rees_grade(), None);
        assert_eq!(E::Sum(vec![E::F(2), E::Product(vec![E::T, E::F(3)])]).rees_grade(), Some(2));
    }

    #[test]
    fn display() {
        let e = E::Product(vec![E::pow(E::F(1), 3), E::Sum(vec![E::G(2), E::T])]);
        assert_eq!(e.to_string(), "(f(1))^3*(g(2) + t)");
    }
}
