//! Ring parameters, coefficient modes and 2-adic helpers shared by both rings.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported rank; monomials and strict partitions are `u32` bitmasks.
pub const MAX_RANK: u32 = 32;

/// How coefficients are stored.
///
/// In the Chow ring `Modulus(k)` means residues modulo `2^k`. In the Rees ring
/// it means working modulo `I^k`, where `I = (2, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffMode {
    Exact,
    Modulus(u32),
}

impl CoeffMode {
    /// Raises a modulus to at least `k`; exact mode is unchanged.
    pub fn with_precision_at_least(self, k: u32) -> CoeffMode {
        match self {
            CoeffMode::Exact => CoeffMode::Exact,
            CoeffMode::Modulus(cur) => CoeffMode::Modulus(cur.max(k)),
        }
    }
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::Exact => write!(f, "exact"),
            CoeffMode::Modulus(k) => write!(f, "mod:{k}"),
        }
    }
}

impl std::str::FromStr for CoeffMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(CoeffMode::Exact);
        }
        let k = s
            .strip_prefix("mod:")
            .and_then(|k| k.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("expected `exact` or `mod:<K>`, got `{s}`")))?;
        if k == 0 {
            return Err(Error::Parse("modulus exponent must be at least 1".into()));
        }
        Ok(CoeffMode::Modulus(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingParams {
    pub n: u32,
    pub coeff_mode: CoeffMode,
}

impl RingParams {
    pub fn new(n: u32, coeff_mode: CoeffMode) -> Result<Self> {
        if n == 0 || n > MAX_RANK {
            return Err(Error::UnsupportedRank(n));
        }
        if let CoeffMode::Modulus(0) = coeff_mode {
            return Err(Error::MalformedInput("modulus exponent must be at least 1".into()));
        }
        Ok(RingParams { n, coeff_mode })
    }

    pub fn exact(n: u32) -> Result<Self> {
        Self::new(n, CoeffMode::Exact)
    }

    /// Parameters for the theorem suites: `n` a power of two, `n >= 8`, and a
    /// modulus (if any) of at least `2^(m+3)`.
    pub fn for_theorems(n: u32, coeff_mode: CoeffMode) -> Result<Self> {
        let params = Self::new(n, coeff_mode)?;
        let m = params.torsion_exponent().ok_or(Error::NotPowerOfTwo(n))?;
        if n < 8 {
            return Err(Error::NotPowerOfTwo(n));
        }
        if let CoeffMode::Modulus(k) = coeff_mode {
            if k < m + 3 {
                return Err(Error::ModulusTooSmall { k, required: m + 3 });
            }
        }
        Ok(params)
    }

    pub fn with_mode(self, coeff_mode: CoeffMode) -> Self {
        RingParams { coeff_mode, ..self }
    }

    pub fn dim_x(&self) -> u32 {
        self.n * (self.n + 1) / 2
    }

    pub fn v_n(&self) -> u32 {
        self.n.trailing_zeros()
    }

    pub fn is_power_of_two(&self) -> bool {
        self.n.is_power_of_two()
    }

    /// `m = n - 2 v(n) + 2`, the 2-exponent of the torsion index; only for 2-power `n >= 4`.
    pub fn torsion_exponent(&self) -> Option<u32> {
        if self.is_power_of_two() && self.n >= 4 {
            Some(self.n + 2 - 2 * self.v_n())
        } else {
            None
        }
    }

    pub fn ind_x(&self) -> Option<BigInt> {
        self.torsion_exponent().map(|m| BigInt::one() << m)
    }

    /// Mask with bits for `1..=n`.
    pub fn full_mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }
}

/// 2-adic valuation with a flag for values only known as lower bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    /// Exactly this value.
    Exact(u32),
    /// Known only to be at least this value (modulus mode, element vanished at the working precision).
    AtLeast(u32),
    /// The element is zero.
    Infinite,
}

impl Valuation {
    /// Whether the valuation is known to be at least `k`.
    pub fn is_at_least(&self, k: u32) -> bool {
        match *self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v >= k,
            Valuation::Infinite => true,
        }
    }

    /// False when the answer to `is_at_least(k)` depends on digits beyond the working precision.
    pub fn decides(&self, k: u32) -> bool {
        !matches!(*self, Valuation::AtLeast(v) if v < k)
    }

    pub fn lower_bound(&self) -> Option<u32> {
        match *self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn shift(self, by: u32) -> Valuation {
        match self {
            Valuation::Exact(v) => Valuation::Exact(v + by),
            Valuation::AtLeast(v) => Valuation::AtLeast(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// Minimum of two valuations (valuation of a sum of coordinates).
    pub fn min(self, other: Valuation) -> Valuation {
        use Valuation::*;
        match (self, other) {
            (Infinite, x) | (x, Infinite) => x,
            (Exact(a), Exact(b)) => Exact(a.min(b)),
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                if a <= b {
                    Exact(a)
                } else {
                    AtLeast(b)
                }
            }
        }
    }
}

impl PartialOrd for Valuation {
    /// Orders by the known lower bound; `Infinite` is the top.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.lower_bound(), other.lower_bound()) {
            (None, None) => Some(Ordering::Equal),
            (None, Some(_)) => Some(Ordering::Greater),
            (Some(_), None) => Some(Ordering::Less),
            (Some(a), Some(b)) => Some(a.cmp(&b)),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Exponent of 2 in a nonzero integer; `None` for zero.
pub fn two_adic(c: &BigInt) -> Option<u32> {
    c.trailing_zeros().map(|z| z as u32)
}

/// `v(j!)`, by Legendre's formula `j - popcount(j)`.
pub fn two_adic_factorial(j: u64) -> u32 {
    (j - u64::from(j.count_ones())) as u32
}

/// Exponent of 2 in a nonzero machine integer.
pub fn two_adic_u64(j: u64) -> u32 {
    debug_assert!(j != 0);
    j.trailing_zeros()
}

/// Canonical residue of `c` modulo `2^k`, in `[0, 2^k)`.
pub fn reduce_pow2(c: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    let mask = (BigInt::one() << k) - 1;
    if c.is_negative() || c.bits() > u64::from(k) {
        c & mask
    } else {
        c.clone()
    }
}

pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_index_values() {
        let p8 = RingParams::exact(8).unwrap();
        assert_eq!(p8.dim_x(), 36);
        assert_eq!(p8.torsion_exponent(), Some(4));
        assert_eq!(p8.ind_x(), Some(BigInt::from(16)));
        let p16 = RingParams::exact(16).unwrap();
        assert_eq!(p16.ind_x(), Some(BigInt::from(1024)));
        assert_eq!(p16.dim_x(), 136);
        let p32 = RingParams::exact(32).unwrap();
        assert_eq!(p32.ind_x(), Some(BigInt::from(1u64 << 24)));
        assert_eq!(RingParams::exact(12).unwrap().torsion_exponent(), None);
    }

    #[test]
    fn theorem_params_validation() {
        assert!(RingParams::for_theorems(8, CoeffMode::Exact).is_ok());
        assert_eq!(RingParams::for_theorems(12, CoeffMode::Exact), Err(Error::NotPowerOfTwo(12)));
        assert_eq!(RingParams::for_theorems(4, CoeffMode::Exact), Err(Error::NotPowerOfTwo(4)));
        assert_eq!(
            RingParams::for_theorems(16, CoeffMode::Modulus(12)),
            Err(Error::ModulusTooSmall { k: 12, required: 13 })
        );
        assert!(RingParams::for_theorems(16, CoeffMode::Modulus(13)).is_ok());
    }

    #[test]
    fn factorial_valuations() {
        let mut fact = BigInt::one();
        for j in 1..=40u64 {
            fact *= j;
            assert_eq!(two_adic(&fact).unwrap(), two_adic_factorial(j), "j = {j}");
        }
    }

    #[test]
    fn residues_are_canonical() {
        assert_eq!(reduce_pow2(&BigInt::from(-1), 4), BigInt::from(15));
        assert_eq!(reduce_pow2(&BigInt::from(35), 5), BigInt::from(3));
        assert_eq!(reduce_pow2(&BigInt::from(7), 0), BigInt::zero());
    }

    #[test]
    fn coeff_mode_parsing() {
        assert_eq!("exact".parse::<CoeffMode>().unwrap(), CoeffMode::Exact);
        assert_eq!("mod:13".parse::<CoeffMode>().unwrap(), CoeffMode::Modulus(13));
        assert!("mod:0".parse::<CoeffMode>().is_err());
        assert!("mod".parse::<CoeffMode>().is_err());
    }

    #[test]
    fn valuation_min_and_order() {
        use Valuation::*;
        assert_eq!(Exact(3).min(AtLeast(5)), Exact(3));
        assert_eq!(Exact(6).min(AtLeast(5)), AtLeast(5));
        assert_eq!(Infinite.min(Exact(2)), Exact(2));
        assert!(Infinite > Exact(100));
        assert!(AtLeast(4).is_at_least(4));
        assert!(!AtLeast(4).decides(5));
    }
}
