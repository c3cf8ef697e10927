//! The index sets `I0, ..., I4` and `J` used by the torsion-index computations.

use serde::Serialize;

use crate::error::{Error, Result};

/// Index families for `n` a power of two, `n >= 8`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexFamilies {
    pub n: u32,
    pub i0: Vec<u32>,
    pub i1: Vec<u32>,
    pub i2: Vec<u32>,
    pub i3: Vec<u32>,
    pub i3bar: Vec<u32>,
    /// `[6, 7]`, only for `n = 8`.
    pub i3prime: Option<Vec<u32>>,
    pub i4: Vec<u32>,
    pub j: Vec<u32>,
}

/// `[a, b]` as a vector (empty when `b < a`).
pub fn interval(a: u32, b: u32) -> Vec<u32> {
    (a..=b).collect()
}

impl IndexFamilies {
    pub fn new(n: u32) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::NotPowerOfTwo(n));
        }
        let v = n.trailing_zeros();
        let i0 = interval(n / 2 + 1, n - 1);
        // I1 is empty at n = 8.
        let i1 = if n == 8 { Vec::new() } else { interval(n / 2 + 1, 5 * n / 8) };
        let i2 = interval(5 * n / 8 + 1, (6 * n / 8).saturating_sub(2));
        let i3 = interval(6 * n / 8 - 1, n - 1);
        let mut i3bar = i3.clone();
        i3bar.push(n);
        let excluded: Vec<u32> = (3..=v.saturating_sub(2)).map(|i| 1 << i).collect();
        let i4: Vec<u32> = interval(6, n / 4 + 1).into_iter().filter(|x| !excluded.contains(x)).collect();
        let i3prime = (n == 8).then(|| vec![6, 7]);
        let mut j = vec![2, 3];
        j.extend(i3prime.as_ref().unwrap_or(&i3));
        j.extend(&i4);
        j.sort_unstable();
        j.dedup();
        Ok(IndexFamilies { n, i0, i1, i2, i3, i3bar, i3prime, i4, j })
    }

    /// The index set `J'` obtained from `J` by replacing 3 with 4.
    pub fn j_prime(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.j.iter().map(|&x| if x == 3 { 4 } else { x }).collect();
        out.sort_unstable();
        out
    }

    /// The `I3`-role set: `I3' = [6, 7]` at `n = 8`, else `I3`.
    pub fn i3_effective(&self) -> &[u32] {
        self.i3prime.as_deref().unwrap_or(&self.i3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n8() {
        let f = IndexFamilies::new(8).unwrap();
        assert_eq!(f.i0, vec![5, 6, 7]);
        assert!(f.i1.is_empty());
        assert!(f.i2.is_empty());
        assert_eq!(f.i3, vec![5, 6, 7]);
        assert_eq!(f.i3bar, vec![5, 6, 7, 8]);
        assert!(f.i4.is_empty());
        assert_eq!(f.j, vec![2, 3, 6, 7]);
        assert_eq!(f.j_prime(), vec![2, 4, 6, 7]);
    }

    #[test]
    fn n16() {
        let f = IndexFamilies::new(16).unwrap();
        assert_eq!(f.i1, vec![9, 10]);
        assert!(f.i2.is_empty());
        assert_eq!(f.i3, interval(11, 15));
        assert!(f.i4.is_empty());
        assert_eq!(f.j, vec![2, 3, 11, 12, 13, 14, 15]);
    }

    #[test]
    fn n32() {
        let f = IndexFamilies::new(32).unwrap();
        assert_eq!(f.i1, interval(17, 20));
        assert_eq!(f.i2, vec![21, 22]);
        assert_eq!(f.i3, interval(23, 31));
        assert_eq!(f.i4, vec![6, 7, 9]);
        assert_eq!(f.j.len(), 14);
    }

    #[test]
    fn size_and_degree_identities() {
        for n in [8u32, 16, 32] {
            let f = IndexFamilies::new(n).unwrap();
            let v = n.trailing_zeros();
            assert_eq!(f.j.len() as u32, n / 2 - v + 3);
            let dim = n * (n + 1) / 2;
            assert_eq!(n * n / 4 - 1 + f.j.iter().sum::<u32>(), dim - 3);
        }
        assert!(IndexFamilies::new(12).is_err());
        assert!(IndexFamilies::new(4).is_err());
    }
}
