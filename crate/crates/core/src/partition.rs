//! Strict partitions and skew shifted diagrams.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct StrictPartition {
    parts: Vec<u32>,
}

impl StrictPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::MalformedInput("strict partitions have positive parts".into()));
        }
        if parts.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::MalformedInput(format!("{parts:?} is not strictly decreasing")));
        }
        Ok(StrictPartition { parts })
    }

    /// Sorts distinct positive parts into a strict partition.
    pub fn from_set(parts: &[u32]) -> Result<Self> {
        let mut v = parts.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(v)
    }

    pub fn empty() -> Self {
        StrictPartition::default()
    }

    pub fn single(part: u32) -> Self {
        StrictPartition { parts: vec![part] }
    }

    /// Decodes a mask (bit `p - 1` for part `p`).
    pub fn from_mask(mask: u32) -> Self {
        let mut parts: Vec<u32> = crate::chow::mask_indices(mask).collect();
        parts.reverse();
        StrictPartition { parts }
    }

    /// The mask form, or `None` when some part exceeds `n` (the class is zero).
    pub fn to_mask(&self, n: u32) -> Option<u32> {
        let mut mask = 0u32;
        for &p in &self.parts {
            if p > n {
                return None;
            }
            mask |= 1 << (p - 1);
        }
        Some(mask)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part `r` (1-based), zero past the length.
    pub fn part(&self, r: usize) -> u32 {
        self.parts.get(r - 1).copied().unwrap_or(0)
    }

    pub fn is_in_range(&self, n: u32) -> bool {
        self.parts.first().map_or(true, |&p| p <= n)
    }

    pub fn contains(&self, other: &StrictPartition) -> bool {
        other.len() <= self.len() && (1..=other.len()).all(|r| other.part(r) <= self.part(r))
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A box of a shifted diagram: 1-based (row, column).
pub type Cell = (u32, u32);

/// The skew shifted diagram `ν/λ`. Row `r` of the shifted diagram of `μ` occupies
/// columns `r ..= r + μ_r - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewShiftedShape {
    outer: StrictPartition,
    inner: StrictPartition,
}

impl SkewShiftedShape {
    pub fn new(outer: StrictPartition, inner: StrictPartition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::MalformedInput(format!("{inner} is not contained in {outer}")));
        }
        Ok(SkewShiftedShape { outer, inner })
    }

    pub fn outer(&self) -> &StrictPartition {
        &self.outer
    }

    pub fn inner(&self) -> &StrictPartition {
        &self.inner
    }

    pub fn size(&self) -> u32 {
        self.outer.size() - self.inner.size()
    }

    /// Column range of row `r` of the skew shape; empty when `start > end`.
    pub fn row_range(&self, r: usize) -> (u32, u32) {
        let r32 = r as u32;
        (r32 + self.inner.part(r), r32 + self.outer.part(r) - 1)
    }

    /// Boxes in row-major order, top row first.
    pub fn boxes(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for r in 1..=self.outer.len() {
            let (a, b) = self.row_range(r);
            for c in a..=b {
                out.push((r as u32, c));
            }
        }
        out
    }

    /// Nonempty rows as `(row, first column, last column)`, top first.
    pub fn rows(&self) -> Vec<(u32, u32, u32)> {
        (1..=self.outer.len())
            .filter_map(|r| {
                let (a, b) = self.row_range(r);
                (a <= b).then_some((r as u32, a, b))
            })
            .collect()
    }

    /// No box lies strictly below and strictly to the right of another box.
    pub fn is_rim(&self) -> bool {
        let rows = self.rows();
        let mut min_col_above = u32::MAX;
        for &(_, a, b) in &rows {
            if b > min_col_above {
                return false;
            }
            min_col_above = min_col_above.min(a);
        }
        true
    }

    /// ASCII picture: `.` for boxes of `λ`, `#` for boxes of `ν/λ`.
    pub fn ascii(&self) -> String {
        self.render(|_| "#".to_string())
    }

    pub(crate) fn render(&self, label: impl Fn(Cell) -> String) -> String {
        let mut lines = Vec::new();
        for r in 1..=self.outer.len() {
            let r32 = r as u32;
            let (a, _) = self.row_range(r);
            let mut line = "   ".repeat(r - 1);
            for c in r32..r32 + self.outer.part(r) {
                let cell = if c < a { ".".to_string() } else { label((r32, c)) };
                line.push_str(&format!("{cell:>3}"));
            }
            lines.push(line.trim_end().to_string());
        }
        lines.join("\n")
    }
}

impl fmt::Display for SkewShiftedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.outer, self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(parts: &[u32]) -> StrictPartition {
        StrictPartition::new(parts.to_vec()).unwrap()
    }

    fn shape(outer: &[u32], inner: &[u32]) -> SkewShiftedShape {
        SkewShiftedShape::new(sp(outer), sp(inner)).unwrap()
    }

    #[test]
    fn partitions_validate() {
        assert!(StrictPartition::new(vec![3, 3]).is_err());
        assert!(StrictPartition::new(vec![1, 2]).is_err());
        assert!(StrictPartition::new(vec![2, 0]).is_err());
        assert_eq!(StrictPartition::from_set(&[1, 4, 2]).unwrap(), sp(&[4, 2, 1]));
        assert_eq!(sp(&[9, 2]).to_mask(8), None);
        assert_eq!(StrictPartition::from_mask(sp(&[5, 3]).to_mask(8).unwrap()), sp(&[5, 3]));
    }

    #[test]
    fn boxes_of_a_skew_shape() {
        assert_eq!(shape(&[3, 1], &[1]).boxes(), vec![(1, 2), (1, 3), (2, 2)]);
        assert_eq!(shape(&[4, 2], &[1]).size(), 5);
        assert!(SkewShiftedShape::new(sp(&[2]), sp(&[3])).is_err());
        assert!(SkewShiftedShape::new(sp(&[3]), sp(&[2, 1])).is_err());
    }

    fn rim_by_pairs(s: &SkewShiftedShape) -> bool {
        let b = s.boxes();
        !b.iter().any(|&(r1, c1)| b.iter().any(|&(r2, c2)| r2 > r1 && c2 > c1))
    }

    #[test]
    fn rim_detection_matches_pair_scan() {
        assert!(shape(&[3, 1], &[1]).is_rim());
        assert!(!shape(&[4, 2], &[1]).is_rim());
        assert!(shape(&[5], &[2]).is_rim());
        let parts: Vec<StrictPartition> = (0u32..64).map(StrictPartition::from_mask).collect();
        for outer in &parts {
            for inner in &parts {
                if let Ok(s) = SkewShiftedShape::new(outer.clone(), inner.clone()) {
                    assert_eq!(s.is_rim(), rim_by_pairs(&s), "{s}");
                }
            }
        }
    }

    #[test]
    fn ascii_grid() {
        let s = shape(&[4, 2], &[2]);
        assert_eq!(s.ascii(), "  .  .  #  #\n     #  #");
    }
}
