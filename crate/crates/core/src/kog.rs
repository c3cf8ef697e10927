//! KOG-tableaux and the signed K-theoretic Pieri rule for ē_i · ē_λ.
//!
//! A KOG-tableau is a labeling of a rim by positive integers with
//! (i) rows strictly increasing to the right and columns strictly increasing downwards,
//! (ii) every box is `<=` all of its south-west boxes or `>=` all of them.
//! The south-west boxes of `B` are the other boxes in its row or lower rows whose column
//! is at most `col(B)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::partition::{Cell, SkewShiftedShape, StrictPartition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KogTableau {
    shape: SkewShiftedShape,
    labels: BTreeMap<Cell, u32>,
}

impl KogTableau {
    /// Wraps a labeling; use [`KogTableau::is_valid`] to test the KOG conditions.
    pub fn new(shape: SkewShiftedShape, labels: BTreeMap<Cell, u32>) -> Result<Self> {
        let boxes: BTreeSet<Cell> = shape.boxes().into_iter().collect();
        let labelled: BTreeSet<Cell> = labels.keys().copied().collect();
        if boxes != labelled {
            return Err(Error::MalformedInput("labeling does not cover exactly the boxes of the shape".into()));
        }
        if labels.values().any(|&v| v == 0) {
            return Err(Error::MalformedInput("labels must be positive".into()));
        }
        Ok(KogTableau { shape, labels })
    }

    pub fn shape(&self) -> &SkewShiftedShape {
        &self.shape
    }

    pub fn label(&self, cell: Cell) -> Option<u32> {
        self.labels.get(&cell).copied()
    }

    pub fn labels(&self) -> &BTreeMap<Cell, u32> {
        &self.labels
    }

    pub fn content(&self) -> BTreeSet<u32> {
        self.labels.values().copied().collect()
    }

    pub fn south_west(&self, cell: Cell) -> Vec<Cell> {
        self.labels.keys().copied().filter(|&(r, c)| (r, c) != cell && r >= cell.0 && c <= cell.1).collect()
    }

    /// Checks the definition pairwise, independently of the enumerator.
    pub fn is_valid(&self) -> bool {
        if !self.shape.is_rim() {
            return false;
        }
        for (&(r, c), &v) in &self.labels {
            for (&(r2, c2), &w) in &self.labels {
                if r2 == r && c2 > c && w <= v {
                    return false;
                }
                if c2 == c && r2 > r && w <= v {
                    return false;
                }
            }
            let sw: Vec<u32> = self.south_west((r, c)).iter().map(|b| self.labels[b]).collect();
            if !(sw.iter().all(|&w| v <= w) || sw.iter().all(|&w| v >= w)) {
                return false;
            }
        }
        true
    }

    pub fn ascii(&self) -> String {
        self.shape.render(|cell| self.labels[&cell].to_string())
    }
}

impl fmt::Display for KogTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ascii())
    }
}

/// Box order and neighbour data for the labeling search. Rows are visited bottom to
/// top and each row left to right, so the south-west set of a box is labeled first.
struct SearchPlan {
    cells: Vec<Cell>,
    left: Vec<Option<usize>>,
    below_same_column: Vec<Vec<usize>>,
    south_west: Vec<Vec<usize>>,
    right_in_row: Vec<u32>,
}

impl SearchPlan {
    fn new(shape: &SkewShiftedShape) -> Self {
        let mut cells = Vec::new();
        for (r, a, b) in shape.rows().into_iter().rev() {
            for c in a..=b {
                cells.push((r, c));
            }
        }
        let index: BTreeMap<Cell, usize> = cells.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let mut left = Vec::new();
        let mut below = Vec::new();
        let mut sw = Vec::new();
        let mut right = Vec::new();
        for &(r, c) in &cells {
            left.push(if c > 0 { index.get(&(r, c - 1)).copied() } else { None });
            below.push(cells.iter().enumerate().filter(|(_, &(r2, c2))| c2 == c && r2 > r).map(|(k, _)| k).collect());
            sw.push(
                cells
                    .iter()
                    .enumerate()
                    .filter(|(_, &(r2, c2))| (r2, c2) != (r, c) && r2 >= r && c2 <= c)
                    .map(|(k, _)| k)
                    .collect(),
            );
            right.push(cells.iter().filter(|&&(r2, c2)| r2 == r && c2 > c).count() as u32);
        }
        SearchPlan { cells, left, below_same_column: below, south_west: sw, right_in_row: right }
    }

    /// Depth-first search over labelings with content exactly `[1, i]`; calls `visit`
    /// on each complete labeling (in plan order).
    fn search(&self, i: u32, visit: &mut dyn FnMut(&[u32])) {
        if i == 0 || i > 64 || (self.cells.len() as u32) < i {
            return;
        }
        let mut labels = vec![0u32; self.cells.len()];
        self.step(0, i, 0, &mut labels, visit);
    }

    fn step(&self, k: usize, i: u32, used: u64, labels: &mut [u32], visit: &mut dyn FnMut(&[u32])) {
        let remaining = (self.cells.len() - k) as u32;
        let missing = i - used.count_ones();
        if missing > remaining {
            return;
        }
        if k == self.cells.len() {
            visit(labels);
            return;
        }
        let mut lo = 1;
        if self.right_in_row[k] >= i {
            return;
        }
        let mut hi = i - self.right_in_row[k];
        if let Some(l) = self.left[k] {
            lo = lo.max(labels[l] + 1);
        }
        for &b in &self.below_same_column[k] {
            hi = hi.min(labels[b].saturating_sub(1));
        }
        if lo > hi {
            return;
        }
        let sw = &self.south_west[k];
        let (sw_min, sw_max) = sw.iter().fold((u32::MAX, 0), |(a, b), &x| (a.min(labels[x]), b.max(labels[x])));
        for v in lo..=hi {
            if !sw.is_empty() && !(v <= sw_min || v >= sw_max) {
                continue;
            }
            labels[k] = v;
            self.step(k + 1, i, used | (1u64 << (v - 1)), labels, visit);
        }
        labels[k] = 0;
    }
}

/// All KOG-tableaux of `shape` with content `[1, i]` (empty for non-rims).
pub fn enumerate_kog(shape: &SkewShiftedShape, i: u32) -> Vec<KogTableau> {
    if !shape.is_rim() {
        return Vec::new();
    }
    let plan = SearchPlan::new(shape);
    let mut out = Vec::new();
    plan.search(i, &mut |labels| {
        let map = plan.cells.iter().copied().zip(labels.iter().copied()).collect();
        out.push(KogTableau { shape: shape.clone(), labels: map });
    });
    out
}

/// Translation-invariant key: nonempty rows top to bottom as (start column offset, length).
type ShapeKey = (Vec<(u32, u32)>, u32);

fn count_memo() -> &'static DashMap<ShapeKey, u64> {
    static MEMO: OnceLock<DashMap<ShapeKey, u64>> = OnceLock::new();
    MEMO.get_or_init(DashMap::new)
}

/// Number of KOG-tableaux of `shape` with content exactly `[1, i]`; zero for non-rims.
pub fn count_kog(shape: &SkewShiftedShape, i: u32) -> u64 {
    if !shape.is_rim() {
        return 0;
    }
    let rows = shape.rows();
    let min_col = rows.iter().map(|r| r.1).min().unwrap_or(0);
    let key: ShapeKey = (rows.iter().map(|&(_, a, b)| (a - min_col, b - a + 1)).collect(), i);
    if let Some(hit) = count_memo().get(&key) {
        return *hit;
    }
    let count = count_rim_by_rows(shape, i);
    count_memo().insert(key, count);
    count
}

/// Counts by depth-first search over all labelings (slow; used to cross-check).
pub fn count_kog_by_search(shape: &SkewShiftedShape, i: u32) -> u64 {
    if !shape.is_rim() {
        return 0;
    }
    let plan = SearchPlan::new(shape);
    let mut count = 0u64;
    plan.search(i, &mut |_| count += 1);
    count
}

/// Row-by-row count for a rim, bottom row first.
///
/// In a rim every box of a lower row is south-west of every box of a higher row. So the
/// first box of a row is `<=` the minimum or `>=` the maximum of the labels below, and the
/// other boxes are `>=` that maximum. New labels therefore never fall strictly between
/// the current minimum and maximum, and content `[1, i]` forces the used labels to form
/// an interval `[lo, hi]` after every row. State: `(lo, hi, label of the last box of the
/// row below)`.
fn count_rim_by_rows(shape: &SkewShiftedShape, i: u32) -> u64 {
    let rows = shape.rows();
    if rows.is_empty() {
        return 0;
    }
    let mut states: HashMap<(u32, u32, u32), u64> = HashMap::new();
    let mut below: Option<(u32, u32, u32)> = None;
    for (pos, &(r, a, b)) in rows.iter().enumerate().rev() {
        let len = b - a + 1;
        // First box directly above the last box of the next row down.
        let stacked = below.is_some_and(|(r2, _, b2)| r2 == r + 1 && b2 == a);
        let mut next: HashMap<(u32, u32, u32), u64> = HashMap::new();
        if pos + 1 == rows.len() {
            for v0 in 1..=i {
                if v0 + len - 1 <= i {
                    *next.entry((v0, v0 + len - 1, v0 + len - 1)).or_default() += 1;
                }
            }
        } else {
            for (&(lo, hi, last), &ways) in &states {
                let first_lo = lo.saturating_sub(1).max(1);
                for v0 in first_lo..=(hi + 1).min(i) {
                    if !(v0 <= lo || v0 >= hi) || (stacked && v0 >= last) {
                        continue;
                    }
                    let (lo1, hi1) = (lo.min(v0), hi.max(v0));
                    extend_row(lo1, hi1, v0, hi, len - 1, i, &mut |state| {
                        *next.entry(state).or_default() += ways;
                    });
                }
            }
        }
        states = next;
        below = Some((r, a, b));
    }
    states.iter().filter(|(&(lo, hi, _), _)| lo == 1 && hi == i).map(|(_, &w)| w).sum()
}

/// Places `remaining` boxes to the right of a box labelled `prev`; each is `> prev`,
/// `>= floor` (the maximum below) and keeps the used labels an interval.
fn extend_row(lo: u32, hi: u32, prev: u32, floor: u32, remaining: u32, i: u32, emit: &mut dyn FnMut((u32, u32, u32))) {
    if remaining == 0 {
        emit((lo, hi, prev));
        return;
    }
    for v in (prev + 1).max(floor)..=(hi + 1).min(i) {
        extend_row(lo, hi.max(v), v, floor, remaining - 1, i, emit);
    }
}

/// Signed Pieri coefficients as (ν mask, coefficient).
pub type PieriRow = Arc<Vec<(u32, i64)>>;

/// Pieri coefficients `ē_i · ē_λ = Σ (-1)^{|ν/λ| - i} C^ν_{λ,i} ē_ν` over partitions in `[1, n]`,
/// memoized by `(λ, i, budget)`.
pub struct PieriTable {
    n: u32,
    memo: DashMap<(u32, u32, u32), PieriRow>,
}

impl fmt::Debug for PieriTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PieriTable").field("n", &self.n).field("cached", &self.memo.len()).finish()
    }
}

impl PieriTable {
    pub fn new(n: u32) -> Self {
        PieriTable { n, memo: DashMap::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Full coefficient map of `ē_i · ē_λ`.
    pub fn coefficients(&self, lambda: &StrictPartition, i: u32) -> Result<BTreeMap<StrictPartition, i64>> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i64::from(i), bound: self.n });
        }
        let mask = lambda
            .to_mask(self.n)
            .ok_or_else(|| Error::MalformedInput(format!("{lambda} has parts above n = {}", self.n)))?;
        Ok(self
            .row(mask, i, u32::MAX)
            .iter()
            .map(|&(nu, c)| (StrictPartition::from_mask(nu), c))
            .collect())
    }

    /// Terms of `ē_i · ē_λ` with at most `i + extra` new boxes.
    pub fn row(&self, lambda: u32, i: u32, extra: u32) -> PieriRow {
        let budget = extra.min(self.n * (self.n + 1) / 2);
        let key = (lambda, i, budget);
        if let Some(hit) = self.memo.get(&key) {
            return Arc::clone(hit.value());
        }
        let row = Arc::new(self.compute(lambda, i, budget));
        self.memo.insert(key, Arc::clone(&row));
        row
    }

    fn compute(&self, lambda_mask: u32, i: u32, budget: u32) -> Vec<(u32, i64)> {
        let lambda = StrictPartition::from_mask(lambda_mask);
        let max_boxes = i + budget;
        let mut out = Vec::new();
        let mut nu = Vec::with_capacity(lambda.len() + 1);
        self.candidates(&lambda, i, max_boxes, 1, u32::MAX, 0, &mut nu, &mut |nu_parts| {
            let nu_sp = StrictPartition::new(nu_parts.iter().copied().filter(|&p| p > 0).collect()).unwrap();
            let shape = SkewShiftedShape::new(nu_sp.clone(), lambda.clone()).unwrap();
            let count = count_kog(&shape, i);
            if count > 0 {
                let boxes = shape.size();
                let sign = if (boxes - i) % 2 == 0 { 1 } else { -1 };
                out.push((nu_sp.to_mask(self.n).unwrap(), sign * count as i64));
            }
        });
        out.sort_unstable();
        out
    }

    /// Enumerates rim candidates ν row by row. `min_col_above` is the smallest column of
    /// new boxes in the rows above; a row's new boxes must not extend past it.
    #[allow(clippy::too_many_arguments)]
    fn candidates(
        &self,
        lambda: &StrictPartition,
        i: u32,
        max_boxes: u32,
        r: usize,
        min_col_above: u32,
        boxes: u32,
        nu: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32]),
    ) {
        if r > lambda.len() + 1 {
            if boxes >= i {
                emit(nu);
            }
            return;
        }
        let lam = lambda.part(r);
        let upper_part = if r == 1 { self.n } else { nu[r - 2].saturating_sub(1) };
        let r32 = r as u32;
        // Extra boxes in row r: columns r + lam ..= r + part - 1.
        let mut hi = upper_part.min(lam + i).min(lam + (max_boxes - boxes));
        if min_col_above != u32::MAX {
            // last column r + part - 1 <= min_col_above
            hi = hi.min((min_col_above + 1).saturating_sub(r32));
        }
        let lo = lam;
        if r == lambda.len() + 1 && lo == 0 && hi == 0 {
            nu.push(0);
            self.candidates(lambda, i, max_boxes, r + 1, min_col_above, boxes, nu, emit);
            nu.pop();
            return;
        }
        if hi < lo {
            return;
        }
        for part in lo..=hi {
            let added = part - lam;
            let next_min = if added > 0 { min_col_above.min(r32 + lam) } else { min_col_above };
            nu.push(part);
            self.candidates(lambda, i, max_boxes, r + 1, next_min, boxes + added, nu, emit);
            nu.pop();
        }
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
    fn example_one_rows() {
        // Top row one box, bottom row r boxes; both the apart and vertex-sharing layouts.
        for r in 1..=10u32 {
            for m in [r + 1, r + 3] {
                let s = shape(&[m + 1, r], &[m]);
                assert_eq!(count_kog(&s, r + 1), 2, "{s}");
            }
        }
    }

    #[test]
    fn example_two_rows() {
        for r in 2..=10u32 {
            for m in [r + 1, r + 3] {
                let s = shape(&[m + 2, r], &[m]);
                assert_eq!(count_kog(&s, r + 1), 3, "{s}");
            }
        }
    }

    #[test]
    fn non_rims_have_no_tableaux() {
        let s = shape(&[4, 2], &[1]);
        assert!(!s.is_rim());
        for i in 1..=6 {
            assert_eq!(count_kog(&s, i), 0);
        }
    }

    #[test]
    fn enumerated_tableaux_are_valid() {
        let s = shape(&[5, 2], &[3]);
        let all = enumerate_kog(&s, 3);
        assert_eq!(all.len() as u64, count_kog(&s, 3));
        for t in &all {
            assert!(t.is_valid(), "\n{t}");
            assert_eq!(t.content(), (1..=3).collect());
        }
    }

    #[test]
    fn pieri_examples() {
        let table = PieriTable::new(10);
        let c = table.coefficients(&sp(&[4]), 1).unwrap();
        let expect: BTreeMap<StrictPartition, i64> =
            [(sp(&[5]), 1), (sp(&[4, 1]), 1), (sp(&[5, 1]), -1)].into_iter().collect();
        assert_eq!(c, expect);
        let c = table.coefficients(&sp(&[1]), 1).unwrap();
        assert_eq!(c, [(sp(&[2]), 1)].into_iter().collect());
        assert!(table.coefficients(&sp(&[10]), 10).unwrap().is_empty());
        assert!(table.coefficients(&sp(&[1]), 11).is_err());
        assert!(table.coefficients(&sp(&[1]), 0).is_err());
    }

    #[test]
    fn ascii_tableau() {
        let s = shape(&[3, 1], &[1]);
        let t = enumerate_kog(&s, 2).into_iter().next().unwrap();
        assert!(t.ascii().contains('.'));
    }
}
