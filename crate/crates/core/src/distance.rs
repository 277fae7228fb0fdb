//! Distance between vertex list sequences.
//!
//! Two trees are compared leaf by leaf. A leaf present in one tree but not
//! the other costs `indel`; a pair of leaves whose vertex lists agree on
//! everything but the leaf label costs `change`. [`dist`] is the cheapest way
//! to turn one sorted sequence into the other with those operations, keeping
//! the order of the lists.
//!
//! Writing `H(i, j)` for the distance between the first `i` lists of the query
//! `X` and the first `j` lists of a candidate `Y`:
//!
//! ```text
//! H(0, j) = j * indel
//! H(i, 0) = i * indel
//! H(i, j) = min( H(i-1, j) + indel,
//!                H(i, j-1) + indel,
//!                H(i-1, j-1)            if x_i = y_j
//!                H(i-1, j-1) + change   if x_i, y_j differ only at the leaf )
//! ```
//!
//! Both indel branches are always considered. Taking only the one selected by
//! comparing `x_i` with `y_j` misses alignments where an earlier list pairs
//! up as a label difference; see `guard_only_recursion_is_not_minimal` in the
//! tests.
//!
//! [`DistanceMatrix`] keeps the columns of `H` for a growing candidate, one
//! column per candidate list, so a depth-first search over a trie can extend
//! and retract the candidate one list at a time.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::VertexList;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("the insertion/deletion cost must be positive")]
    ZeroIndel,
    #[error("label change cost {change} exceeds twice the insertion/deletion cost {indel}")]
    ChangeTooLarge { change: u32, indel: u32 },
}

/// Edit costs. `change` is charged for a leaf label change, `indel` for an
/// inserted or deleted leaf. `change <= 2 * indel`, since a change is never
/// worth more than deleting the leaf and inserting the new one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CostParams {
    change: u32,
    indel: u32,
}

impl CostParams {
    pub fn new(change: u32, indel: u32) -> Result<CostParams, CostError> {
        if indel == 0 {
            return Err(CostError::ZeroIndel);
        }
        if u64::from(change) > 2 * u64::from(indel) {
            return Err(CostError::ChangeTooLarge { change, indel });
        }
        Ok(CostParams { change, indel })
    }

    pub fn change(&self) -> u32 {
        self.change
    }

    pub fn indel(&self) -> u32 {
        self.indel
    }
}

impl Default for CostParams {
    /// One per label change, two per inserted or deleted leaf.
    fn default() -> CostParams {
        CostParams { change: 1, indel: 2 }
    }
}

/// Positions of the query's lists grouped by the path to their leaf.
///
/// Only lists sharing a candidate list's parent path can pair with it
/// diagonally, so one lookup per candidate list finds every such cell.
struct QueryIndex<'q> {
    query: &'q [VertexList],
    by_parent: HashMap<&'q str, Vec<u32>>,
}

impl<'q> QueryIndex<'q> {
    fn new(query: &'q [VertexList]) -> QueryIndex<'q> {
        let mut by_parent: HashMap<&str, Vec<u32>> = HashMap::new();
        for (i, list) in query.iter().enumerate() {
            by_parent.entry(list.parent_path()).or_default().push(i as u32 + 1);
        }
        QueryIndex { query, by_parent }
    }

    /// Rows `i` (1-based, increasing) where `H(i-1, j-1)` feeds `H(i, j)` for
    /// candidate list `y`, with the cost of the diagonal step.
    fn diagonals(&self, y: &VertexList, costs: CostParams, out: &mut Vec<(u32, u32)>) {
        out.clear();
        if let Some(rows) = self.by_parent.get(y.parent_path()) {
            out.extend(rows.iter().map(|&i| {
                let cost = if self.query[i as usize - 1] == *y { 0 } else { costs.change };
                (i, cost)
            }));
        }
    }
}

/// Fills column `j` from column `j - 1`, top to bottom.
fn fill_column(prev: &[u32], cur: &mut [u32], j: u32, diagonals: &[(u32, u32)], indel: u32) {
    // Runs of rows without a diagonal step only take the indel branches.
    fn run(prev: &[u32], cur: &mut [u32], mut above: u32, indel: u32) -> u32 {
        for (c, &p) in cur.iter_mut().zip(prev) {
            above = p.min(above) + indel;
            *c = above;
        }
        above
    }

    let mut above = j * indel;
    cur[0] = above;
    let mut i = 1;
    for &(row, cost) in diagonals {
        let row = row as usize;
        above = run(&prev[i..row], &mut cur[i..row], above, indel);
        above = (prev[row].min(above) + indel).min(prev[row - 1] + cost);
        cur[row] = above;
        i = row + 1;
    }
    run(&prev[i..], &mut cur[i..], above, indel);
}

/// Distance between two vertex list sequences.
pub fn dist(x: &[VertexList], y: &[VertexList], costs: CostParams) -> u32 {
    let index = QueryIndex::new(x);
    let s = costs.indel;
    let mut prev: Vec<u32> = (0..=x.len() as u32).map(|i| i * s).collect();
    let mut cur = vec![0; prev.len()];
    let mut diagonals = Vec::new();
    for (j, list) in y.iter().enumerate() {
        index.diagonals(list, costs, &mut diagonals);
        fill_column(&prev, &mut cur, j as u32 + 1, &diagonals, s);
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[x.len()]
}

/// Range of query prefix lengths that can still lead to a match.
///
/// A candidate of length `n` needs more than `t / indel` insertions to be
/// reconciled with a query prefix shorter than `n - floor(t / indel)`, and
/// more than that many deletions for one longer than `n + ceil(t / indel)`,
/// so only prefixes inside the window can be within `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutoffWindow {
    pub lower: usize,
    pub upper: usize,
}

impl CutoffWindow {
    /// Window for a candidate of length `n` against a query of length `m`.
    ///
    /// When the candidate has outgrown the query the window collapses onto
    /// the full query, whose distance is then already above `t`.
    pub fn new(n: usize, m: usize, t: u32, indel: u32) -> CutoffWindow {
        let below = (t / indel) as usize;
        let above = t.div_ceil(indel) as usize;
        let upper = m.min(n + above);
        let lower = n.saturating_sub(below).min(upper);
        CutoffWindow { lower, upper }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("cannot pop the boundary column")]
    Underflow,
}

/// The columns of `H` for a fixed query and a candidate that grows and shrinks
/// one list at a time. Column `j` holds `H(0..=m, j)`.
pub struct DistanceMatrix<'q> {
    index: QueryIndex<'q>,
    costs: CostParams,
    /// Column-major, `m + 1` cells per column.
    cells: Vec<u32>,
    diagonals: Vec<(u32, u32)>,
}

impl<'q> DistanceMatrix<'q> {
    /// A matrix holding only the boundary column `0, indel, 2 * indel, ...`.
    pub fn new(query: &'q [VertexList], costs: CostParams) -> DistanceMatrix<'q> {
        let cells = (0..=query.len() as u32).map(|i| i * costs.indel).collect();
        DistanceMatrix {
            index: QueryIndex::new(query),
            costs,
            cells,
            diagonals: Vec::new(),
        }
    }

    fn stride(&self) -> usize {
        self.index.query.len() + 1
    }

    pub fn query(&self) -> &'q [VertexList] {
        self.index.query
    }

    pub fn costs(&self) -> CostParams {
        self.costs
    }

    /// Number of columns, including the boundary column.
    pub fn column_count(&self) -> usize {
        self.cells.len() / self.stride()
    }

    /// Length of the current candidate.
    pub fn candidate_len(&self) -> usize {
        self.column_count() - 1
    }

    pub fn column(&self, j: usize) -> Option<&[u32]> {
        let stride = self.stride();
        self.cells.get(j * stride..(j + 1) * stride)
    }

    /// Extends the candidate by `list`, computing its column.
    pub fn push(&mut self, list: &VertexList) {
        let stride = self.stride();
        let n = self.column_count();
        self.index.diagonals(list, self.costs, &mut self.diagonals);
        self.cells.resize((n + 1) * stride, 0);
        let (before, cur) = self.cells.split_at_mut(n * stride);
        let prev = &before[(n - 1) * stride..];
        fill_column(prev, cur, n as u32, &self.diagonals, self.costs.indel);
    }

    /// Drops the last candidate list. Earlier columns are unaffected.
    pub fn pop(&mut self) -> Result<(), MatrixError> {
        let n = self.column_count();
        if n < 2 {
            return Err(MatrixError::Underflow);
        }
        self.cells.truncate((n - 1) * self.stride());
        Ok(())
    }

    fn last_column(&self) -> &[u32] {
        let stride = self.stride();
        &self.cells[self.cells.len() - stride..]
    }

    /// Smallest distance between the candidate and any query prefix in the
    /// cut-off window for threshold `t`. If this exceeds `t`, so does the
    /// distance from the query to every extension of the candidate.
    pub fn cutdist(&self, t: u32) -> u32 {
        let window = CutoffWindow::new(self.candidate_len(), self.index.query.len(), t, self.costs.indel);
        self.last_column()[window.lower..=window.upper]
            .iter()
            .copied()
            .min()
            .expect("window is never empty")
    }

    /// Distance between the whole query and the current candidate.
    pub fn dist_final(&self) -> u32 {
        self.last_column()[self.index.query.len()]
    }
}
