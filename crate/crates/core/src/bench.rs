//! Timing and result-count reports for query batches.
//!
//! Every query is searched through the trie and also compared against every
//! record by [`dist`](crate::distance::dist); a disagreement between the two
//! is reported as an error, never averaged away.

use std::fmt::{self, Write as _};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::database::{TreeDatabase, TreeId};
use crate::distance::CostParams;
use crate::search::{scan_distances, search_lists, Match, MatchSet, SearchParams, SearchTrace};
use crate::tree::{linearize, Tree, VertexListSequence};
use crate::trie::TreeTrie;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("no queries")]
    NoQueries,
    #[error("repeat count must be positive")]
    NoRepeats,
    #[error("query {query} at threshold {threshold}: trie search and linear scan disagree ({detail})")]
    CrossCheck {
        query: usize,
        threshold: u32,
        detail: String,
    },
}

/// Averages for one database at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub database: String,
    pub threshold: u32,
    pub queries: usize,
    pub avg_leaves_per_query: f64,
    pub avg_search_ms: f64,
    pub avg_trees_found: f64,
    /// Visited trie nodes over all trie nodes, averaged over queries.
    pub avg_visited_fraction: f64,
}

/// One benchmark row together with the per-query outcomes behind it.
#[derive(Debug, Clone)]
pub struct BenchRun {
    pub row: BenchRow,
    pub results: Vec<MatchSet>,
    pub traces: Vec<SearchTrace>,
    /// Best-of-repeat search time per query, in milliseconds.
    pub times_ms: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// Benchmarks `queries` against `db` at one threshold.
pub fn run_bench(db: &TreeDatabase, queries: &[Tree], params: &SearchParams, repeat: usize) -> Result<BenchRun, BenchError> {
    let mut runs = run_bench_thresholds(db, "db", queries, &[params.threshold], params.costs, repeat)?;
    Ok(runs.remove(0))
}

/// Benchmarks `queries` against `db` at each threshold in turn.
///
/// The trie is built once, outside the timed region. Each search is timed
/// `repeat` times and the fastest run is kept. Searches run one at a time.
pub fn run_bench_thresholds(
    db: &TreeDatabase,
    name: &str,
    queries: &[Tree],
    thresholds: &[u32],
    costs: CostParams,
    repeat: usize,
) -> Result<Vec<BenchRun>, BenchError> {
    if queries.is_empty() {
        return Err(BenchError::NoQueries);
    }
    if repeat == 0 {
        return Err(BenchError::NoRepeats);
    }

    let records: Vec<(TreeId, VertexListSequence)> = db.iter().map(|r| (r.id, linearize(&r.tree))).collect();
    let trie = TreeTrie::from_sequences(records.iter().map(|(id, seq)| (*id, seq)));
    let node_count = trie.node_count() as f64;
    let linear: Vec<VertexListSequence> = queries.iter().map(linearize).collect();
    // Threshold-independent, so the scan runs once per query.
    let scans: Vec<Vec<Match>> = linear.iter().map(|x| scan_distances(&records, x, costs)).collect();

    let mut runs = Vec::with_capacity(thresholds.len());
    for &threshold in thresholds {
        let params = SearchParams::new(threshold, costs);
        let mut results = Vec::with_capacity(queries.len());
        let mut traces = Vec::with_capacity(queries.len());
        let mut times_ms = Vec::with_capacity(queries.len());
        for (q, x) in linear.iter().enumerate() {
            let mut best = f64::INFINITY;
            let mut outcome = None;
            for _ in 0..repeat {
                let start = Instant::now();
                let result = search_lists(&trie, x, &params);
                best = best.min(start.elapsed().as_secs_f64() * 1e3);
                outcome = Some(result);
            }
            let (found, trace) = outcome.expect("repeat is positive");

            let expected = MatchSet::from_matches(scans[q].iter().copied().filter(|m| m.distance <= threshold).collect());
            if found != expected {
                return Err(BenchError::CrossCheck {
                    query: q,
                    threshold,
                    detail: describe_mismatch(&expected, &found),
                });
            }
            results.push(found);
            traces.push(trace);
            times_ms.push(best);
        }

        let count = queries.len() as f64;
        let row = BenchRow {
            database: name.to_string(),
            threshold,
            queries: queries.len(),
            avg_leaves_per_query: linear.iter().map(|x| x.len() as f64).sum::<f64>() / count,
            avg_search_ms: times_ms.iter().sum::<f64>() / count,
            avg_trees_found: results.iter().map(|r| r.len() as f64).sum::<f64>() / count,
            avg_visited_fraction: traces.iter().map(|t| t.nodes_visited as f64 / node_count).sum::<f64>() / count,
        };
        runs.push(BenchRun {
            row,
            results,
            traces,
            times_ms,
        });
    }
    Ok(runs)
}

fn describe_mismatch(expected: &MatchSet, found: &MatchSet) -> String {
    let missing: Vec<String> = expected
        .iter()
        .filter(|m| found.distance_of(m.id) != Some(m.distance))
        .map(|m| format!("{}@{}", m.id, m.distance))
        .collect();
    let extra: Vec<String> = found
        .iter()
        .filter(|m| expected.distance_of(m.id) != Some(m.distance))
        .map(|m| format!("{}@{}", m.id, m.distance))
        .collect();
    format!("missing [{}], unexpected [{}]", missing.join(", "), extra.join(", "))
}

impl BenchReport {
    pub fn from_runs(runs: &[BenchRun]) -> BenchReport {
        BenchReport {
            rows: runs.iter().map(|r| r.row.clone()).collect(),
        }
    }
}

impl fmt::Display for BenchReport {
    /// An aligned text table, one line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const HEADERS: [&str; 7] = [
            "database",
            "threshold",
            "queries",
            "avg leaves/query",
            "avg search ms",
            "avg trees found",
            "avg visited frac",
        ];
        let cells: Vec<[String; 7]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.database.clone(),
                    r.threshold.to_string(),
                    r.queries.to_string(),
                    format!("{:.2}", r.avg_leaves_per_query),
                    format!("{:.3}", r.avg_search_ms),
                    format!("{:.2}", r.avg_trees_found),
                    format!("{:.5}", r.avg_visited_fraction),
                ]
            })
            .collect();
        let mut widths = HEADERS.map(str::len);
        for row in &cells {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let render = |cells: &[&str]| {
            let mut line = String::new();
            for (i, cell) in cells.iter().enumerate() {
                let _ = match i {
                    0 => write!(line, "{cell:<w$}", w = widths[i]),
                    _ => write!(line, "  {cell:>w$}", w = widths[i]),
                };
            }
            line.trim_end().to_string()
        };
        writeln!(f, "{}", render(&HEADERS))?;
        for row in &cells {
            writeln!(f, "{}", render(&row.iter().map(String::as_str).collect::<Vec<_>>()))?;
        }
        Ok(())
    }
}
