//! Error-tolerant retrieval over a [`TreeTrie`].
//!
//! [`approx_search`] walks the trie depth first, extending a candidate
//! sequence by one edge label at a time and keeping one column of the
//! distance matrix per candidate list. A branch is abandoned as soon as the
//! cut-off distance of its candidate exceeds the threshold. Every terminal
//! node reached within the cut-off is checked against the full query, since a
//! candidate can be close to a prefix of the query without the whole tree
//! being a match.

use serde::Serialize;

use crate::database::{TreeDatabase, TreeId};
use crate::distance::{dist, CostParams, DistanceMatrix};
use crate::tree::{linearize, VertexList, VertexListSequence};
use crate::trie::TreeTrie;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchParams {
    pub threshold: u32,
    pub costs: CostParams,
}

impl SearchParams {
    pub fn new(threshold: u32, costs: CostParams) -> SearchParams {
        SearchParams { threshold, costs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Match {
    pub distance: u32,
    pub id: TreeId,
}

/// Matches ordered by distance, then id. Each id appears once.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct MatchSet {
    matches: Vec<Match>,
}

impl MatchSet {
    /// Sorts `matches` and drops repeated ids, keeping the smallest distance.
    pub fn from_matches(mut matches: Vec<Match>) -> MatchSet {
        matches.sort_by_key(|m| (m.id, m.distance));
        matches.dedup_by_key(|m| m.id);
        matches.sort();
        MatchSet { matches }
    }

    pub fn as_slice(&self) -> &[Match] {
        &self.matches
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Match> {
        self.matches.iter()
    }

    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = TreeId> + '_ {
        self.matches.iter().map(|m| m.id)
    }

    pub fn distance_of(&self, id: TreeId) -> Option<u32> {
        self.matches.iter().find(|m| m.id == id).map(|m| m.distance)
    }

    pub fn contains(&self, id: TreeId) -> bool {
        self.distance_of(id).is_some()
    }

    /// True if every match here also appears in `other` with the same distance.
    pub fn is_subset_of(&self, other: &MatchSet) -> bool {
        self.matches.iter().all(|m| other.distance_of(m.id) == Some(m.distance))
    }
}

impl<'a> IntoIterator for &'a MatchSet {
    type Item = &'a Match;
    type IntoIter = std::slice::Iter<'a, Match>;

    fn into_iter(self) -> Self::IntoIter {
        self.matches.iter()
    }
}

/// Work done by one search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchTrace {
    /// Trie nodes entered, the root included.
    pub nodes_visited: u64,
    pub columns_pushed: u64,
    pub columns_popped: u64,
    /// Edges whose candidate exceeded the cut-off distance.
    pub pruned: u64,
}

/// All trees in `trie` within `params.threshold` of `query`.
pub fn approx_search(trie: &TreeTrie, query: &VertexListSequence, params: &SearchParams) -> (MatchSet, SearchTrace) {
    search_lists(trie, query, params)
}

pub(crate) fn search_lists(trie: &TreeTrie, query: &[VertexList], params: &SearchParams) -> (MatchSet, SearchTrace) {
    let t = params.threshold;
    let mut matrix = DistanceMatrix::new(query, params.costs);
    let mut trace = SearchTrace {
        nodes_visited: 1,
        ..SearchTrace::default()
    };
    let mut found = Vec::new();

    // Each frame is a node on the current path and the next edge to try.
    // Frame k + 1 exists iff the matrix holds column k + 1.
    let mut stack = vec![(trie.root(), 0usize)];
    while let Some(frame) = stack.last_mut() {
        let node = trie.raw_node(frame.0);
        let Some(edge) = node.edges.get(frame.1).copied() else {
            stack.pop();
            if !stack.is_empty() {
                matrix.pop().expect("one column per frame below the root");
                trace.columns_popped += 1;
            }
            continue;
        };
        frame.1 += 1;

        matrix.push(trie.list(edge.label));
        trace.columns_pushed += 1;
        if matrix.cutdist(t) > t {
            matrix.pop().expect("column was just pushed");
            trace.columns_popped += 1;
            trace.pruned += 1;
            continue;
        }

        trace.nodes_visited += 1;
        let child = trie.raw_node(edge.target);
        if !child.terminal_ids.is_empty() {
            let distance = matrix.dist_final();
            if distance <= t {
                found.extend(child.terminal_ids.iter().map(|&id| Match { distance, id }));
            }
        }
        stack.push((edge.target, 0));
    }
    debug_assert_eq!(trace.columns_pushed, trace.columns_popped);

    (MatchSet::from_matches(found), trace)
}

/// Compares `query` with every record. The reference result for
/// [`approx_search`].
pub fn linear_scan(db: &TreeDatabase, query: &VertexListSequence, params: &SearchParams) -> MatchSet {
    let matches = db
        .iter()
        .filter_map(|record| {
            let distance = dist(query, &linearize(&record.tree), params.costs);
            (distance <= params.threshold).then_some(Match { distance, id: record.id })
        })
        .collect();
    MatchSet::from_matches(matches)
}

/// Distance from `query` to every already linearized record.
pub(crate) fn scan_distances(records: &[(TreeId, VertexListSequence)], query: &[VertexList], costs: CostParams) -> Vec<Match> {
    records
        .iter()
        .map(|(id, seq)| Match {
            distance: dist(query, seq, costs),
            id: *id,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_tree;

    fn three_trees() -> TreeDatabase {
        TreeDatabase::parse("(a (b (a x) c k) e)\n(a (b (a x) c k m) e)\n(a (b (a x) c z) e)\n").unwrap()
    }

    fn query(text: &str) -> VertexListSequence {
        linearize(&parse_tree(text).unwrap())
    }

    fn pairs(set: &MatchSet) -> Vec<(TreeId, u32)> {
        set.iter().map(|m| (m.id, m.distance)).collect()
    }

    #[test]
    fn three_trees_thresholds() {
        let db = three_trees();
        let trie = TreeTrie::build(&db);
        let x = query("(a (b (a x) c k) e)");
        let cases: [(u32, &[(TreeId, u32)]); 3] = [
            (2, &[(0, 0), (2, 1), (1, 2)]),
            (0, &[(0, 0)]),
            (1, &[(0, 0), (2, 1)]),
        ];
        for (t, want) in cases {
            let params = SearchParams::new(t, CostParams::default());
            let (found, trace) = approx_search(&trie, &x, &params);
            assert_eq!(pairs(&found), want, "t = {t}");
            assert_eq!(linear_scan(&db, &x, &params), found);
            assert_eq!(trace.columns_pushed, trace.columns_popped);
            assert_eq!(trace.columns_pushed, trace.nodes_visited - 1 + trace.pruned);
        }
    }

    #[test]
    fn exact_threshold_visits_one_path() {
        let db = three_trees();
        let trie = TreeTrie::build(&db);
        let x = query("(a (b (a x) c k) e)");
        let (_, trace) = approx_search(&trie, &x, &SearchParams::new(0, CostParams::default()));
        assert!(trace.nodes_visited <= x.len() as u64 + 1);
    }

    #[test]
    fn empty_database() {
        let db = TreeDatabase::new();
        let trie = TreeTrie::build(&db);
        let params = SearchParams::new(4, CostParams::default());
        let x = query("(a b)");
        assert!(approx_search(&trie, &x, &params).0.is_empty());
        assert!(linear_scan(&db, &x, &params).is_empty());
    }

    #[test]
    fn huge_threshold_returns_everything() {
        let db = three_trees();
        let x = query("(z y)");
        let largest = db.iter().map(|r| r.tree.leaf_count()).max().unwrap();
        let t = ((x.len() + largest) * 2) as u32;
        let params = SearchParams::new(t, CostParams::default());
        assert_eq!(linear_scan(&db, &x, &params).len(), 3);
        assert_eq!(approx_search(&TreeTrie::build(&db), &x, &params).0.len(), 3);
    }

    #[test]
    fn terminal_inside_the_trie() {
        let db = TreeDatabase::parse("(a b)\n(a b c)\n(a b c d)\n").unwrap();
        let trie = TreeTrie::build(&db);
        let params = SearchParams::new(2, CostParams::default());
        let x = query("(a b c)");
        let (found, _) = approx_search(&trie, &x, &params);
        assert_eq!(pairs(&found), [(1, 0), (0, 2), (2, 2)]);
    }

    #[test]
    fn match_set_order_and_dedup() {
        let set = MatchSet::from_matches(vec![
            Match { distance: 2, id: 5 },
            Match { distance: 0, id: 9 },
            Match { distance: 1, id: 5 },
            Match { distance: 1, id: 3 },
        ]);
        assert_eq!(pairs(&set), [(9, 0), (3, 1), (5, 1)]);
        assert!(set.contains(3));
        assert_eq!(set.distance_of(5), Some(1));
        let smaller = MatchSet::from_matches(vec![Match { distance: 0, id: 9 }]);
        assert!(smaller.is_subset_of(&set));
        assert!(!set.is_subset_of(&smaller));
    }
}
