//! Trie over the vertex list sequences of a tree database.
//!
//! Every edge is labeled with a whole vertex list, so the path from the root
//! to a node spells a prefix of one or more stored sequences. Trees whose
//! sequences share a prefix share the nodes for it. A node where some tree's
//! sequence ends is terminal and records that tree's id; terminal nodes can
//! still have outgoing edges.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::database::{TreeDatabase, TreeId};
use crate::tree::{linearize, VertexList, VertexListSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrieError {
    #[error("no trie node with index {0}")]
    InvalidNode(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct ListId(u32);

/// Distinct vertex lists, each stored once however many edges use it.
#[derive(Debug, Default)]
struct ListPool {
    lists: Vec<VertexList>,
    ids: HashMap<VertexList, ListId>,
}

impl ListPool {
    fn intern(&mut self, list: &VertexList) -> ListId {
        if let Some(&id) = self.ids.get(list) {
            return id;
        }
        let id = ListId(self.lists.len() as u32);
        self.lists.push(list.clone());
        self.ids.insert(list.clone(), id);
        id
    }

    fn get(&self, id: ListId) -> &VertexList {
        &self.lists[id.0 as usize]
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Edge {
    pub(crate) label: ListId,
    pub(crate) target: NodeId,
}

#[derive(Debug, Default)]
pub(crate) struct Node {
    /// Sorted by label.
    pub(crate) edges: Vec<Edge>,
    pub(crate) terminal_ids: Vec<TreeId>,
}

#[derive(Debug)]
pub struct TreeTrie {
    nodes: Vec<Node>,
    pool: ListPool,
    record_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrieStats {
    pub nodes: usize,
    pub edges: usize,
    /// Nodes where at least one sequence ends.
    pub terminals: usize,
    /// Tree ids stored over all terminals.
    pub tree_ids: usize,
    /// Vertices over all edge labels, counting shared labels once per edge.
    pub edge_label_vertices: usize,
    /// Distinct vertex lists in the label pool.
    pub distinct_lists: usize,
    /// Edges on the longest root-to-node path.
    pub max_depth: usize,
}

/// Read-only view of one trie node.
#[derive(Clone, Copy)]
pub struct NodeView<'t> {
    trie: &'t TreeTrie,
    node: &'t Node,
}

impl<'t> NodeView<'t> {
    /// Outgoing edges in increasing label order.
    pub fn edges(&self) -> impl Iterator<Item = (&'t VertexList, NodeId)> + 't {
        let trie = self.trie;
        self.node.edges.iter().map(move |e| (trie.pool.get(e.label), e.target))
    }

    pub fn terminal_ids(&self) -> &'t [TreeId] {
        &self.node.terminal_ids
    }

    pub fn is_terminal(&self) -> bool {
        !self.node.terminal_ids.is_empty()
    }
}

impl TreeTrie {
    /// A trie holding the linearization of every record in `db`.
    pub fn build(db: &TreeDatabase) -> TreeTrie {
        let mut trie = TreeTrie::empty();
        for record in db.iter() {
            trie.insert(record.id, &linearize(&record.tree));
        }
        trie
    }

    /// A trie over already linearized records.
    pub fn from_sequences<'a>(records: impl IntoIterator<Item = (TreeId, &'a VertexListSequence)>) -> TreeTrie {
        let mut trie = TreeTrie::empty();
        for (id, seq) in records {
            trie.insert(id, seq);
        }
        trie
    }

    fn empty() -> TreeTrie {
        TreeTrie {
            nodes: vec![Node::default()],
            pool: ListPool::default(),
            record_count: 0,
        }
    }

    fn insert(&mut self, id: TreeId, seq: &[VertexList]) {
        let mut at = 0usize;
        for list in seq {
            let label = self.pool.intern(list);
            let pool = &self.pool;
            let edges = &self.nodes[at].edges;
            at = match edges.binary_search_by(|e| pool.get(e.label).cmp(list)) {
                Ok(i) => edges[i].target.index(),
                Err(i) => {
                    let target = NodeId(self.nodes.len() as u32);
                    self.nodes[at].edges.insert(i, Edge { label, target });
                    self.nodes.push(Node::default());
                    target.index()
                }
            };
        }
        self.nodes[at].terminal_ids.push(id);
        self.record_count += 1;
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of stored records.
    pub fn len(&self) -> usize {
        self.record_count
    }

    pub fn is_empty(&self) -> bool {
        self.record_count == 0
    }

    pub fn node(&self, q: NodeId) -> Result<NodeView<'_>, TrieError> {
        self.nodes
            .get(q.index())
            .map(|node| NodeView { trie: self, node })
            .ok_or(TrieError::InvalidNode(q.index()))
    }

    /// Looks up a node id by raw index.
    pub fn node_id(&self, index: usize) -> Result<NodeId, TrieError> {
        if index < self.nodes.len() {
            Ok(NodeId(index as u32))
        } else {
            Err(TrieError::InvalidNode(index))
        }
    }

    /// The node reached from `q` along the edge labeled `list`.
    pub fn delta(&self, q: NodeId, list: &VertexList) -> Result<Option<NodeId>, TrieError> {
        let node = self.nodes.get(q.index()).ok_or(TrieError::InvalidNode(q.index()))?;
        Ok(node
            .edges
            .binary_search_by(|e| self.pool.get(e.label).cmp(list))
            .ok()
            .map(|i| node.edges[i].target))
    }

    /// Ids of the trees whose sequence is exactly `seq`.
    pub fn exact_lookup(&self, seq: &[VertexList]) -> &[TreeId] {
        let mut at = self.root();
        for list in seq {
            match self.delta(at, list).expect("targets are valid nodes") {
                Some(next) => at = next,
                None => return &[],
            }
        }
        &self.nodes[at.index()].terminal_ids
    }

    pub(crate) fn raw_node(&self, q: NodeId) -> &Node {
        &self.nodes[q.index()]
    }

    pub(crate) fn list(&self, id: ListId) -> &VertexList {
        self.pool.get(id)
    }

    pub fn stats(&self) -> TrieStats {
        let mut stats = TrieStats {
            nodes: self.nodes.len(),
            edges: 0,
            terminals: 0,
            tree_ids: 0,
            edge_label_vertices: 0,
            distinct_lists: self.pool.lists.len(),
            max_depth: 0,
        };
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((q, depth)) = stack.pop() {
            let node = &self.nodes[q.index()];
            stats.max_depth = stats.max_depth.max(depth);
            if !node.terminal_ids.is_empty() {
                stats.terminals += 1;
                stats.tree_ids += node.terminal_ids.len();
            }
            for edge in &node.edges {
                stats.edges += 1;
                stats.edge_label_vertices += self.pool.get(edge.label).len();
                stack.push((edge.target, depth + 1));
            }
        }
        stats
    }

    /// Every stored sequence with its ids, in depth-first edge order.
    pub fn stored_sequences(&self) -> Vec<(VertexListSequence, &[TreeId])> {
        fn walk<'t>(
            trie: &'t TreeTrie,
            q: NodeId,
            path: &mut Vec<VertexList>,
            out: &mut Vec<(VertexListSequence, &'t [TreeId])>,
        ) {
            let node = &trie.nodes[q.index()];
            if !node.terminal_ids.is_empty() {
                let seq = VertexListSequence::new(path.clone()).expect("stored paths are valid sequences");
                out.push((seq, &node.terminal_ids));
            }
            for edge in &node.edges {
                path.push(trie.pool.get(edge.label).clone());
                walk(trie, edge.target, path, out);
                path.pop();
            }
        }

        let mut out = Vec::new();
        walk(self, self.root(), &mut Vec::new(), &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_tree;

    fn three_trees() -> TreeDatabase {
        TreeDatabase::parse("(a (b (a x) c k) e)\n(a (b (a x) c k m) e)\n(a (b (a x) c z) e)\n").unwrap()
    }

    fn seq(text: &str) -> VertexListSequence {
        linearize(&parse_tree(text).unwrap())
    }

    #[test]
    fn three_trees_share_prefixes() {
        let trie = TreeTrie::build(&three_trees());
        let stats = trie.stats();
        // (a,b,a,x), (a,b,c) shared by all three, (a,b,k) by two, then one
        // (a,e) edge per tree plus (a,b,m) and (a,b,z).
        assert_eq!(stats.edges, 8);
        assert_eq!(stats.nodes, 9);
        assert_eq!(stats.terminals, 3);
        assert!(stats.edges < 4 + 5 + 4);
        assert_eq!(stats.max_depth, 5);

        let root = trie.node(trie.root()).unwrap();
        assert_eq!(root.edges().count(), 1);
        let first = trie.delta(trie.root(), &seq("(a (b (a x)))")[0]).unwrap().unwrap();
        assert_eq!(root.edges().next().unwrap().1, first);
        assert_eq!(trie.delta(trie.root(), &seq("(a e)")[0]).unwrap(), None);
    }

    #[test]
    fn exact_lookup() {
        let trie = TreeTrie::build(&three_trees());
        assert_eq!(trie.exact_lookup(&seq("(a (b (a x) c k) e)")), &[0]);
        assert_eq!(trie.exact_lookup(&seq("(a (b (a x) c k m) e)")), &[1]);
        assert_eq!(trie.exact_lookup(&seq("(a (b (a x) c q) e)")), &[] as &[TreeId]);
        // A proper prefix of stored sequences is not itself stored.
        assert_eq!(trie.exact_lookup(&seq("(a (b (a x) c))")), &[] as &[TreeId]);
    }

    #[test]
    fn empty_trie() {
        let trie = TreeTrie::build(&TreeDatabase::new());
        let stats = trie.stats();
        assert_eq!((stats.nodes, stats.edges, stats.terminals), (1, 0, 0));
        assert!(trie.is_empty());
        assert_eq!(trie.exact_lookup(&seq("(a b)")), &[] as &[TreeId]);
    }

    #[test]
    fn duplicates_share_a_terminal() {
        let trie = TreeTrie::build(&TreeDatabase::parse("(a b c)\n(a c b)\n").unwrap());
        assert_eq!(trie.exact_lookup(&seq("(a b c)")), &[0, 1]);
        assert_eq!(trie.stats().terminals, 1);
        assert_eq!(trie.stats().tree_ids, 2);
    }

    #[test]
    fn single_tree_path() {
        let db = TreeDatabase::parse("(a (b (a x) c k) e)\n").unwrap();
        let stats = TreeTrie::build(&db).stats();
        assert_eq!((stats.edges, stats.terminals, stats.nodes), (4, 1, 5));
        assert_eq!(stats.edge_label_vertices, 4 + 3 + 3 + 2);
    }

    #[test]
    fn terminal_with_outgoing_edges() {
        // (a b) linearizes to a prefix of (a b c)'s sequence.
        let trie = TreeTrie::build(&TreeDatabase::parse("(a b)\n(a b c)\n").unwrap());
        let mid = trie.delta(trie.root(), &seq("(a b)")[0]).unwrap().unwrap();
        let view = trie.node(mid).unwrap();
        assert!(view.is_terminal());
        assert_eq!(view.edges().count(), 1);
    }

    #[test]
    fn invalid_node() {
        let trie = TreeTrie::build(&three_trees());
        assert_eq!(trie.node_id(99).unwrap_err(), TrieError::InvalidNode(99));
        let bogus = NodeId(99);
        assert!(trie.delta(bogus, &seq("(a b)")[0]).is_err());
        assert!(trie.node(bogus).is_err());
    }

    #[test]
    fn stored_sequences_in_order() {
        let db = three_trees();
        let trie = TreeTrie::build(&db);
        let stored = trie.stored_sequences();
        assert_eq!(stored.len(), 3);
        assert!(stored.windows(2).all(|w| w[0].0.lists() < w[1].0.lists()));
        for (seq, ids) in stored {
            for &id in ids {
                assert_eq!(linearize(db.get(id).unwrap()), seq);
            }
        }
    }
}
