//! Labeled trees and their linear form.
//!
//! A [`Tree`] is kept in canonical form: the children of every node are
//! sorted by label and sibling labels are unique. Every leaf is identified by
//! its [`VertexList`], the labels on the path from the root down to it, and a
//! whole tree by its [`VertexListSequence`], the vertex lists of all its
//! leaves in increasing order.
//!
//! Vertex lists are ordered lexicographically, label by label, with labels
//! compared byte-wise and a proper prefix ordering first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

/// Separator between labels in the encoded form of a vertex list. It sorts
/// below every byte a label may contain, so byte order on the encoding is the
/// label-by-label lexicographic order.
pub(crate) const SEP: char = '\0';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid label {label:?}: labels are non-empty and contain no whitespace, control characters, '(', ')' or '#'")]
    InvalidLabel { label: String },
    #[error("duplicate child label {label:?} under {parent:?}")]
    DuplicateSibling { parent: String, label: String },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("vertex list sequence is empty")]
    EmptySequence,
    #[error("vertex list {index} has root {found:?}, expected {expected:?}")]
    MixedRoots {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("vertex lists {index} and {next} are not strictly increasing", next = index + 1)]
    NotIncreasing { index: usize },
    #[error("vertex list {prefix} is a prefix of {longer}: a node cannot be both a leaf and internal")]
    LeafInternalConflict { prefix: String, longer: String },
}

fn is_label_char(c: char) -> bool {
    !c.is_whitespace() && !c.is_control() && !matches!(c, '(' | ')' | '#')
}

/// A node label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Box<str>);

impl Label {
    pub fn new(text: impl Into<String>) -> Result<Label, TreeError> {
        let text = text.into();
        if text.is_empty() || !text.chars().all(is_label_char) {
            return Err(TreeError::InvalidLabel { label: text });
        }
        Ok(Label(text.into_boxed_str()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl AsRef<str> for Label {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A rooted, labeled tree in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    pub(crate) label: Label,
    pub(crate) children: Vec<Tree>,
}

impl Tree {
    pub fn leaf(label: Label) -> Tree {
        Tree {
            label,
            children: Vec::new(),
        }
    }

    /// Builds a node from its children, which may be given in any order.
    ///
    /// Fails if two children share a label.
    pub fn new(label: Label, mut children: Vec<Tree>) -> Result<Tree, TreeError> {
        children.sort_by(|a, b| a.label.cmp(&b.label));
        if let Some(pair) = children.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(TreeError::DuplicateSibling {
                parent: label.to_string(),
                label: pair[0].label.to_string(),
            });
        }
        Ok(Tree { label, children })
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    /// Children in increasing label order.
    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn child(&self, label: &str) -> Option<&Tree> {
        self.children
            .binary_search_by(|c| c.label.as_str().cmp(label))
            .ok()
            .map(|i| &self.children[i])
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(Tree::leaf_count).sum()
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Tree::node_count).sum::<usize>()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Largest number of children of any node.
    pub fn max_fanout(&self) -> usize {
        self.children
            .iter()
            .map(Tree::max_fanout)
            .max()
            .unwrap_or(0)
            .max(self.children.len())
    }
}

/// The labels on the path from the root to one leaf.
///
/// Stored as a single string with the labels joined by a separator that sorts
/// below every label byte; the derived ordering on that string is exactly the
/// label-wise lexicographic order with the prefix rule.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexList {
    encoded: Arc<str>,
    len: u32,
}

impl VertexList {
    /// Builds a vertex list from root to leaf. At least one label is required.
    pub fn new<I, S>(labels: I) -> Result<VertexList, TreeError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut encoded = String::new();
        let mut len = 0u32;
        for label in labels {
            let label = label.as_ref();
            if label.is_empty() || !label.chars().all(is_label_char) {
                return Err(TreeError::InvalidLabel {
                    label: label.to_string(),
                });
            }
            if len > 0 {
                encoded.push(SEP);
            }
            encoded.push_str(label);
            len += 1;
        }
        if len == 0 {
            return Err(TreeError::Syntax {
                position: 0,
                message: "a vertex list needs at least one label".into(),
            });
        }
        Ok(VertexList {
            encoded: encoded.into(),
            len,
        })
    }

    /// `encoded` must already be a valid separator-joined path of `len` labels.
    pub(crate) fn from_encoded(encoded: &str, len: u32) -> VertexList {
        debug_assert_eq!(encoded.matches(SEP).count() + 1, len as usize);
        VertexList {
            encoded: encoded.into(),
            len,
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.encoded.split(SEP)
    }

    /// Number of vertices, `d + 1` for a leaf at depth `d`.
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn depth(&self) -> usize {
        self.len as usize - 1
    }

    pub fn root(&self) -> &str {
        self.labels().next().expect("vertex lists are non-empty")
    }

    pub fn leaf(&self) -> &str {
        match self.encoded.rfind(SEP) {
            Some(at) => &self.encoded[at + SEP.len_utf8()..],
            None => &self.encoded,
        }
    }

    /// Encoded form of every label but the leaf; empty for a lone root.
    pub(crate) fn parent_path(&self) -> &str {
        match self.encoded.rfind(SEP) {
            Some(at) => &self.encoded[..at],
            None => "",
        }
    }

    /// True if `self` is a proper label-wise prefix of `other`.
    pub fn is_proper_prefix_of(&self, other: &VertexList) -> bool {
        other.len > self.len
            && other.encoded.starts_with(&*self.encoded)
            && other.encoded[self.encoded.len()..].starts_with(SEP)
    }
}

impl fmt::Display for VertexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, label) in self.labels().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(label)?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for VertexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Lexicographic order on vertex lists.
pub fn compare_vertex_lists(a: &VertexList, b: &VertexList) -> Ordering {
    a.cmp(b)
}

/// How the last vertex lists of two sequences relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    /// Same path to the leaf, different leaf label.
    LabelDiff,
    /// `x` sorts before `y` and they are not a label difference.
    XLess,
    /// `x` sorts after `y` and they are not a label difference.
    XGreater,
}

pub fn classify_pair(x: &VertexList, y: &VertexList) -> Relation {
    if x == y {
        Relation::Equal
    } else if x.len == y.len && x.parent_path() == y.parent_path() {
        Relation::LabelDiff
    } else if x < y {
        Relation::XLess
    } else {
        Relation::XGreater
    }
}

/// The vertex lists of a tree, strictly increasing.
///
/// The empty sequence is allowed; it is the starting point of every
/// distance computation even though no tree linearizes to it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexListSequence {
    lists: Vec<VertexList>,
}

impl VertexListSequence {
    pub fn empty() -> VertexListSequence {
        VertexListSequence::default()
    }

    /// Validates that `lists` share a root, are strictly increasing, and that
    /// no list is a prefix of another.
    pub fn new(lists: Vec<VertexList>) -> Result<VertexListSequence, TreeError> {
        check_consistent(&lists)?;
        Ok(VertexListSequence { lists })
    }

    pub fn lists(&self) -> &[VertexList] {
        &self.lists
    }

    pub fn into_lists(self) -> Vec<VertexList> {
        self.lists
    }
}

impl Deref for VertexListSequence {
    type Target = [VertexList];

    fn deref(&self) -> &[VertexList] {
        &self.lists
    }
}

impl fmt::Display for VertexListSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, list) in self.lists.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{list}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for VertexListSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_consistent(lists: &[VertexList]) -> Result<(), TreeError> {
    let Some(first) = lists.first() else {
        return Ok(());
    };
    let root = first.root();
    for (index, pair) in lists.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if b.root() != root {
            return Err(TreeError::MixedRoots {
                index: index + 1,
                expected: root.to_string(),
                found: b.root().to_string(),
            });
        }
        if a >= b {
            return Err(TreeError::NotIncreasing { index });
        }
        // Lists extending `a` sort immediately after it.
        if a.is_proper_prefix_of(b) {
            return Err(TreeError::LeafInternalConflict {
                prefix: a.to_string(),
                longer: b.to_string(),
            });
        }
    }
    Ok(())
}

/// One vertex list per leaf, in increasing order.
pub fn linearize(tree: &Tree) -> VertexListSequence {
    fn walk(node: &Tree, path: &mut String, len: u32, out: &mut Vec<VertexList>) {
        let mark = path.len();
        if len > 0 {
            path.push(SEP);
        }
        path.push_str(node.label.as_str());
        if node.is_leaf() {
            out.push(VertexList::from_encoded(path, len + 1));
        } else {
            // Sorted children visit their leaves in lexicographic order.
            for child in &node.children {
                walk(child, path, len + 1, out);
            }
        }
        path.truncate(mark);
    }

    let mut lists = Vec::with_capacity(tree.leaf_count());
    walk(tree, &mut String::new(), 0, &mut lists);
    debug_assert!(lists.windows(2).all(|w| w[0] < w[1]));
    VertexListSequence { lists }
}

/// Rebuilds the canonical tree whose linearization is `lists`.
pub fn delinearize(lists: &[VertexList]) -> Result<Tree, TreeError> {
    if lists.is_empty() {
        return Err(TreeError::EmptySequence);
    }
    check_consistent(lists)?;

    // Lists are sorted, so the leaves below any node form a contiguous run.
    fn build(lists: &[Vec<&str>], depth: usize) -> Tree {
        let label = Label(lists[0][depth].into());
        if lists[0].len() == depth + 1 {
            debug_assert_eq!(lists.len(), 1);
            return Tree::leaf(label);
        }
        let mut children = Vec::new();
        let mut start = 0;
        while start < lists.len() {
            let head = lists[start][depth + 1];
            let end = start + lists[start..].partition_point(|l| l[depth + 1] == head);
            children.push(build(&lists[start..end], depth + 1));
            start = end;
        }
        Tree { label, children }
    }

    let split: Vec<Vec<&str>> = lists.iter().map(|l| l.labels().collect()).collect();
    Ok(build(&split, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_tree;

    fn vl(labels: &[&str]) -> VertexList {
        VertexList::new(labels).unwrap()
    }

    #[test]
    fn vertex_list_order() {
        assert_eq!(compare_vertex_lists(&vl(&["a", "b", "c"]), &vl(&["a", "b", "k"])), Ordering::Less);
        assert_eq!(compare_vertex_lists(&vl(&["a", "b", "k"]), &vl(&["a", "e"])), Ordering::Less);
        assert_eq!(compare_vertex_lists(&vl(&["a", "b"]), &vl(&["a", "b", "c"])), Ordering::Less);
        let v = vl(&["S", "VP", "V", "chased"]);
        assert_eq!(compare_vertex_lists(&v, &v.clone()), Ordering::Equal);
        // Label-wise, not character-wise: "a" < "ab" decides before "b".
        assert_eq!(compare_vertex_lists(&vl(&["a", "b"]), &vl(&["ab"])), Ordering::Less);
    }

    #[test]
    fn classify() {
        assert_eq!(classify_pair(&vl(&["a", "b", "k"]), &vl(&["a", "b", "z"])), Relation::LabelDiff);
        assert_eq!(classify_pair(&vl(&["a", "b", "a", "x"]), &vl(&["a", "b", "c"])), Relation::XLess);
        assert_eq!(classify_pair(&vl(&["a", "e"]), &vl(&["a", "e"])), Relation::Equal);
        assert_eq!(classify_pair(&vl(&["a", "e"]), &vl(&["a", "b", "c"])), Relation::XGreater);
        assert_eq!(classify_pair(&vl(&["r"]), &vl(&["s"])), Relation::LabelDiff);
        // Different parents at the same depth are not a label difference.
        assert_eq!(classify_pair(&vl(&["a", "b", "x"]), &vl(&["a", "c", "x"])), Relation::XLess);
    }

    #[test]
    fn vertex_list_accessors() {
        let v = vl(&["a", "b", "k"]);
        assert_eq!(v.len(), 3);
        assert_eq!(v.depth(), 2);
        assert_eq!(v.root(), "a");
        assert_eq!(v.leaf(), "k");
        assert_eq!(v.to_string(), "(a,b,k)");
        assert!(vl(&["a", "b"]).is_proper_prefix_of(&v));
        assert!(!vl(&["a", "bk"]).is_proper_prefix_of(&v));
        assert!(!vl(&["a"]).is_proper_prefix_of(&vl(&["ab"])));
        assert!(VertexList::new(Vec::<&str>::new()).is_err());
        assert!(VertexList::new(["a", "b c"]).is_err());
    }

    #[test]
    fn labels_are_validated() {
        assert!(Label::new("NP").is_ok());
        for bad in ["", "a b", "a(", ")", "#x", "a\tb", "a\0"] {
            assert!(Label::new(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn duplicate_siblings_rejected() {
        let x = Tree::leaf(Label::new("x").unwrap());
        let err = Tree::new(Label::new("b").unwrap(), vec![x.clone(), x]).unwrap_err();
        assert_eq!(
            err,
            TreeError::DuplicateSibling {
                parent: "b".into(),
                label: "x".into()
            }
        );
    }

    #[test]
    fn linearize_three_trees_tree() {
        let tree = parse_tree("(a (b (a x) c k) e)").unwrap();
        let expected = [
            vl(&["a", "b", "a", "x"]),
            vl(&["a", "b", "c"]),
            vl(&["a", "b", "k"]),
            vl(&["a", "e"]),
        ];
        assert_eq!(linearize(&tree).lists(), &expected);
        assert_eq!(delinearize(&expected).unwrap(), tree);
    }

    #[test]
    fn single_node() {
        let tree = parse_tree("(r)").unwrap();
        let seq = linearize(&tree);
        assert_eq!(seq.lists(), &[vl(&["r"])]);
        assert_eq!(delinearize(&seq).unwrap(), tree);
    }

    #[test]
    fn delinearize_rejects_inconsistent_input() {
        assert_eq!(delinearize(&[]), Err(TreeError::EmptySequence));
        assert!(matches!(
            delinearize(&[vl(&["a", "b"]), vl(&["a", "b", "c"])]),
            Err(TreeError::LeafInternalConflict { .. })
        ));
        assert!(matches!(
            delinearize(&[vl(&["a", "b"]), vl(&["z", "c"])]),
            Err(TreeError::MixedRoots { .. })
        ));
        assert!(matches!(
            delinearize(&[vl(&["a", "c"]), vl(&["a", "b"])]),
            Err(TreeError::NotIncreasing { index: 0 })
        ));
        assert!(matches!(
            VertexListSequence::new(vec![vl(&["a", "c"]), vl(&["a", "c"])]),
            Err(TreeError::NotIncreasing { .. })
        ));
    }

    #[test]
    fn tree_metrics() {
        let tree = parse_tree("(a (b (a x) c k) e)").unwrap();
        assert_eq!(tree.leaf_count(), 4);
        assert_eq!(tree.node_count(), 7);
        assert_eq!(tree.height(), 3);
        assert_eq!(tree.max_fanout(), 3);
        assert_eq!(tree.child("e").map(|c| c.is_leaf()), Some(true));
        assert!(tree.child("q").is_none());
    }
}
