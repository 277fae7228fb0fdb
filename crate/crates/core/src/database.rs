//! Tree database files.
//!
//! One record per line, `id <TAB> tree`, where the id is optional. A record
//! without an id gets its zero-based position among the records. Blank lines
//! and lines starting with `#` are skipped.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::text::{format_tree, parse_tree};
use crate::tree::{Tree, TreeError};

pub type TreeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatabaseError {
    #[error("line {line}: {error}")]
    Tree { line: usize, error: TreeError },
    #[error("line {line}: invalid record id {text:?}")]
    BadId { line: usize, text: String },
    #[error("line {line}: duplicate record id {id}")]
    DuplicateId { line: usize, id: TreeId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub id: TreeId,
    pub tree: Tree,
}

/// Trees with unique ids, in file order. The same tree may appear under
/// several ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeDatabase {
    records: Vec<Record>,
    by_id: HashMap<TreeId, usize>,
}

impl TreeDatabase {
    pub fn new() -> TreeDatabase {
        TreeDatabase::default()
    }

    /// Numbers the trees 0, 1, 2, ...
    pub fn from_trees(trees: impl IntoIterator<Item = Tree>) -> TreeDatabase {
        let mut db = TreeDatabase::new();
        for (i, tree) in trees.into_iter().enumerate() {
            db.push_unchecked(i as TreeId, tree);
        }
        db
    }

    pub fn parse(text: &str) -> Result<TreeDatabase, DatabaseError> {
        let mut db = TreeDatabase::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (id, tree_text) = match raw.split_once('\t') {
                Some((head, rest)) if !head.trim_start().starts_with('(') => {
                    let head = head.trim();
                    let id = head.parse::<TreeId>().map_err(|_| DatabaseError::BadId {
                        line,
                        text: head.to_string(),
                    })?;
                    (id, rest)
                }
                _ => (db.records.len() as TreeId, raw),
            };
            let tree = parse_tree(tree_text).map_err(|error| DatabaseError::Tree { line, error })?;
            if db.by_id.contains_key(&id) {
                return Err(DatabaseError::DuplicateId { line, id });
            }
            db.push_unchecked(id, tree);
        }
        Ok(db)
    }

    /// Serializes as `id <TAB> tree` lines; [`TreeDatabase::parse`] reads it back.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            let _ = writeln!(out, "{}\t{}", record.id, format_tree(&record.tree));
        }
        out
    }

    /// Adds a record, failing on a duplicate id.
    pub fn insert(&mut self, id: TreeId, tree: Tree) -> Result<(), DatabaseError> {
        if self.by_id.contains_key(&id) {
            return Err(DatabaseError::DuplicateId {
                line: self.records.len() + 1,
                id,
            });
        }
        self.push_unchecked(id, tree);
        Ok(())
    }

    fn push_unchecked(&mut self, id: TreeId, tree: Tree) {
        self.by_id.insert(id, self.records.len());
        self.records.push(Record { id, tree });
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn get(&self, id: TreeId) -> Option<&Tree> {
        self.by_id.get(&id).map(|&i| &self.records[i].tree)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Record> {
        self.records.iter()
    }
}
