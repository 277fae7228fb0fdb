//! Error-tolerant retrieval of labeled trees.
//!
//! A database of trees is linearized, each tree becoming the sorted sequence
//! of its root-to-leaf label paths, and the sequences are stored in a trie.
//! Given a query tree and a threshold, [`approx_search`] returns every
//! database tree that can be turned into the query by inserting, deleting and
//! relabeling leaves at a total cost within the threshold.
//!
//! ```
//! use treematch::{approx_search, linearize, parse_tree, CostParams, SearchParams, TreeDatabase, TreeTrie};
//!
//! let db = TreeDatabase::parse(
//!     "(a (b (a x) c k) e)\n\
//!      (a (b (a x) c k m) e)\n\
//!      (a (b (a x) c z) e)\n",
//! )?;
//! let trie = TreeTrie::build(&db);
//!
//! let query = linearize(&parse_tree("(a (b (a x) c k) e)")?);
//! let params = SearchParams::new(1, CostParams::default());
//! let (matches, _trace) = approx_search(&trie, &query, &params);
//!
//! let found: Vec<(u32, u32)> = matches.iter().map(|m| (m.id, m.distance)).collect();
//! assert_eq!(found, [(0, 0), (2, 1)]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The guide in `book/` walks through the model, the distance, the trie and
//! the search in more detail.

pub mod bench;
pub mod database;
pub mod distance;
pub mod oracle;
pub mod search;
pub mod synth;
pub mod text;
pub mod tree;
pub mod trie;

pub use bench::{run_bench, run_bench_thresholds, BenchError, BenchReport, BenchRow, BenchRun};
pub use database::{DatabaseError, Record, TreeDatabase, TreeId};
pub use distance::{dist, CostError, CostParams, CutoffWindow, DistanceMatrix, MatrixError};
pub use oracle::dist_oracle;
pub use search::{approx_search, linear_scan, Match, MatchSet, SearchParams, SearchTrace};
pub use synth::{gen_database, perturb, perturb_with, EditBudget, EditKind, EditMix, GenError, GenParams, PerturbParams, Perturbed};
pub use text::{format_tree, parse_tree};
pub use tree::{classify_pair, compare_vertex_lists, delinearize, linearize, Label, Relation, Tree, TreeError, VertexList, VertexListSequence};
pub use trie::{NodeId, NodeView, TreeTrie, TrieError, TrieStats};

// The guide's code blocks run as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/distance.md")]
    mod distance {}
    #[doc = include_str!("../../../book/src/trie.md")]
    mod trie {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
