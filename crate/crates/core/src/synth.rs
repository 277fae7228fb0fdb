//! Synthetic tree databases and perturbed queries for benchmarking.
//!
//! Trees are grown from a root labeled `S`. Every internal node above the
//! maximum depth gets between one and `max_children` children (uniformly),
//! labeled with distinct symbols from the alphabet, and each child becomes a
//! leaf with probability `alp`. Children at the maximum depth are always
//! leaves.
//!
//! Alphabet symbols are lowercase letter strings (`a`, ..., `z`, `aa`, ...).
//! Perturbation only ever introduces labels containing `!`, which never
//! occurs in an alphabet symbol, so an edit can't recreate an existing leaf.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::database::TreeDatabase;
use crate::distance::CostParams;
use crate::tree::{Label, Tree};

pub const ROOT_LABEL: &str = "S";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("leaf probability must be in (0, 1], got {0}")]
    LeafProbability(f64),
    #[error("max children must be positive")]
    NoChildren,
    #[error("max depth must be positive")]
    NoDepth,
    #[error("alphabet of {alphabet} symbols cannot label {max_children} distinct siblings")]
    AlphabetTooSmall { alphabet: usize, max_children: usize },
    #[error("edit mix weights must not all be zero")]
    EmptyMix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub count: usize,
    /// Probability that a child above the maximum depth is a leaf.
    pub alp: f64,
    pub max_children: usize,
    pub max_depth: usize,
    pub alphabet: usize,
    pub seed: u64,
}

impl GenParams {
    /// `count` trees shaped like the smallest benchmark database: leaf
    /// probability 1/3, up to 8 children, depth up to 5.
    pub fn small_benchmark(count: usize, seed: u64) -> GenParams {
        GenParams {
            count,
            alp: 1.0 / 3.0,
            max_children: 8,
            max_depth: 5,
            alphabet: 26,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if !(self.alp > 0.0 && self.alp <= 1.0) {
            return Err(GenError::LeafProbability(self.alp));
        }
        if self.max_children == 0 {
            return Err(GenError::NoChildren);
        }
        if self.max_depth == 0 {
            return Err(GenError::NoDepth);
        }
        if self.alphabet < self.max_children {
            return Err(GenError::AlphabetTooSmall {
                alphabet: self.alphabet,
                max_children: self.max_children,
            });
        }
        Ok(())
    }
}

/// The `i`th alphabet symbol: `a`..`z`, then `aa`, `ab`, ...
pub fn alphabet_symbol(mut i: usize) -> String {
    let mut bytes = Vec::new();
    loop {
        bytes.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    bytes.reverse();
    String::from_utf8(bytes).expect("ascii")
}

pub fn gen_database(params: &GenParams) -> Result<TreeDatabase, GenError> {
    params.validate()?;
    let symbols: Vec<Label> = (0..params.alphabet)
        .map(|i| Label::new(alphabet_symbol(i)).expect("alphabet symbols are valid labels"))
        .collect();
    let root = Label::new(ROOT_LABEL).expect("valid label");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let trees = (0..params.count).map(|_| grow(&root, 0, params, &symbols, &mut rng)).collect::<Vec<_>>();
    Ok(TreeDatabase::from_trees(trees))
}

fn grow(label: &Label, depth: usize, params: &GenParams, symbols: &[Label], rng: &mut ChaCha8Rng) -> Tree {
    let count = rng.random_range(1..=params.max_children);
    let mut picks = sample(rng, symbols.len(), count).into_vec();
    picks.sort_unstable();
    let children = picks
        .into_iter()
        .map(|i| {
            let child_depth = depth + 1;
            if child_depth == params.max_depth || rng.random_bool(params.alp) {
                Tree::leaf(symbols[i].clone())
            } else {
                grow(&symbols[i], child_depth, params, symbols, rng)
            }
        })
        .collect();
    // Distinct sorted picks are already canonical.
    Tree {
        label: label.clone(),
        children,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EditBudget {
    /// Apply this many edits.
    Ops(usize),
    /// Apply edits while their total cost stays within this budget. Edits
    /// that cost nothing are not used.
    Cost(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditMix {
    pub delete: u32,
    pub insert: u32,
    pub relabel: u32,
}

impl Default for EditMix {
    fn default() -> EditMix {
        EditMix {
            delete: 1,
            insert: 1,
            relabel: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbParams {
    pub budget: EditBudget,
    pub mix: EditMix,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditKind {
    Delete,
    Insert,
    Relabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbed {
    pub tree: Tree,
    /// Nominal cost of the applied edits.
    pub applied_cost: u32,
    pub edits: Vec<EditKind>,
    /// Requested edits that could not be applied (`EditBudget::Ops` only).
    pub shortfall: usize,
}

/// Attempts per requested edit before it counts as a shortfall.
const ATTEMPTS: usize = 16;

/// Applies random leaf edits to a copy of `tree` using a generator seeded
/// from `params.seed`.
///
/// Deletions only remove leaves that have a sibling, insertions only add
/// leaves under internal nodes, and relabeling keeps the leaf's position among
/// its siblings. Each edit therefore changes exactly one vertex list and the
/// distance to the original is at most the applied cost.
pub fn perturb(tree: &Tree, params: &PerturbParams, costs: CostParams) -> Result<Perturbed, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    perturb_with(tree, params, costs, &mut rng)
}

/// As [`perturb`], drawing from `rng`.
pub fn perturb_with<R: Rng>(tree: &Tree, params: &PerturbParams, costs: CostParams, rng: &mut R) -> Result<Perturbed, GenError> {
    let mix = params.mix;
    if mix.delete == 0 && mix.insert == 0 && mix.relabel == 0 {
        return Err(GenError::EmptyMix);
    }
    let cost_of = |kind: EditKind| match kind {
        EditKind::Relabel => costs.change(),
        EditKind::Delete | EditKind::Insert => costs.indel(),
    };
    let mut editor = Editor {
        tree: tree.clone(),
        fresh: 0,
    };
    let mut applied_cost = 0;
    let mut edits = Vec::new();
    let mut shortfall = 0;

    match params.budget {
        EditBudget::Ops(count) => {
            for _ in 0..count {
                let applied = (0..ATTEMPTS).find_map(|_| {
                    let kind = pick_kind(&mix, |_| true, rng)?;
                    editor.apply(kind, rng).then_some(kind)
                });
                match applied {
                    Some(kind) => {
                        applied_cost += cost_of(kind);
                        edits.push(kind);
                    }
                    None => shortfall += 1,
                }
            }
        }
        EditBudget::Cost(budget) => {
            let mut failed: Vec<EditKind> = Vec::new();
            loop {
                let remaining = budget - applied_cost;
                let usable = |kind: EditKind| {
                    let cost = cost_of(kind);
                    cost > 0 && cost <= remaining && !failed.contains(&kind)
                };
                let Some(kind) = pick_kind(&mix, usable, rng) else {
                    break;
                };
                if (0..ATTEMPTS).any(|_| editor.apply(kind, rng)) {
                    applied_cost += cost_of(kind);
                    edits.push(kind);
                } else {
                    failed.push(kind);
                }
            }
        }
    }
    Ok(Perturbed {
        tree: editor.tree,
        applied_cost,
        edits,
        shortfall,
    })
}

fn pick_kind<R: Rng>(mix: &EditMix, allowed: impl Fn(EditKind) -> bool, rng: &mut R) -> Option<EditKind> {
    let weighted = [
        (EditKind::Delete, mix.delete),
        (EditKind::Insert, mix.insert),
        (EditKind::Relabel, mix.relabel),
    ]
    .map(|(kind, w)| (kind, if allowed(kind) { w } else { 0 }));
    let total: u32 = weighted.iter().map(|(_, w)| w).sum();
    if total == 0 {
        return None;
    }
    let mut roll = rng.random_range(0..total);
    for (kind, w) in weighted {
        if roll < w {
            return Some(kind);
        }
        roll -= w;
    }
    unreachable!("roll is below the total weight")
}

struct Editor {
    tree: Tree,
    fresh: u32,
}

/// Path of child indices from the root.
type Path = Vec<usize>;

impl Editor {
    fn node_mut(&mut self, path: &[usize]) -> &mut Tree {
        path.iter().fold(&mut self.tree, |node, &i| &mut node.children[i])
    }

    fn collect(&self, keep: impl Fn(&Tree, Option<&Tree>) -> bool) -> Vec<Path> {
        fn walk(node: &Tree, parent: Option<&Tree>, path: &mut Path, keep: &dyn Fn(&Tree, Option<&Tree>) -> bool, out: &mut Vec<Path>) {
            if keep(node, parent) {
                out.push(path.clone());
            }
            for (i, child) in node.children.iter().enumerate() {
                path.push(i);
                walk(child, Some(node), path, keep, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(&self.tree, None, &mut Vec::new(), &keep, &mut out);
        out
    }

    fn next_fresh(&mut self) -> u32 {
        self.fresh += 1;
        self.fresh
    }

    /// Tries one edit of `kind` at a random location; false if none is possible.
    fn apply<R: Rng>(&mut self, kind: EditKind, rng: &mut R) -> bool {
        match kind {
            EditKind::Delete => {
                let spots = self.collect(|n, p| n.is_leaf() && p.is_some_and(|p| p.children.len() > 1));
                let Some(path) = choose(&spots, rng) else {
                    return false;
                };
                let (last, parent) = path.split_last().expect("deletable leaves have a parent");
                self.node_mut(parent).children.remove(*last);
                true
            }
            EditKind::Insert => {
                let spots = self.collect(|n, _| !n.is_leaf());
                let Some(path) = choose(&spots, rng) else {
                    return false;
                };
                let label = loop {
                    let candidate = Label::new(format!("!{}", self.next_fresh())).expect("valid label");
                    if self.node_mut(path).child(candidate.as_str()).is_none() {
                        break candidate;
                    }
                };
                let node = self.node_mut(path);
                let at = node.children.partition_point(|c| c.label < label);
                node.children.insert(at, Tree::leaf(label));
                true
            }
            EditKind::Relabel => {
                let spots = self.collect(|n, _| n.is_leaf());
                let Some(path) = choose(&spots, rng) else {
                    return false;
                };
                let fresh = self.next_fresh();
                let Some((last, parent)) = path.split_last() else {
                    // A lone root has no siblings to keep order with.
                    let label = Label::new(format!("{}!{fresh}", self.tree.label)).expect("valid label");
                    self.tree.label = label;
                    return true;
                };
                let parent = self.node_mut(parent);
                let old = &parent.children[*last].label;
                let label = Label::new(format!("{old}!{fresh}")).expect("valid label");
                // `old!n` sorts right after `old` unless a sibling sits in
                // between, which only a sibling starting with `old!` can do.
                let next = parent.children.get(last + 1).map(|c| &c.label);
                if next.is_some_and(|next| *next <= label) {
                    return false;
                }
                parent.children[*last].label = label;
                true
            }
        }
    }
}

fn choose<'a, R: Rng>(spots: &'a [Path], rng: &mut R) -> Option<&'a Path> {
    if spots.is_empty() {
        None
    } else {
        Some(&spots[rng.random_range(0..spots.len())])
    }
}
