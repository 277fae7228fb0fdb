#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treematch::{gen_database, perturb_with, CostParams, EditBudget, EditMix, GenParams, Label, PerturbParams, Tree, TreeDatabase};

/// Labels chosen so that character order and label order disagree
/// (`a` < `ab` < `b`).
pub const LABELS: [&str; 5] = ["a", "ab", "b", "c", "d"];

pub fn label(text: &str) -> Label {
    Label::new(text).unwrap()
}

fn node(root: Label, children: Vec<Tree>) -> Tree {
    let mut children = children;
    children.sort_by(|a, b| a.label().cmp(b.label()));
    children.dedup_by(|a, b| a.label() == b.label());
    Tree::new(root, children).unwrap()
}

pub fn arb_label() -> impl Strategy<Value = Label> {
    prop::sample::select(&LABELS[..]).prop_map(label)
}

/// Small random trees, at most four levels deep with up to four children.
pub fn arb_tree() -> impl Strategy<Value = Tree> {
    arb_label().prop_map(Tree::leaf).prop_recursive(4, 48, 4, |inner| {
        (arb_label(), prop::collection::vec(inner, 1..=4)).prop_map(|(root, kids)| node(root, kids))
    })
}

/// Random generator settings in the small regime: up to `max_trees` trees,
/// depth at most 3, fanout at most 4, alphabet at most 6.
pub fn small_params(rng: &mut ChaCha8Rng, max_trees: usize) -> GenParams {
    let max_children = rng.random_range(1..=4);
    GenParams {
        count: rng.random_range(1..=max_trees),
        alp: rng.random_range(0.25..=0.75),
        max_children,
        max_depth: rng.random_range(1..=3),
        alphabet: rng.random_range(max_children.max(2)..=6),
        seed: rng.random(),
    }
}

pub fn small_database(rng: &mut ChaCha8Rng, max_trees: usize) -> (GenParams, TreeDatabase) {
    let params = small_params(rng, max_trees);
    (params, gen_database(&params).unwrap())
}

/// A mix of queries for `db`: exact copies, perturbed copies and unrelated
/// trees drawn from the same generator.
pub fn mixed_queries(rng: &mut ChaCha8Rng, params: &GenParams, db: &TreeDatabase, count: usize) -> Vec<Tree> {
    let fresh = gen_database(&GenParams {
        count,
        seed: rng.random(),
        ..*params
    })
    .unwrap();
    (0..count)
        .map(|i| {
            let source = &db.records()[rng.random_range(0..db.len())].tree;
            match i % 3 {
                0 => source.clone(),
                1 => {
                    let edits = PerturbParams {
                        budget: EditBudget::Ops(rng.random_range(1..=3)),
                        mix: EditMix::default(),
                        seed: 0,
                    };
                    perturb_with(source, &edits, CostParams::default(), rng).unwrap().tree
                }
                _ => fresh.records()[i].tree.clone(),
            }
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every canonical tree over `alphabet` with height at most `height` and at
/// most `max_leaves` leaves.
pub fn all_trees(alphabet: &[&str], height: usize, max_leaves: usize) -> Vec<Tree> {
    // Subtrees rooted at `root`, grouped by leaf count.
    fn rooted(root: &str, alphabet: &[&str], height: usize, max_leaves: usize) -> Vec<Tree> {
        let mut out = vec![Tree::leaf(label(root))];
        if height == 0 {
            return out;
        }
        let options: Vec<Vec<Tree>> = alphabet.iter().map(|l| rooted(l, alphabet, height - 1, max_leaves)).collect();
        // Choose, per alphabet symbol, either no child or one of its subtrees.
        fn extend(options: &[Vec<Tree>], at: usize, chosen: &mut Vec<Tree>, leaves: usize, max_leaves: usize, root: &str, out: &mut Vec<Tree>) {
            if at == options.len() {
                if !chosen.is_empty() {
                    out.push(Tree::new(label(root), chosen.clone()).unwrap());
                }
                return;
            }
            extend(options, at + 1, chosen, leaves, max_leaves, root, out);
            for option in &options[at] {
                let n = option.leaf_count();
                if leaves + n <= max_leaves {
                    chosen.push(option.clone());
                    extend(options, at + 1, chosen, leaves + n, max_leaves, root, out);
                    chosen.pop();
                }
            }
        }
        extend(&options, 0, &mut Vec::new(), 0, max_leaves, root, &mut out);
        out
    }

    alphabet.iter().flat_map(|root| rooted(root, alphabet, height, max_leaves)).collect()
}
