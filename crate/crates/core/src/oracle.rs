//! Reference implementations for checking the fast paths.
//!
//! Nothing here is used by the search itself. The code is deliberately plain:
//! labels are compared one at a time as strings and every cell of the table
//! is materialized.

use crate::distance::CostParams;
use crate::tree::VertexList;

/// Cost of pairing `x` with `y` diagonally, if they may be paired at all.
fn pair_cost(x: &[&str], y: &[&str], costs: CostParams) -> Option<u64> {
    if x == y {
        Some(0)
    } else if x.len() == y.len() && x[..x.len() - 1] == y[..y.len() - 1] {
        Some(u64::from(costs.change()))
    } else {
        None
    }
}

/// Full edit-distance table over vertex lists. Makes no use of the lists
/// being sorted.
pub fn dist_oracle(x: &[VertexList], y: &[VertexList], costs: CostParams) -> u32 {
    let xs: Vec<Vec<&str>> = x.iter().map(|l| l.labels().collect()).collect();
    let ys: Vec<Vec<&str>> = y.iter().map(|l| l.labels().collect()).collect();
    let s = u64::from(costs.indel());
    let (m, n) = (xs.len(), ys.len());

    let mut table = vec![vec![0u64; n + 1]; m + 1];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = i as u64 * s;
    }
    for (j, cell) in table[0].iter_mut().enumerate() {
        *cell = j as u64 * s;
    }
    for i in 1..=m {
        for j in 1..=n {
            let mut best = (table[i - 1][j] + s).min(table[i][j - 1] + s);
            if let Some(cost) = pair_cost(&xs[i - 1], &ys[j - 1], costs) {
                best = best.min(table[i - 1][j - 1] + cost);
            }
            table[i][j] = best;
        }
    }
    table[m][n] as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_tree;
    use crate::tree::linearize;

    #[test]
    fn boundaries() {
        let a = linearize(&parse_tree("(a (b (a x) c k) e)").unwrap());
        assert_eq!(dist_oracle(&a, &[], CostParams::default()), 8);
        assert_eq!(dist_oracle(&[], &a, CostParams::new(1, 3).unwrap()), 12);
        assert_eq!(dist_oracle(&[], &[], CostParams::default()), 0);
    }
}
