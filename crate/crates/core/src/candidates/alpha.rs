//! Alpha-nearness on a minimum 1-tree.

use super::onetree::{penalized, OneTree, SPECIAL};
use super::CandidateError;
use crate::instance::Instance;
use crate::{Vertex, Weight};

/// Alpha values for a fixed 1-tree, computed per row on demand.
#[derive(Debug)]
pub struct AlphaTable<'a, W: Weight> {
    inst: &'a Instance<W>,
    tree: &'a OneTree,
    adjacency: Vec<Vec<(Vertex, i64)>>,
}

impl<'a, W: Weight> AlphaTable<'a, W> {
    pub fn tree(&self) -> &OneTree {
        self.tree
    }

    /// Penalized cost of `(i, j)` under the tree's penalties.
    pub fn penalized_cost(&self, i: Vertex, j: Vertex) -> i64 {
        penalized(self.inst, &self.tree.pi, i, j)
    }

    fn special_alpha(&self, v: Vertex) -> i64 {
        if self.tree.special.contains(&v) {
            0
        } else {
            self.penalized_cost(SPECIAL, v) - self.tree.special_cost[1]
        }
    }

    /// Alpha of a single edge. Walks the tree path, so prefer [`Self::row`]
    /// for many queries from one vertex.
    pub fn alpha(&self, i: Vertex, j: Vertex) -> i64 {
        assert_ne!(i, j, "alpha of a self-loop");
        if i == SPECIAL {
            return self.special_alpha(j);
        }
        if j == SPECIAL {
            return self.special_alpha(i);
        }
        self.penalized_cost(i, j) - self.row_beta(i)[j]
    }

    /// Largest penalized edge on the tree path from `from` to every other
    /// vertex of `1..n`.
    fn row_beta(&self, from: Vertex) -> Vec<i64> {
        let n = self.adjacency.len();
        let mut beta = vec![i64::MIN; n];
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &(u, c) in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    beta[u] = beta[v].max(c);
                    stack.push(u);
                }
            }
        }
        beta
    }

    /// `alpha(from, j)` for every `j`; the entry for `from` itself is 0.
    pub fn row(&self, from: Vertex) -> Vec<i64> {
        let n = self.adjacency.len();
        if from == SPECIAL {
            return (0..n)
                .map(|j| if j == SPECIAL { 0 } else { self.special_alpha(j) })
                .collect();
        }
        let beta = self.row_beta(from);
        (0..n)
            .map(|j| {
                if j == from {
                    0
                } else if j == SPECIAL {
                    self.special_alpha(from)
                } else {
                    self.penalized_cost(from, j) - beta[j]
                }
            })
            .collect()
    }
}

/// Checks `tree` against `inst` and prepares alpha queries.
pub fn alpha_values<'a, W: Weight>(
    inst: &'a Instance<W>,
    tree: &'a OneTree,
) -> Result<AlphaTable<'a, W>, CandidateError> {
    let n = inst.dimension();
    let bad = |msg: String| Err(CandidateError::TreeInconsistent(msg));
    if tree.pi.len() != n || tree.parent.len() != n || tree.degrees.len() != n {
        return bad(format!("tree sized for {} vertices, instance has {n}", tree.pi.len()));
    }
    let [s0, s1] = tree.special;
    if s0 == s1 || s0 == SPECIAL || s1 == SPECIAL || s0 >= n || s1 >= n {
        return bad(format!("special edges ({s0}, {s1}) are not two distinct edges at vertex 0"));
    }
    if tree.parent[SPECIAL].is_some() || tree.parent[1].is_some() {
        return bad("vertices 0 and 1 must not have tree parents".into());
    }

    let mut adjacency: Vec<Vec<(Vertex, i64)>> = vec![Vec::new(); n];
    let mut degrees = vec![0u32; n];
    for v in 2..n {
        let Some(p) = tree.parent[v] else {
            return bad(format!("vertex {v} has no tree parent"));
        };
        if p == SPECIAL || p >= n || p == v {
            return bad(format!("vertex {v} has invalid parent {p}"));
        }
        let c = tree.parent_cost[v];
        if c != penalized(inst, &tree.pi, v, p) {
            return bad(format!("stored cost of edge ({p}, {v}) does not match the instance"));
        }
        adjacency[v].push((p, c));
        adjacency[p].push((v, c));
        degrees[v] += 1;
        degrees[p] += 1;
    }
    degrees[SPECIAL] = 2;
    degrees[s0] += 1;
    degrees[s1] += 1;
    if degrees != tree.degrees {
        return bad("degree table does not match the edges".into());
    }

    let mut seen = vec![false; n];
    let mut stack = vec![1];
    seen[1] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &(u, _) in &adjacency[v] {
            if !seen[u] {
                seen[u] = true;
                reached += 1;
                stack.push(u);
            }
        }
    }
    if reached != n - 1 {
        return bad("tree does not span vertices 1..n".into());
    }

    Ok(AlphaTable { inst, tree, adjacency })
}
