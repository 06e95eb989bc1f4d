//! Minimum 1-trees and the Held-Karp subgradient ascent.
//!
//! Penalties are fixed point: a penalized cost is
//! `c(i, j) * PI_SCALE + pi[i] + pi[j]`, all in `i64`, so tree construction
//! compares exact integers.

use crate::instance::Instance;
use crate::{Vertex, Weight};

/// Fixed-point scale of penalties and penalized lengths.
pub const PI_SCALE: i64 = 1 << 10;

/// Vertex with the two special edges.
pub const SPECIAL: Vertex = 0;

#[inline]
pub(crate) fn penalized<W: Weight>(inst: &Instance<W>, pi: &[i64], i: Vertex, j: Vertex) -> i64 {
    inst.cost(i, j).to_i64_saturating() * PI_SCALE + pi[i] + pi[j]
}

/// Spanning tree on vertices `1..n` plus the two cheapest edges at vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneTree {
    pub pi: Vec<i64>,
    /// Tree parent of each vertex in `2..n` (root is vertex 1); `None` for
    /// vertices 0 and 1.
    pub parent: Vec<Option<Vertex>>,
    /// Penalized cost of the edge to the parent.
    pub parent_cost: Vec<i64>,
    /// The two neighbours of vertex 0, cheaper first.
    pub special: [Vertex; 2],
    pub special_cost: [i64; 2],
    /// Penalized length, `PI_SCALE` units.
    pub total_length: i64,
    pub degrees: Vec<u32>,
}

impl OneTree {
    pub fn dimension(&self) -> usize {
        self.degrees.len()
    }

    /// All `n` edges, tree edges first.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut edges: Vec<(Vertex, Vertex)> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
            .collect();
        edges.push((SPECIAL, self.special[0]));
        edges.push((SPECIAL, self.special[1]));
        edges
    }

    pub fn contains_edge(&self, a: Vertex, b: Vertex) -> bool {
        if a == SPECIAL || b == SPECIAL {
            let other = a.max(b);
            return self.special.contains(&other);
        }
        self.parent[a] == Some(b) || self.parent[b] == Some(a)
    }

    /// `L(pi) - 2 * sum(pi)`, a lower bound on `PI_SCALE * c(T)` for every
    /// tour `T`.
    pub fn bound(&self) -> i64 {
        self.total_length - 2 * self.pi.iter().sum::<i64>()
    }

    /// Whether every vertex has degree 2, i.e. the tree is a tour.
    pub fn is_tour(&self) -> bool {
        self.degrees.iter().all(|&d| d == 2)
    }
}

/// Prim's algorithm on vertices `1..n` over penalized costs, then the two
/// cheapest penalized edges at vertex 0. Ties go to the lower vertex id.
pub fn minimum_one_tree<W: Weight>(inst: &Instance<W>, pi: &[i64]) -> OneTree {
    let n = inst.dimension();
    assert_eq!(pi.len(), n, "one penalty per vertex");
    assert!(n >= 3);

    let mut parent = vec![None; n];
    let mut parent_cost = vec![0i64; n];
    let mut degrees = vec![0u32; n];
    let mut in_tree = vec![false; n];
    let mut key = vec![i64::MAX; n];
    let mut total = 0i64;

    in_tree[SPECIAL] = true;
    in_tree[1] = true;
    for v in 2..n {
        key[v] = penalized(inst, pi, 1, v);
        parent[v] = Some(1);
    }
    for _ in 2..n {
        let mut best = usize::MAX;
        let mut best_key = i64::MAX;
        for v in 2..n {
            if !in_tree[v] && key[v] < best_key {
                best_key = key[v];
                best = v;
            }
        }
        in_tree[best] = true;
        let p = parent[best].expect("every vertex has a tentative parent");
        parent_cost[best] = best_key;
        degrees[best] += 1;
        degrees[p] += 1;
        total += best_key;
        for w in 2..n {
            if !in_tree[w] {
                let c = penalized(inst, pi, best, w);
                if c < key[w] {
                    key[w] = c;
                    parent[w] = Some(best);
                }
            }
        }
    }

    let mut special = [usize::MAX; 2];
    let mut special_cost = [i64::MAX; 2];
    for v in 1..n {
        let c = penalized(inst, pi, SPECIAL, v);
        if c < special_cost[0] {
            special[1] = special[0];
            special_cost[1] = special_cost[0];
            special[0] = v;
            special_cost[0] = c;
        } else if c < special_cost[1] {
            special[1] = v;
            special_cost[1] = c;
        }
    }
    degrees[SPECIAL] = 2;
    degrees[special[0]] += 1;
    degrees[special[1]] += 1;
    total += special_cost[0] + special_cost[1];

    OneTree {
        pi: pi.to_vec(),
        parent,
        parent_cost,
        special,
        special_cost,
        total_length: total,
        degrees,
    }
}

#[derive(Debug, Clone)]
pub struct AscentResult {
    pub pi: Vec<i64>,
    /// Best `L(pi) - 2 sum(pi)` seen, in `PI_SCALE` units.
    pub bound_scaled: i64,
    /// Best-so-far bound after the initial tree and after each iteration.
    pub history: Vec<i64>,
    /// Minimum 1-tree for `pi`.
    pub tree: OneTree,
}

impl AscentResult {
    pub fn lower_bound(&self) -> f64 {
        self.bound_scaled as f64 / PI_SCALE as f64
    }

    /// Smallest integer tour cost compatible with the bound.
    pub fn lower_bound_ceil(&self) -> i64 {
        self.bound_scaled.div_euclid(PI_SCALE) + i64::from(self.bound_scaled.rem_euclid(PI_SCALE) != 0)
    }
}

/// Subgradient ascent on `w(pi) = L(pi) - 2 sum(pi)` with subgradient
/// `deg - 2` and step `t_k = t_0 * 0.9^k`, `t_0 = w(0) / (2n)`.
pub fn held_karp_ascent<W: Weight>(inst: &Instance<W>, iterations: usize) -> AscentResult {
    let n = inst.dimension();
    let mut pi = vec![0i64; n];
    let mut tree = minimum_one_tree(inst, &pi);
    let mut best = tree.bound();
    let mut best_pi = pi.clone();
    let mut best_tree = tree.clone();
    let mut history = vec![best];
    let t0 = (best as f64 / (2.0 * n as f64)).max(1.0);

    for k in 0..iterations {
        if tree.is_tour() {
            break;
        }
        let step = t0 * 0.9f64.powi(k as i32);
        for v in 0..n {
            let d = tree.degrees[v] as i64 - 2;
            pi[v] += (step * d as f64).round() as i64;
        }
        tree = minimum_one_tree(inst, &pi);
        let w = tree.bound();
        if w > best {
            best = w;
            best_pi.clone_from(&pi);
            best_tree = tree.clone();
        }
        history.push(best);
    }

    AscentResult {
        pi: best_pi,
        bound_scaled: best,
        history,
        tree: best_tree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures;

    #[test]
    fn hexagon_plain_tree() {
        let inst = fixtures::hexagon::<i64>();
        let tree = minimum_one_tree(&inst, &[0; 6]);
        assert_eq!(tree.edges().len(), 6);
        assert_eq!(tree.degrees[SPECIAL], 2);
        assert_eq!(tree.degrees.iter().sum::<u32>(), 12);
        assert!(tree.total_length <= 20 * PI_SCALE);
    }

    #[test]
    fn zero_iterations_is_plain_bound() {
        let inst = fixtures::hexagon::<i64>();
        let r = held_karp_ascent(&inst, 0);
        assert_eq!(r.pi, vec![0; 6]);
        assert_eq!(r.bound_scaled, minimum_one_tree(&inst, &[0; 6]).total_length);
        assert_eq!(r.history.len(), 1);
    }

    #[test]
    fn uniform_shift() {
        let inst = fixtures::hexagon::<i64>();
        let base = minimum_one_tree(&inst, &[0; 6]);
        let shifted = minimum_one_tree(&inst, &[37; 6]);
        assert_eq!(shifted.total_length - base.total_length, 2 * 6 * 37);
        assert_eq!(shifted.edges(), base.edges());
        assert_eq!(shifted.bound(), base.bound());
    }

    #[test]
    fn lower_bound_rounding() {
        let inst = fixtures::hexagon::<i64>();
        let mut r = held_karp_ascent(&inst, 0);
        r.bound_scaled = 19 * PI_SCALE + 1;
        assert_eq!(r.lower_bound_ceil(), 20);
        r.bound_scaled = 19 * PI_SCALE;
        assert_eq!(r.lower_bound_ceil(), 19);
    }
}
