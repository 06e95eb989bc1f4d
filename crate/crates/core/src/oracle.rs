//! Exact solvers and exhaustive move enumeration for small instances.

use std::collections::HashSet;

use thiserror::Error;

use crate::candidates::CandidateSets;
use crate::gain::{GainPolicy, GainState};
use crate::instance::Instance;
use crate::tour::{ExchangeMove, Tour};
use crate::{Vertex, Weight};

pub const HELD_KARP_LIMIT: usize = 16;
pub const BRUTE_FORCE_LIMIT: usize = 10;
pub const ENUMERATION_LIMIT: usize = 12;
pub const ENUMERATION_DEPTH_LIMIT: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {n} vertices, limit is {limit}")]
    InstanceTooLarge { n: usize, limit: usize },
    #[error("depth {depth} exceeds the enumeration limit {limit}")]
    DepthTooLarge { depth: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult<W> {
    pub optimum: W,
    pub witness: Vec<Vertex>,
}

fn check_size(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::InstanceTooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Bitmask dynamic program over subsets of `1..n`, paths starting at 0.
pub fn held_karp_optimum<W: Weight>(inst: &Instance<W>) -> Result<OracleResult<W>, OracleError> {
    let n = inst.dimension();
    check_size(n, HELD_KARP_LIMIT)?;
    let m = n - 1;
    let full = (1usize << m) - 1;
    let inf = W::max_value();
    // dp[mask * m + j]: cheapest path 0 -> ... -> j+1 visiting exactly mask
    let mut dp = vec![inf; (full + 1) * m];
    let mut from = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = inst.cost(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if mask & (1 << j) == 0 || cur == inf {
                continue;
            }
            for l in 0..m {
                if mask & (1 << l) != 0 {
                    continue;
                }
                let next = mask | (1 << l);
                let cand = cur + inst.cost(j + 1, l + 1);
                if cand < dp[next * m + l] {
                    dp[next * m + l] = cand;
                    from[next * m + l] = j as u8;
                }
            }
        }
    }
    let (last, optimum) = (0..m)
        .map(|j| (j, dp[full * m + j] + inst.cost(j + 1, 0)))
        .min_by_key(|&(j, c)| (c, j))
        .expect("n >= 3");
    let mut witness = Vec::with_capacity(n);
    let mut mask = full;
    let mut j = last;
    loop {
        witness.push(j + 1);
        let p = from[mask * m + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    witness.push(0);
    witness.reverse();
    Ok(OracleResult { optimum, witness })
}

/// Minimum over every tour with vertex 0 first.
pub fn brute_force_optimum<W: Weight>(inst: &Instance<W>) -> Result<OracleResult<W>, OracleError> {
    use itertools::Itertools;

    let n = inst.dimension();
    check_size(n, BRUTE_FORCE_LIMIT)?;
    let mut best: Option<OracleResult<W>> = None;
    for perm in (1..n).permutations(n - 1) {
        let mut c = inst.cost(0, perm[0]) + inst.cost(perm[n - 2], 0);
        for w in perm.windows(2) {
            c = c + inst.cost(w[0], w[1]);
        }
        if best.as_ref().map_or(true, |b| c < b.optimum) {
            let mut witness = vec![0];
            witness.extend(perm);
            best = Some(OracleResult { optimum: c, witness });
        }
    }
    Ok(best.expect("n >= 3"))
}

fn edge(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

/// Whether the edge multiset `tour - deleted + added` is one Hamiltonian
/// cycle, by explicit degree count and traversal.
fn is_hamiltonian_cycle(n: usize, tour_edges: &[(Vertex, Vertex)], deleted: &[(Vertex, Vertex)], added: &[(Vertex, Vertex)]) -> bool {
    let mut edges: Vec<(Vertex, Vertex)> = tour_edges.to_vec();
    for d in deleted {
        match edges.iter().position(|e| e == d) {
            Some(p) => {
                edges.swap_remove(p);
            }
            None => return false,
        }
    }
    edges.extend_from_slice(added);
    let mut adj = vec![Vec::with_capacity(2); n];
    for &(a, b) in &edges {
        if a == b {
            return false;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    if adj.iter().any(|l| l.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut seen) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        seen += 1;
        if seen > n {
            return false;
        }
    }
    seen == n
}

struct Enumerator<'a, W: Weight> {
    inst: &'a Instance<W>,
    cands: &'a CandidateSets,
    policy: GainPolicy,
    max_depth: usize,
    tour_edges: Vec<(Vertex, Vertex)>,
    tour_edge_set: HashSet<(Vertex, Vertex)>,
    out: Vec<ExchangeMove<W>>,
}

impl<W: Weight> Enumerator<'_, W> {
    fn tour_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.tour_edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    // t ends with x_i deleted; ledger holds G_1 .. G_{i-1}
    fn after_delete(&mut self, t: &mut Vec<Vertex>, ledger: &mut Vec<W>, state: GainState) {
        let i = t.len() / 2;
        let deleted: Vec<_> = t.chunks(2).map(|c| edge(c[0], c[1])).collect();
        let added: Vec<_> = (1..i).map(|l| edge(t[2 * l - 1], t[2 * l])).collect();
        let g_prev = ledger.last().copied().unwrap_or_else(W::zero);
        let t_even = t[2 * i - 1];
        let x_cost = self.inst.cost(t[2 * i - 2], t_even);

        if i >= 2 && t_even != t[0] {
            let gain = g_prev + x_cost - self.inst.cost(t_even, t[0]);
            let mut closed = added.clone();
            closed.push(edge(t_even, t[0]));
            if gain > W::zero() && is_hamiltonian_cycle(self.inst.dimension(), &self.tour_edges, &deleted, &closed) {
                let mut full = ledger.clone();
                full.push(gain);
                self.out.push(ExchangeMove { t: t.clone(), gain, ledger: full });
            }
        }
        if i >= self.max_depth {
            return;
        }
        for c in self.cands.get(t_even).to_vec() {
            let v = c.vertex;
            let y = edge(t_even, v);
            if v == t_even || self.tour_edge_set.contains(&y) || added.contains(&y) {
                continue;
            }
            let g_i = g_prev + x_cost - self.inst.cost(t_even, v);
            if !self.policy.admits(state, i, g_i, g_prev).unwrap_or(false) {
                continue;
            }
            let next_state = self.policy.record(state, i, g_i);
            t.push(v);
            ledger.push(g_i);
            for u in self.tour_neighbors(v) {
                let x = edge(v, u);
                if deleted.contains(&x) || added.contains(&x) || x == y {
                    continue;
                }
                t.push(u);
                self.after_delete(t, ledger, next_state);
                t.pop();
            }
            ledger.pop();
            t.pop();
        }
    }
}

/// Every closed alternating circle of depth `2..=max_depth` starting at
/// `t1` whose added edges come from the candidate lists, admitted step by
/// step by `policy`, with positive closing gain and a Hamiltonian result.
pub fn enumerate_closing_moves_from<W: Weight>(
    inst: &Instance<W>,
    tour: &Tour<W>,
    t1: Vertex,
    max_depth: usize,
    policy: GainPolicy,
    cands: &CandidateSets,
) -> Result<Vec<ExchangeMove<W>>, OracleError> {
    let n = inst.dimension();
    check_size(n, ENUMERATION_LIMIT)?;
    if max_depth > ENUMERATION_DEPTH_LIMIT {
        return Err(OracleError::DepthTooLarge { depth: max_depth, limit: ENUMERATION_DEPTH_LIMIT });
    }
    let order = tour.order();
    let tour_edges: Vec<_> = (0..n).map(|p| edge(order[p], order[(p + 1) % n])).collect();
    let mut e = Enumerator {
        inst,
        cands,
        policy,
        max_depth,
        tour_edge_set: tour_edges.iter().copied().collect(),
        tour_edges,
        out: Vec::new(),
    };
    let state = policy.begin_move(policy.init_state());
    for t2 in e.tour_neighbors(t1) {
        let mut t = vec![t1, t2];
        e.after_delete(&mut t, &mut Vec::new(), state);
    }
    Ok(e.out)
}

/// [`enumerate_closing_moves_from`] over every starting vertex.
pub fn enumerate_closing_moves<W: Weight>(
    inst: &Instance<W>,
    tour: &Tour<W>,
    max_depth: usize,
    policy: GainPolicy,
    cands: &CandidateSets,
) -> Result<Vec<ExchangeMove<W>>, OracleError> {
    let mut all = Vec::new();
    for t1 in 0..inst.dimension() {
        all.extend(enumerate_closing_moves_from(inst, tour, t1, max_depth, policy, cands)?);
    }
    Ok(all)
}
