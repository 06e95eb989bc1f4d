//! Hamiltonian cycles and k-opt exchanges.
//!
//! A [`Tour`] is an order array plus its inverse. Deleting `k` tour edges
//! cuts the cycle into `k` segments; an exchange is feasible exactly when
//! the added edges chain those segments back into one cycle. The chain is
//! computed on segment endpoints only, so feasibility costs `O(k log k)`
//! regardless of `n`. Applying a feasible exchange rearranges the segments
//! with at most `2(k - 1)` path reversals, each reversing the shorter side
//! of the cycle.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::instance::{check_permutation, Instance, InstanceError};
use crate::{Vertex, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TourError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("vertex {vertex} out of range for a tour of {len} vertices")]
    IndexOutOfRange { vertex: Vertex, len: usize },
    #[error("vertices are not distinct")]
    VerticesNotDistinct,
    #[error("inconsistent exchange: {0}")]
    PathInconsistent(String),
    #[error("exchange does not yield a single Hamiltonian cycle")]
    MoveInfeasible,
}

/// A Hamiltonian cycle with cached cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour<W> {
    order: Vec<Vertex>,
    pos: Vec<usize>,
    cost: W,
}

impl<W: Weight> Tour<W> {
    pub fn from_order(inst: &Instance<W>, order: Vec<Vertex>) -> Result<Self, TourError> {
        check_permutation(&order, inst.dimension())?;
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let cost = inst.cycle_cost(&order);
        Ok(Self { order, pos, cost })
    }

    /// Uniformly random tour.
    pub fn random<R: Rng + ?Sized>(inst: &Instance<W>, rng: &mut R) -> Self {
        let mut order: Vec<Vertex> = (0..inst.dimension()).collect();
        order.shuffle(rng);
        Self::from_order(inst, order).expect("shuffled identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn cost(&self) -> W {
        self.cost
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.pos[v]
    }

    #[inline]
    pub fn next(&self, v: Vertex) -> Vertex {
        let p = self.pos[v] + 1;
        self.order[if p == self.order.len() { 0 } else { p }]
    }

    #[inline]
    pub fn prev(&self, v: Vertex) -> Vertex {
        let p = self.pos[v];
        self.order[if p == 0 { self.order.len() - 1 } else { p - 1 }]
    }

    pub fn try_next(&self, v: Vertex) -> Result<Vertex, TourError> {
        self.check_vertex(v)?;
        Ok(self.next(v))
    }

    pub fn try_prev(&self, v: Vertex) -> Result<Vertex, TourError> {
        self.check_vertex(v)?;
        Ok(self.prev(v))
    }

    /// Whether walking forward from `a` reaches `b` before `c`.
    pub fn between(&self, a: Vertex, b: Vertex, c: Vertex) -> Result<bool, TourError> {
        for v in [a, b, c] {
            self.check_vertex(v)?;
        }
        if a == b || b == c || a == c {
            return Err(TourError::VerticesNotDistinct);
        }
        Ok(self.between_unchecked(a, b, c))
    }

    #[inline]
    pub fn between_unchecked(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        let n = self.order.len();
        let (pa, pb, pc) = (self.pos[a], self.pos[b], self.pos[c]);
        (pb + n - pa) % n <= (pc + n - pa) % n
    }

    /// Whether `{u, v}` is an edge of the tour.
    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.next(u) == v || self.prev(u) == v
    }

    /// Tour edges as `(v, next(v))` in order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }

    /// The vertex sequence starting at vertex 0 and continuing towards its
    /// smaller-numbered neighbour; equal for tours forming the same cycle.
    pub fn canonical_order(&self) -> Vec<Vertex> {
        let n = self.order.len();
        let forward = self.next(0) <= self.prev(0);
        let start = self.pos[0];
        (0..n)
            .map(|s| {
                let i = if forward { (start + s) % n } else { (start + n - s) % n };
                self.order[i]
            })
            .collect()
    }

    pub fn same_cycle(&self, other: &Self) -> bool {
        self.canonical_order() == other.canonical_order()
    }

    /// Recomputes everything from scratch and compares with the cached state.
    pub fn validate(&self, inst: &Instance<W>) -> Result<(), String> {
        let n = inst.dimension();
        if self.order.len() != n || self.pos.len() != n {
            return Err(format!("tour has {} vertices, instance {n}", self.order.len()));
        }
        for (i, &v) in self.order.iter().enumerate() {
            if self.pos[v] != i {
                return Err(format!("position of {v} is {}, expected {i}", self.pos[v]));
            }
        }
        // walk n successor steps
        let mut v = self.order[0];
        for step in 1..=n {
            v = self.next(v);
            if v == self.order[0] && step != n {
                return Err(format!("cycle closes after {step} steps"));
            }
        }
        if v != self.order[0] {
            return Err("successor walk does not return to start".into());
        }
        let cost = inst.cycle_cost(&self.order);
        if cost != self.cost {
            return Err(format!("cached cost {} but recomputed {cost}", self.cost));
        }
        Ok(())
    }

    /// Decides whether deleting `deleted` and adding `added` yields a single
    /// Hamiltonian cycle.
    ///
    /// Every deleted edge must be a distinct tour edge and the added edges
    /// must use each endpoint of the deleted edges exactly once per deleted
    /// edge incident to it; violations are reported as
    /// [`TourError::PathInconsistent`].
    pub fn exchange_is_tour(
        &self,
        deleted: &[(Vertex, Vertex)],
        added: &[(Vertex, Vertex)],
    ) -> Result<bool, TourError> {
        Ok(self.plan_exchange(deleted, added)?.is_some())
    }

    /// Applies a closed exchange in place.
    pub fn apply_move(&mut self, inst: &Instance<W>, m: &ExchangeMove<W>) -> Result<(), TourError> {
        let deleted = m.deleted();
        let added = m.added();
        let plan = self
            .plan_exchange(&deleted, &added)?
            .ok_or(TourError::MoveInfeasible)?;
        self.rearrange(&plan);
        let delta: W = deleted.iter().map(|&(a, b)| inst.cost(a, b)).sum::<W>()
            - added.iter().map(|&(a, b)| inst.cost(a, b)).sum::<W>();
        debug_assert_eq!(delta, m.gain, "move gain disagrees with its edges");
        self.cost = self.cost - delta;
        debug_assert_eq!(self.validate(inst), Ok(()));
        Ok(())
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), TourError> {
        if v >= self.order.len() {
            return Err(TourError::IndexOutOfRange {
                vertex: v,
                len: self.order.len(),
            });
        }
        Ok(())
    }

    /// Cuts the tour at `deleted` and chains the segments with `added`.
    /// Returns `None` when the chain closes before visiting every segment.
    fn plan_exchange(
        &self,
        deleted: &[(Vertex, Vertex)],
        added: &[(Vertex, Vertex)],
    ) -> Result<Option<SegmentPlan>, TourError> {
        let k = deleted.len();
        if k == 0 || added.len() != k {
            return Err(TourError::PathInconsistent(format!(
                "{k} deleted edges but {} added",
                added.len()
            )));
        }
        // each cut is (tail vertex u, head vertex w) with w = next(u)
        let mut cuts: Vec<(Vertex, Vertex)> = Vec::with_capacity(k);
        for &(a, b) in deleted {
            self.check_vertex(a)?;
            self.check_vertex(b)?;
            if self.next(a) == b {
                cuts.push((a, b));
            } else if self.next(b) == a {
                cuts.push((b, a));
            } else {
                return Err(TourError::PathInconsistent(format!(
                    "({a}, {b}) is not a tour edge"
                )));
            }
        }
        cuts.sort_unstable_by_key(|&(u, _)| self.pos[u]);
        if cuts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(TourError::PathInconsistent("edge deleted twice".into()));
        }

        // segment j runs from head w_j forward to tail u_{j+1}
        let heads: Vec<Vertex> = cuts.iter().map(|&(_, w)| w).collect();
        let tails: Vec<Vertex> = (0..k).map(|j| cuts[(j + 1) % k].0).collect();

        // end 2j is the head of segment j, end 2j+1 its tail
        let mut ends: Vec<(Vertex, bool)> = Vec::with_capacity(2 * k);
        for j in 0..k {
            ends.push((heads[j], false));
            ends.push((tails[j], false));
        }
        let mut mate = vec![usize::MAX; 2 * k];
        let claim = |v: Vertex, ends: &mut [(Vertex, bool)]| -> Result<usize, TourError> {
            let e = ends
                .iter()
                .position(|&(x, used)| x == v && !used)
                .ok_or_else(|| {
                    TourError::PathInconsistent(format!("vertex {v} has more added than deleted edges"))
                })?;
            ends[e].1 = true;
            Ok(e)
        };
        for &(p, q) in added {
            if p == q {
                return Err(TourError::PathInconsistent(format!("self loop at {p}")));
            }
            let ep = claim(p, &mut ends)?;
            let eq = claim(q, &mut ends)?;
            mate[ep] = eq;
            mate[eq] = ep;
        }

        let mut order = Vec::with_capacity(k);
        order.push((0, false));
        let mut exit = 1;
        loop {
            let e = mate[exit];
            let seg = e / 2;
            if seg == 0 {
                break;
            }
            let reversed = e % 2 == 1;
            order.push((seg, reversed));
            if order.len() > k {
                break;
            }
            exit = if reversed { 2 * seg } else { 2 * seg + 1 };
        }
        if order.len() != k {
            return Ok(None);
        }
        Ok(Some(SegmentPlan { heads, tails, order }))
    }

    /// Rearranges segments into `plan.order` by successive block reversals.
    fn rearrange(&mut self, plan: &SegmentPlan) {
        let k = plan.order.len();
        let mut current: Vec<(usize, bool)> = (0..k).map(|j| (j, false)).collect();
        // true when the array runs opposite to the segment model
        let mut flipped = false;
        for p in 1..k {
            let (target, target_rev) = plan.order[p];
            let q = (p..k)
                .find(|&q| current[q].0 == target)
                .expect("target segment is still unplaced");
            if q != p {
                flipped ^= self.reverse_block(plan, &current[p..=q], flipped);
                current[p..=q].reverse();
                for s in &mut current[p..=q] {
                    s.1 = !s.1;
                }
            }
            if current[p].1 != target_rev {
                flipped ^= self.reverse_block(plan, &current[p..=p], flipped);
                current[p].1 = !current[p].1;
            }
        }
    }

    fn reverse_block(&mut self, plan: &SegmentPlan, block: &[(usize, bool)], flipped: bool) -> bool {
        let (first_seg, first_rev) = block[0];
        let (last_seg, last_rev) = block[block.len() - 1];
        let first = if first_rev { plan.tails[first_seg] } else { plan.heads[first_seg] };
        let last = if last_rev { plan.heads[last_seg] } else { plan.tails[last_seg] };
        if flipped {
            self.reverse_path(last, first)
        } else {
            self.reverse_path(first, last)
        }
    }

    /// Reverses the forward path `from ..= to`. When the complement is
    /// shorter it is reversed instead, which yields the same cycle with the
    /// opposite orientation; the return value reports that case.
    fn reverse_path(&mut self, from: Vertex, to: Vertex) -> bool {
        let n = self.order.len();
        let i = self.pos[from];
        let j = self.pos[to];
        let len = (j + n - i) % n + 1;
        if 2 * len <= n {
            self.reverse_positions(i, len);
            false
        } else {
            let rest = n - len;
            if rest > 0 {
                self.reverse_positions((j + 1) % n, rest);
            }
            true
        }
    }

    fn reverse_positions(&mut self, start: usize, len: usize) {
        let n = self.order.len();
        let mut a = start;
        let mut b = (start + len - 1) % n;
        for _ in 0..len / 2 {
            self.order.swap(a, b);
            self.pos[self.order[a]] = a;
            self.pos[self.order[b]] = b;
            a = if a + 1 == n { 0 } else { a + 1 };
            b = if b == 0 { n - 1 } else { b - 1 };
        }
    }
}

#[derive(Debug)]
struct SegmentPlan {
    heads: Vec<Vertex>,
    tails: Vec<Vertex>,
    // segment order after the exchange, segment 0 first and forward
    order: Vec<(usize, bool)>,
}

/// A closed sequential exchange `t1 .. t2k`.
///
/// Deleted edges are `x_l = (t_{2l-1}, t_{2l})`, added edges are
/// `y_l = (t_{2l}, t_{2l+1})` with `t_{2k+1} = t_1`. `ledger[l-1]` is the
/// prefix gain after the `l`-th pair; the last entry equals `gain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeMove<W> {
    pub t: Vec<Vertex>,
    pub gain: W,
    pub ledger: Vec<W>,
}

impl<W: Weight> ExchangeMove<W> {
    /// Builds a move from its vertex sequence, computing gains from `inst`.
    pub fn from_vertices(inst: &Instance<W>, t: Vec<Vertex>) -> Self {
        assert!(t.len() >= 2 && t.len() % 2 == 0, "need an even number of vertices");
        let k = t.len() / 2;
        let mut ledger = Vec::with_capacity(k);
        let mut g = W::zero();
        for l in 0..k {
            let x = inst.cost(t[2 * l], t[2 * l + 1]);
            let y = inst.cost(t[2 * l + 1], t[(2 * l + 2) % t.len()]);
            g = g + x - y;
            ledger.push(g);
        }
        Self { t, gain: g, ledger }
    }

    pub fn depth(&self) -> usize {
        self.t.len() / 2
    }

    pub fn deleted(&self) -> Vec<(Vertex, Vertex)> {
        self.t.chunks(2).map(|c| (c[0], c[1])).collect()
    }

    pub fn added(&self) -> Vec<(Vertex, Vertex)> {
        let m = self.t.len();
        (0..self.depth())
            .map(|l| (self.t[2 * l + 1], self.t[(2 * l + 2) % m]))
            .collect()
    }

    /// The exchange that deletes this move's added edges and restores its
    /// deleted ones.
    pub fn inverse(&self, inst: &Instance<W>) -> Self {
        let mut t = self.t.clone();
        t.rotate_left(1);
        Self::from_vertices(inst, t)
    }
}
