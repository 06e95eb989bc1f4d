//! Variable-depth sequential exchange search.
//!
//! From a starting vertex `t1` the engine alternately deletes a tour edge
//! `x_i` and adds a candidate edge `y_i`, admitting `y_i` through the
//! configured [`GainPolicy`]. After every deletion from the second on it
//! tries to close the path with the edge `(t_{2i}, t1)`; the first closing
//! with positive total gain that yields a tour is applied.

mod path;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::candidates::CandidateSets;
use crate::gain::{GainKind, GainPolicy, GainState};
use crate::instance::Instance;
use crate::tour::{ExchangeMove, Tour};
use crate::{Vertex, Weight};

pub use path::AlternatingPath;

pub const DEFAULT_MAX_DEPTH: usize = 5;
pub const DEFAULT_FEASIBILITY_PERIOD: usize = 5;
pub const DEFAULT_BACKTRACK_DEPTH: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("candidate sets cover {sets} vertices, instance has {instance}")]
    CandidateMismatch { sets: usize, instance: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of deleted edges in one move.
    pub max_depth: usize,
    /// Closability is enforced when the depth is a multiple of this.
    pub feasibility_period: usize,
    /// Alternatives for `x_i` and `y_i` are tried only for `i` up to this.
    pub backtrack_depth: usize,
    pub policy: GainPolicy,
}

impl SearchConfig {
    /// Defaults with the given criterion; a tilted policy uses the move
    /// depth as its period.
    pub fn new(kind: GainKind) -> Self {
        Self::with_depth(kind, DEFAULT_MAX_DEPTH, DEFAULT_FEASIBILITY_PERIOD)
            .expect("default depth is valid")
    }

    pub fn with_depth(kind: GainKind, max_depth: usize, feasibility_period: usize) -> Result<Self, EngineError> {
        let policy = GainPolicy::new(kind, max_depth)
            .map_err(|e| EngineError::InvalidConfig(e.to_string()))?;
        let cfg = Self {
            max_depth,
            feasibility_period,
            backtrack_depth: DEFAULT_BACKTRACK_DEPTH,
            policy,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_depth < 2 {
            return Err(EngineError::InvalidConfig(format!("max_depth {} is below 2", self.max_depth)));
        }
        if self.feasibility_period < 1 {
            return Err(EngineError::InvalidConfig("feasibility_period must be positive".into()));
        }
        Ok(())
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self::new(GainKind::Strict)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub searches: u64,
    pub moves_applied: u64,
    pub total_gain: i64,
    /// Applied moves whose gain, ledger or edges broke an invariant.
    pub invariant_violations: u64,
    pub deepest_move: usize,
}

/// An admitted `y_i`: its far end, its rank in the candidate list and the
/// resulting prefix gain `G_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Addition<W> {
    pub vertex: Vertex,
    pub rank: usize,
    pub gain: W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub improvements: u64,
    /// False when the deadline stopped the trial early.
    pub completed: bool,
}

#[derive(Debug, Clone)]
pub struct Engine<'a, W: Weight> {
    inst: &'a Instance<W>,
    cands: &'a CandidateSets,
    cfg: SearchConfig,
    state: GainState,
    stats: SearchStats,
    recorded: Option<Vec<ExchangeMove<W>>>,
}

impl<'a, W: Weight> Engine<'a, W> {
    pub fn new(inst: &'a Instance<W>, cands: &'a CandidateSets, cfg: SearchConfig) -> Result<Self, EngineError> {
        cfg.validate()?;
        if cands.dimension() != inst.dimension() {
            return Err(EngineError::CandidateMismatch { sets: cands.dimension(), instance: inst.dimension() });
        }
        Ok(Self {
            inst,
            cands,
            cfg,
            state: cfg.policy.init_state(),
            stats: SearchStats::default(),
            recorded: None,
        })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn gain_state(&self) -> GainState {
        self.state
    }

    /// Back to the run-start gain state.
    pub fn reset_gain_state(&mut self) {
        self.state = self.cfg.policy.init_state();
    }

    /// Keep a copy of every applied move.
    pub fn record_moves(&mut self, on: bool) {
        self.recorded = if on { Some(Vec::new()) } else { None };
    }

    pub fn recorded_moves(&self) -> &[ExchangeMove<W>] {
        self.recorded.as_deref().unwrap_or(&[])
    }

    pub fn take_recorded_moves(&mut self) -> Vec<ExchangeMove<W>> {
        self.recorded.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Whether closing `path` (which ends with a deleted edge) with
    /// `(t_{2i}, t1)` yields a Hamiltonian cycle.
    pub fn close_up_is_tour(&self, tour: &Tour<W>, path: &AlternatingPath<W>) -> bool {
        debug_assert!(path.ends_deleted());
        let t1 = path.t1();
        let last = path.last();
        if last == t1 {
            return false;
        }
        let deleted: Vec<_> = path.deleted().collect();
        let mut added: Vec<_> = path.added().collect();
        added.push((last, t1));
        tour.exchange_is_tour(&deleted, &added).unwrap_or(false)
    }

    /// First candidate `y_i` at `t_{2i}`, scanning from rank `from_rank`,
    /// that the gain policy admits and that is neither a tour edge nor
    /// already added.
    pub fn find_sequential_edge_to_add(
        &self,
        tour: &Tour<W>,
        path: &AlternatingPath<W>,
        state: GainState,
        from_rank: usize,
    ) -> Option<Addition<W>> {
        debug_assert!(path.ends_deleted());
        let i = path.deleted_count();
        let (t_odd, t_even) = path.x(i);
        let g_prev = path.ledger().last();
        let base = g_prev + self.inst.cost(t_odd, t_even);
        let (succ, pred) = (tour.next(t_even), tour.prev(t_even));
        for (rank, cand) in self.cands.get(t_even).iter().enumerate().skip(from_rank) {
            let v = cand.vertex;
            if v == succ || v == pred || v == t_even || path.contains_added(t_even, v) {
                continue;
            }
            let g_i = base - self.inst.cost(t_even, v);
            if self.cfg.policy.admits(state, i, g_i, g_prev).unwrap_or(false) {
                return Some(Addition { vertex: v, rank, gain: g_i });
            }
        }
        None
    }

    /// Options for `t_{2i+2}` after adding `y_i`: the tour neighbours of
    /// `t_{2i+1}` whose edge is not yet deleted, passing disjunctivity and,
    /// at multiples of the feasibility period, closability. Ordered
    /// closable first, then by decreasing edge cost, successor first.
    pub fn select_next_deleted_edge(&self, tour: &Tour<W>, path: &mut AlternatingPath<W>) -> Vec<Vertex> {
        debug_assert!(!path.ends_deleted());
        let t = path.last();
        let j = path.deleted_count() + 1;
        let r = self.cfg.feasibility_period;
        let mut options: Vec<(bool, W, usize, Vertex)> = Vec::with_capacity(2);
        for (side, u) in [tour.next(t), tour.prev(t)].into_iter().enumerate() {
            if path.contains_deleted(t, u) || (j % r == 0 && path.contains_added(t, u)) {
                continue;
            }
            path.push_deleted(u);
            let closable = self.close_up_is_tour(tour, path);
            path.pop_deleted();
            if j % r == 0 && !closable {
                continue;
            }
            options.push((closable, self.inst.cost(t, u), side, u));
        }
        options.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
        options.into_iter().map(|o| o.3).collect()
    }

    /// The closed move if `path` has at least two deleted edges, closing it
    /// gains strictly and the result is a tour.
    pub fn try_close(&self, tour: &Tour<W>, path: &AlternatingPath<W>) -> Option<ExchangeMove<W>> {
        if !path.ends_deleted() || path.deleted_count() < 2 {
            return None;
        }
        let i = path.deleted_count();
        let (t_odd, t_even) = path.x(i);
        let gain = path.ledger().last() + self.inst.cost(t_odd, t_even) - self.inst.cost(t_even, path.t1());
        if gain <= W::zero() || !self.close_up_is_tour(tour, path) {
            return None;
        }
        Some(path.close(gain))
    }

    /// Searches for an improving move from `t1` and applies the first one
    /// found. Returns its gain.
    pub fn improve_from_vertex(&mut self, tour: &mut Tour<W>, t1: Vertex) -> Option<W> {
        self.stats.searches += 1;
        let state = self.cfg.policy.begin_move(self.state);
        let mut path = AlternatingPath::new(t1);
        let first = [tour.next(t1), tour.prev(t1)];
        let mut options: Vec<Vertex> = first.to_vec();
        options.sort_by(|&a, &b| self.inst.cost(t1, b).cmp(&self.inst.cost(t1, a)));
        let mut found = None;
        for t2 in options {
            path.push_deleted(t2);
            found = self.extend(tour, &mut path, state);
            path.pop_deleted();
            if found.is_some() {
                break;
            }
        }
        let m = found?;
        self.apply(tour, m)
    }

    fn extend(&self, tour: &Tour<W>, path: &mut AlternatingPath<W>, state: GainState) -> Option<ExchangeMove<W>> {
        if let Some(m) = self.try_close(tour, path) {
            return Some(m);
        }
        let i = path.deleted_count();
        if i >= self.cfg.max_depth {
            return None;
        }
        let branching = i <= self.cfg.backtrack_depth;
        let mut from_rank = 0;
        while let Some(add) = self.find_sequential_edge_to_add(tour, path, state, from_rank) {
            from_rank = add.rank + 1;
            path.push_added(add.vertex, add.gain);
            let next_state = self.cfg.policy.record(state, i, add.gain);
            let options = self.select_next_deleted_edge(tour, path);
            let width = if branching { options.len() } else { options.len().min(1) };
            for &t in &options[..width] {
                path.push_deleted(t);
                let found = self.extend(tour, path, next_state);
                path.pop_deleted();
                if found.is_some() {
                    path.pop_added();
                    return found;
                }
            }
            path.pop_added();
            if !branching {
                break;
            }
        }
        None
    }

    fn apply(&mut self, tour: &mut Tour<W>, m: ExchangeMove<W>) -> Option<W> {
        let before = tour.cost();
        if tour.apply_move(self.inst, &m).is_err() {
            self.stats.invariant_violations += 1;
            return None;
        }
        let k = m.depth();
        let policy = self.cfg.policy;
        let ledger_ok = match policy.kind() {
            GainKind::Strict => m.ledger.iter().all(|&g| g > W::zero()),
            GainKind::Homogeneous | GainKind::Tilted => !crate::gain::has_consecutive_nonpositive(&m.ledger),
        };
        let path = AlternatingPath::from(&m);
        if m.gain <= W::zero()
            || tour.cost() != before - m.gain
            || !ledger_ok
            || !path.disjunctive(self.cfg.feasibility_period)
        {
            self.stats.invariant_violations += 1;
        }
        let g_prev = if k >= 2 { m.ledger[k - 2] } else { W::zero() };
        self.state = policy.finish_move(self.state, k, m.gain, g_prev);
        self.stats.moves_applied += 1;
        self.stats.total_gain += m.gain.to_i64_saturating();
        self.stats.deepest_move = self.stats.deepest_move.max(k);
        log::trace!("applied {k}-exchange, gain {}", m.gain);
        if let Some(rec) = self.recorded.as_mut() {
            rec.push(m.clone());
        }
        Some(m.gain)
    }

    /// One trial over a shuffled vertex order.
    pub fn run_trial<R: Rng + ?Sized>(&mut self, tour: &mut Tour<W>, rng: &mut R) -> TrialOutcome {
        self.run_trial_until(tour, rng, None)
    }

    pub fn run_trial_until<R: Rng + ?Sized>(
        &mut self,
        tour: &mut Tour<W>,
        rng: &mut R,
        deadline: Option<Instant>,
    ) -> TrialOutcome {
        let mut order: Vec<Vertex> = (0..tour.len()).collect();
        order.shuffle(rng);
        self.run_trial_with_order(tour, &order, deadline)
    }

    /// Cycles through `order` as starting vertices, continuing after each
    /// improvement, until every vertex has failed in a row.
    pub fn run_trial_with_order(
        &mut self,
        tour: &mut Tour<W>,
        order: &[Vertex],
        deadline: Option<Instant>,
    ) -> TrialOutcome {
        let n = order.len();
        let mut improvements = 0;
        let mut failures = 0;
        let mut idx = 0;
        while failures < n {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return TrialOutcome { improvements, completed: false };
            }
            if self.improve_from_vertex(tour, order[idx]).is_some() {
                improvements += 1;
                failures = 0;
            } else {
                failures += 1;
            }
            idx = (idx + 1) % n;
        }
        TrialOutcome { improvements, completed: true }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{self, HEXAGON_START_TOUR};

    fn setup() -> (Instance<i64>, CandidateSets) {
        let inst = fixtures::hexagon::<i64>();
        let cands = CandidateSets::complete(&inst);
        (inst, cands)
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::with_depth(GainKind::Strict, 1, 5).is_err());
        assert!(SearchConfig::with_depth(GainKind::Strict, 3, 0).is_err());
        assert_eq!(SearchConfig::new(GainKind::Tilted).policy.period(), 5);
    }

    #[test]
    fn try_close_needs_two_deletions() {
        let (inst, cands) = setup();
        let tour = Tour::from_order(&inst, HEXAGON_START_TOUR.to_vec()).unwrap();
        let engine = Engine::new(&inst, &cands, SearchConfig::default()).unwrap();
        let mut path = AlternatingPath::new(0);
        path.push_deleted(3);
        assert_eq!(engine.try_close(&tour, &path), None);
    }

    #[test]
    fn mismatched_candidates() {
        let (inst, _) = setup();
        let other = CandidateSets::from_lists(vec![Vec::new(); 4], None);
        assert!(matches!(
            Engine::new(&inst, &other, SearchConfig::default()),
            Err(EngineError::CandidateMismatch { sets: 4, instance: 6 })
        ));
    }

    #[test]
    fn empty_candidate_list_finds_nothing() {
        let (inst, _) = setup();
        let empty = CandidateSets::from_lists(vec![Vec::new(); 6], None);
        let tour = Tour::from_order(&inst, HEXAGON_START_TOUR.to_vec()).unwrap();
        let engine = Engine::new(&inst, &empty, SearchConfig::new(GainKind::Homogeneous)).unwrap();
        let mut path = AlternatingPath::new(0);
        path.push_deleted(3);
        let state = engine.config().policy.begin_move(engine.gain_state());
        assert_eq!(engine.find_sequential_edge_to_add(&tour, &path, state, 0), None);
    }
}
