use crate::gain::GainLedger;
use crate::tour::ExchangeMove;
use crate::{Vertex, Weight};

/// Open alternating path `t_1 .. t_m` with prefix gains.
///
/// With `m` even the path ends after deleting `x_{m/2}`; with `m` odd it
/// ends after adding `y_{(m-1)/2}`. The ledger holds one prefix gain per
/// added edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingPath<W> {
    t: Vec<Vertex>,
    ledger: GainLedger<W>,
}

fn same_edge(a: (Vertex, Vertex), b: (Vertex, Vertex)) -> bool {
    a == b || (a.0 == b.1 && a.1 == b.0)
}

impl<W: Weight> AlternatingPath<W> {
    pub fn new(t1: Vertex) -> Self {
        Self { t: vec![t1], ledger: GainLedger::new() }
    }

    /// Panics unless `ledger` has one entry per added edge.
    pub fn from_parts(t: Vec<Vertex>, ledger: GainLedger<W>) -> Self {
        assert!(!t.is_empty());
        assert_eq!(ledger.len(), (t.len() - 1) / 2, "one prefix gain per added edge");
        Self { t, ledger }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.t
    }

    pub fn ledger(&self) -> &GainLedger<W> {
        &self.ledger
    }

    pub fn t1(&self) -> Vertex {
        self.t[0]
    }

    pub fn last(&self) -> Vertex {
        *self.t.last().expect("path is never empty")
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of deleted edges so far.
    pub fn deleted_count(&self) -> usize {
        self.t.len() / 2
    }

    /// Whether the path ends with a deleted edge.
    pub fn ends_deleted(&self) -> bool {
        self.t.len() % 2 == 0
    }

    /// `x_l`, 1-based.
    pub fn x(&self, l: usize) -> (Vertex, Vertex) {
        (self.t[2 * l - 2], self.t[2 * l - 1])
    }

    /// `y_l`, 1-based.
    pub fn y(&self, l: usize) -> (Vertex, Vertex) {
        (self.t[2 * l - 1], self.t[2 * l])
    }

    pub fn deleted(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (1..=self.deleted_count()).map(|l| self.x(l))
    }

    pub fn added(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (1..=self.ledger.len()).map(|l| self.y(l))
    }

    pub fn contains_deleted(&self, a: Vertex, b: Vertex) -> bool {
        self.deleted().any(|e| same_edge(e, (a, b)))
    }

    pub fn contains_added(&self, a: Vertex, b: Vertex) -> bool {
        self.added().any(|e| same_edge(e, (a, b)))
    }

    pub fn push_deleted(&mut self, v: Vertex) {
        debug_assert!(!self.ends_deleted());
        self.t.push(v);
    }

    pub fn pop_deleted(&mut self) {
        debug_assert!(self.ends_deleted());
        self.t.pop();
    }

    /// Adds `y_i` ending at `v` with prefix gain `g_i`.
    pub fn push_added(&mut self, v: Vertex, g_i: W) {
        debug_assert!(self.ends_deleted());
        self.t.push(v);
        self.ledger.push_step(g_i - self.ledger.last());
    }

    pub fn pop_added(&mut self) {
        debug_assert!(!self.ends_deleted() && self.t.len() > 1);
        self.t.pop();
        self.ledger.pop();
    }

    /// Disjunctivity: no `x_{jr}` equals an earlier `y`.
    pub fn disjunctive(&self, r: usize) -> bool {
        (1..=self.deleted_count())
            .filter(|l| l % r == 0)
            .all(|l| (1..l).all(|m| !same_edge(self.x(l), self.y(m))))
    }

    /// Closes a path that ends with a deleted edge, giving the final gain.
    pub fn close(&self, gain: W) -> ExchangeMove<W> {
        debug_assert!(self.ends_deleted());
        let mut ledger = self.ledger.as_slice().to_vec();
        ledger.push(gain);
        ExchangeMove { t: self.t.clone(), gain, ledger }
    }
}

impl<W: Weight> From<&ExchangeMove<W>> for AlternatingPath<W> {
    /// The open path of a move, without its closing edge.
    fn from(m: &ExchangeMove<W>) -> Self {
        let k = m.ledger.len();
        Self::from_parts(m.t.clone(), GainLedger::from_prefix(m.ledger[..k - 1].to_vec()))
    }
}
