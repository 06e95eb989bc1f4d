//! Admission rules for extending an alternating path.
//!
//! After deleting `x_i` the search may add `y_i` only if the policy admits
//! the prefix gain `G_i = sum_{l <= i} c(x_l) - c(y_l)`:
//!
//! * [`GainKind::Strict`]: `G_i > 0`.
//! * [`GainKind::Homogeneous`]: `G_i > 0`, or `G_{i-1} > 0` with `G_0`
//!   taken as positive. Two consecutive non-positive prefix gains are
//!   never admitted.
//! * [`GainKind::Tilted`]: as homogeneous, but a non-positive `G_i` with
//!   `i - 1` a multiple of the period `k` additionally needs `G_{i-2} > 0`,
//!   and the sign assumed for `G_0` is carried over from the previous move.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GainError {
    #[error("step indices start at 1")]
    StepIndexInvalid,
    #[error("tilted period must be at least 2, got {0}")]
    InvalidPeriod(usize),
    #[error("unknown gain criterion {0:?}")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GainKind {
    Strict,
    Homogeneous,
    Tilted,
}

impl GainKind {
    pub const ALL: [GainKind; 3] = [GainKind::Strict, GainKind::Homogeneous, GainKind::Tilted];

    pub fn name(self) -> &'static str {
        match self {
            GainKind::Strict => "strict",
            GainKind::Homogeneous => "homogeneous",
            GainKind::Tilted => "tilted",
        }
    }
}

impl fmt::Display for GainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GainKind {
    type Err = GainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(GainKind::Strict),
            "homogeneous" => Ok(GainKind::Homogeneous),
            "tilted" => Ok(GainKind::Tilted),
            _ => Err(GainError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GainPolicy {
    kind: GainKind,
    period: usize,
}

/// Per-run search state consulted by [`GainPolicy::admits`].
///
/// `violated` is true iff the last recorded prefix gain was non-positive,
/// `prev_violated` the same one step earlier. Before the first step of a
/// move both reflect the assumed sign of `G_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GainState {
    pub violated: bool,
    pub prev_violated: bool,
    pub g0_positive: bool,
}

impl GainPolicy {
    pub fn new(kind: GainKind, period: usize) -> Result<Self, GainError> {
        if kind == GainKind::Tilted && period < 2 {
            return Err(GainError::InvalidPeriod(period));
        }
        Ok(Self {
            kind,
            period: period.max(1),
        })
    }

    pub fn strict() -> Self {
        Self { kind: GainKind::Strict, period: 5 }
    }

    pub fn homogeneous() -> Self {
        Self { kind: GainKind::Homogeneous, period: 5 }
    }

    pub fn tilted(period: usize) -> Result<Self, GainError> {
        Self::new(GainKind::Tilted, period)
    }

    pub fn kind(&self) -> GainKind {
        self.kind
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// State at the start of a run: no violation, `G_0` positive.
    pub fn init_state(&self) -> GainState {
        GainState {
            violated: false,
            prev_violated: false,
            g0_positive: true,
        }
    }

    fn assumed_g0_positive(&self, state: GainState) -> bool {
        match self.kind {
            GainKind::Tilted => state.g0_positive,
            GainKind::Strict | GainKind::Homogeneous => true,
        }
    }

    /// Resets the per-move flags before step 1 of a new alternating path.
    pub fn begin_move(&self, state: GainState) -> GainState {
        let violated = !self.assumed_g0_positive(state);
        GainState {
            violated,
            prev_violated: violated,
            g0_positive: state.g0_positive,
        }
    }

    /// Whether `y_i` may be added given `G_i` and `G_{i-1}`. For `i = 1`,
    /// `g_prev` is ignored in favour of the assumed `G_0`.
    pub fn admits<W: Weight>(
        &self,
        state: GainState,
        i: usize,
        g_i: W,
        g_prev: W,
    ) -> Result<bool, GainError> {
        if i == 0 {
            return Err(GainError::StepIndexInvalid);
        }
        if g_i > W::zero() {
            return Ok(true);
        }
        let prev_positive = if i == 1 {
            self.assumed_g0_positive(state)
        } else {
            g_prev > W::zero()
        };
        Ok(match self.kind {
            GainKind::Strict => false,
            GainKind::Homogeneous => prev_positive,
            GainKind::Tilted => {
                prev_positive && ((i - 1) % self.period != 0 || !state.prev_violated)
            }
        })
    }

    /// State after admitting step `i` with prefix gain `g_i`.
    pub fn record<W: Weight>(&self, state: GainState, _i: usize, g_i: W) -> GainState {
        let violated = g_i <= W::zero();
        debug_assert!(!(self.kind == GainKind::Strict && violated), "strict admitted G <= 0");
        GainState {
            violated,
            prev_violated: state.violated,
            g0_positive: state.g0_positive,
        }
    }

    /// Carries the gain sign into the next move (tilted only): the sign of
    /// the last `G_i`, or of `G_{i-1}` when `i` is a multiple of the period.
    pub fn finish_move<W: Weight>(&self, state: GainState, i: usize, g_i: W, g_prev: W) -> GainState {
        if self.kind != GainKind::Tilted || i == 0 {
            return state;
        }
        let g0_positive = if i % self.period == 0 {
            g_prev > W::zero()
        } else {
            g_i > W::zero()
        };
        GainState { g0_positive, ..state }
    }
}

/// Prefix gains `G_1 .. G_i` of an alternating path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GainLedger<W> {
    prefix: Vec<W>,
}

impl<W: Weight> GainLedger<W> {
    pub fn new() -> Self {
        Self { prefix: Vec::new() }
    }

    pub fn from_prefix(prefix: Vec<W>) -> Self {
        Self { prefix }
    }

    /// Appends step gain `g = c(x) - c(y)`.
    pub fn push_step(&mut self, g: W) -> W {
        let total = self.last() + g;
        self.prefix.push(total);
        total
    }

    pub fn pop(&mut self) -> Option<W> {
        self.prefix.pop()
    }

    /// `G_i`, with `G_0 = 0`.
    pub fn prefix(&self, i: usize) -> W {
        if i == 0 {
            W::zero()
        } else {
            self.prefix[i - 1]
        }
    }

    /// Step gain `g_i = G_i - G_{i-1}`.
    pub fn step(&self, i: usize) -> W {
        self.prefix(i) - self.prefix(i - 1)
    }

    pub fn last(&self) -> W {
        self.prefix.last().copied().unwrap_or_else(W::zero)
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn as_slice(&self) -> &[W] {
        &self.prefix
    }

    pub fn all_positive(&self) -> bool {
        self.prefix.iter().all(|&g| g > W::zero())
    }

    /// Whether two adjacent prefix gains are both non-positive.
    pub fn has_consecutive_nonpositive(&self) -> bool {
        has_consecutive_nonpositive(&self.prefix)
    }
}

pub fn has_consecutive_nonpositive<W: Weight>(prefix: &[W]) -> bool {
    prefix.windows(2).any(|w| w[0] <= W::zero() && w[1] <= W::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn admit_sequence(policy: GainPolicy, state: GainState, gains: &[i64]) -> (bool, GainState) {
        let mut st = policy.begin_move(state);
        let mut prev = 0;
        for (k, &g) in gains.iter().enumerate() {
            let i = k + 1;
            if !policy.admits(st, i, g, prev).unwrap() {
                return (false, st);
            }
            st = policy.record(st, i, g);
            prev = g;
        }
        (true, st)
    }

    #[test]
    fn initial_states() {
        for p in [GainPolicy::strict(), GainPolicy::homogeneous(), GainPolicy::tilted(5).unwrap()] {
            let s = p.init_state();
            assert!(!s.violated);
            assert!(s.g0_positive);
        }
    }

    #[test]
    fn first_step_of_the_three_exchange() {
        let s = GainPolicy::strict();
        let h = GainPolicy::homogeneous();
        assert_eq!(s.admits(s.begin_move(s.init_state()), 1, -1i64, 0), Ok(false));
        assert_eq!(h.admits(h.begin_move(h.init_state()), 1, -1i64, 0), Ok(true));
        assert_eq!(admit_sequence(h, h.init_state(), &[-1, -2]).0, false);
        assert_eq!(admit_sequence(h, h.init_state(), &[-1, 1, 4]).0, true);
    }

    #[test]
    fn record_tracks_violation() {
        let h = GainPolicy::homogeneous();
        let st = h.record(h.begin_move(h.init_state()), 1, -1i64);
        assert!(st.violated);
        let st = h.record(st, 2, 1i64);
        assert!(!st.violated);
        assert!(st.prev_violated);
    }

    #[test]
    fn step_index_zero() {
        let h = GainPolicy::homogeneous();
        assert_eq!(h.admits(h.init_state(), 0, 1i64, 0), Err(GainError::StepIndexInvalid));
    }

    #[test]
    fn tilted_period_validation() {
        assert_eq!(GainPolicy::tilted(1), Err(GainError::InvalidPeriod(1)));
        assert!(GainPolicy::tilted(2).is_ok());
    }

    #[test]
    fn tilted_carries_sign() {
        let t = GainPolicy::tilted(3).unwrap();
        let st = t.init_state();
        // a move ending at i = 3 (multiple of 3) takes the sign of G_2
        let after = t.finish_move(st, 3, -5i64, 2);
        assert!(after.g0_positive);
        let after = t.finish_move(st, 3, 5i64, -2);
        assert!(!after.g0_positive);
        let after = t.finish_move(st, 2, -1i64, 4);
        assert!(!after.g0_positive);
        // with G_0 negative the first step must be positive
        let neg = GainState { g0_positive: false, ..st };
        assert_eq!(admit_sequence(t, neg, &[-1]).0, false);
        assert_eq!(admit_sequence(t, neg, &[2, -1, 3]).0, true);
        // homogeneous ignores the carried sign
        let h = GainPolicy::homogeneous();
        assert_eq!(admit_sequence(h, neg, &[-1]).0, true);
    }

    #[test]
    fn tilted_restricts_at_period_boundary() {
        let t = GainPolicy::tilted(2).unwrap();
        // i = 3: i - 1 = 2 is a multiple of 2, G_1 <= 0 forbids G_3 <= 0
        assert_eq!(admit_sequence(t, t.init_state(), &[-1, 3, -2]).0, false);
        assert_eq!(admit_sequence(t, t.init_state(), &[1, 3, -2]).0, true);
        let h = GainPolicy::homogeneous();
        assert_eq!(admit_sequence(h, h.init_state(), &[-1, 3, -2]).0, true);
    }

    #[test]
    fn ledger_arithmetic() {
        let mut l = GainLedger::<i64>::new();
        assert_eq!(l.push_step(3 - 4), -1);
        assert_eq!(l.push_step(6 - 4), 1);
        assert_eq!(l.push_step(6 - 3), 4);
        assert_eq!(l.as_slice(), &[-1, 1, 4]);
        assert_eq!(l.step(2), 2);
        assert!(!l.has_consecutive_nonpositive());
        assert!(!l.all_positive());
        assert!(GainLedger::from_prefix(vec![2i64, 0, -1]).has_consecutive_nonpositive());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("Tilted".parse::<GainKind>(), Ok(GainKind::Tilted));
        assert!("greedy".parse::<GainKind>().is_err());
    }
}
