//! Ranked candidate edges per vertex.

mod alpha;
mod onetree;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::instance::Instance;
use crate::{Vertex, Weight};

pub use alpha::{alpha_values, AlphaTable};
pub use onetree::{held_karp_ascent, minimum_one_tree, AscentResult, OneTree, PI_SCALE, SPECIAL};

pub const DEFAULT_MAX_CANDIDATES: usize = 5;
pub const DEFAULT_ASCENT_ITERATIONS: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CandidateError {
    #[error("inconsistent 1-tree: {0}")]
    TreeInconsistent(String),
    #[error("max_candidates must be at least 1")]
    NoCandidates,
    #[error("unknown candidate set kind `{0}`")]
    UnknownKind(String),
    #[error("candidate dump line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateKind {
    Alpha,
    Nearest,
}

impl CandidateKind {
    pub fn name(self) -> &'static str {
        match self {
            CandidateKind::Alpha => "alpha",
            CandidateKind::Nearest => "nearest",
        }
    }
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CandidateKind {
    type Err = CandidateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "ALPHA" => Ok(CandidateKind::Alpha),
            "NEAREST" | "NN" => Ok(CandidateKind::Nearest),
            _ => Err(CandidateError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub vertex: Vertex,
    pub rank_key: i64,
}

/// Per-vertex candidate lists, each ascending by `rank_key`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSets {
    lists: Vec<Vec<Candidate>>,
    kind: Option<CandidateKind>,
}

impl CandidateSets {
    /// Stable-sorts each list by `rank_key`, so ties keep their given order;
    /// self-loops and repeated neighbours are dropped.
    pub fn from_lists(mut lists: Vec<Vec<Candidate>>, kind: Option<CandidateKind>) -> Self {
        for (v, list) in lists.iter_mut().enumerate() {
            list.retain(|c| c.vertex != v);
            list.sort_by_key(|c| c.rank_key);
            let mut seen = std::collections::HashSet::new();
            list.retain(|c| seen.insert(c.vertex));
        }
        CandidateSets { lists, kind }
    }

    /// Every other vertex, ranked by edge cost.
    pub fn complete<W: Weight>(inst: &Instance<W>) -> Self {
        nn_candidates(inst, inst.dimension().saturating_sub(1).max(1))
            .expect("at least one candidate")
    }

    pub fn kind(&self) -> Option<CandidateKind> {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.lists.len()
    }

    pub fn get(&self, v: Vertex) -> &[Candidate] {
        &self.lists[v]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.lists[v].iter().map(|c| c.vertex)
    }

    pub fn contains(&self, v: Vertex, u: Vertex) -> bool {
        self.lists[v].iter().any(|c| c.vertex == u)
    }

    pub fn max_len(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// One line per vertex, `v: u(key) u(key) ...`, 1-based ids.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, list) in self.lists.iter().enumerate() {
            out.push_str(&format!("{}:", v + 1));
            for c in list {
                out.push_str(&format!(" {}({})", c.vertex + 1, c.rank_key));
            }
            out.push('\n');
        }
        out
    }

    pub fn load(text: &str) -> Result<Self, CandidateError> {
        let mut rows: Vec<(usize, Vec<Candidate>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: &str| CandidateError::Parse { line, message: message.to_string() };
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (head, rest) = raw.split_once(':').ok_or_else(|| err("missing `:`"))?;
            let v: usize = head.trim().parse().map_err(|_| err("bad vertex id"))?;
            if v == 0 {
                return Err(err("vertex ids are 1-based"));
            }
            let mut list = Vec::new();
            for token in rest.split_whitespace() {
                let (u, key) = token
                    .strip_suffix(')')
                    .and_then(|t| t.split_once('('))
                    .ok_or_else(|| err("expected `neighbor(rank_key)`"))?;
                let u: usize = u.parse().map_err(|_| err("bad neighbor id"))?;
                let rank_key: i64 = key.parse().map_err(|_| err("bad rank key"))?;
                if u == 0 {
                    return Err(err("vertex ids are 1-based"));
                }
                list.push(Candidate { vertex: u - 1, rank_key });
            }
            rows.push((v - 1, list));
        }
        let n = rows.len();
        let mut lists = vec![None; n];
        for (i, (v, list)) in rows.into_iter().enumerate() {
            let line = i + 1;
            if v >= n || lists[v].is_some() {
                return Err(CandidateError::Parse { line, message: format!("vertex {} repeated or out of range", v + 1) });
            }
            if list.iter().any(|c| c.vertex >= n) {
                return Err(CandidateError::Parse { line, message: "neighbor out of range".into() });
            }
            lists[v] = Some(list);
        }
        Ok(CandidateSets::from_lists(lists.into_iter().map(Option::unwrap).collect(), None))
    }
}

/// Keeps the `max` smallest entries of `row` under `key`, sorted.
fn smallest_by_key<T: Copy, K: Ord>(mut row: Vec<T>, max: usize, key: impl Fn(&T) -> K) -> Vec<T> {
    if row.len() > max {
        row.select_nth_unstable_by(max - 1, |a, b| key(a).cmp(&key(b)));
        row.truncate(max);
    }
    row.sort_by(|a, b| key(a).cmp(&key(b)));
    row
}

/// The `max_candidates` cheapest neighbours of each vertex.
pub fn nn_candidates<W: Weight>(inst: &Instance<W>, max_candidates: usize) -> Result<CandidateSets, CandidateError> {
    if max_candidates == 0 {
        return Err(CandidateError::NoCandidates);
    }
    let n = inst.dimension();
    let lists = (0..n)
        .map(|v| {
            let row: Vec<Candidate> = (0..n)
                .filter(|&u| u != v)
                .map(|u| Candidate { vertex: u, rank_key: inst.cost(v, u).to_i64_saturating() })
                .collect();
            smallest_by_key(row, max_candidates, |c| (c.rank_key, c.vertex))
        })
        .collect();
    Ok(CandidateSets { lists, kind: Some(CandidateKind::Nearest) })
}

/// Alpha-nearness candidates over an ascent-optimized 1-tree; also returns
/// the ascent so callers can report the bound.
pub fn alpha_candidates<W: Weight>(
    inst: &Instance<W>,
    max_candidates: usize,
    ascent_iterations: usize,
) -> Result<(CandidateSets, AscentResult), CandidateError> {
    if max_candidates == 0 {
        return Err(CandidateError::NoCandidates);
    }
    let n = inst.dimension();
    let ascent = held_karp_ascent(inst, ascent_iterations);
    let table = alpha_values(inst, &ascent.tree)?;
    let mut lists = Vec::with_capacity(n);
    for v in 0..n {
        let alphas = table.row(v);
        let row: Vec<(i64, i64, Vertex)> = (0..n)
            .filter(|&u| u != v)
            .map(|u| (alphas[u], table.penalized_cost(v, u), u))
            .collect();
        let kept = smallest_by_key(row, max_candidates, |&t| t);
        lists.push(kept.into_iter().map(|(a, _, u)| Candidate { vertex: u, rank_key: a }).collect());
    }
    log::debug!("alpha candidates: bound {:.3} after {} iterations", ascent.lower_bound(), ascent.history.len() - 1);
    Ok((CandidateSets { lists, kind: Some(CandidateKind::Alpha) }, ascent))
}

pub fn build_candidate_sets<W: Weight>(
    inst: &Instance<W>,
    kind: CandidateKind,
    max_candidates: usize,
    ascent_iterations: usize,
) -> Result<CandidateSets, CandidateError> {
    match kind {
        CandidateKind::Nearest => nn_candidates(inst, max_candidates),
        CandidateKind::Alpha => alpha_candidates(inst, max_candidates, ascent_iterations).map(|(sets, _)| sets),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures;

    #[test]
    fn hexagon_nearest_two() {
        let inst = fixtures::hexagon::<i64>();
        let sets = nn_candidates(&inst, 2).unwrap();
        let a: Vec<_> = sets.get(0).iter().map(|c| (c.vertex, c.rank_key)).collect();
        assert_eq!(a, vec![(5, 3), (1, 4)]);
    }

    #[test]
    fn zero_candidates_rejected() {
        let inst = fixtures::hexagon::<i64>();
        assert_eq!(nn_candidates(&inst, 0), Err(CandidateError::NoCandidates));
        assert!(build_candidate_sets(&inst, CandidateKind::Alpha, 0, 10).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let inst = fixtures::hexagon::<i64>();
        let sets = build_candidate_sets(&inst, CandidateKind::Alpha, 3, 20).unwrap();
        let text = sets.dump();
        assert!(text.starts_with("1:"));
        let back = CandidateSets::load(&text).unwrap();
        assert_eq!(back.lists, sets.lists);
        assert_eq!(back.kind(), None);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(CandidateSets::load("1 2(3)"), Err(CandidateError::Parse { line: 1, .. })));
        assert!(CandidateSets::load("1: 2(x)\n2: 1(0)").is_err());
        assert!(CandidateSets::load("1: 3(0)\n2: 1(0)").is_err());
        assert!(CandidateSets::load("1: 2(0)\n1: 2(0)").is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("alpha".parse::<CandidateKind>().unwrap(), CandidateKind::Alpha);
        assert_eq!("NEAREST".parse::<CandidateKind>().unwrap(), CandidateKind::Nearest);
        assert!("popmusic".parse::<CandidateKind>().is_err());
    }
}
