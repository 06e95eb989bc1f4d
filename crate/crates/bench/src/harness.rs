use std::time::{Duration, Instant};

use lkgain::candidates::{alpha_candidates, nn_candidates, CandidateError};
use lkgain::engine::{EngineError, SearchStats};
use lkgain::{CandidateKind, CandidateSets, Engine, GainKind, Instance, SearchConfig, Tour, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error("no run completed a trial within the time limit")]
    NoRunCompleted,
    #[error(transparent)]
    Candidates(#[from] CandidateError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub max_candidates: usize,
    pub candidate_kind: CandidateKind,
    pub policy: GainKind,
    pub seed: u64,
    /// Wall-clock limit per run, excluding candidate preprocessing.
    pub time_limit: Option<Duration>,
    pub stop_at_optimum: bool,
    /// Trials per run; `None` means one per vertex.
    pub trials_per_run: Option<usize>,
    pub max_depth: usize,
    pub feasibility_period: usize,
    pub ascent_iterations: usize,
    /// Keep the prefix-gain ledger of every applied move.
    pub collect_ledgers: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            runs: 10,
            max_candidates: lkgain::candidates::DEFAULT_MAX_CANDIDATES,
            candidate_kind: CandidateKind::Alpha,
            policy: GainKind::Strict,
            seed: 1,
            time_limit: None,
            stop_at_optimum: false,
            trials_per_run: None,
            max_depth: lkgain::engine::DEFAULT_MAX_DEPTH,
            feasibility_period: lkgain::engine::DEFAULT_FEASIBILITY_PERIOD,
            ascent_iterations: lkgain::candidates::DEFAULT_ASCENT_ITERATIONS,
            collect_ledgers: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::InvalidConfig(m.to_string()));
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if self.trials_per_run == Some(0) {
            return bad("trials must be at least 1");
        }
        if self.max_candidates == 0 {
            return bad("max_candidates must be at least 1");
        }
        self.search_config()?;
        Ok(())
    }

    pub fn search_config(&self) -> Result<SearchConfig, HarnessError> {
        Ok(SearchConfig::with_depth(self.policy, self.max_depth, self.feasibility_period)?)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub run: usize,
    pub cost: i64,
    pub time: Duration,
    pub trials: usize,
    pub tour: Vec<Vertex>,
    pub valid: bool,
    pub stats: SearchStats,
    pub ledgers: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub problem: String,
    pub policy: GainKind,
    pub candidates: CandidateKind,
    pub optimum: Option<i64>,
    pub preprocessing: Duration,
    /// Completed runs only.
    pub runs: Vec<RunResult>,
}

fn gap(cost: f64, opt: i64) -> f64 {
    100.0 * (cost - opt as f64) / opt as f64
}

impl RunReport {
    pub fn cost_min(&self) -> i64 {
        self.runs.iter().map(|r| r.cost).min().expect("report has a completed run")
    }

    pub fn cost_avg(&self) -> f64 {
        self.runs.iter().map(|r| r.cost as f64).sum::<f64>() / self.runs.len() as f64
    }

    pub fn gap_min(&self) -> Option<f64> {
        self.optimum.map(|o| gap(self.cost_min() as f64, o))
    }

    pub fn gap_avg(&self) -> Option<f64> {
        self.optimum.map(|o| gap(self.cost_avg(), o))
    }

    /// Mean wall time per run in seconds.
    pub fn time_avg(&self) -> f64 {
        self.runs.iter().map(|r| r.time.as_secs_f64()).sum::<f64>() / self.runs.len() as f64
    }

    pub fn invariant_violations(&self) -> u64 {
        self.runs.iter().map(|r| r.stats.invariant_violations + u64::from(!r.valid)).sum()
    }
}

/// Candidate sets for `cfg` and the time spent building them.
pub fn prepare_candidates(inst: &Instance<i64>, cfg: &ExperimentConfig) -> Result<(CandidateSets, Duration), HarnessError> {
    let start = Instant::now();
    let sets = match cfg.candidate_kind {
        CandidateKind::Nearest => nn_candidates(inst, cfg.max_candidates)?,
        CandidateKind::Alpha => {
            let (sets, ascent) = alpha_candidates(inst, cfg.max_candidates, cfg.ascent_iterations)?;
            log::info!("{}: Held-Karp bound {:.1}", inst.name(), ascent.lower_bound());
            sets
        }
    };
    Ok((sets, start.elapsed()))
}

pub fn run_experiment(inst: &Instance<i64>, cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    cfg.validate()?;
    let (cands, preprocessing) = prepare_candidates(inst, cfg)?;
    run_with_candidates(inst, &cands, preprocessing, inst.known_optimum(), cfg)
}

/// Runs `cfg.runs` independent runs over prebuilt candidate sets.
pub fn run_with_candidates(
    inst: &Instance<i64>,
    cands: &CandidateSets,
    preprocessing: Duration,
    optimum: Option<i64>,
    cfg: &ExperimentConfig,
) -> Result<RunReport, HarnessError> {
    cfg.validate()?;
    let search = cfg.search_config()?;
    let mut runs = Vec::with_capacity(cfg.runs);
    for run in 0..cfg.runs {
        match single_run(inst, cands, search, optimum, cfg, run)? {
            Some(r) => runs.push(r),
            None => log::warn!("{} run {run}: no trial completed", inst.name()),
        }
    }
    if runs.is_empty() {
        return Err(HarnessError::NoRunCompleted);
    }
    Ok(RunReport {
        problem: inst.name().to_string(),
        policy: cfg.policy,
        candidates: cfg.candidate_kind,
        optimum,
        preprocessing,
        runs,
    })
}

/// Generator for run `run`: the seed selects the key, the run the stream.
pub fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

fn single_run(
    inst: &Instance<i64>,
    cands: &CandidateSets,
    search: SearchConfig,
    optimum: Option<i64>,
    cfg: &ExperimentConfig,
    run: usize,
) -> Result<Option<RunResult>, HarnessError> {
    let mut rng = run_rng(cfg.seed, run);
    let start = Instant::now();
    let deadline = cfg.time_limit.map(|t| start + t);
    let mut engine = Engine::new(inst, cands, search)?;
    engine.record_moves(cfg.collect_ledgers);
    let trials = cfg.trials_per_run.unwrap_or(inst.dimension());
    let mut best: Option<Tour<i64>> = None;
    let mut completed = 0;
    let mut ledgers = Vec::new();

    for trial in 0..trials {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let mut tour = match &best {
            None => Tour::random(inst, &mut rng),
            Some(b) => restart_tour(b, inst, cands, &mut rng),
        };
        let outcome = engine.run_trial_until(&mut tour, &mut rng, deadline);
        ledgers.extend(engine.take_recorded_moves().into_iter().map(|m| m.ledger));
        if outcome.completed {
            completed += 1;
        }
        log::debug!("{} run {run} trial {trial}: cost {}", inst.name(), tour.cost());
        if best.as_ref().map_or(true, |b| tour.cost() < b.cost()) {
            best = Some(tour);
        }
        let cost = best.as_ref().map(|b| b.cost()).unwrap_or(i64::MAX);
        if cfg.stop_at_optimum && optimum.is_some_and(|o| cost <= o) {
            break;
        }
    }
    let time = start.elapsed();
    if completed == 0 {
        return Ok(None);
    }
    let best = best.expect("a completed trial produced a tour");
    Ok(Some(RunResult {
        run,
        cost: best.cost(),
        time,
        trials: completed,
        valid: best.validate(inst).is_ok() && inst.tour_cost(best.order()).ok() == Some(best.cost()),
        tour: best.order().to_vec(),
        stats: engine.stats(),
        ledgers,
    }))
}

/// Greedy tour from a random vertex: follow a candidate edge of `best` when
/// possible, else a random unvisited candidate, else the nearest unvisited
/// vertex.
pub fn restart_tour<R: Rng + ?Sized>(best: &Tour<i64>, inst: &Instance<i64>, cands: &CandidateSets, rng: &mut R) -> Tour<i64> {
    let n = inst.dimension();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = rng.gen_range(0..n);
    visited[current] = true;
    order.push(current);
    while order.len() < n {
        let open: Vec<Vertex> = cands.neighbors(current).filter(|&u| !visited[u]).collect();
        let next = open
            .iter()
            .copied()
            .find(|&u| best.has_edge(current, u))
            .or_else(|| open.choose(rng).copied())
            .unwrap_or_else(|| {
                (0..n)
                    .filter(|&u| !visited[u])
                    .min_by_key(|&u| (inst.cost(current, u), u))
                    .expect("an unvisited vertex remains")
            });
        visited[next] = true;
        order.push(next);
        current = next;
    }
    Tour::from_order(inst, order).expect("construction visits every vertex once")
}
