use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use lkgain::instance::parse_tsplib;
use lkgain::oracle::{held_karp_optimum, HELD_KARP_LIMIT};
use lkgain::{CandidateKind, GainKind, Instance, OptimaRegistry};

use crate::harness::{prepare_candidates, run_with_candidates, ExperimentConfig, RunReport};
use crate::report::{write_report, write_report_to};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CandidateArg {
    Alpha,
    Nearest,
}

impl From<CandidateArg> for CandidateKind {
    fn from(a: CandidateArg) -> Self {
        match a {
            CandidateArg::Alpha => CandidateKind::Alpha,
            CandidateArg::Nearest => CandidateKind::Nearest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GainArg {
    Strict,
    Homogeneous,
    Tilted,
}

impl From<GainArg> for GainKind {
    fn from(a: GainArg) -> Self {
        match a {
            GainArg::Strict => GainKind::Strict,
            GainArg::Homogeneous => GainKind::Homogeneous,
            GainArg::Tilted => GainKind::Tilted,
        }
    }
}

/// Run the sequential exchange heuristic on TSPLIB instances and write a
/// semicolon-separated result table.
#[derive(Debug, Parser)]
#[command(name = "lkgain", version)]
pub struct Args {
    /// TSPLIB file, or a directory whose `.tsp` files are all used.
    #[arg(long = "instance", required = true)]
    pub instances: Vec<PathBuf>,
    /// Known optima, one `name cost` pair per line.
    #[arg(long)]
    pub optima: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub max_candidates: usize,
    #[arg(long, value_enum, default_value_t = CandidateArg::Alpha)]
    pub candidate_set: CandidateArg,
    /// Repeat to compare criteria on the same candidate sets.
    #[arg(long = "gain-criterion", value_enum)]
    pub gain_criteria: Vec<GainArg>,
    /// Seconds per run, excluding candidate preprocessing.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub stop_at_optimum: bool,
    #[arg(long, default_value_t = 5)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 5)]
    pub feasibility_period: usize,
    /// Trials per run; defaults to the number of vertices.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub ascent_iterations: usize,
    /// Solve instances of at most 16 vertices exactly and use the optimum
    /// for the gap columns.
    #[arg(long)]
    pub oracle: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Args {
    fn base_config(&self) -> Result<ExperimentConfig> {
        let time_limit = match self.time_limit {
            None => None,
            Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => bail!("time limit must be a positive number of seconds, got {s}"),
        };
        let cfg = ExperimentConfig {
            runs: self.runs,
            max_candidates: self.max_candidates,
            candidate_kind: self.candidate_set.into(),
            policy: GainKind::Strict,
            seed: self.seed,
            time_limit,
            stop_at_optimum: self.stop_at_optimum,
            trials_per_run: self.trials,
            max_depth: self.max_depth,
            feasibility_period: self.feasibility_period,
            ascent_iterations: self.ascent_iterations,
            collect_ledgers: false,
        };
        for kind in self.policies() {
            ExperimentConfig { policy: kind, ..cfg.clone() }.validate()?;
        }
        Ok(cfg)
    }

    fn policies(&self) -> Vec<GainKind> {
        if self.gain_criteria.is_empty() {
            vec![GainKind::Strict]
        } else {
            let mut v: Vec<GainKind> = self.gain_criteria.iter().map(|&g| g.into()).collect();
            v.dedup();
            v
        }
    }
}

/// Expands directories into their `.tsp` files, sorted by name.
pub fn instance_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading directory {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x.eq_ignore_ascii_case("tsp")))
                .collect();
            found.sort();
            if found.is_empty() {
                bail!("no .tsp files in {}", p.display());
            }
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

pub fn load_instance(path: &Path) -> Result<Instance<i64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_tsplib(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn run(args: &Args) -> Result<Vec<RunReport>> {
    let base = args.base_config()?;
    let registry = match &args.optima {
        Some(p) => OptimaRegistry::load(p)
            .with_context(|| format!("reading {}", p.display()))?
            .with_context(|| format!("parsing {}", p.display()))?,
        None => OptimaRegistry::default(),
    };
    let mut reports = Vec::new();
    for file in instance_files(&args.instances)? {
        let inst = load_instance(&file)?;
        let mut optimum = registry.get(inst.name()).or(inst.known_optimum());
        if args.oracle {
            if inst.dimension() <= HELD_KARP_LIMIT {
                optimum = Some(held_karp_optimum(&inst)?.optimum);
            } else {
                log::warn!("{}: {} vertices, too many for the exact oracle", inst.name(), inst.dimension());
            }
        }
        let (cands, prep) = prepare_candidates(&inst, &base)?;
        log::info!("{}: {} vertices, candidates built in {:.3}s", inst.name(), inst.dimension(), prep.as_secs_f64());
        for policy in args.policies() {
            let cfg = ExperimentConfig { policy, ..base.clone() };
            let report = run_with_candidates(&inst, &cands, prep, optimum, &cfg)
                .with_context(|| format!("{} with {policy}", inst.name()))?;
            log::info!(
                "{} {policy}: best {} avg {:.2} time {:.3}s",
                report.problem,
                report.cost_min(),
                report.cost_avg(),
                report.time_avg()
            );
            reports.push(report);
        }
    }
    match &args.out {
        Some(path) => write_report(&reports, path).with_context(|| format!("writing {}", path.display()))?,
        None => write_report_to(&reports, std::io::stdout().lock())?,
    }
    Ok(reports)
}
