//! Command-line front end: `solve`, `check` and `bench`.

mod stats;

pub use stats::{aggregate, parse_stats, shifted_geomean, write_stats, Aggregate, RunStats, StatsError};

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounding::BoundingStrategy;
use crate::certificate::{check_certificate, Certificate};
use crate::model::{parse_mps_with_sense, write_solution, Model, ObjSense};
use crate::tree::{solve, Config, SolveOutput, SolveStatus};

/// Shift for time aggregates, in seconds.
pub const TIME_SHIFT: f64 = 0.001;
/// Shift for node aggregates.
pub const NODE_SHIFT: f64 = 100.0;

#[derive(Debug, Parser)]
#[command(name = "ratmip", version, about = "Exact rational MIP solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Write the certificate here (turns presolve off).
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
        /// Write the solution here.
        #[arg(long, value_name = "PATH")]
        solution: Option<PathBuf>,
    },
    /// Verify a certificate against its instance.
    Check {
        instance: PathBuf,
        certificate: PathBuf,
        /// The instance maximises its objective.
        #[arg(long)]
        maximize: bool,
    },
    /// Solve a batch of instances over several seeds and aggregate.
    Bench {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[command(flatten)]
        opts: SolveOpts,
        /// Number of seeds per instance, starting at --seed.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Comma-separated strategies, one aggregate row each.
        #[arg(long, value_delimiter = ',', default_value = "auto")]
        compare: Vec<BoundingArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

impl Toggle {
    fn on(self) -> bool {
        self == Toggle::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundingArg {
    Auto,
    Bshift,
    Pshift,
    Exlp,
}

impl From<BoundingArg> for BoundingStrategy {
    fn from(b: BoundingArg) -> Self {
        match b {
            BoundingArg::Auto => BoundingStrategy::Auto,
            BoundingArg::Bshift => BoundingStrategy::Bshift,
            BoundingArg::Pshift => BoundingStrategy::Pshift,
            BoundingArg::Exlp => BoundingStrategy::Exlp,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveOpts {
    /// Seconds.
    #[arg(long, default_value_t = 7200.0)]
    pub time_limit: f64,
    #[arg(long)]
    pub node_limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "on")]
    pub presolve: Toggle,
    #[arg(long, value_enum, default_value = "on")]
    pub heuristics: Toggle,
    #[arg(long, value_enum, default_value = "auto")]
    pub bounding: BoundingArg,
    #[arg(long, default_value_t = 5)]
    pub exlp_depth: usize,
    /// Append tab-separated per-run statistics here.
    #[arg(long, value_name = "PATH")]
    pub stats: Option<PathBuf>,
    /// Read the objective as maximisation.
    #[arg(long)]
    pub maximize: bool,
}

impl SolveOpts {
    pub fn config(&self) -> Config {
        Config {
            time_limit: Some(Duration::from_secs_f64(self.time_limit.max(0.0))),
            node_limit: self.node_limit,
            seed: self.seed,
            presolve: self.presolve.on(),
            heuristics: self.heuristics.on(),
            bounding: self.bounding.into(),
            exlp_depth: self.exlp_depth,
            ..Config::default()
        }
    }

    fn sense(&self) -> ObjSense {
        if self.maximize {
            ObjSense::Maximize
        } else {
            ObjSense::Minimize
        }
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const REJECTED: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
    pub const LIMIT: i32 = 3;
}

fn load(path: &Path, sense: ObjSense) -> Result<Model, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_mps_with_sense(&text, sense).map_err(|e| format!("{}: {e}", path.display()))
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Per-run record of a finished solve.
pub fn run_stats(instance: &str, seed: u64, out: &SolveOutput, time_limit: f64) -> RunStats {
    let r = &out.result;
    RunStats {
        instance: instance.to_string(),
        seed,
        status: r.status,
        objective: r.objective(),
        nodes: r.nodes,
        time: r.timings.total.as_secs_f64(),
        dbtime: r.bounding.time.map(|d| d.as_secs_f64()),
        gap: r.gap.clone(),
        time_limit,
    }
}

pub fn cmd_solve(
    instance: &Path,
    opts: &SolveOpts,
    certificate: Option<&Path>,
    solution: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let model = match load(instance, opts.sense()) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::INPUT_ERROR;
        }
    };
    let mut config = opts.config();
    config.certificate = certificate.is_some();
    let res = solve(&model, &config);
    for w in &res.result.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let stats = run_stats(&instance_name(instance), opts.seed, &res, opts.time_limit);
    let _ = writeln!(out, "{}", stats.line());
    let _ = write!(out, "{}", stats.table(&res.result.reported_dual_bound()));

    let mut code = if res.result.status.is_solved() { exit::OK } else { exit::LIMIT };
    let mut write_file = |path: &Path, text: String, what: &str| {
        if let Err(e) = fs::write(path, text) {
            let _ = writeln!(err, "error: writing {what} {}: {e}", path.display());
            code = exit::INPUT_ERROR;
        }
    };
    if let (Some(path), Some(sol)) = (solution, &res.result.incumbent) {
        write_file(path, write_solution(&model, sol), "solution");
    }
    if let Some(path) = certificate {
        match &res.certificate {
            Some(cert) => write_file(path, cert.to_text(), "certificate"),
            None => {
                let _ = writeln!(err, "warning: no certificate for status {}", res.result.status);
            }
        }
    }
    if let Some(path) = &opts.stats {
        if let Err(e) = write_stats(path, std::slice::from_ref(&stats)) {
            let _ = writeln!(err, "error: {e}");
            code = exit::INPUT_ERROR;
        }
    }
    code
}

pub fn cmd_check(instance: &Path, certificate: &Path, maximize: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let sense = if maximize { ObjSense::Maximize } else { ObjSense::Minimize };
    let model = match load(instance, sense) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::INPUT_ERROR;
        }
    };
    let cert = match fs::read_to_string(certificate).map_err(|e| e.to_string()).and_then(|t| {
        Certificate::parse(&t).map_err(|e| e.to_string())
    }) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", certificate.display());
            return exit::INPUT_ERROR;
        }
    };
    match check_certificate(&model, &cert) {
        Ok(report) => {
            let _ = writeln!(
                out,
                "accepted: {} constraints, {} derivations, {} solutions",
                report.constraints, report.derivations, report.solutions
            );
            exit::OK
        }
        Err(e) => {
            let _ = writeln!(out, "rejected: {e}");
            exit::REJECTED
        }
    }
}

/// Runs every instance, seed and strategy; returns per-run records in
/// input order and one aggregate per strategy.
pub fn bench(
    models: &[(String, Model)],
    opts: &SolveOpts,
    seeds: u64,
    strategies: &[BoundingStrategy],
) -> (Vec<RunStats>, Vec<(BoundingStrategy, Aggregate)>) {
    let jobs: Vec<(BoundingStrategy, usize, u64)> = strategies
        .iter()
        .flat_map(|&s| (0..models.len()).flat_map(move |i| (0..seeds.max(1)).map(move |k| (s, i, k))))
        .collect();
    let runs: Vec<(BoundingStrategy, RunStats)> = jobs
        .par_iter()
        .map(|&(strategy, i, k)| {
            let seed = opts.seed + k;
            let config = Config { seed, bounding: strategy, ..opts.config() };
            let out = solve(&models[i].1, &config);
            (strategy, run_stats(&models[i].0, seed, &out, opts.time_limit))
        })
        .collect();
    let aggregates = strategies
        .iter()
        .map(|&s| {
            let subset: Vec<RunStats> = runs.iter().filter(|(t, _)| *t == s).map(|(_, r)| r.clone()).collect();
            (s, aggregate(&subset).expect("bench runs"))
        })
        .collect();
    (runs.into_iter().map(|(_, r)| r).collect(), aggregates)
}

pub fn cmd_bench(
    instances: &[PathBuf],
    opts: &SolveOpts,
    seeds: u64,
    compare: &[BoundingArg],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut models = Vec::with_capacity(instances.len());
    for path in instances {
        match load(path, opts.sense()) {
            Ok(m) => models.push((instance_name(path), m)),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return exit::INPUT_ERROR;
            }
        }
    }
    let strategies: Vec<BoundingStrategy> = compare.iter().map(|&b| b.into()).collect();
    let (runs, aggregates) = bench(&models, opts, seeds, &strategies);
    let _ = writeln!(out, "{}", Aggregate::header());
    for (s, a) in &aggregates {
        let name = match s {
            BoundingStrategy::Auto => "auto",
            BoundingStrategy::Bshift => "bshift",
            BoundingStrategy::Pshift => "pshift",
            BoundingStrategy::Exlp => "exlp",
        };
        let _ = writeln!(out, "{}", a.row(name));
    }
    if let Some(path) = &opts.stats {
        if let Err(e) = write_stats(path, &runs) {
            let _ = writeln!(err, "error: {e}");
            return exit::INPUT_ERROR;
        }
    }
    exit::OK
}

/// Entry point of the binary.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Solve { instance, opts, certificate, solution } => {
            cmd_solve(&instance, &opts, certificate.as_deref(), solution.as_deref(), out, err)
        }
        Command::Check { instance, certificate, maximize } => cmd_check(&instance, &certificate, maximize, out, err),
        Command::Bench { instances, opts, seeds, compare } => cmd_bench(&instances, &opts, seeds, &compare, out, err),
    }
}

impl SolveStatus {
    fn from_name(s: &str) -> Option<Self> {
        [Self::Optimal, Self::Infeasible, Self::Unbounded, Self::TimeLimit, Self::NodeLimit]
            .into_iter()
            .find(|st| st.name() == s)
    }
}
