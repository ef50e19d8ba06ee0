//! Branch-and-bound with safe dual bounds and exactly verified incumbents.

pub mod branching;
mod oracle;
pub mod proof;
mod search;
pub mod trace;

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

pub use oracle::{solve_oracle, OracleError, ORACLE_MAX_INTEGERS, ORACLE_MAX_VOLUME};
pub use proof::{Change, LeafProof, ProofNode, ProofTree};
pub use trace::{PruneReason, Trace, TraceEvent, TraceNode};

use crate::bounding::{BoundingStats, BoundingStrategy};
use crate::certificate::{emit, Certificate};
use crate::heuristics::{CheckStats, RepairBudget};
use crate::model::{Model, ObjSense, Solution};
use crate::numerics::{ratio, ExtendedRational, Rational};
use crate::presolve::{postsolve, presolve, PresolveOptions, PresolveOutcome, PresolveStats};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    /// Tie-breaking seed for branching; 0 keeps index order.
    pub seed: u64,
    pub presolve: bool,
    pub heuristics: bool,
    /// Record a proof tree and emit a certificate.
    pub certificate: bool,
    pub bounding: BoundingStrategy,
    /// Automatic bounding solves the exact LP at depths divisible by this.
    pub exlp_depth: usize,
    pub bshift_threshold: Rational,
    pub repair_ratio: Rational,
    pub continuous_cutoff: Rational,
    /// Children processed in a row before returning to best-bound order.
    pub plunge_limit: usize,
    pub heuristic_depth: usize,
    pub heuristic_frequency: usize,
    /// Pseudocost observations per direction before a column counts as
    /// reliable and strong branching stops.
    pub reliability: usize,
    pub record_trace: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            time_limit: Some(Duration::from_secs(7200)),
            node_limit: None,
            seed: 0,
            presolve: true,
            heuristics: true,
            certificate: false,
            bounding: BoundingStrategy::Auto,
            exlp_depth: 5,
            bshift_threshold: ratio(1, 5),
            repair_ratio: ratio(1, 2),
            continuous_cutoff: ratio(4, 5),
            plunge_limit: 4,
            heuristic_depth: 10,
            heuristic_frequency: 10,
            reliability: 4,
            record_trace: false,
        }
    }
}

impl Config {
    /// Resolves conflicting settings; returns a warning per change.
    pub fn enforce(&mut self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.certificate && self.presolve {
            self.presolve = false;
            warnings.push("presolve disabled: certificates are written for the original model".to_string());
        }
        if self.heuristic_frequency == 0 {
            self.heuristic_frequency = 1;
        }
        warnings
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    TimeLimit,
    NodeLimit,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            Self::Optimal => "optimal",
            Self::Infeasible => "infeasible",
            Self::Unbounded => "unbounded",
            Self::TimeLimit => "time-limit",
            Self::NodeLimit => "node-limit",
        }
    }

    pub fn is_solved(self) -> bool {
        matches!(self, Self::Optimal | Self::Infeasible | Self::Unbounded)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Timings {
    pub total: Duration,
    pub presolve: Duration,
    pub heuristics: Duration,
    pub lp: Duration,
    /// Safe bounding time per method: bshift, pshift, exlp.
    pub bounding: [Duration; 3],
    /// Exact checks of float Farkas rays.
    pub farkas: Duration,
    pub repair_success: Duration,
    pub repair_fail: Duration,
    pub certificate: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Best solution of the input model.
    pub incumbent: Option<Solution>,
    /// Internal (minimisation) bounds, objective offset included.
    pub primal_bound: ExtendedRational,
    pub dual_bound: ExtendedRational,
    pub gap: ExtendedRational,
    pub nodes: usize,
    pub timings: Timings,
    pub bounding: BoundingStats,
    pub repair: RepairBudget,
    pub check: CheckStats,
    pub presolve: Option<PresolveStats>,
    pub warnings: Vec<String>,
    pub sense: ObjSense,
}

impl SolveResult {
    /// Objective of the incumbent in the stated direction.
    pub fn objective(&self) -> Option<Rational> {
        self.incumbent.as_ref().map(|s| match self.sense {
            ObjSense::Minimize => s.objective.clone(),
            ObjSense::Maximize => -s.objective.clone(),
        })
    }

    /// Dual bound in the stated direction.
    pub fn reported_dual_bound(&self) -> ExtendedRational {
        match self.sense {
            ObjSense::Minimize => self.dual_bound.clone(),
            ObjSense::Maximize => -self.dual_bound.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub result: SolveResult,
    pub certificate: Option<Certificate>,
    pub trace: Trace,
}

/// Relative gap `|p - d| / max(|p|, |d|)`: zero when the bounds agree,
/// infinite when either is infinite or they differ in sign.
pub fn compute_gap(primal: &ExtendedRational, dual: &ExtendedRational) -> ExtendedRational {
    if primal == dual {
        return ExtendedRational::zero();
    }
    let (Some(p), Some(d)) = (primal.finite(), dual.finite()) else {
        return ExtendedRational::PosInf;
    };
    if (p.is_positive() && d.is_negative()) || (p.is_negative() && d.is_positive()) {
        return ExtendedRational::PosInf;
    }
    let den = p.abs().max(d.abs());
    if den.is_zero() {
        return ExtendedRational::zero();
    }
    ExtendedRational::Finite((p - d).abs() / den)
}

/// Solves `model` to exact optimality (or until a limit).
pub fn solve(model: &Model, config: &Config) -> SolveOutput {
    let start = Instant::now();
    let mut config = config.clone();
    let warnings = config.enforce();

    let trivial = model.is_trivially_infeasible();
    let (reduced, stack, presolve_stats, presolve_time) = if config.presolve && !trivial {
        let t = Instant::now();
        let (outcome, stats) = presolve(model, &PresolveOptions::default());
        match outcome {
            PresolveOutcome::Reduced { model: reduced, stack } => (Some(reduced), Some(stack), Some(stats), t.elapsed()),
            PresolveOutcome::Infeasible(_) => (None, None, Some(stats), t.elapsed()),
        }
    } else {
        (Some(model.clone()), None, None, Duration::ZERO)
    };

    let infeasible_early = reduced.is_none() || trivial;
    let (mut result, trace, proof) = match reduced.filter(|_| !trivial) {
        Some(work) => {
            let out = search::Search::new(&work, &config).run();
            let incumbent = match (&stack, out.incumbent) {
                (Some(stack), Some(sol)) => Some(postsolve(stack, &sol).expect("postsolve of a verified solution")),
                (_, inc) => inc,
            };
            let primal = incumbent
                .as_ref()
                .map_or(ExtendedRational::PosInf, |s| ExtendedRational::Finite(s.objective.clone()));
            let dual = match out.status {
                SolveStatus::Optimal | SolveStatus::Infeasible => primal.clone(),
                _ => out.dual_bound.clone(),
            };
            let mut timings = out.timings;
            timings.presolve = presolve_time;
            let result = SolveResult {
                status: out.status,
                incumbent,
                gap: compute_gap(&primal, &dual),
                primal_bound: primal,
                dual_bound: dual,
                nodes: out.nodes,
                timings,
                bounding: out.stats,
                repair: out.budget,
                check: out.check,
                presolve: presolve_stats,
                warnings,
                sense: model.sense,
            };
            (result, out.trace, out.proof)
        }
        None => {
            debug_assert!(infeasible_early);
            let result = SolveResult {
                status: SolveStatus::Infeasible,
                incumbent: None,
                primal_bound: ExtendedRational::PosInf,
                dual_bound: ExtendedRational::PosInf,
                gap: ExtendedRational::zero(),
                nodes: 0,
                timings: Timings { presolve: presolve_time, ..Timings::default() },
                bounding: BoundingStats::new(config.bshift_threshold.clone()),
                repair: RepairBudget::new(config.repair_ratio.clone(), config.continuous_cutoff.clone()),
                check: CheckStats::default(),
                presolve: presolve_stats,
                warnings,
                sense: model.sense,
            };
            (result, Trace::new(config.record_trace), None)
        }
    };

    let certificate = if config.certificate && matches!(result.status, SolveStatus::Optimal | SolveStatus::Infeasible) {
        let t = Instant::now();
        let cert = emit(model, proof.as_ref(), result.incumbent.as_ref());
        result.timings.certificate = t.elapsed();
        match cert {
            Ok(c) => Some(c),
            Err(e) => {
                result.warnings.push(format!("certificate not written: {e}"));
                None
            }
        }
    } else {
        None
    };
    result.timings.total = start.elapsed();
    SolveOutput { result, certificate, trace }
}

#[cfg(test)]
mod tests;
