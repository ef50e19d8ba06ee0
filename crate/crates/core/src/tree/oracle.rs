//! Brute-force reference solver for small instances.

use thiserror::Error;

use super::{compute_gap, SolveResult, SolveStatus, Timings};
use crate::bounding::BoundingStats;
use crate::exactlp::{exact_relaxation, solve_exact_lp, ExactStatus};
use crate::heuristics::{CheckStats, RepairBudget};
use crate::model::{Model, Solution, SolutionOrigin};
use crate::numerics::{ExtendedRational, Rational};

pub const ORACLE_MAX_INTEGERS: usize = 20;
pub const ORACLE_MAX_VOLUME: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{0} integer columns exceed the oracle limit")]
    TooManyIntegers(usize),
    #[error("integer column {0} has an infinite bound")]
    InfiniteBound(usize),
    #[error("integer box has more than {ORACLE_MAX_VOLUME} points")]
    TooLarge,
}

/// Enumerates every integer assignment and solves the continuous rest
/// exactly.
pub fn solve_oracle(model: &Model) -> Result<SolveResult, OracleError> {
    let start = std::time::Instant::now();
    let ints: Vec<usize> = (0..model.num_cols()).filter(|&j| model.integer[j]).collect();
    if ints.len() > ORACLE_MAX_INTEGERS {
        return Err(OracleError::TooManyIntegers(ints.len()));
    }
    let mut ranges = Vec::with_capacity(ints.len());
    let mut volume: u64 = 1;
    for &j in &ints {
        let (Some(l), Some(u)) = (model.lower[j].finite(), model.upper[j].finite()) else {
            return Err(OracleError::InfiniteBound(j));
        };
        let (l, u) = (l.ceil().to_integer(), u.floor().to_integer());
        let width: u64 = if u < l { 0 } else { (&u - &l + 1u32).try_into().map_err(|_| OracleError::TooLarge)? };
        volume = volume.saturating_mul(width);
        if volume > ORACLE_MAX_VOLUME {
            return Err(OracleError::TooLarge);
        }
        ranges.push((l, u));
    }

    let mut best: Option<Solution> = None;
    let mut unbounded = false;
    let mut solves = 0;
    if volume > 0 {
        let mut point: Vec<_> = ranges.iter().map(|(l, _)| l.clone()).collect();
        'enumerate: loop {
            let (mut lower, mut upper) = (model.lower.clone(), model.upper.clone());
            for (k, &j) in ints.iter().enumerate() {
                let v = ExtendedRational::Finite(Rational::from_integer(point[k].clone()));
                lower[j] = v.clone();
                upper[j] = v;
            }
            let res = solve_exact_lp(&exact_relaxation(model, &lower, &upper), None);
            solves += 1;
            match res.status {
                ExactStatus::Optimal => {
                    let sol = Solution::new(model, res.x, SolutionOrigin::Oracle);
                    if best.as_ref().is_none_or(|b| sol.objective < b.objective) {
                        best = Some(sol);
                    }
                }
                ExactStatus::Unbounded => {
                    unbounded = true;
                    break;
                }
                ExactStatus::Infeasible => {}
            }
            // Odometer step.
            for k in 0..point.len() {
                if point[k] < ranges[k].1 {
                    point[k] += 1;
                    continue 'enumerate;
                }
                point[k] = ranges[k].0.clone();
            }
            break;
        }
    }

    let status = if unbounded {
        SolveStatus::Unbounded
    } else if best.is_some() {
        SolveStatus::Optimal
    } else {
        SolveStatus::Infeasible
    };
    let primal = match (&best, unbounded) {
        (_, true) => ExtendedRational::NegInf,
        (Some(s), false) => ExtendedRational::Finite(s.objective.clone()),
        (None, false) => ExtendedRational::PosInf,
    };
    Ok(SolveResult {
        status,
        incumbent: if unbounded { None } else { best },
        gap: compute_gap(&primal, &primal),
        dual_bound: primal.clone(),
        primal_bound: primal,
        nodes: solves,
        timings: Timings { total: start.elapsed(), ..Timings::default() },
        bounding: BoundingStats::default(),
        repair: RepairBudget::default(),
        check: CheckStats::default(),
        presolve: None,
        warnings: Vec::new(),
        sense: model.sense,
    })
}
