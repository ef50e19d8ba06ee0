//! Primal side: float rounding and diving, the exact repair step, and the
//! hybrid solution check.

use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::exactlp::{exact_relaxation, solve_exact_lp, ExactStatus};
use crate::fplp::solve_fp_lp;
use crate::lp::{Basis, LpProblem, LpStatus};
use crate::model::{bound_violation, FloatModel, Model, RowSense, Solution, SolutionOrigin};
use crate::numerics::{running_error_dot, ExtendedRational, FloatInterval, Rational};

/// Integer values closer than this to an integer count as integral in
/// float data.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Candidates with a larger integer fractionality are not repaired.
pub const REPAIR_FRACTIONALITY: f64 = 1e-4;
const FEASIBILITY_TOL: f64 = 1e-6;
const MAX_DIVES: usize = 10;

pub fn is_integral(v: f64) -> bool {
    (v - v.round()).abs() <= INTEGRALITY_TOL
}

fn float_feasible(lp: &LpProblem<f64>, x: &[f64]) -> bool {
    for (j, v) in x.iter().enumerate() {
        if lp.lower[j].is_some_and(|l| *v < l - FEASIBILITY_TOL) || lp.upper[j].is_some_and(|u| *v > u + FEASIBILITY_TOL) {
            return false;
        }
    }
    lp.row_activities(x).iter().zip(lp.senses.iter().zip(&lp.rhs)).all(|(a, (s, b))| match s {
        RowSense::Ge => *a >= b - FEASIBILITY_TOL,
        RowSense::Le => *a <= b + FEASIBILITY_TOL,
        RowSense::Eq => (a - b).abs() <= FEASIBILITY_TOL,
    })
}

fn rounded(x: &[f64], integer: &[bool]) -> Vec<f64> {
    x.iter().zip(integer).map(|(v, int)| if *int { v.round() } else { *v }).collect()
}

/// Simple rounding, then fractional diving: repeatedly fix the least
/// fractional integer column to its nearest integer and re-solve.
pub fn fp_round_and_dive(lp: &LpProblem<f64>, x: &[f64], integer: &[bool], basis: Option<&Basis>) -> Option<Vec<f64>> {
    let candidate = rounded(x, integer);
    if float_feasible(lp, &candidate) {
        return Some(candidate);
    }
    let mut dive = lp.clone();
    let mut x = x.to_vec();
    let mut warm = basis.cloned();
    for _ in 0..MAX_DIVES {
        let pick = (0..x.len())
            .filter(|&j| integer[j] && !is_integral(x[j]))
            .min_by(|&a, &b| {
                let fa = (x[a] - x[a].round()).abs();
                let fb = (x[b] - x[b].round()).abs();
                fa.partial_cmp(&fb).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
            })?;
        let near = x[pick].round();
        let far = if near > x[pick] { near - 1.0 } else { near + 1.0 };
        let mut solved = None;
        // Nearest integer first, the other neighbour if that is infeasible.
        for v in [near, far] {
            dive.lower[pick] = Some(v);
            dive.upper[pick] = Some(v);
            let sol = solve_fp_lp(&dive, warm.as_ref(), None);
            if sol.status == LpStatus::Optimal {
                solved = Some(sol);
                break;
            }
        }
        let sol = solved?;
        x = sol.x;
        warm = sol.basis;
        let candidate = rounded(&x, integer);
        if float_feasible(&dive, &candidate) {
            return Some(candidate);
        }
    }
    None
}

/// `|x_bar - x|` bounds for an exact point, computed once per solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PointEnclosure {
    pub x_bar: Vec<f64>,
    pub radius: Vec<f64>,
}

impl PointEnclosure {
    pub fn new(x: &[Rational]) -> Self {
        let (x_bar, radius) = x
            .iter()
            .map(|v| {
                let e = FloatInterval::enclose(v);
                let near = crate::numerics::nearest_float(v).value;
                (near, e.width())
            })
            .unzip();
        Self { x_bar, radius }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckStats {
    pub rows_fast: usize,
    pub rows_exact: usize,
}

/// Verdict of the fast row test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowVerdict {
    Holds,
    Violated,
    Undecided,
}

/// Decides `a.x sense b` from the running error bound alone when possible.
pub fn fast_row_verdict(float: &FloatModel, i: usize, point: &PointEnclosure, b: &FloatInterval) -> RowVerdict {
    let row = &float.rows[i];
    let a_bar: Vec<f64> = row.coefs.iter().map(|(_, a)| *a).collect();
    let x_bar: Vec<f64> = row.coefs.iter().map(|(j, _)| point.x_bar[*j]).collect();
    let dx: Vec<f64> = row.coefs.iter().map(|(j, _)| point.radius[*j]).collect();
    let Ok(dot) = running_error_dot(&a_bar, &x_bar, &row.radii, &dx) else {
        return RowVerdict::Undecided;
    };
    if !dot.error_bound.is_finite() {
        return RowVerdict::Undecided;
    }
    let lo = crate::numerics::add_down(dot.value, -dot.error_bound);
    let hi = crate::numerics::add_up(dot.value, dot.error_bound);
    // The exact activity lies in [lo, hi] and the exact rhs in b.
    let (geq, leq) = (lo >= b.hi, hi <= b.lo);
    let (surely_below, surely_above) = (hi < b.lo, lo > b.hi);
    match row.sense {
        RowSense::Ge if geq => RowVerdict::Holds,
        RowSense::Ge if surely_below => RowVerdict::Violated,
        RowSense::Le if leq => RowVerdict::Holds,
        RowSense::Le if surely_above => RowVerdict::Violated,
        RowSense::Eq if surely_below || surely_above => RowVerdict::Violated,
        _ => RowVerdict::Undecided,
    }
}

/// Hybrid feasibility check: bounds and integrality exactly, rows by the
/// running error test with an exact recomputation only when it cannot
/// decide.
pub fn check_solution(model: &Model, float: &FloatModel, x: &[Rational], stats: &mut CheckStats) -> bool {
    if x.len() != model.num_cols() {
        return false;
    }
    for (j, v) in x.iter().enumerate() {
        if bound_violation(model, j, v).is_some() || (model.integer[j] && !v.is_integer()) {
            return false;
        }
    }
    let point = PointEnclosure::new(x);
    for (i, row) in model.rows.iter().enumerate() {
        let b = FloatInterval::enclose(&row.rhs);
        match fast_row_verdict(float, i, &point, &b) {
            RowVerdict::Holds => stats.rows_fast += 1,
            RowVerdict::Violated => {
                stats.rows_fast += 1;
                return false;
            }
            RowVerdict::Undecided => {
                stats.rows_exact += 1;
                if !row.sense.holds(&row.activity(x), &row.rhs) {
                    return false;
                }
            }
        }
    }
    true
}

/// How often repair may run.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairBudget {
    pub repair_calls: usize,
    pub successes: usize,
    /// Repair calls may not exceed this fraction of the exact LP calls.
    pub ratio: Rational,
    /// No repair when more than this fraction of the columns is continuous.
    pub continuous_cutoff: Rational,
    pub time_success: Duration,
    pub time_fail: Duration,
}

impl Default for RepairBudget {
    fn default() -> Self {
        Self::new(crate::numerics::ratio(1, 2), crate::numerics::ratio(4, 5))
    }
}

impl RepairBudget {
    pub fn new(ratio: Rational, continuous_cutoff: Rational) -> Self {
        Self {
            repair_calls: 0,
            successes: 0,
            ratio,
            continuous_cutoff,
            time_success: Duration::ZERO,
            time_fail: Duration::ZERO,
        }
    }

    pub fn permits(&self, exact_lp_calls: usize, continuous_fraction: &Rational) -> bool {
        continuous_fraction <= &self.continuous_cutoff
            && Rational::from_integer(self.repair_calls.into()) <= &self.ratio * Rational::from_integer(exact_lp_calls.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RepairOutcome {
    Repaired(Solution),
    /// Some integer value was too far from an integer.
    Rejected { col: usize },
    /// The restriction with fixed integers has no (bounded) optimum.
    Failed,
}

/// Fixes integer columns to the rounded candidate values and solves the
/// continuous remainder exactly.
pub fn repair(model: &Model, candidate: &[f64], lower: &[ExtendedRational], upper: &[ExtendedRational]) -> RepairOutcome {
    let mut lower = lower.to_vec();
    let mut upper = upper.to_vec();
    for j in 0..model.num_cols() {
        if !model.integer[j] {
            continue;
        }
        let v = candidate[j];
        if !v.is_finite() || (v - v.round()).abs() > REPAIR_FRACTIONALITY {
            return RepairOutcome::Rejected { col: j };
        }
        let Some(fixed) = crate::numerics::float_to_rational(v.round()) else {
            return RepairOutcome::Rejected { col: j };
        };
        let fixed = ExtendedRational::Finite(fixed);
        if fixed < lower[j] || fixed > upper[j] {
            return RepairOutcome::Failed;
        }
        lower[j] = fixed.clone();
        upper[j] = fixed;
    }
    let lp = exact_relaxation(model, &lower, &upper);
    let res = solve_exact_lp(&lp, None);
    if res.status != ExactStatus::Optimal {
        return RepairOutcome::Failed;
    }
    let sol = Solution::new(model, res.x, SolutionOrigin::HeuristicRepair);
    debug_assert!(crate::model::check_solution_exact(model, &sol.x).is_feasible());
    RepairOutcome::Repaired(sol)
}

/// Runs [`repair`] and books the call into the budget.
pub fn repair_counted(
    model: &Model,
    candidate: &[f64],
    lower: &[ExtendedRational],
    upper: &[ExtendedRational],
    budget: &mut RepairBudget,
) -> RepairOutcome {
    let start = Instant::now();
    let outcome = repair(model, candidate, lower, upper);
    if !matches!(outcome, RepairOutcome::Rejected { .. }) {
        budget.repair_calls += 1;
        if matches!(outcome, RepairOutcome::Repaired(_)) {
            budget.successes += 1;
            budget.time_success += start.elapsed();
        } else {
            budget.time_fail += start.elapsed();
        }
    }
    outcome
}

/// Rational point from float values, integers snapped exactly; used when
/// repair is not permitted.
pub fn snap_candidate(model: &Model, candidate: &[f64]) -> Option<Vec<Rational>> {
    candidate
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let v = if model.integer[j] { v.round() } else { *v };
            crate::numerics::float_to_rational(v)
        })
        .collect::<Option<Vec<_>>>()
        .map(|x| x.into_iter().map(|v| if v.is_zero() { Rational::zero() } else { v }).collect())
}
