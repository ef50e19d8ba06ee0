//! Exact rational LP solving by iterative refinement with a rational simplex
//! finish, and the relative interior point of a dual region.
//!
//! Every result is verified in rational arithmetic before it is returned:
//! an optimal answer comes from a basis whose primal and dual values are
//! exactly feasible, an infeasible answer carries a Farkas vector whose
//! exact value is positive.

mod interior;

pub use interior::{interior_point, DualRegion, InteriorError, InteriorPoint};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lp::{
    dual_sign_ok, evaluate_basis, lagrangian_bound, rationalize, solve_lp, Basis, LpOptions, LpProblem,
    LpStatus,
};
use crate::model::{Model, RowSense};
use crate::numerics::{nearest_float, ExtendedRational, Rational};

const MAX_ROUNDS: usize = 8;
const MAX_SCALE_BITS: u64 = 1024;
const SCALE_STEP_BITS: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefineStats {
    /// Correction solves performed after the first float solve.
    pub rounds: usize,
    /// True when the rational simplex had to finish the solve.
    pub rational_finish: bool,
    pub float_iterations: usize,
    pub rational_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactLpResult {
    pub status: ExactStatus,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub z: Rational,
    pub basis: Option<Basis>,
    /// Row multipliers whose combination proves infeasibility.
    pub farkas: Option<Vec<Rational>>,
    pub stats: RefineStats,
}

/// Exact relaxation of `model` with the given node-local bounds.
pub fn exact_relaxation(model: &Model, lower: &[ExtendedRational], upper: &[ExtendedRational]) -> LpProblem<Rational> {
    let n = model.num_cols();
    let mut cols = vec![Vec::new(); n];
    for (i, row) in model.rows.iter().enumerate() {
        for (j, a) in &row.coefs {
            cols[*j].push((i, a.clone()));
        }
    }
    LpProblem {
        cols,
        obj: model.objective.clone(),
        lower: lower.iter().map(|b| b.finite().cloned()).collect(),
        upper: upper.iter().map(|b| b.finite().cloned()).collect(),
        senses: model.rows.iter().map(|r| r.sense).collect(),
        rhs: model.rows.iter().map(|r| r.rhs.clone()).collect(),
    }
}

/// Does `y` prove that the rows and bounds of `lp` admit no point?
pub fn verify_farkas(lp: &LpProblem<Rational>, y: &[Rational]) -> bool {
    y.len() == lp.num_rows() && lagrangian_bound(lp, y, false).bound > ExtendedRational::zero()
}

fn sign_fixed(lp: &LpProblem<Rational>, y: Vec<Rational>) -> Vec<Rational> {
    y.into_iter()
        .enumerate()
        .map(|(i, v)| if dual_sign_ok(lp.senses[i], &v) { v } else { Rational::zero() })
        .collect()
}

fn bounds_consistent(lp: &LpProblem<Rational>) -> bool {
    lp.lower.iter().zip(&lp.upper).all(|(l, u)| match (l, u) {
        (Some(l), Some(u)) => l <= u,
        _ => true,
    })
}

fn infeasible(lp: &LpProblem<Rational>, farkas: Vec<Rational>, stats: RefineStats) -> ExactLpResult {
    ExactLpResult {
        status: ExactStatus::Infeasible,
        x: vec![Rational::zero(); lp.num_cols()],
        y: farkas.clone(),
        z: Rational::zero(),
        basis: None,
        farkas: Some(farkas),
        stats,
    }
}

/// Solves `lp` exactly.
pub fn solve_exact_lp(lp: &LpProblem<Rational>, warm: Option<&Basis>) -> ExactLpResult {
    let mut stats = RefineStats::default();
    if !bounds_consistent(lp) {
        // Contradictory bounds alone; no row multiplier is needed.
        return infeasible(lp, vec![Rational::zero(); lp.num_rows()], stats);
    }
    let flp = lp.to_float();
    let fsol = solve_lp(&flp, &LpOptions { warm: warm.cloned(), ..LpOptions::default() });
    stats.float_iterations += fsol.iterations;

    match fsol.status {
        LpStatus::Optimal => {
            let mut basis = fsol.basis.clone().expect("optimal float solve has a basis");
            if let Some(done) = try_basis(lp, &basis, &stats) {
                return done;
            }
            let mut xh = rationalize(&fsol.x);
            let mut yh = rationalize(&fsol.y);
            let mut scales = (Rational::one(), Rational::one());
            let mut previous: Option<Rational> = None;
            for round in 1..=MAX_ROUNDS {
                let (pv, dv) = violations(lp, &xh, &yh);
                let worst = if pv > dv { pv.clone() } else { dv.clone() };
                if previous.as_ref().is_some_and(|p| &worst * Rational::from_integer(2.into()) > *p) {
                    break;
                }
                previous = Some(worst);
                let (Some(sp), Some(sd)) = (next_scale(&pv, &scales.0), next_scale(&dv, &scales.1)) else {
                    break;
                };
                scales = (sp, sd);
                let (clp, slack_cost) = correction_problem(lp, &flp, &xh, &yh, &scales.0, &scales.1);
                let csol = solve_lp(
                    &clp,
                    &LpOptions { warm: Some(basis.clone()), slack_cost: Some(slack_cost), ..LpOptions::default() },
                );
                stats.float_iterations += csol.iterations;
                stats.rounds = round;
                if csol.status != LpStatus::Optimal {
                    break;
                }
                for (v, d) in xh.iter_mut().zip(rationalize(&csol.x)) {
                    *v += d / &scales.0;
                }
                for (v, d) in yh.iter_mut().zip(rationalize(&csol.y)) {
                    *v += d / &scales.1;
                }
                basis = csol.basis.expect("optimal float solve has a basis");
                if let Some(done) = try_basis(lp, &basis, &stats) {
                    return done;
                }
            }
            rational_finish(lp, Some(basis), stats)
        }
        LpStatus::Infeasible => {
            let candidate = sign_fixed(lp, rationalize(&fsol.y));
            if verify_farkas(lp, &candidate) {
                return infeasible(lp, candidate, stats);
            }
            rational_finish(lp, None, stats)
        }
        _ => rational_finish(lp, fsol.basis, stats),
    }
}

fn try_basis(lp: &LpProblem<Rational>, basis: &Basis, stats: &RefineStats) -> Option<ExactLpResult> {
    let point = evaluate_basis(lp, basis, None)?;
    if !(point.primal_feasible && point.dual_feasible) {
        return None;
    }
    let z = lp.objective_value(&point.x);
    debug_assert_eq!(lagrangian_bound(lp, &point.y, true).bound, ExtendedRational::Finite(z.clone()));
    Some(ExactLpResult {
        status: ExactStatus::Optimal,
        x: point.x,
        y: point.y,
        z,
        basis: Some(basis.clone()),
        farkas: None,
        stats: stats.clone(),
    })
}

fn rational_finish(lp: &LpProblem<Rational>, warm: Option<Basis>, mut stats: RefineStats) -> ExactLpResult {
    stats.rational_finish = true;
    let sol = solve_lp(lp, &LpOptions { warm, max_iterations: Some(usize::MAX), ..LpOptions::default() });
    stats.rational_iterations = sol.iterations;
    match sol.status {
        LpStatus::Optimal => {
            let z = lp.objective_value(&sol.x);
            ExactLpResult {
                status: ExactStatus::Optimal,
                x: sol.x,
                y: sol.y,
                z,
                basis: sol.basis,
                farkas: None,
                stats,
            }
        }
        LpStatus::Infeasible => {
            debug_assert!(verify_farkas(lp, &sol.y));
            infeasible(lp, sol.y, stats)
        }
        LpStatus::Unbounded => ExactLpResult {
            status: ExactStatus::Unbounded,
            x: sol.x,
            y: sol.y,
            z: Rational::zero(),
            basis: sol.basis,
            farkas: None,
            stats,
        },
        LpStatus::ObjectiveLimit | LpStatus::IterationLimit => {
            unreachable!("rational simplex runs without limits")
        }
    }
}

fn positive_part(v: Rational) -> Rational {
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}

/// Largest primal violation (bounds and rows) and largest dual violation
/// (sign and complementarity) of the current iterates.
fn violations(lp: &LpProblem<Rational>, x: &[Rational], y: &[Rational]) -> (Rational, Rational) {
    let n = lp.num_cols();
    let act = lp.row_activities(x);
    let mut reduced = lp.obj.clone();
    for (j, col) in lp.cols.iter().enumerate() {
        for (i, a) in col {
            reduced[j] -= a * &y[*i];
        }
    }
    let mut pv = Rational::zero();
    let mut dv = Rational::zero();
    let bump = |acc: &mut Rational, v: Rational| {
        let v = positive_part(v);
        if v > *acc {
            *acc = v;
        }
    };
    let slack: Vec<(Option<Rational>, Option<Rational>)> = (0..lp.num_rows()).map(|i| lp.slack_bounds(i)).collect();
    let vars = (0..n)
        .map(|j| (&x[j], &reduced[j], &lp.lower[j], &lp.upper[j]))
        .chain((0..lp.num_rows()).map(|i| (&act[i], &y[i], &slack[i].0, &slack[i].1)));
    for (v, d, l, u) in vars {
        if let Some(l) = l {
            bump(&mut pv, l - v);
        }
        if let Some(u) = u {
            bump(&mut pv, v - u);
        }
        if d.is_positive() {
            match l {
                Some(l) => bump(&mut dv, d * (v - l)),
                None => bump(&mut dv, d.clone()),
            }
        } else if d.is_negative() {
            match u {
                Some(u) => bump(&mut dv, -d * (u - v)),
                None => bump(&mut dv, -d.clone()),
            }
        }
    }
    (pv, dv)
}

/// Power of two near `1/violation`, growing by at most `2^32` per round.
/// `None` once the cap of `2^1024` would be exceeded.
fn next_scale(violation: &Rational, previous: &Rational) -> Option<Rational> {
    let two = BigInt::from(2);
    let prev_bits = previous.numer().bits() - 1;
    let wanted = if violation.is_zero() {
        prev_bits + SCALE_STEP_BITS
    } else {
        let (n, d) = (violation.numer().bits(), violation.denom().bits());
        d.saturating_sub(n)
    };
    let bits = wanted.min(prev_bits + SCALE_STEP_BITS);
    if bits > MAX_SCALE_BITS {
        return None;
    }
    Some(Rational::from_integer(num_traits::pow(two, bits as usize)))
}

fn scaled_float(q: Rational) -> Option<f64> {
    let f = nearest_float(&q);
    (!f.overflow).then_some(f.value)
}

/// Float problem in the correction variables `P (x - xh)`, with costs
/// `D (c - A^T yh)` on columns and `D yh` on slacks.
fn correction_problem(
    lp: &LpProblem<Rational>,
    flp: &LpProblem<f64>,
    x: &[Rational],
    y: &[Rational],
    p: &Rational,
    d: &Rational,
) -> (LpProblem<f64>, Vec<f64>) {
    let act = lp.row_activities(x);
    let mut obj = Vec::with_capacity(lp.num_cols());
    for (j, col) in lp.cols.iter().enumerate() {
        let mut r = lp.obj[j].clone();
        for (i, a) in col {
            r -= a * &y[*i];
        }
        obj.push(scaled_float(r * d).unwrap_or(0.0));
    }
    let lower = (0..lp.num_cols())
        .map(|j| lp.lower[j].as_ref().and_then(|l| scaled_float((l - &x[j]) * p)))
        .collect();
    let upper = (0..lp.num_cols())
        .map(|j| lp.upper[j].as_ref().and_then(|u| scaled_float((u - &x[j]) * p)))
        .collect();
    let rhs = (0..lp.num_rows())
        .map(|i| scaled_float((&lp.rhs[i] - &act[i]) * p).unwrap_or(match lp.senses[i] {
            RowSense::Ge => f64::MIN,
            _ => f64::MAX,
        }))
        .collect();
    let slack_cost = y.iter().map(|v| scaled_float(v * d).unwrap_or(0.0)).collect();
    let clp = LpProblem {
        cols: flp.cols.clone(),
        obj,
        lower,
        upper,
        senses: lp.senses.clone(),
        rhs,
    };
    (clp, slack_cost)
}
