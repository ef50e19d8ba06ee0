use std::time::Instant;

use num_traits::{One, Signed, Zero};

use super::{BoundMethod, DualBoundResult, DualProof, ProofKind};
use crate::exactlp::{interior_point, solve_exact_lp, DualRegion, ExactStatus, InteriorError, InteriorPoint};
use crate::lp::{lagrangian_bound, Basis, LpProblem};
use crate::model::RowSense;
use crate::numerics::{add_down, float_to_rational, mul_down, ExtendedRational, FloatInterval, Rational};

/// Per-solve data shared by the bounding methods: interval enclosures of the
/// exact data and the (lazily computed) interior point of the root dual
/// region.
#[derive(Debug, Clone)]
pub struct BoundingContext {
    obj: Vec<FloatInterval>,
    cols: Vec<Vec<(usize, FloatInterval)>>,
    rhs: Vec<FloatInterval>,
    region: DualRegion,
    interior: Option<Result<InteriorPoint, InteriorError>>,
}

impl BoundingContext {
    /// Built from the root relaxation; node bounds only ever tighten, so
    /// the root dual region contains every node's region.
    pub fn new(root: &LpProblem<Rational>) -> Self {
        Self {
            obj: root.obj.iter().map(FloatInterval::enclose).collect(),
            cols: root
                .cols
                .iter()
                .map(|c| c.iter().map(|(i, a)| (*i, FloatInterval::enclose(a))).collect())
                .collect(),
            rhs: root.rhs.iter().map(FloatInterval::enclose).collect(),
            region: DualRegion::of_lp(root),
            interior: None,
        }
    }

    pub fn region(&self) -> &DualRegion {
        &self.region
    }

    /// Computes the interior point on first use and never again.
    pub fn interior(&mut self) -> Result<&InteriorPoint, InteriorError> {
        if self.interior.is_none() {
            self.interior = Some(interior_point(&self.region));
        }
        self.interior.as_ref().expect("just set").as_ref().map_err(Clone::clone)
    }

    pub fn interior_computed(&self) -> bool {
        self.interior.is_some()
    }
}

fn clean(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// `a * b` rounded down, with `0 * inf = 0`.
fn product_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        mul_down(a, b)
    }
}

fn sign_fix(sense: RowSense, v: f64) -> f64 {
    match sense {
        RowSense::Ge => v.max(0.0),
        RowSense::Le => v.min(0.0),
        RowSense::Eq => v,
    }
}

/// Interval lower bound of `y.b + sum_j min_x r_j x_j` for a sign-feasible
/// float `y`; `None` when some reduced-cost interval meets an infinite
/// bound on the side it needs.
fn interval_bound(ctx: &BoundingContext, lp: &LpProblem<Rational>, y: &[f64]) -> Option<f64> {
    let mut total = 0.0;
    for (i, &v) in y.iter().enumerate() {
        let term = ctx.rhs[i].mul(FloatInterval::point(v));
        total = add_down(total, term.lo);
    }
    for (j, col) in ctx.cols.iter().enumerate() {
        let mut r = ctx.obj[j];
        for (i, a) in col {
            if y[*i] != 0.0 {
                r = r.sub(a.mul(FloatInterval::point(y[*i])));
            }
        }
        let need_lower = r.hi > 0.0;
        let need_upper = r.lo < 0.0;
        let lo = match &lp.lower[j] {
            Some(l) => FloatInterval::enclose(l).lo,
            None if need_lower => return None,
            None => f64::NEG_INFINITY,
        };
        let hi = match &lp.upper[j] {
            Some(u) => FloatInterval::enclose(u).hi,
            None if need_upper => return None,
            None => f64::INFINITY,
        };
        let corner = [product_down(r.lo, lo), product_down(r.lo, hi), product_down(r.hi, lo), product_down(r.hi, hi)]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        total = add_down(total, corner);
    }
    Some(total)
}

/// Bound-shift: round the float duals to sign-feasible values, decide
/// applicability with interval reduced costs, and certify the bound by one
/// exact evaluation of those multipliers.
pub fn bound_shift(ctx: &BoundingContext, lp: &LpProblem<Rational>, y_bar: &[f64]) -> DualBoundResult {
    let start = Instant::now();
    let y: Vec<f64> = y_bar.iter().zip(&lp.senses).map(|(v, s)| sign_fix(*s, clean(*v))).collect();
    let Some(float_bound) = interval_bound(ctx, lp, &y) else {
        return DualBoundResult::failure(BoundMethod::Bshift, start.elapsed());
    };
    let y_exact: Vec<Rational> = y.iter().map(|v| float_to_rational(*v).expect("finite")).collect();
    let eval = lagrangian_bound(lp, &y_exact, true);
    debug_assert!(eval.bound.finite().is_some_and(|b| float_to_rational(float_bound).is_none_or(|f| &f <= b)));
    let success = eval.bound.is_finite();
    DualBoundResult {
        bound: eval.bound,
        method: BoundMethod::Bshift,
        success,
        proof: success.then_some(DualProof { y: y_exact, kind: ProofKind::Objective }),
        time: start.elapsed(),
        exact: None,
    }
}

/// Project-and-shift: move the float duals toward the interior point just
/// far enough to satisfy every dual constraint exactly.
pub fn project_and_shift(ctx: &mut BoundingContext, lp: &LpProblem<Rational>, y_bar: &[f64]) -> DualBoundResult {
    let start = Instant::now();
    let y: Vec<Rational> = y_bar.iter().map(|v| float_to_rational(clean(*v)).expect("finite")).collect();
    let region = ctx.region.clone();
    let Ok(interior) = ctx.interior() else {
        return DualBoundResult::failure(BoundMethod::Pshift, start.elapsed());
    };
    let lambda = crossing(&region, interior, &y);
    let one_minus = Rational::one() - &lambda;
    let shifted: Vec<Rational> = y
        .iter()
        .zip(&interior.y)
        .map(|(yb, yo)| if lambda.is_zero() { yb.clone() } else { &lambda * yo + &one_minus * yb })
        .collect();
    let eval = lagrangian_bound(lp, &shifted, true);
    let success = eval.bound.is_finite();
    DualBoundResult {
        bound: eval.bound,
        method: BoundMethod::Pshift,
        success,
        proof: success.then_some(DualProof { y: shifted, kind: ProofKind::Objective }),
        time: start.elapsed(),
        exact: None,
    }
}

/// Smallest `lambda` in `[0, 1]` with `lambda y_int + (1 - lambda) y`
/// inside the region.
pub(crate) fn crossing(region: &DualRegion, interior: &InteriorPoint, y: &[Rational]) -> Rational {
    if region.equalities.iter().any(|h| !h.eval(y).is_zero()) {
        return Rational::one();
    }
    let mut lambda = Rational::zero();
    for g in &region.inequalities {
        let value = g.eval(y);
        if value.is_negative() {
            let violation = -value;
            let slack = g.eval(&interior.y);
            let candidate = &violation / (&violation + slack);
            if candidate > lambda {
                lambda = candidate;
            }
        }
    }
    lambda
}

/// Exact LP bound: the exact optimum, or `+inf` with a Farkas proof for an
/// empty node.
pub fn exact_lp_bound(lp: &LpProblem<Rational>, warm: Option<&Basis>) -> DualBoundResult {
    let start = Instant::now();
    let res = solve_exact_lp(lp, warm);
    let (bound, proof) = match res.status {
        ExactStatus::Optimal => (
            ExtendedRational::Finite(res.z.clone()),
            Some(DualProof { y: res.y.clone(), kind: ProofKind::Objective }),
        ),
        ExactStatus::Infeasible => (
            ExtendedRational::PosInf,
            Some(DualProof { y: res.farkas.clone().expect("farkas"), kind: ProofKind::Farkas }),
        ),
        ExactStatus::Unbounded => (ExtendedRational::NegInf, None),
    };
    DualBoundResult { bound, method: BoundMethod::Exlp, success: true, proof, time: start.elapsed(), exact: Some(res) }
}
