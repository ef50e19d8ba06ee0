//! LP data shared by the floating-point and the exact solver, and the
//! Lagrangian evaluation used for every safe bound.
//!
//! Rows are stored as `a_i.x sense b_i`. Internally the simplex works on
//! `A x - s = 0` with one slack per row, whose bounds come from the sense and
//! the right-hand side. Row duals follow the convention that `>=` rows carry
//! `y_i >= 0`, `<=` rows `y_i <= 0` and equality rows are free.

mod simplex;

pub use simplex::{evaluate_basis, solve_lp, BasisPoint, LpOptions, LpSolution};

use std::fmt::Debug;

use num_traits::{NumRef, Signed, Zero};

use crate::model::RowSense;
use crate::numerics::{float_to_rational, nearest_float, ExtendedRational, Rational};

/// Scalar field of the simplex. `f64` uses fixed tolerances; rationals use
/// none.
pub trait LpScalar: Clone + PartialOrd + Debug + NumRef + Signed + Send + Sync + 'static {
    const EXACT: bool;
    fn feas_tol() -> Self;
    fn opt_tol() -> Self;
    fn pivot_tol() -> Self;
    fn of_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
}

impl LpScalar for f64 {
    const EXACT: bool = false;
    fn feas_tol() -> Self {
        1e-9
    }
    fn opt_tol() -> Self {
        1e-9
    }
    fn pivot_tol() -> Self {
        1e-11
    }
    fn of_rational(q: &Rational) -> Self {
        nearest_float(q).value
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl LpScalar for Rational {
    const EXACT: bool = true;
    fn feas_tol() -> Self {
        Rational::zero()
    }
    fn opt_tol() -> Self {
        Rational::zero()
    }
    fn pivot_tol() -> Self {
        Rational::zero()
    }
    fn of_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        nearest_float(self).value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic at zero with both bounds infinite.
    Free,
}

/// Status of every structural column and every row slack. A row whose
/// slack is nonbasic is tight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis {
    pub cols: Vec<VarStatus>,
    pub rows: Vec<VarStatus>,
}

impl Basis {
    pub fn num_basic(&self) -> usize {
        self.cols.iter().chain(&self.rows).filter(|s| **s == VarStatus::Basic).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    ObjectiveLimit,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<T> {
    /// Column-major constraint matrix: `(row, coefficient)` pairs.
    pub cols: Vec<Vec<(usize, T)>>,
    pub obj: Vec<T>,
    pub lower: Vec<Option<T>>,
    pub upper: Vec<Option<T>>,
    pub senses: Vec<RowSense>,
    pub rhs: Vec<T>,
}

impl<T: LpScalar> LpProblem<T> {
    pub fn num_cols(&self) -> usize {
        self.obj.len()
    }

    pub fn num_rows(&self) -> usize {
        self.senses.len()
    }

    /// Bounds of the slack `s_i = a_i.x`.
    pub fn slack_bounds(&self, i: usize) -> (Option<T>, Option<T>) {
        let b = Some(self.rhs[i].clone());
        match self.senses[i] {
            RowSense::Ge => (b, None),
            RowSense::Le => (None, b),
            RowSense::Eq => (b.clone(), b),
        }
    }

    pub fn row_activities(&self, x: &[T]) -> Vec<T> {
        let mut act = vec![T::zero(); self.num_rows()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, a) in col {
                act[*i] = act[*i].clone() + a.clone() * &x[j];
            }
        }
        act
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.obj.iter().zip(x).fold(T::zero(), |acc, (c, v)| acc + c.clone() * v)
    }
}

impl LpProblem<Rational> {
    /// Nearest binary64 image; infinite bounds stay infinite.
    pub fn to_float(&self) -> LpProblem<f64> {
        let f = |q: &Rational| nearest_float(q).value;
        LpProblem {
            cols: self.cols.iter().map(|c| c.iter().map(|(i, a)| (*i, f(a))).collect()).collect(),
            obj: self.obj.iter().map(f).collect(),
            lower: self.lower.iter().map(|b| b.as_ref().map(f)).collect(),
            upper: self.upper.iter().map(|b| b.as_ref().map(f)).collect(),
            senses: self.senses.clone(),
            rhs: self.rhs.iter().map(f).collect(),
        }
    }

    /// Is `x` within all bounds and rows, exactly?
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        let in_bounds = x.iter().enumerate().all(|(j, v)| {
            self.lower[j].as_ref().is_none_or(|l| v >= l) && self.upper[j].as_ref().is_none_or(|u| v <= u)
        });
        in_bounds
            && self
                .row_activities(x)
                .iter()
                .zip(self.senses.iter().zip(&self.rhs))
                .all(|(a, (s, b))| s.holds(a, b))
    }
}

/// A dual vector evaluated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DualEvaluation {
    /// Valid lower bound on `c.x` over the LP (or, with zero cost, a value
    /// whose positivity proves infeasibility). `-inf` when the multipliers
    /// have an incompatible sign or meet an infinite bound.
    pub bound: ExtendedRational,
    /// `c - A^T y`; each entry multiplies a lower bound when positive and an
    /// upper bound when negative.
    pub reduced: Vec<Rational>,
}

/// Is `y_i` sign-compatible with the row sense?
pub fn dual_sign_ok(sense: RowSense, y: &Rational) -> bool {
    match sense {
        RowSense::Ge => !y.is_negative(),
        RowSense::Le => !y.is_positive(),
        RowSense::Eq => true,
    }
}

/// `y.b + sum_j min(r_j l_j, r_j u_j)` with `r = c - A^T y`, computed
/// exactly. With `with_cost == false` the cost is taken as zero (Farkas
/// value).
pub fn lagrangian_bound(lp: &LpProblem<Rational>, y: &[Rational], with_cost: bool) -> DualEvaluation {
    let mut reduced: Vec<Rational> = if with_cost { lp.obj.clone() } else { vec![Rational::zero(); lp.num_cols()] };
    for (j, col) in lp.cols.iter().enumerate() {
        for (i, a) in col {
            if !y[*i].is_zero() {
                reduced[j] -= a * &y[*i];
            }
        }
    }
    let mut bound = Rational::zero();
    let mut finite = true;
    for (i, yi) in y.iter().enumerate() {
        if !dual_sign_ok(lp.senses[i], yi) {
            finite = false;
        }
        bound += yi * &lp.rhs[i];
    }
    for (j, r) in reduced.iter().enumerate() {
        let side = if r.is_positive() {
            &lp.lower[j]
        } else if r.is_negative() {
            &lp.upper[j]
        } else {
            continue;
        };
        match side {
            Some(v) => bound += r * v,
            None => finite = false,
        }
    }
    let bound = if finite { ExtendedRational::Finite(bound) } else { ExtendedRational::NegInf };
    DualEvaluation { bound, reduced }
}

/// Exact rational image of a float vector. Non-finite entries become zero.
pub fn rationalize(v: &[f64]) -> Vec<Rational> {
    v.iter().map(|f| float_to_rational(*f).unwrap_or_else(Rational::zero)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, ratio};

    fn one_row() -> LpProblem<Rational> {
        // min x s.t. 3x >= 1, 0 <= x <= 1
        LpProblem {
            cols: vec![vec![(0, rat(3))]],
            obj: vec![rat(1)],
            lower: vec![Some(rat(0))],
            upper: vec![Some(rat(1))],
            senses: vec![RowSense::Ge],
            rhs: vec![rat(1)],
        }
    }

    #[test]
    fn lagrangian_values() {
        let lp = one_row();
        let e = lagrangian_bound(&lp, &[ratio(1, 3)], true);
        assert_eq!(e.bound, ExtendedRational::Finite(ratio(1, 3)));
        let e = lagrangian_bound(&lp, &[ratio(1, 2)], true);
        // r = -1/2 meets u = 1: 1/2 - 1/2 = 0
        assert_eq!(e.bound, ExtendedRational::Finite(rat(0)));
        let e = lagrangian_bound(&lp, &[rat(-1)], true);
        assert_eq!(e.bound, ExtendedRational::NegInf);
    }

    #[test]
    fn farkas_value() {
        // x >= 1 and x <= 0 as rows over a free column
        let lp = LpProblem {
            cols: vec![vec![(0, rat(1)), (1, rat(1))]],
            obj: vec![rat(1)],
            lower: vec![None],
            upper: vec![None],
            senses: vec![RowSense::Ge, RowSense::Le],
            rhs: vec![rat(1), rat(0)],
        };
        let e = lagrangian_bound(&lp, &[rat(1), rat(-1)], false);
        assert_eq!(e.bound, ExtendedRational::Finite(rat(1)));
    }
}
