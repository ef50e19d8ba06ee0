//! A relative interior point of a dual feasible region, found by the
//! max-slack LP `max delta s.t. g_k(y) >= delta, h(y) = 0, delta <= 1`.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{solve_exact_lp, ExactStatus};
use crate::lp::LpProblem;
use crate::model::RowSense;
use crate::numerics::Rational;

/// An affine form `coefs.y + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub coefs: Vec<(usize, Rational)>,
    pub constant: Rational,
}

impl Affine {
    pub fn eval(&self, y: &[Rational]) -> Rational {
        self.coefs.iter().fold(self.constant.clone(), |acc, (i, a)| acc + a * &y[*i])
    }
}

/// `{ y | g(y) >= 0 for every inequality, h(y) = 0 for every equality }`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRegion {
    pub dim: usize,
    pub inequalities: Vec<Affine>,
    pub equalities: Vec<Affine>,
}

impl DualRegion {
    /// Dual feasible region of `lp`: sign conditions on the row duals and
    /// the reduced-cost conditions `r_j >= 0` (no upper bound), `r_j <= 0`
    /// (no lower bound), `r_j = 0` (free column).
    pub fn of_lp(lp: &LpProblem<Rational>) -> Self {
        let mut inequalities = Vec::new();
        let mut equalities = Vec::new();
        for (i, sense) in lp.senses.iter().enumerate() {
            let sign = match sense {
                RowSense::Ge => Rational::one(),
                RowSense::Le => -Rational::one(),
                RowSense::Eq => continue,
            };
            inequalities.push(Affine { coefs: vec![(i, sign)], constant: Rational::zero() });
        }
        for (j, col) in lp.cols.iter().enumerate() {
            // r_j = c_j - a_j.y
            let r = Affine { coefs: col.iter().map(|(i, a)| (*i, -a.clone())).collect(), constant: lp.obj[j].clone() };
            match (&lp.lower[j], &lp.upper[j]) {
                (Some(_), Some(_)) => {}
                (Some(_), None) => inequalities.push(r),
                (None, Some(_)) => inequalities.push(Affine {
                    coefs: r.coefs.into_iter().map(|(i, a)| (i, -a)).collect(),
                    constant: -r.constant,
                }),
                (None, None) => equalities.push(r),
            }
        }
        Self { dim: lp.num_rows(), inequalities, equalities }
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        self.inequalities.iter().all(|g| !g.eval(y).is_negative()) && self.equalities.iter().all(|h| h.eval(y).is_zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteriorPoint {
    pub y: Vec<Rational>,
    /// Slack of `y` in every inequality, at least `delta`.
    pub delta: Rational,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InteriorError {
    #[error("the dual region is empty")]
    Empty,
    #[error("the dual region has no relative interior point with positive slack")]
    NoSlack,
}

pub fn interior_point(region: &DualRegion) -> Result<InteriorPoint, InteriorError> {
    let m = region.dim;
    // Columns: y_0 .. y_{m-1} free, then delta <= 1. Objective: min -delta.
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); m + 1];
    let mut senses = Vec::new();
    let mut rhs = Vec::new();
    for (k, g) in region.inequalities.iter().enumerate() {
        for (i, a) in &g.coefs {
            cols[*i].push((k, a.clone()));
        }
        cols[m].push((k, -Rational::one()));
        senses.push(RowSense::Ge);
        rhs.push(-g.constant.clone());
    }
    let offset = region.inequalities.len();
    for (k, h) in region.equalities.iter().enumerate() {
        for (i, a) in &h.coefs {
            cols[*i].push((offset + k, a.clone()));
        }
        senses.push(RowSense::Eq);
        rhs.push(-h.constant.clone());
    }
    for col in &mut cols {
        col.sort_by_key(|(r, _)| *r);
    }
    let mut obj = vec![Rational::zero(); m + 1];
    obj[m] = -Rational::one();
    let mut upper = vec![None; m + 1];
    upper[m] = Some(Rational::one());
    let lp = LpProblem { cols, obj, lower: vec![None; m + 1], upper, senses, rhs };
    let r = solve_exact_lp(&lp, None);
    match r.status {
        ExactStatus::Infeasible => Err(InteriorError::Empty),
        ExactStatus::Unbounded => unreachable!("delta is capped at one"),
        ExactStatus::Optimal => {
            let delta = r.x[m].clone();
            if delta.is_positive() {
                Ok(InteriorPoint { y: r.x[..m].to_vec(), delta })
            } else {
                Err(InteriorError::NoSlack)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, ratio};

    fn ineq(a: i64, c: i64) -> Affine {
        Affine { coefs: vec![(0, rat(a))], constant: rat(c) }
    }

    #[test]
    fn symmetric_box() {
        let region = DualRegion { dim: 1, inequalities: vec![ineq(1, 0), ineq(-1, 1)], equalities: vec![] };
        let p = interior_point(&region).unwrap();
        assert_eq!((p.y, p.delta), (vec![ratio(1, 2)], ratio(1, 2)));
    }

    #[test]
    fn capped_slack() {
        let region = DualRegion { dim: 1, inequalities: vec![ineq(1, 0)], equalities: vec![] };
        let p = interior_point(&region).unwrap();
        assert_eq!((p.y, p.delta), (vec![rat(1)], rat(1)));
    }

    #[test]
    fn empty_region() {
        let region = DualRegion { dim: 1, inequalities: vec![ineq(1, -1), ineq(-1, 0)], equalities: vec![] };
        assert!(interior_point(&region).is_err());
        let region = DualRegion {
            dim: 1,
            inequalities: vec![],
            equalities: vec![ineq(1, -1), ineq(1, 0)],
        };
        assert_eq!(interior_point(&region), Err(InteriorError::Empty));
    }

    #[test]
    fn region_of_single_row_lp() {
        // min x s.t. 3x >= 1, x >= 0: y >= 0 and 1 - 3y >= 0
        let lp = LpProblem {
            cols: vec![vec![(0, rat(3))]],
            obj: vec![rat(1)],
            lower: vec![Some(rat(0))],
            upper: vec![None],
            senses: vec![RowSense::Ge],
            rhs: vec![rat(1)],
        };
        let region = DualRegion::of_lp(&lp);
        let p = interior_point(&region).unwrap();
        assert_eq!((p.y.clone(), p.delta), (vec![ratio(1, 4)], ratio(1, 4)));
        assert!(region.contains(&p.y));
    }
}
