//! Fast, untrusted floating-point LP solves of node relaxations.
//!
//! Nothing returned here is used for an exact decision without being
//! checked or postprocessed first.

use crate::lp::{solve_lp, Basis, LpOptions, LpProblem, LpSolution};
use crate::model::{FloatModel, RowSense};
use crate::numerics::{nearest_float, ExtendedRational};

pub type FpLpResult = LpSolution<f64>;

/// Float relaxation of the shadow model with node-local bounds.
pub fn float_relaxation(float: &FloatModel, lower: &[ExtendedRational], upper: &[ExtendedRational]) -> LpProblem<f64> {
    let n = float.num_cols();
    let mut cols = vec![Vec::new(); n];
    for (i, row) in float.rows.iter().enumerate() {
        for (j, a) in &row.coefs {
            cols[*j].push((i, *a));
        }
    }
    let bound = |b: &ExtendedRational| b.finite().map(|q| nearest_float(q).value).filter(|v| v.is_finite());
    LpProblem {
        cols,
        obj: float.objective.clone(),
        lower: lower.iter().map(bound).collect(),
        upper: upper.iter().map(bound).collect(),
        senses: float.rows.iter().map(|r| r.sense).collect::<Vec<RowSense>>(),
        rhs: float.rows.iter().map(|r| r.rhs).collect(),
    }
}

/// Solves the relaxation, optionally warm-started and with an objective
/// limit.
pub fn solve_fp_lp(lp: &LpProblem<f64>, warm: Option<&Basis>, obj_limit: Option<f64>) -> FpLpResult {
    solve_lp(lp, &LpOptions { warm: warm.cloned(), objective_limit: obj_limit, ..LpOptions::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpStatus;
    use crate::model::{approximate, parse_mps};

    #[test]
    fn empty_box_claims_infeasible() {
        let m = parse_mps("NAME e\nROWS\n N obj\n G r1\n L r2\nCOLUMNS\n x obj 1 r1 1\n x r2 1\nRHS\n RHS r1 1\nBOUNDS\n FR BND x\nENDATA\n").unwrap();
        let f = approximate(&m);
        let lp = float_relaxation(&f, &m.lower, &m.upper);
        assert_eq!(solve_fp_lp(&lp, None, None).status, LpStatus::Infeasible);
    }
}
