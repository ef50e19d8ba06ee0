//! The binary64 shadow copy of a [`Model`].

use super::{Model, RowSense};
use crate::numerics::{nearest_float, ExtendedRational, FloatInterval, Rational};

/// Where a saturated (overflowing) entry sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverflowSite {
    Coefficient { row: usize, col: usize },
    Rhs(usize),
    Objective(usize),
    Lower(usize),
    Upper(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatRow {
    pub coefs: Vec<(usize, f64)>,
    /// Enclosure width of each coefficient, i.e. a bound on `|a - a_bar|`.
    pub radii: Vec<f64>,
    pub sense: RowSense,
    pub rhs: f64,
}

/// Componentwise nearest binary64 copy of the exact data, same sparsity and
/// senses as the source.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatModel {
    pub rows: Vec<FloatRow>,
    pub objective: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub overflow: Vec<OverflowSite>,
}

impl FloatModel {
    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// True when no entry had to saturate.
    pub fn is_faithful(&self) -> bool {
        self.overflow.is_empty()
    }
}

fn near(q: &Rational, site: OverflowSite, flags: &mut Vec<OverflowSite>) -> f64 {
    let n = nearest_float(q);
    if n.overflow {
        flags.push(site);
    }
    n.value
}

fn near_bound(b: &ExtendedRational, site: OverflowSite, flags: &mut Vec<OverflowSite>) -> f64 {
    match b {
        ExtendedRational::NegInf => f64::NEG_INFINITY,
        ExtendedRational::PosInf => f64::INFINITY,
        ExtendedRational::Finite(q) => near(q, site, flags),
    }
}

/// Builds the shadow copy.
pub fn approximate(model: &Model) -> FloatModel {
    let mut overflow = Vec::new();
    let rows = model
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut coefs = Vec::with_capacity(row.coefs.len());
            let mut radii = Vec::with_capacity(row.coefs.len());
            for (j, a) in &row.coefs {
                coefs.push((*j, near(a, OverflowSite::Coefficient { row: i, col: *j }, &mut overflow)));
                radii.push(FloatInterval::enclose(a).width());
            }
            FloatRow {
                coefs,
                radii,
                sense: row.sense,
                rhs: near(&row.rhs, OverflowSite::Rhs(i), &mut overflow),
            }
        })
        .collect();
    let objective = (0..model.num_cols())
        .map(|j| near(&model.objective[j], OverflowSite::Objective(j), &mut overflow))
        .collect();
    let lower = (0..model.num_cols())
        .map(|j| near_bound(&model.lower[j], OverflowSite::Lower(j), &mut overflow))
        .collect();
    let upper = (0..model.num_cols())
        .map(|j| near_bound(&model.upper[j], OverflowSite::Upper(j), &mut overflow))
        .collect();
    FloatModel { rows, objective, lower, upper, overflow }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{float_to_rational, rat, ratio};

    fn model_with(coef: Rational) -> Model {
        let mut m = Model::new("t");
        m.add_column("x", coef.clone(), ExtendedRational::zero(), ExtendedRational::PosInf, false);
        m.add_row("r", [(0, coef)], RowSense::Ge, rat(1));
        m
    }

    #[test]
    fn nearest_entries() {
        let f = approximate(&model_with(ratio(1, 2)));
        assert_eq!(f.rows[0].coefs[0].1, 0.5);
        assert_eq!(f.rows[0].radii[0], 0.0);
        assert_eq!(f.upper[0], f64::INFINITY);
        assert!(f.is_faithful());

        let f = approximate(&model_with(ratio(1, 10)));
        let expected = Rational::new(3602879701896397u64.into(), num_traits::pow(2u32.into(), 55));
        assert_eq!(float_to_rational(f.objective[0]).unwrap(), expected);
        assert!(f.rows[0].radii[0] > 0.0);
    }

    #[test]
    fn overflow_is_flagged() {
        let huge = Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), 400));
        let f = approximate(&model_with(huge));
        assert_eq!(f.objective[0], f64::INFINITY);
        assert!(f.overflow.contains(&OverflowSite::Objective(0)));
        assert!(f.overflow.contains(&OverflowSite::Coefficient { row: 0, col: 0 }));
    }
}
