//! Exact feasibility verification.

use num_traits::One;

use super::Model;
use crate::numerics::{ExtendedRational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Row { row: usize, activity: Rational },
    Lower { col: usize, value: Rational },
    Upper { col: usize, value: Rational },
    Integrality { col: usize, value: Rational },
    Length { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible,
    Violated(Violation),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible)
    }
}

/// Checks rows, then bounds, then integrality, and reports the first
/// violation found.
pub fn check_solution_exact(model: &Model, x: &[Rational]) -> Feasibility {
    if x.len() != model.num_cols() {
        return Feasibility::Violated(Violation::Length { expected: model.num_cols(), found: x.len() });
    }
    for (i, row) in model.rows.iter().enumerate() {
        let activity = row.activity(x);
        if !row.sense.holds(&activity, &row.rhs) {
            return Feasibility::Violated(Violation::Row { row: i, activity });
        }
    }
    for (j, v) in x.iter().enumerate() {
        if let Some(violation) = bound_violation(model, j, v) {
            return Feasibility::Violated(violation);
        }
    }
    for (j, v) in x.iter().enumerate() {
        if model.integer[j] && !v.denom().is_one() {
            return Feasibility::Violated(Violation::Integrality { col: j, value: v.clone() });
        }
    }
    Feasibility::Feasible
}

pub(crate) fn bound_violation(model: &Model, j: usize, v: &Rational) -> Option<Violation> {
    let value = ExtendedRational::Finite(v.clone());
    if value < model.lower[j] {
        return Some(Violation::Lower { col: j, value: v.clone() });
    }
    if value > model.upper[j] {
        return Some(Violation::Upper { col: j, value: v.clone() });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RowSense};
    use crate::numerics::{rat, ratio};

    fn knapsack() -> Model {
        let mut m = Model::new("k");
        for name in ["x1", "x2"] {
            m.add_column(name, rat(0), ExtendedRational::zero(), ExtendedRational::Finite(rat(1)), true);
        }
        m.objective = vec![rat(-5), rat(-4)];
        m.add_row("cap", [(0, rat(2)), (1, rat(3))], RowSense::Le, rat(4));
        m
    }

    #[test]
    fn spec_examples() {
        let m = knapsack();
        assert!(check_solution_exact(&m, &[rat(1), rat(0)]).is_feasible());
        assert_eq!(
            check_solution_exact(&m, &[rat(1), rat(1)]),
            Feasibility::Violated(Violation::Row { row: 0, activity: rat(5) })
        );
        assert_eq!(
            check_solution_exact(&m, &[ratio(1, 2), rat(0)]),
            Feasibility::Violated(Violation::Integrality { col: 0, value: ratio(1, 2) })
        );
        assert!(matches!(
            check_solution_exact(&m, &[rat(-1), rat(0)]),
            Feasibility::Violated(Violation::Lower { col: 0, .. })
        ));
    }
}
