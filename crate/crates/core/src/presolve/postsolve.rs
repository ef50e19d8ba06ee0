use thiserror::Error;

use crate::model::{check_solution_exact, Model, Solution, Violation};
use crate::numerics::{ExtendedRational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// One model reduction. Indices refer to the original model's rows and
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    Fix { col: usize, value: Rational },
    /// `x_col = constant + sum terms`.
    Substitute { col: usize, terms: Vec<(usize, Rational)>, constant: Rational },
    BoundChange { col: usize, side: BoundSide, value: ExtendedRational },
    DeleteRow { row: usize },
    /// `dropped = scale * kept` up to the right-hand side.
    MergeParallel { kept: usize, dropped: usize, scale: Rational },
    ScaleRow { row: usize, factor: Rational },
    StrengthenCoef { row: usize, col: usize, old: Rational, new: Rational, new_rhs: Rational },
    /// Rhs rounded on an all-integer row with integer coefficients.
    RoundRhs { row: usize, old: Rational, new: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostsolveStack {
    pub reductions: Vec<Reduction>,
    /// Original column of each reduced column.
    pub col_map: Vec<usize>,
    /// Original row of each reduced row.
    pub row_map: Vec<usize>,
    pub original: Model,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PostsolveError {
    #[error("reduced solution has {got} values, the reduced model {expected} columns")]
    Length { got: usize, expected: usize },
    #[error("postsolved point violates the original model: {0:?}")]
    Infeasible(Violation),
}

impl PostsolveStack {
    /// Undoes the reductions in reverse order.
    pub fn expand(&self, reduced: &[Rational]) -> Result<Vec<Rational>, PostsolveError> {
        if reduced.len() != self.col_map.len() {
            return Err(PostsolveError::Length { got: reduced.len(), expected: self.col_map.len() });
        }
        let mut x = vec![Rational::default(); self.original.num_cols()];
        for (r, &o) in self.col_map.iter().enumerate() {
            x[o] = reduced[r].clone();
        }
        for red in self.reductions.iter().rev() {
            match red {
                Reduction::Fix { col, value } => x[*col] = value.clone(),
                Reduction::Substitute { col, terms, constant } => {
                    x[*col] = terms.iter().fold(constant.clone(), |acc, (k, p)| acc + p * &x[*k]);
                }
                _ => {}
            }
        }
        Ok(x)
    }
}

/// Maps a solution of the reduced model back to the original model and
/// verifies it there exactly.
pub fn postsolve(stack: &PostsolveStack, reduced: &Solution) -> Result<Solution, PostsolveError> {
    let x = stack.expand(&reduced.x)?;
    if let crate::model::Feasibility::Violated(v) = check_solution_exact(&stack.original, &x) {
        return Err(PostsolveError::Infeasible(v));
    }
    Ok(Solution::new(&stack.original, x, reduced.origin))
}
