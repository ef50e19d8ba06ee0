//! Exact solutions and the `=obj=` solution file format.

use std::fmt::Write as _;

use num_traits::Zero;

use super::{Model, ModelError};
use crate::numerics::{format_rational, nearest_float, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionOrigin {
    /// Rounded or dived float point that passed the exact check.
    Heuristic,
    HeuristicRepair,
    LpIntegral,
    Oracle,
    File,
}

/// An exact point together with its nearest binary64 image and its exact
/// (internal, minimisation) objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<Rational>,
    pub x_bar: Vec<f64>,
    pub objective: Rational,
    pub origin: SolutionOrigin,
}

impl Solution {
    pub fn new(model: &Model, x: Vec<Rational>, origin: SolutionOrigin) -> Self {
        let x_bar = x.iter().map(|v| nearest_float(v).value).collect();
        let objective = model.objective_value(&x);
        Self { x, x_bar, objective, origin }
    }
}

/// Header `=obj= p/q` (objective in the stated direction), then one
/// `name value` line per nonzero.
pub fn write_solution(model: &Model, sol: &Solution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "=obj= {}", format_rational(&model.reported_objective(&sol.objective)));
    for (name, v) in model.col_names.iter().zip(&sol.x) {
        if !v.is_zero() {
            let _ = writeln!(out, "{name} {}", format_rational(v));
        }
    }
    out
}

/// Reads a solution file. The objective is recomputed from the values; a
/// header that disagrees is an error.
pub fn read_solution(model: &Model, text: &str) -> Result<Solution, ModelError> {
    let mut x = vec![Rational::zero(); model.num_cols()];
    let mut stated = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let err = |message: String| ModelError::Parse { line: line_no, message };
        if tokens.len() != 2 {
            return Err(err("expected `name value`".into()));
        }
        let value = parse_rational(tokens[1]).map_err(|e| err(e.to_string()))?;
        if tokens[0] == "=obj=" {
            stated = Some(value);
            continue;
        }
        let j = model
            .col_index(tokens[0])
            .ok_or_else(|| err(format!("unknown column `{}`", tokens[0])))?;
        x[j] = value;
    }
    let sol = Solution::new(model, x, super::SolutionOrigin::File);
    if let Some(obj) = stated {
        if obj != model.reported_objective(&sol.objective) {
            return Err(ModelError::Invalid("stated objective does not match the values".into()));
        }
    }
    Ok(sol)
}
