//! Exact problem data, its binary64 shadow copy, MPS input/output and
//! solution handling.

mod check;
mod float;
mod mps;
mod solution;

pub(crate) use check::bound_violation;
pub use check::{check_solution_exact, Feasibility, Violation};
pub use float::{approximate, FloatModel, FloatRow, OverflowSite};
pub use mps::{parse_mps, parse_mps_with_sense, write_mps};
pub use solution::{read_solution, write_solution, Solution, SolutionOrigin};

use num_traits::Zero;
use thiserror::Error;

use crate::numerics::{ExtendedRational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid model: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowSense {
    /// `a.x >= b`
    Ge,
    /// `a.x <= b`
    Le,
    /// `a.x == b`
    Eq,
}

impl RowSense {
    pub fn flipped(self) -> Self {
        match self {
            Self::Ge => Self::Le,
            Self::Le => Self::Ge,
            Self::Eq => Self::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Ge => "G",
            Self::Le => "L",
            Self::Eq => "E",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "G" => Some(Self::Ge),
            "L" => Some(Self::Le),
            "E" => Some(Self::Eq),
            _ => None,
        }
    }

    /// Does `activity sense rhs` hold?
    pub fn holds(self, activity: &Rational, rhs: &Rational) -> bool {
        match self {
            Self::Ge => activity >= rhs,
            Self::Le => activity <= rhs,
            Self::Eq => activity == rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjSense {
    Minimize,
    Maximize,
}

/// One linear constraint. Entries are nonzero with strictly increasing
/// column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub coefs: Vec<(usize, Rational)>,
    pub sense: RowSense,
    pub rhs: Rational,
}

impl Row {
    pub fn activity(&self, x: &[Rational]) -> Rational {
        self.coefs.iter().map(|(j, a)| a * &x[*j]).sum()
    }
}

/// `min { c.x + offset | rows, lower <= x <= upper, x_j integer for j in I }`.
///
/// A maximisation input is stored with negated objective; `sense` keeps the
/// original direction for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub col_names: Vec<String>,
    pub rows: Vec<Row>,
    pub objective: Vec<Rational>,
    pub obj_offset: Rational,
    pub lower: Vec<ExtendedRational>,
    pub upper: Vec<ExtendedRational>,
    pub integer: Vec<bool>,
    pub sense: ObjSense,
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            col_names: Vec::new(),
            rows: Vec::new(),
            objective: Vec::new(),
            obj_offset: Rational::zero(),
            lower: Vec::new(),
            upper: Vec::new(),
            integer: Vec::new(),
            sense: ObjSense::Minimize,
        }
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a column and returns its index.
    pub fn add_column(
        &mut self,
        name: impl Into<String>,
        cost: Rational,
        lower: ExtendedRational,
        upper: ExtendedRational,
        integer: bool,
    ) -> usize {
        self.col_names.push(name.into());
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.integer.push(integer);
        self.objective.len() - 1
    }

    /// Appends a row; entries are sorted, merged and stripped of zeros.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coefs: impl IntoIterator<Item = (usize, Rational)>,
        sense: RowSense,
        rhs: Rational,
    ) -> usize {
        let mut entries: Vec<(usize, Rational)> = coefs.into_iter().collect();
        entries.sort_by_key(|(j, _)| *j);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (j, a) in entries {
            match merged.last_mut() {
                Some((k, b)) if *k == j => *b += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        self.rows.push(Row { name: name.into(), coefs: merged, sense, rhs });
        self.rows.len() - 1
    }

    /// Checks the structural invariants: sorted nonzero entries, in-range
    /// indices, consistent vector lengths.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.num_cols();
        if [self.col_names.len(), self.lower.len(), self.upper.len(), self.integer.len()]
            .iter()
            .any(|&len| len != n)
        {
            return Err(ModelError::Invalid("column vectors have different lengths".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            let mut prev: Option<usize> = None;
            for (j, a) in &row.coefs {
                if *j >= n {
                    return Err(ModelError::Invalid(format!("row {i} references column {j}")));
                }
                if a.is_zero() {
                    return Err(ModelError::Invalid(format!("row {i} stores a zero entry")));
                }
                if prev.is_some_and(|p| p >= *j) {
                    return Err(ModelError::Invalid(format!("row {i} indices not increasing")));
                }
                prev = Some(*j);
            }
        }
        Ok(())
    }

    /// A column whose lower bound exceeds its upper bound.
    pub fn empty_domain(&self) -> Option<usize> {
        (0..self.num_cols()).find(|&j| self.lower[j] > self.upper[j])
    }

    pub fn is_trivially_infeasible(&self) -> bool {
        self.empty_domain().is_some()
    }

    /// Internal (minimisation) objective value including the offset.
    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        let dot: Rational = self.objective.iter().zip(x).map(|(c, v)| c * v).sum();
        dot + &self.obj_offset
    }

    /// Objective in the direction the instance was stated.
    pub fn reported_objective(&self, internal: &Rational) -> Rational {
        match self.sense {
            ObjSense::Minimize => internal.clone(),
            ObjSense::Maximize => -internal.clone(),
        }
    }

    pub fn reported_bound(&self, internal: &ExtendedRational) -> ExtendedRational {
        match self.sense {
            ObjSense::Minimize => internal.clone(),
            ObjSense::Maximize => -internal.clone(),
        }
    }

    /// Column-major copy of the constraint matrix.
    pub fn columns(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut cols = vec![Vec::new(); self.num_cols()];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, a) in &row.coefs {
                cols[*j].push((i, a.clone()));
            }
        }
        cols
    }

    pub fn num_integer(&self) -> usize {
        self.integer.iter().filter(|&&b| b).count()
    }

    /// Fraction of continuous columns, `0` for an empty model.
    pub fn continuous_fraction(&self) -> Rational {
        let n = self.num_cols();
        if n == 0 {
            return Rational::zero();
        }
        crate::numerics::ratio((n - self.num_integer()) as i64, n as i64)
    }

    pub fn col_index(&self, name: &str) -> Option<usize> {
        self.col_names.iter().position(|c| c == name)
    }
}
