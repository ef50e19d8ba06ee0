//! Certificate checker. It trusts nothing but exact arithmetic and the
//! parsed model; in particular it shares no code with the solver.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::format::{Certificate, Constraint, Reason, Relation, Sparse};
use crate::model::{Model, RowSense};
use crate::numerics::{ExtendedRational, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum CheckError {
    #[error("variable section does not match the model: {0}")]
    Variables(String),
    #[error("integer section does not match the model")]
    Integers,
    #[error("objective does not match the model")]
    Objective,
    #[error("constraint {0} does not match the model")]
    Constraint(usize),
    #[error("constraint section has {got} entries, expected {expected}")]
    ConstraintCount { got: usize, expected: usize },
    #[error("solution {0} is infeasible: {1}")]
    Solution(usize, String),
    #[error("relation: {0}")]
    Relation(String),
    #[error("derivation {index}: {msg}")]
    Derivation { index: usize, msg: String },
    #[error("goal not reached: {0}")]
    Goal(String),
}

/// Summary of a valid certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub constraints: usize,
    pub derivations: usize,
    pub solutions: usize,
}

fn one() -> Rational {
    Rational::one()
}

/// Canonical sparse vector: sorted, merged, no zeros.
fn canonical(v: &Sparse) -> Sparse {
    let mut v = v.clone();
    v.sort_by_key(|(j, _)| *j);
    let mut out: Sparse = Vec::with_capacity(v.len());
    for (j, a) in v {
        match out.last_mut() {
            Some((k, b)) if *k == j => *b += a,
            _ => out.push((j, a)),
        }
        if out.last().is_some_and(|(_, b)| b.is_zero()) {
            out.pop();
        }
    }
    out
}

fn negate(v: &Sparse) -> Sparse {
    v.iter().map(|(j, a)| (*j, -a.clone())).collect()
}

/// `>=` forms of a constraint.
fn ge_forms(c: &Constraint) -> Vec<(Sparse, Rational)> {
    let coefs = canonical(&c.coefs);
    match c.sense {
        RowSense::Ge => vec![(coefs, c.rhs.clone())],
        RowSense::Le => vec![(negate(&coefs), -c.rhs.clone())],
        RowSense::Eq => vec![(coefs.clone(), c.rhs.clone()), (negate(&coefs), -c.rhs.clone())],
    }
}

/// `0 >= b` with `b > 0`, or `0 = b` with `b != 0`.
fn is_absurd(c: &Constraint) -> bool {
    canonical(&c.coefs).is_empty()
        && match c.sense {
            RowSense::Ge => c.rhs.is_positive(),
            RowSense::Le => c.rhs.is_negative(),
            RowSense::Eq => !c.rhs.is_zero(),
        }
}

/// Does `c` imply `d` syntactically?
fn dominates(c: &Constraint, d: &Constraint) -> bool {
    if is_absurd(c) {
        return true;
    }
    let cf = ge_forms(c);
    ge_forms(d).iter().all(|(dc, db)| cf.iter().any(|(cc, cb)| cc == dc && cb >= db))
}

fn satisfies(c: &Constraint, x: &[Rational]) -> bool {
    let act: Rational = c.coefs.iter().map(|(j, a)| a * &x[*j]).sum();
    c.sense.holds(&act, &c.rhs)
}

fn expected_constraints(model: &Model) -> Vec<Constraint> {
    let mut cons: Vec<Constraint> = model
        .rows
        .iter()
        .map(|r| Constraint { name: r.name.clone(), sense: r.sense, rhs: r.rhs.clone(), coefs: r.coefs.clone() })
        .collect();
    for j in 0..model.num_cols() {
        if let Some(l) = model.lower[j].finite() {
            cons.push(Constraint { name: String::new(), sense: RowSense::Ge, rhs: l.clone(), coefs: vec![(j, one())] });
        }
        if let Some(u) = model.upper[j].finite() {
            cons.push(Constraint { name: String::new(), sense: RowSense::Ge, rhs: -u.clone(), coefs: vec![(j, -one())] });
        }
    }
    cons
}

struct Checker<'a> {
    cert: &'a Certificate,
    integer: Vec<bool>,
    /// All constraints, model part and derived part.
    all: Vec<&'a Constraint>,
    assumptions: Vec<BTreeSet<usize>>,
}

impl Checker<'_> {
    fn fail<T>(index: usize, msg: impl Into<String>) -> Result<T, CheckError> {
        Err(CheckError::Derivation { index, msg: msg.into() })
    }

    fn valid_refs(&self, index: usize, refs: &[usize]) -> Result<(), CheckError> {
        match refs.iter().find(|&&r| r >= index) {
            Some(r) => Self::fail(index, format!("reference {r} is not earlier")),
            None => Ok(()),
        }
    }

    fn combine(&self, index: usize, terms: &[(usize, Rational)], sense: RowSense) -> Result<(Sparse, Rational), CheckError> {
        let mut coefs: Sparse = Vec::new();
        let mut rhs = Rational::zero();
        for (i, mult) in terms {
            let c = self.all[*i];
            // Multipliers must keep the direction of `sense`.
            let ok = match (sense, c.sense) {
                (_, RowSense::Eq) => true,
                (RowSense::Eq, _) => mult.is_zero(),
                (RowSense::Ge, RowSense::Ge) | (RowSense::Le, RowSense::Le) => !mult.is_negative(),
                (RowSense::Ge, RowSense::Le) | (RowSense::Le, RowSense::Ge) => !mult.is_positive(),
            };
            if !ok {
                return Self::fail(index, format!("multiplier {mult} of constraint {i} has the wrong sign"));
            }
            coefs.extend(c.coefs.iter().map(|(j, a)| (*j, a * mult)));
            rhs += &c.rhs * mult;
        }
        Ok((canonical(&coefs), rhs))
    }

    fn union(&self, refs: &[usize]) -> BTreeSet<usize> {
        refs.iter().flat_map(|&r| self.assumptions[r].iter().copied()).collect()
    }

    /// `x_j <= k` or `x_j >= k` on an integer variable: `(j, sense, k)`.
    fn bound_of(&self, c: &Constraint) -> Option<(usize, RowSense, Rational)> {
        let coefs = canonical(&c.coefs);
        match coefs.as_slice() {
            [(j, a)] if self.integer[*j] && a.is_one() && c.rhs.is_integer() && c.sense != RowSense::Eq => {
                Some((*j, c.sense, c.rhs.clone()))
            }
            _ => None,
        }
    }

    fn derivation(&mut self, index: usize, c: &Constraint, reason: &Reason) -> Result<BTreeSet<usize>, CheckError> {
        self.valid_refs(index, &reason.refs())?;
        match reason {
            Reason::Asm => Ok(BTreeSet::from([index])),
            Reason::Lin(terms) | Reason::Rnd(terms) => {
                let rounding = matches!(reason, Reason::Rnd(_));
                let sense = if rounding && c.sense == RowSense::Eq { RowSense::Ge } else { c.sense };
                let (coefs, mut rhs) = self.combine(index, terms, sense)?;
                if rounding {
                    if let Some((j, a)) = coefs.iter().find(|(j, a)| !self.integer[*j] || !a.is_integer()) {
                        return Self::fail(index, format!("cannot round: coefficient {a} on column {j}"));
                    }
                    rhs = match sense {
                        RowSense::Ge => rhs.ceil(),
                        _ => rhs.floor(),
                    };
                }
                let combined = Constraint { name: String::new(), sense, rhs, coefs };
                if !dominates(&combined, c) {
                    return Self::fail(index, "combination does not imply the stated constraint");
                }
                Ok(self.union(&reason.refs()))
            }
            Reason::Uns { i1, a1, i2, a2 } => {
                for a in [a1, a2] {
                    let is_asm = *a >= self.cert.constraints.len()
                        && matches!(self.cert.derivations[*a - self.cert.constraints.len()].reason, Reason::Asm);
                    if !is_asm {
                        return Self::fail(index, format!("{a} is not an assumption"));
                    }
                }
                let (Some(b1), Some(b2)) = (self.bound_of(self.all[*a1]), self.bound_of(self.all[*a2])) else {
                    return Self::fail(index, "assumptions are not integer variable bounds");
                };
                let complementary = b1.0 == b2.0
                    && match (b1.1, b2.1) {
                        (RowSense::Le, RowSense::Ge) => b2.2 == &b1.2 + one(),
                        (RowSense::Ge, RowSense::Le) => b1.2 == &b2.2 + one(),
                        _ => false,
                    };
                if !complementary {
                    return Self::fail(index, "assumptions do not split an integer variable");
                }
                if !dominates(self.all[*i1], c) || !dominates(self.all[*i2], c) {
                    return Self::fail(index, "a branch does not imply the stated constraint");
                }
                let mut set: BTreeSet<usize> = self.assumptions[*i1].iter().copied().filter(|r| r != a1).collect();
                set.extend(self.assumptions[*i2].iter().copied().filter(|r| r != a2));
                Ok(set)
            }
        }
    }
}

/// Verifies `cert` against `model`.
pub fn check_certificate(model: &Model, cert: &Certificate) -> Result<CheckReport, CheckError> {
    let n = model.num_cols();
    if cert.var_names.len() != n {
        return Err(CheckError::Variables(format!("{} variables, model has {n}", cert.var_names.len())));
    }
    if let Some(j) = (0..n).find(|&j| cert.var_names[j] != model.col_names[j]) {
        return Err(CheckError::Variables(format!("name of column {j}")));
    }
    let ints: Vec<usize> = (0..n).filter(|&j| model.integer[j]).collect();
    let mut cert_ints = cert.integers.clone();
    cert_ints.sort_unstable();
    if cert_ints != ints {
        return Err(CheckError::Integers);
    }
    let obj: Sparse = canonical(&model.objective.iter().cloned().enumerate().collect());
    if canonical(&cert.objective) != obj || cert.objective.iter().any(|(j, _)| *j >= n) {
        return Err(CheckError::Objective);
    }
    let expected = expected_constraints(model);
    if cert.constraints.len() != expected.len() {
        return Err(CheckError::ConstraintCount { got: cert.constraints.len(), expected: expected.len() });
    }
    for (i, (c, e)) in cert.constraints.iter().zip(&expected).enumerate() {
        if c.sense != e.sense || c.rhs != e.rhs || canonical(&c.coefs) != canonical(&e.coefs) {
            return Err(CheckError::Constraint(i));
        }
    }
    let all_refs_in_range = |v: &Sparse| v.iter().all(|(j, _)| *j < n);

    // Primal side.
    let mut best: Option<Rational> = None;
    for (s, (_, x)) in cert.solutions.iter().enumerate() {
        if !all_refs_in_range(x) {
            return Err(CheckError::Solution(s, "column index out of range".into()));
        }
        let mut point = vec![Rational::zero(); n];
        for (j, v) in x {
            point[*j] = v.clone();
        }
        if let Some(j) = ints.iter().find(|&&j| !point[j].is_integer()) {
            return Err(CheckError::Solution(s, format!("column {j} is fractional")));
        }
        if let Some(i) = cert.constraints.iter().position(|c| !satisfies(c, &point)) {
            return Err(CheckError::Solution(s, format!("violates constraint {i}")));
        }
        let value: Rational = obj.iter().map(|(j, c)| c * &point[*j]).sum();
        best = Some(best.map_or(value.clone(), |b| b.min(value)));
    }
    match &cert.relation {
        Relation::Infeasible if !cert.solutions.is_empty() => {
            return Err(CheckError::Relation("infeasibility claimed next to a solution".into()))
        }
        Relation::Range { lower, upper } => {
            if lower > upper {
                return Err(CheckError::Relation("empty range".into()));
            }
            if let ExtendedRational::Finite(u) = upper {
                if !best.as_ref().is_some_and(|b| b <= u) {
                    return Err(CheckError::Relation(format!("no solution reaches the upper bound {u}")));
                }
            }
        }
        Relation::Infeasible => {}
    }

    // Dual side.
    let m = cert.constraints.len();
    let mut checker = Checker {
        cert,
        integer: (0..n).map(|j| model.integer[j]).collect(),
        all: cert.constraints.iter().chain(cert.derivations.iter().map(|d| &d.constraint)).collect(),
        assumptions: vec![BTreeSet::new(); m],
    };
    for (k, d) in cert.derivations.iter().enumerate() {
        let index = m + k;
        if !all_refs_in_range(&d.constraint.coefs) {
            return Err(CheckError::Derivation { index, msg: "column index out of range".into() });
        }
        let set = checker.derivation(index, &d.constraint, &d.reason)?;
        checker.assumptions.push(set);
    }
    let goal_reached = |c: &Constraint| match &cert.relation {
        Relation::Infeasible => is_absurd(c),
        Relation::Range { lower: ExtendedRational::NegInf, .. } => true,
        Relation::Range { lower: ExtendedRational::Finite(l), .. } => {
            dominates(c, &Constraint { name: String::new(), sense: RowSense::Ge, rhs: l.clone(), coefs: obj.clone() })
        }
        Relation::Range { lower: ExtendedRational::PosInf, .. } => is_absurd(c),
    };
    let trivially_done = matches!(cert.relation, Relation::Range { lower: ExtendedRational::NegInf, .. });
    if !trivially_done {
        let Some(last) = cert.derivations.last() else {
            return Err(CheckError::Goal("no derivations".into()));
        };
        if !checker.assumptions[m + cert.derivations.len() - 1].is_empty() {
            return Err(CheckError::Goal("last derivation depends on assumptions".into()));
        }
        if !goal_reached(&last.constraint) {
            return Err(CheckError::Goal("last derivation does not prove the relation".into()));
        }
    }
    Ok(CheckReport { constraints: m, derivations: cert.derivations.len(), solutions: cert.solutions.len() })
}
