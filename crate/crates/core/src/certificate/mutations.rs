//! Deliberate corruptions of a valid certificate, for testing the checker.

use num_traits::One;

use super::format::{Certificate, Reason, Relation};
use crate::model::RowSense;
use crate::numerics::{ratio, ExtendedRational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Adds 1/1000000 to the first multiplier of a linear combination.
    MultiplierPerturbation,
    /// Flips the sense of the last derivation.
    SenseFlip,
    /// Tightens a right-hand side by one.
    RhsChange,
    /// Drops the last derivation.
    DroppedEntry,
    /// Swaps a derivation with an earlier one it depends on.
    ReorderedDependency,
    /// Claims a stronger result.
    WrongGoal,
}

impl Mutation {
    pub const ALL: [Mutation; 6] = [
        Mutation::MultiplierPerturbation,
        Mutation::SenseFlip,
        Mutation::RhsChange,
        Mutation::DroppedEntry,
        Mutation::ReorderedDependency,
        Mutation::WrongGoal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::MultiplierPerturbation => "multiplier-perturbation",
            Self::SenseFlip => "sense-flip",
            Self::RhsChange => "rhs-change",
            Self::DroppedEntry => "dropped-entry",
            Self::ReorderedDependency => "reordered-dependency",
            Self::WrongGoal => "wrong-goal",
        }
    }
}

/// Applies `mutation`; `None` when the certificate has nothing to corrupt.
pub fn mutate(cert: &Certificate, mutation: Mutation) -> Option<Certificate> {
    let mut c = cert.clone();
    let first_lin = c.derivations.iter().position(|d| matches!(&d.reason, Reason::Lin(t) if !t.is_empty()));
    match mutation {
        Mutation::MultiplierPerturbation => {
            let k = first_lin?;
            if let Reason::Lin(terms) = &mut c.derivations[k].reason {
                terms[0].1 += ratio(1, 1_000_000);
            }
        }
        Mutation::SenseFlip => {
            let d = c.derivations.last_mut()?;
            d.constraint.sense = match d.constraint.sense {
                RowSense::Ge => RowSense::Le,
                RowSense::Le => RowSense::Ge,
                RowSense::Eq => RowSense::Ge,
            };
        }
        Mutation::RhsChange => {
            // An absurd combination implies any right-hand side, so target a
            // combination with a nonzero left-hand side, else a model row.
            let target = c
                .derivations
                .iter()
                .position(|d| matches!(&d.reason, Reason::Lin(t) if !t.is_empty()) && !d.constraint.coefs.is_empty());
            let con = match target {
                Some(k) => &mut c.derivations[k].constraint,
                None => c.constraints.first_mut()?,
            };
            match con.sense {
                RowSense::Le => con.rhs -= Rational::one(),
                _ => con.rhs += Rational::one(),
            }
        }
        Mutation::DroppedEntry => {
            c.derivations.pop()?;
        }
        Mutation::ReorderedDependency => {
            let m = c.constraints.len();
            let k = (1..c.derivations.len()).rev().find(|&k| c.derivations[k].reason.refs().contains(&(m + k - 1)))?;
            c.derivations.swap(k - 1, k);
            let (a, b) = (m + k - 1, m + k);
            for d in &mut c.derivations {
                for r in d.reason.refs_mut() {
                    if *r == a {
                        *r = b;
                    } else if *r == b {
                        *r = a;
                    }
                }
            }
        }
        Mutation::WrongGoal => {
            c.relation = match &c.relation {
                Relation::Infeasible => Relation::Range { lower: ExtendedRational::zero(), upper: ExtendedRational::zero() },
                Relation::Range { lower, upper } => {
                    let lower = match lower {
                        ExtendedRational::Finite(l) => ExtendedRational::Finite(l + Rational::one()),
                        _ => ExtendedRational::Finite(Rational::one()),
                    };
                    let upper = if &lower > upper { lower.clone() } else { upper.clone() };
                    Relation::Range { lower, upper }
                }
            };
        }
    }
    Some(c)
}
