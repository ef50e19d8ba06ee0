//! Proof certificates: a primal solution section plus a derivation list
//! that proves the dual side, and an independent checker.

mod check;
mod emit;
mod format;
pub mod mutations;

pub use check::{check_certificate, CheckError, CheckReport};
pub use emit::{emit, model_constraints, EmitError};
pub use format::{Certificate, Constraint, Derivation, FormatError, Reason, Relation, Sparse};

#[cfg(test)]
mod tests;
