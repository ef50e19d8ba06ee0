//! Exact rationals, extended rationals, outward-rounded float intervals and
//! running error analysis for floating-point dot products.
//!
//! Everything downstream treats [`Rational`] as the authoritative number type;
//! binary64 values only ever serve as approximations whose error is bounded
//! by the tools in this module.

mod extended;
mod interval;
mod rational;
mod running_error;

pub use extended::ExtendedRational;
pub use interval::{add_down, add_up, mul_down, mul_up, FloatInterval};
pub use rational::{
    float_to_rational, format_rational, nearest_float, parse_rational, rat, ratio,
    rational_of_decimal, NearestFloat, Rational,
};
pub use running_error::{running_error_dot, RunningDot, UNIT_ROUNDOFF};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("malformed number literal `{0}`")]
    Parse(String),
    #[error("non-finite input at position {0}")]
    NonFinite(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("infinity minus infinity is undefined")]
    InfinityMinusInfinity,
}
