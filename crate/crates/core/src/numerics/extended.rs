use std::fmt;
use std::ops::Neg;

use num_traits::{Signed, Zero};

use super::{NumericsError, Rational};

/// A rational extended by the two infinities. Variant order gives the usual
/// total order: `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtendedRational {
    pub fn zero() -> Self {
        Self::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Self::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumericsError> {
        use ExtendedRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (NegInf, PosInf) | (PosInf, NegInf) => Err(NumericsError::InfinityMinusInfinity),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumericsError> {
        self.checked_add(&-other.clone())
    }

    /// Scales by a finite rational. `0 * inf` is taken as `0`, the convention
    /// needed when a zero reduced cost meets an infinite variable bound.
    pub fn mul_rational(&self, factor: &Rational) -> Self {
        use ExtendedRational::*;
        match self {
            Finite(a) => Finite(a * factor),
            _ if factor.is_zero() => Self::zero(),
            PosInf if factor.is_positive() => PosInf,
            NegInf if factor.is_negative() => PosInf,
            _ => NegInf,
        }
    }

    pub fn min_of(a: Self, b: Self) -> Self {
        std::cmp::min(a, b)
    }
}

impl Neg for ExtendedRational {
    type Output = Self;
    fn neg(self) -> Self {
        match self {
            Self::NegInf => Self::PosInf,
            Self::PosInf => Self::NegInf,
            Self::Finite(q) => Self::Finite(-q),
        }
    }
}

impl From<Rational> for ExtendedRational {
    fn from(q: Rational) -> Self {
        Self::Finite(q)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInf => f.write_str("-inf"),
            Self::PosInf => f.write_str("inf"),
            Self::Finite(q) => write!(f, "{q}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, ratio};
    use ExtendedRational::*;

    #[test]
    fn ordering_and_arithmetic() {
        assert!(NegInf < Finite(rat(-1_000_000)));
        assert!(Finite(rat(1_000_000)) < PosInf);
        assert_eq!(Finite(ratio(1, 2)).checked_add(&Finite(ratio(1, 3))).unwrap(), Finite(ratio(5, 6)));
        assert_eq!(PosInf.checked_add(&Finite(rat(3))).unwrap(), PosInf);
        assert_eq!(PosInf.checked_add(&NegInf), Err(NumericsError::InfinityMinusInfinity));
        assert_eq!(PosInf.checked_sub(&PosInf), Err(NumericsError::InfinityMinusInfinity));
        assert_eq!(PosInf.mul_rational(&rat(-2)), NegInf);
        assert_eq!(NegInf.mul_rational(&rat(0)), ExtendedRational::zero());
        assert_eq!(-NegInf, PosInf);
        assert_eq!(Finite(ratio(-3, 4)).to_string(), "-3/4");
    }
}
