use super::{nearest_float, Rational};
use crate::numerics::float_to_rational;

/// Closed interval of binary64 values that encloses the exact real result of
/// every operation performed on it.
///
/// Directed rounding is emulated: each operation is evaluated in
/// round-to-nearest, its exact error is recovered with an error-free
/// transformation, and the endpoint is stepped one ulp outward only when the
/// rounding went the wrong way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatInterval {
    pub lo: f64,
    pub hi: f64,
}

// Below this magnitude fma-based error recovery may itself underflow.
const SAFE_PRODUCT: f64 = 1e-290;

/// Lower rounding of `a + b`.
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY && a.is_finite() && b.is_finite() { f64::MAX } else { s };
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// Upper rounding of `a + b`.
pub fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

/// Lower rounding of `a * b`.
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::INFINITY && a.is_finite() && b.is_finite() { f64::MAX } else { p };
    }
    if p.abs() < SAFE_PRODUCT {
        if a == 0.0 || b == 0.0 {
            return p;
        }
        // A positive true product is bounded below by zero.
        return if (a > 0.0) == (b > 0.0) { p.next_down().max(0.0) } else { p.next_down() };
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

/// Upper rounding of `a * b`.
pub fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

impl FloatInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}] is empty");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Tightest float interval containing `q`.
    pub fn enclose(q: &Rational) -> Self {
        let near = nearest_float(q);
        if near.overflow {
            return if near.value > 0.0 {
                Self::new(f64::MAX, f64::INFINITY)
            } else {
                Self::new(f64::NEG_INFINITY, f64::MIN)
            };
        }
        let f = near.value;
        let exact = float_to_rational(f).expect("finite");
        match exact.cmp(q) {
            std::cmp::Ordering::Equal => Self::point(f),
            std::cmp::Ordering::Less => Self::new(f, f.next_up()),
            std::cmp::Ordering::Greater => Self::new(f.next_down(), f),
        }
    }

    pub fn contains(&self, q: &Rational) -> bool {
        let lo_ok = !self.lo.is_finite() && self.lo < 0.0
            || float_to_rational(self.lo).is_some_and(|lo| lo <= *q);
        let hi_ok = !self.hi.is_finite() && self.hi > 0.0
            || float_to_rational(self.hi).is_some_and(|hi| *q <= hi);
        lo_ok && hi_ok
    }

    pub fn width(&self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    pub fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Self {
        let pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ];
        let lo = pairs.iter().map(|&(a, b)| mul_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(a, b)| mul_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Self::new(lo, hi)
    }

    pub fn scale(self, factor: f64) -> Self {
        self.mul(Self::point(factor))
    }

    pub fn min(self, other: Self) -> Self {
        Self::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    pub fn is_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, ratio};

    #[test]
    fn enclosure_of_thirds() {
        let third = ratio(1, 3);
        let iv = FloatInterval::enclose(&third);
        assert!(iv.lo < iv.hi);
        assert!(iv.contains(&third));
        assert_eq!(iv.hi, iv.lo.next_up());
        assert_eq!(FloatInterval::enclose(&ratio(3, 4)), FloatInterval::point(0.75));
    }

    #[test]
    fn exact_operations_stay_degenerate() {
        let a = FloatInterval::point(0.5);
        let b = FloatInterval::point(0.25);
        assert_eq!(a.add(b), FloatInterval::point(0.75));
        assert_eq!(a.mul(b), FloatInterval::point(0.125));
    }

    #[test]
    fn inexact_sum_is_enclosed() {
        let s = FloatInterval::point(0.1).add(FloatInterval::point(0.2));
        let exact = float_to_rational(0.1).unwrap() + float_to_rational(0.2).unwrap();
        assert!(s.contains(&exact));
        assert!(s.lo < s.hi);
    }

    #[test]
    fn tiny_products() {
        let p = FloatInterval::point(1e-200).mul(FloatInterval::point(1e-200));
        assert_eq!(p.lo, 0.0);
        assert!(p.hi > 0.0);
        let zero = FloatInterval::point(0.0).mul(FloatInterval::point(1e-300));
        assert!(zero.is_zero());
    }

    #[test]
    fn overflow_saturates_outward() {
        let p = FloatInterval::point(1e300).mul(FloatInterval::point(1e300));
        assert_eq!(p.lo, f64::MAX);
        assert_eq!(p.hi, f64::INFINITY);
        assert!(p.contains(&(rat(10).pow(600))));
    }
}
