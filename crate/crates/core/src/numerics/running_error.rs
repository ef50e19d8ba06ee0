use super::{add_up, mul_up, NumericsError};

/// Unit roundoff of binary64.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

// Absolute error floor of a product whose result lands in the subnormal range.
const UNDERFLOW_FLOOR: f64 = 5e-324;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningDot {
    /// Floating-point value of `sum(a_bar[i] * x_bar[i])`, evaluated in index order.
    pub value: f64,
    /// Bound on `|value - a.x|` for every exact `(a, x)` inside the radii.
    pub error_bound: f64,
}

/// Dot product with a running error bound.
///
/// Each product and partial sum satisfies `|op_exact - op_float| <= u * |op_float|`
/// (plus an absolute underflow floor for products), so the accumulated terms
/// `|p_i| + |s_i|` bound the evaluation error. The data perturbation
/// `(|a_bar| + delta_a) * delta_x + delta_a * |x_bar|` is added on top. Every
/// accumulation of the bound itself is rounded upward.
pub fn running_error_dot(
    a_bar: &[f64],
    x_bar: &[f64],
    delta_a: &[f64],
    delta_x: &[f64],
) -> Result<RunningDot, NumericsError> {
    let n = a_bar.len();
    for other in [x_bar.len(), delta_a.len(), delta_x.len()] {
        if other != n {
            return Err(NumericsError::LengthMismatch(n, other));
        }
    }
    let mut sum = 0.0f64;
    let mut evaluation = 0.0f64;
    let mut perturbation = 0.0f64;
    for i in 0..n {
        let (a, x, da, dx) = (a_bar[i], x_bar[i], delta_a[i], delta_x[i]);
        if !(a.is_finite() && x.is_finite() && da.is_finite() && dx.is_finite()) {
            return Err(NumericsError::NonFinite(i));
        }
        let p = a * x;
        sum += p;
        if !sum.is_finite() {
            return Err(NumericsError::NonFinite(i));
        }
        evaluation = add_up(add_up(evaluation, p.abs()), sum.abs());
        if p != 0.0 && p.abs() < f64::MIN_POSITIVE {
            evaluation = add_up(evaluation, UNDERFLOW_FLOOR / UNIT_ROUNDOFF);
        }
        if da != 0.0 || dx != 0.0 {
            let term = add_up(mul_up(add_up(a.abs(), da), dx), mul_up(da, x.abs()));
            perturbation = add_up(perturbation, term);
        }
    }
    let error_bound = add_up(mul_up(evaluation, UNIT_ROUNDOFF), perturbation);
    Ok(RunningDot { value: sum, error_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{float_to_rational, ratio};
    use num_traits::Signed;

    #[test]
    fn empty_sum() {
        let d = running_error_dot(&[], &[], &[], &[]).unwrap();
        assert_eq!((d.value, d.error_bound), (0.0, 0.0));
    }

    #[test]
    fn small_exact_case() {
        let d = running_error_dot(&[1.0, 1.0], &[0.5, 0.25], &[0.0; 2], &[0.0; 2]).unwrap();
        assert_eq!(d.value, 0.75);
        assert!(d.error_bound <= 4.0 * UNIT_ROUNDOFF * 0.75);
        let err = (float_to_rational(d.value).unwrap() - ratio(3, 4)).abs();
        assert!(err <= float_to_rational(d.error_bound).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            running_error_dot(&[1.0], &[f64::NAN], &[0.0], &[0.0]),
            Err(NumericsError::NonFinite(0))
        );
        assert_eq!(
            running_error_dot(&[1.0], &[1.0, 2.0], &[0.0], &[0.0]),
            Err(NumericsError::LengthMismatch(1, 2))
        );
    }
}
