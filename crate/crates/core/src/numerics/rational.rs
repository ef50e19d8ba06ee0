use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumericsError;

/// Arbitrary precision rational. `num_rational` keeps every value in lowest
/// terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `[+-]?digits[.digits][(e|E)[+-]digits]` into the exact rational it
/// denotes. A leading or trailing dot (`.5`, `3.`) is accepted as MPS files in
/// the wild use both.
pub fn rational_of_decimal(text: &str) -> Result<Rational, NumericsError> {
    let err = || NumericsError::Parse(text.to_string());
    let bytes = text.as_bytes();
    let mut pos = 0;
    let negative = match bytes.first() {
        Some(b'-') => {
            pos = 1;
            true
        }
        Some(b'+') => {
            pos = 1;
            false
        }
        _ => false,
    };
    let int_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    let int_digits = &text[int_start..pos];
    let mut frac_digits = "";
    if pos < bytes.len() && bytes[pos] == b'.' {
        pos += 1;
        let frac_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        frac_digits = &text[frac_start..pos];
    }
    if int_digits.is_empty() && frac_digits.is_empty() {
        return Err(err());
    }
    let mut exponent: i64 = 0;
    if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
        pos += 1;
        let exp_start = pos;
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            pos += 1;
        }
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if digits_start == pos {
            return Err(err());
        }
        exponent = text[exp_start..pos].parse().map_err(|_| err())?;
        if exponent.abs() > 100_000 {
            return Err(err());
        }
    }
    if pos != bytes.len() {
        return Err(err());
    }

    let mut digits = String::with_capacity(int_digits.len() + frac_digits.len());
    digits.push_str(int_digits);
    digits.push_str(frac_digits);
    let mantissa: BigInt = digits.parse().map_err(|_| err())?;
    let mantissa = if negative { -mantissa } else { mantissa };
    let scale = exponent - frac_digits.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(mantissa * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(mantissa, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Accepts either `p/q` or a decimal literal.
pub fn parse_rational(text: &str) -> Result<Rational, NumericsError> {
    match text.split_once('/') {
        Some((num, den)) => {
            let p: BigInt = parse_integer(num).ok_or_else(|| NumericsError::Parse(text.into()))?;
            let q: BigInt = parse_integer(den).ok_or_else(|| NumericsError::Parse(text.into()))?;
            if q.is_zero() {
                return Err(NumericsError::Parse(text.into()));
            }
            Ok(Rational::new(p, q))
        }
        None => rational_of_decimal(text),
    }
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestFloat {
    pub value: f64,
    /// Set when the rational lies beyond the finite binary64 range and the
    /// value saturated to an infinity.
    pub overflow: bool,
}

/// Binary64 value nearest to `q`, ties to even.
pub fn nearest_float(q: &Rational) -> NearestFloat {
    if q.is_zero() {
        return NearestFloat { value: 0.0, overflow: false };
    }
    let negative = q.is_negative();
    let a = q.numer().abs();
    let b = q.denom().clone();

    let la = a.bits() as i64;
    let lb = b.bits() as i64;
    // k chosen so that a * 2^k / b lies in [2^52, 2^53).
    let mut k = 52 - (la - lb);
    if scaled_quotient(&a, &b, k).0 < (BigInt::one() << 52u32) {
        k += 1;
    }
    // Subnormal range: the quantum is fixed at 2^-1074.
    if k > 1074 {
        k = 1074;
    }
    let (quot, rem, den) = scaled_quotient(&a, &b, k);
    let mut significand = quot.to_u64().expect("significand fits in 54 bits");
    let twice_rem: BigInt = rem << 1u32;
    let round_up = match twice_rem.cmp(&den) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => significand & 1 == 1,
        std::cmp::Ordering::Less => false,
    };
    if round_up {
        significand += 1;
    }
    if significand == 1u64 << 53 {
        significand = 1u64 << 52;
        k -= 1;
    }

    let magnitude_bits = if significand < (1u64 << 52) {
        // subnormal (k == 1074)
        significand
    } else {
        let biased = 52 - k + 1023;
        if biased >= 2047 {
            let value = if negative { f64::NEG_INFINITY } else { f64::INFINITY };
            return NearestFloat { value, overflow: true };
        }
        ((biased as u64) << 52) | (significand - (1u64 << 52))
    };
    let value = f64::from_bits(magnitude_bits);
    NearestFloat { value: if negative { -value } else { value }, overflow: false }
}

/// floor(a * 2^k / b), the remainder, and the effective denominator.
fn scaled_quotient(a: &BigInt, b: &BigInt, k: i64) -> (BigInt, BigInt, BigInt) {
    let (num, den) = if k >= 0 {
        (a << (k as u64), b.clone())
    } else {
        (a.clone(), b << ((-k) as u64))
    };
    let (q, r) = num.div_rem(&den);
    (q, r, den)
}

/// Exact rational value of a finite float.
pub fn float_to_rational(f: f64) -> Option<Rational> {
    if !f.is_finite() {
        return None;
    }
    if f == 0.0 {
        return Some(Rational::zero());
    }
    let bits = f.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if biased == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), biased - 1075)
    };
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    let m = BigInt::from_biguint(sign, mantissa.into());
    Some(if exp >= 0 {
        Rational::from_integer(m << (exp as u64))
    } else {
        Rational::new(m, BigInt::one() << ((-exp) as u64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals() {
        assert_eq!(rational_of_decimal("0.1").unwrap(), ratio(1, 10));
        assert_eq!(rational_of_decimal("-2.5e-2").unwrap(), ratio(-1, 40));
        assert_eq!(rational_of_decimal("3").unwrap(), rat(3));
        assert_eq!(rational_of_decimal("+1.5E3").unwrap(), rat(1500));
        assert_eq!(rational_of_decimal(".5").unwrap(), ratio(1, 2));
        for bad in ["", "-", "1.2.3", "e5", "1e", "abc", "1/2", "1 2"] {
            assert!(rational_of_decimal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn fraction_literals() {
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-").is_err());
    }

    #[test]
    fn nearest_float_examples() {
        assert_eq!(nearest_float(&ratio(1, 2)).value, 0.5);
        let tenth = nearest_float(&ratio(1, 10)).value;
        assert_eq!(tenth.to_bits(), 0.1f64.to_bits());
        let expected = Rational::new(BigInt::from(3602879701896397u64), BigInt::one() << 55u32);
        assert_eq!(float_to_rational(tenth).unwrap(), expected);
        let big = rational_of_decimal("1e20").unwrap();
        let f = nearest_float(&big);
        assert_eq!(float_to_rational(f.value).unwrap(), big);
        assert!(!f.overflow);
    }

    #[test]
    fn nearest_float_extremes() {
        let huge = Rational::from_integer(BigInt::one() << 1100u32);
        let f = nearest_float(&huge);
        assert!(f.overflow && f.value == f64::INFINITY);
        let f = nearest_float(&-huge);
        assert!(f.overflow && f.value == f64::NEG_INFINITY);
        let tiny = Rational::new(BigInt::one(), BigInt::one() << 1074u32);
        assert_eq!(nearest_float(&tiny).value, f64::from_bits(1));
        let below_half = Rational::new(BigInt::one(), BigInt::one() << 1076u32);
        assert_eq!(nearest_float(&below_half).value, 0.0);
        let max = float_to_rational(f64::MAX).unwrap();
        assert_eq!(nearest_float(&max).value, f64::MAX);
    }

    #[test]
    fn ties_go_to_even() {
        // 1 + 2^-53 sits exactly between 1 and 1 + 2^-52.
        let one = rat(1);
        let half_ulp = Rational::new(BigInt::one(), BigInt::one() << 53u32);
        assert_eq!(nearest_float(&(one.clone() + half_ulp.clone())).value, 1.0);
        // 1 + 3 * 2^-53 lies between 1 + 2^-52 and 1 + 2^-51; ties to the even one.
        let three_halves = half_ulp * rat(3);
        assert_eq!(nearest_float(&(one + three_halves)).value, 1.0 + 2.0f64.powi(-51));
    }

    #[test]
    fn float_round_trip() {
        for f in [0.1, -3.75, 1e-310, f64::MIN_POSITIVE, 123456789.0, -f64::MAX] {
            let q = float_to_rational(f).unwrap();
            assert_eq!(nearest_float(&q).value, f);
        }
        assert!(float_to_rational(f64::NAN).is_none());
    }
}
