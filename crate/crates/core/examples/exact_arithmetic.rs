//! Exact rationals next to their float shadows: decimal parsing, nearest
//! floats, enclosing intervals and a dot product with a running error bound.
//!
//! ```bash
//! cargo run --example exact_arithmetic
//! ```

use ratmip::numerics::{
    float_to_rational, format_rational, nearest_float, rational_of_decimal, running_error_dot, FloatInterval,
};

fn main() {
    let tenth = rational_of_decimal("0.1").unwrap();
    let near = nearest_float(&tenth);
    println!("0.1 as a rational:        {}", format_rational(&tenth));
    println!("nearest binary64:         {:e}", near.value);
    println!("that float as a rational: {}", format_rational(&float_to_rational(near.value).unwrap()));

    let box_ = FloatInterval::enclose(&tenth);
    println!("enclosure:                [{:e}, {:e}] width {:e}", box_.lo, box_.hi, box_.width());
    assert!(box_.contains(&tenth));

    // 0.1 + 0.2 - 0.3 with a rigorous error bound.
    let a = [0.1, 0.2, 0.3];
    let x = [1.0, 1.0, -1.0];
    let dot = running_error_dot(&a, &x, &[0.0; 3], &[0.0; 3]).unwrap();
    println!("float 0.1+0.2-0.3:        {:e} +- {:e}", dot.value, dot.error_bound);
    let exact: ratmip::numerics::Rational = a.iter().zip(x).map(|(ai, xi)| float_to_rational(ai * xi).unwrap()).sum();
    println!("exact sum of the floats:  {}", format_rational(&exact));
}
