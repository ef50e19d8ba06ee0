//! Seeded random instances for examples, benchmarks and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Model, RowSense};
use crate::numerics::{rat, ratio, ExtendedRational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct MipShape {
    pub binaries: usize,
    /// Continuous columns in `[0, 10]`.
    pub continuous: usize,
    pub rows: usize,
    /// Coefficient denominators are drawn from `1..=max_den`.
    pub max_den: i64,
    /// Probability that a coefficient is nonzero.
    pub density: f64,
    /// Probability that a row is built around a point that need not exist,
    /// which makes infeasible instances likely.
    pub tighten: f64,
}

impl Default for MipShape {
    fn default() -> Self {
        Self { binaries: 8, continuous: 2, rows: 6, max_den: 100, density: 0.6, tighten: 0.1 }
    }
}

fn coefficient(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    loop {
        let v = ratio(rng.gen_range(-20..=20), rng.gen_range(1..=max_den.max(1)));
        if v != rat(0) {
            return v;
        }
    }
}

/// A random mixed binary program. Most rows are satisfied by a hidden
/// random point, so most instances are feasible.
pub fn random_mip(seed: u64, shape: &MipShape) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Model::new(format!("rand{seed}"));
    let n = shape.binaries + shape.continuous;
    for j in 0..n {
        let integer = j < shape.binaries;
        let upper = if integer { rat(1) } else { rat(10) };
        let cost = coefficient(&mut rng, shape.max_den);
        m.add_column(format!("x{j}"), cost, ExtendedRational::Finite(rat(0)), ExtendedRational::Finite(upper), integer);
    }
    let hidden: Vec<Rational> = (0..n)
        .map(|j| if j < shape.binaries { rat(rng.gen_range(0..=1)) } else { ratio(rng.gen_range(0..=20), 2) })
        .collect();
    for i in 0..shape.rows {
        let mut coefs: Vec<(usize, Rational)> = Vec::new();
        for j in 0..n {
            if rng.gen_bool(shape.density) {
                coefs.push((j, coefficient(&mut rng, shape.max_den)));
            }
        }
        if coefs.is_empty() {
            let j = rng.gen_range(0..n);
            coefs.push((j, coefficient(&mut rng, shape.max_den)));
        }
        let activity: Rational = coefs.iter().map(|(j, a)| a * &hidden[*j]).sum();
        let sense = match rng.gen_range(0..5) {
            0 => RowSense::Eq,
            1 | 2 => RowSense::Le,
            _ => RowSense::Ge,
        };
        let slack = ratio(rng.gen_range(0..=10), rng.gen_range(1..=4));
        let shift = if rng.gen_bool(shape.tighten) { -slack } else { slack };
        let rhs = match sense {
            RowSense::Eq => activity,
            RowSense::Le => activity + shift,
            RowSense::Ge => activity - shift,
        };
        m.add_row(format!("r{i}"), coefs, sense, rhs);
    }
    m
}
