//! Property tests of the exact building blocks against test-side oracles.

mod common;

use num_traits::Signed;
use proptest::prelude::*;

use common::{mip_oracle, q, rng};
use ratmip::generate::{random_mip, MipShape};
use ratmip::heuristics::{check_solution, CheckStats};
use ratmip::model::{approximate, check_solution_exact, parse_mps, write_mps};
use ratmip::numerics::{float_to_rational, running_error_dot, FloatInterval, Rational};
use ratmip::presolve::{postsolve, presolve, PresolveOptions, PresolveOutcome};
use ratmip::tree::{solve, Config};

fn rational() -> impl Strategy<Value = Rational> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000).prop_map(|(n, d)| q(n, d))
}

fn shape() -> impl Strategy<Value = MipShape> {
    (1usize..=6, 0usize..=2, 1usize..=5, 1i64..=100).prop_map(|(binaries, continuous, rows, max_den)| MipShape {
        binaries,
        continuous,
        rows,
        max_den,
        ..MipShape::default()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enclosures_contain_exact_results(a in rational(), b in rational()) {
        let (ia, ib) = (FloatInterval::enclose(&a), FloatInterval::enclose(&b));
        prop_assert!(ia.contains(&a) && ib.contains(&b));
        prop_assert!(ia.add(ib).contains(&(&a + &b)));
        prop_assert!(ia.sub(ib).contains(&(&a - &b)));
        prop_assert!(ia.mul(ib).contains(&(&a * &b)));
    }

    #[test]
    fn running_error_bounds_the_dot_product(
        pairs in prop::collection::vec((rational(), rational()), 1..10)
    ) {
        let exact: Rational = pairs.iter().map(|(a, x)| a * x).sum();
        let enc = |v: &Rational| {
            let e = FloatInterval::enclose(v);
            (ratmip::numerics::nearest_float(v).value, e.width())
        };
        let (a_bar, da): (Vec<f64>, Vec<f64>) = pairs.iter().map(|(a, _)| enc(a)).unzip();
        let (x_bar, dx): (Vec<f64>, Vec<f64>) = pairs.iter().map(|(_, x)| enc(x)).unzip();
        let dot = running_error_dot(&a_bar, &x_bar, &da, &dx).unwrap();
        let err = (float_to_rational(dot.value).unwrap() - exact).abs();
        prop_assert!(err <= float_to_rational(dot.error_bound).unwrap());
    }

    #[test]
    fn mps_round_trip(seed in 0u64..10_000, shape in shape()) {
        let m = random_mip(seed, &shape);
        let back = parse_mps(&write_mps(&m)).unwrap();
        prop_assert_eq!(back.objective, m.objective);
        prop_assert_eq!(back.rows, m.rows);
        prop_assert_eq!(back.lower, m.lower);
        prop_assert_eq!(back.upper, m.upper);
        prop_assert_eq!(back.integer, m.integer);
    }

    #[test]
    fn hybrid_check_agrees_with_exact(seed in 0u64..10_000, shape in shape()) {
        let m = random_mip(seed, &shape);
        let float = approximate(&m);
        let mut r = rng(seed);
        for _ in 0..8 {
            let x: Vec<Rational> = (0..m.num_cols())
                .map(|j| if m.integer[j] { q(rand::Rng::gen_range(&mut r, 0..=1), 1) } else { q(rand::Rng::gen_range(&mut r, 0..=100), 10) })
                .collect();
            let mut stats = CheckStats::default();
            prop_assert_eq!(check_solution(&m, &float, &x, &mut stats), check_solution_exact(&m, &x).is_feasible());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn presolve_preserves_the_optimum(seed in 0u64..10_000, shape in shape()) {
        let m = random_mip(seed, &shape);
        let want = mip_oracle(&m);
        let (outcome, _) = presolve(&m, &PresolveOptions::default());
        match outcome {
            PresolveOutcome::Infeasible(_) => prop_assert!(want.is_none()),
            PresolveOutcome::Reduced { model, stack } => {
                let inner = solve(&model, &Config { presolve: false, ..Config::default() }).result;
                let got = inner.incumbent.map(|s| postsolve(&stack, &s).unwrap());
                prop_assert_eq!(got.as_ref().map(|s| s.objective.clone()), want);
                if let Some(s) = got {
                    prop_assert!(check_solution_exact(&m, &s.x).is_feasible());
                }
            }
        }
    }

    #[test]
    fn presolve_is_deterministic_with_and_without_threads(seed in 0u64..10_000, shape in shape()) {
        let m = random_mip(seed, &shape);
        let par = presolve(&m, &PresolveOptions::default());
        let seq = presolve(&m, &PresolveOptions { parallel: false, ..PresolveOptions::default() });
        prop_assert_eq!(par.0, seq.0);
    }
}
