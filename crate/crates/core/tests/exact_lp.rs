mod common;

use common::{lp_oracle, random_lp, rng, LpVerdict};
use num_traits::Zero;
use rand::Rng;
use ratmip::exactlp::{solve_exact_lp, verify_farkas, ExactStatus};
use ratmip::lp::{lagrangian_bound, LpOptions, LpStatus};
use ratmip::numerics::ExtendedRational;

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut r = rng(7);
    let mut counts = [0usize; 3];
    for case in 0..300 {
        let n = r.gen_range(1..=6);
        let m = r.gen_range(1..=6);
        let lp = random_lp(&mut r, n, m);
        let res = solve_exact_lp(&lp, None);
        match (lp_oracle(&lp), res.status) {
            (LpVerdict::Optimal(z), ExactStatus::Optimal) => {
                assert_eq!(res.z, z, "case {case}");
                assert!(lp.is_feasible(&res.x));
                assert_eq!(lagrangian_bound(&lp, &res.y, true).bound, ExtendedRational::Finite(z));
                counts[0] += 1;
            }
            (LpVerdict::Infeasible, ExactStatus::Infeasible) => {
                assert!(verify_farkas(&lp, res.farkas.as_ref().unwrap()), "case {case}");
                counts[1] += 1;
            }
            (LpVerdict::Unbounded, ExactStatus::Unbounded) => counts[2] += 1,
            (expected, got) => panic!("case {case}: oracle {expected:?}, solver {got:?}\n{lp:?}"),
        }
    }
    assert!(counts.iter().all(|c| !c.is_zero()), "{counts:?}");
}

#[test]
fn float_solver_quality_and_determinism() {
    let mut r = rng(11);
    for _ in 0..200 {
        let n = r.gen_range(1..=8);
        let m = r.gen_range(1..=8);
        let lp = random_lp(&mut r, n, m);
        let flp = lp.to_float();
        let a = ratmip::lp::solve_lp(&flp, &LpOptions::default());
        let b = ratmip::lp::solve_lp(&flp, &LpOptions::default());
        assert_eq!(a, b);
        if a.status == LpStatus::Optimal {
            let exact = solve_exact_lp(&lp, None);
            assert_eq!(exact.status, ExactStatus::Optimal);
            let z = ratmip::numerics::nearest_float(&exact.z).value;
            assert!((a.objective - z).abs() <= 1e-6 * (1.0 + z.abs()), "{} vs {}", a.objective, z);
        }
    }
}
