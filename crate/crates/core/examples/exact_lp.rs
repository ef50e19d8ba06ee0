//! Solving an LP exactly: a float solve, iterative refinement and, when
//! needed, a rational simplex finish. Infeasible LPs come with a verified
//! Farkas ray.
//!
//! ```bash
//! cargo run --example exact_lp
//! ```

use ratmip::exactlp::{exact_relaxation, solve_exact_lp, verify_farkas, ExactStatus};
use ratmip::lp::lagrangian_bound;
use ratmip::model::parse_mps;
use ratmip::numerics::{format_rational, ExtendedRational};

fn main() {
    let model = parse_mps(include_str!("../fixtures/exactness.mps")).unwrap();
    let lp = exact_relaxation(&model, &model.lower, &model.upper);
    let res = solve_exact_lp(&lp, None);
    println!("status {:?}, objective {}", res.status, format_rational(&res.z));
    println!("refinement rounds {}, rational finish {}", res.stats.rounds, res.stats.rational_finish);
    let dual = lagrangian_bound(&lp, &res.y, true);
    assert_eq!(dual.bound, ExtendedRational::Finite(res.z.clone()));
    println!("dual multipliers prove the same bound: {}", dual.bound);

    let mut tight = model.clone();
    tight.upper[0] = ExtendedRational::Finite(ratmip::numerics::ratio(999_999_999, 1_000_000_001));
    let lp = exact_relaxation(&tight, &tight.lower, &tight.upper);
    let res = solve_exact_lp(&lp, None);
    assert_eq!(res.status, ExactStatus::Infeasible);
    let ray = res.farkas.unwrap();
    println!("tightened bound: infeasible, Farkas ray {ray:?} verified {}", verify_farkas(&lp, &ray));
}
