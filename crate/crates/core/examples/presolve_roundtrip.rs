//! Exact presolve and postsolve: reduce, solve the reduced model, map the
//! solution back and confirm it is feasible and optimal for the original.
//!
//! ```bash
//! cargo run --example presolve_roundtrip
//! ```

use ratmip::generate::{random_mip, MipShape};
use ratmip::model::check_solution_exact;
use ratmip::presolve::{postsolve, presolve, PresolveOptions, PresolveOutcome};
use ratmip::tree::{solve, Config};

fn main() {
    let shape = MipShape { rows: 8, ..MipShape::default() };
    let raw = Config { presolve: false, ..Config::default() };
    for seed in 0..8 {
        let model = random_mip(seed, &shape);
        let (outcome, stats) = presolve(&model, &PresolveOptions::default());
        let reference = solve(&model, &raw).result;
        match outcome {
            PresolveOutcome::Infeasible(witness) => {
                println!("seed {seed}: presolve proves infeasibility ({witness:?}); search says {}", reference.status);
            }
            PresolveOutcome::Reduced { model: reduced, stack } => {
                let inner = solve(&reduced, &raw).result;
                let mapped = inner.incumbent.map(|s| postsolve(&stack, &s).unwrap());
                if let Some(sol) = &mapped {
                    assert!(check_solution_exact(&model, &sol.x).is_feasible());
                }
                println!(
                    "seed {seed}: {}x{} -> {}x{} in {} rounds ({} reductions); objective {:?} vs {:?}",
                    model.num_rows(),
                    model.num_cols(),
                    reduced.num_rows(),
                    reduced.num_cols(),
                    stats.rounds,
                    stats.total(),
                    mapped.map(|s| s.objective.to_string()),
                    reference.objective().map(|o| o.to_string()),
                );
            }
        }
    }
}
