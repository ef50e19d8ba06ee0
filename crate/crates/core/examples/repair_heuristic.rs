//! Float rounding heuristics and exact repair: an almost integral float
//! point has its integers fixed and the continuous part solved exactly.
//!
//! ```bash
//! cargo run --example repair_heuristic
//! ```

use ratmip::heuristics::{check_solution, repair_counted, snap_candidate, CheckStats, RepairBudget, RepairOutcome};
use ratmip::model::{approximate, parse_mps};

const MODEL: &str = "NAME blend
ROWS
 N cost
 G demand
 L mix
COLUMNS
 M1 'MARKER' 'INTORG'
 batch cost 3 demand 7/3
 batch mix 1
 M2 'MARKER' 'INTEND'
 fill cost 1 demand 1
 fill mix -1/10
RHS
 RHS demand 10 mix 4
BOUNDS
 UP BND batch 10
 UP BND fill 100
ENDATA
";

fn main() {
    let model = parse_mps(MODEL).unwrap();
    let float = approximate(&model);
    // A float LP would report something like this: batch nearly 4, fill
    // carrying the float error of 10 - 28/3.
    let candidate = [4.0000000001, 0.6666666666];

    let snapped = snap_candidate(&model, &candidate).unwrap();
    let mut stats = CheckStats::default();
    println!("snapped point feasible: {}", check_solution(&model, &float, &snapped, &mut stats));

    let mut budget = RepairBudget::default();
    println!("repair permitted after 2 exact LPs: {}", budget.permits(2, &model.continuous_fraction()));
    match repair_counted(&model, &candidate, &model.lower, &model.upper, &mut budget) {
        RepairOutcome::Repaired(sol) => {
            println!("repaired: x = {:?}, objective {}", sol.x.iter().map(|v| v.to_string()).collect::<Vec<_>>(), sol.objective);
            assert!(check_solution(&model, &float, &sol.x, &mut stats));
        }
        other => println!("repair: {other:?}"),
    }
    println!("budget: {} calls, {} successes", budget.repair_calls, budget.successes);
}
