//! Exact branch-and-bound on a model where floating-point solvers are easy
//! to fool, with the search trace summarised.
//!
//! ```bash
//! cargo run --example branch_and_bound
//! ```

use ratmip::bounding::BoundMethod;
use ratmip::model::parse_mps;
use ratmip::tree::{solve, Config, TraceEvent};

fn main() {
    for (name, text) in [
        ("trap", include_str!("../fixtures/trap.mps")),
        ("decimal", include_str!("../fixtures/decimal.mps")),
        ("knapsack", include_str!("../fixtures/knapsack.mps")),
    ] {
        let model = parse_mps(text).unwrap();
        let out = solve(&model, &Config { record_trace: true, ..Config::default() });
        let r = &out.result;
        let sol = r.incumbent.as_ref().map(|s| s.x.iter().map(|v| v.to_string()).collect::<Vec<_>>());
        println!("{name}: {} objective {:?} at {:?} after {} nodes", r.status, r.objective().map(|o| o.to_string()), sol, r.nodes);
        for m in BoundMethod::ALL {
            let i = m.index();
            println!("  {:6} calls {:3} successes {:3}", m.name(), r.bounding.calls[i], r.bounding.successes[i]);
        }
        let incumbents = out.trace.events.iter().filter(|e| matches!(e, TraceEvent::Incumbent { .. })).count();
        println!("  incumbent updates {incumbents}, trace events {}", out.trace.events.len());
    }
}
