//! A small benchmark: random instances, several seeds, every bounding
//! strategy, aggregated with shifted geometric means.
//!
//! ```bash
//! cargo run --release --example bench
//! ```

use ratmip::bounding::BoundingStrategy;
use ratmip::cli::{bench, Aggregate, SolveOpts};
use ratmip::generate::{random_mip, MipShape};
use ratmip::model::Model;

fn main() {
    let shape = MipShape { binaries: 10, rows: 8, ..MipShape::default() };
    let models: Vec<(String, Model)> = (0..6).map(|s| (format!("rand{s}"), random_mip(s, &shape))).collect();
    let opts = SolveOpts {
        time_limit: 60.0,
        node_limit: None,
        seed: 0,
        presolve: ratmip::cli::Toggle::On,
        heuristics: ratmip::cli::Toggle::On,
        bounding: ratmip::cli::BoundingArg::Auto,
        exlp_depth: 5,
        stats: None,
        maximize: false,
    };
    let strategies = [BoundingStrategy::Auto, BoundingStrategy::Bshift, BoundingStrategy::Pshift, BoundingStrategy::Exlp];
    let (runs, aggregates) = bench(&models, &opts, 3, &strategies);
    for r in runs.iter().take(6) {
        println!("{} seed {}: {}", r.instance, r.seed, r.line());
    }
    println!("\n{}", Aggregate::header());
    for (s, a) in aggregates {
        println!("{}", a.row(&format!("{s:?}").to_lowercase()));
    }
}
