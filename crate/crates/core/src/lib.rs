//! Exact rational mixed-integer programming.
//!
//! Floating-point arithmetic does the heavy lifting; every decision that
//! affects the answer is either computed in rational arithmetic or backed by
//! a safe bound. Optimal and infeasible results can be written as
//! certificates and verified by an independent checker.
//!
//! The runnable examples show each part on its own:
//!
//! - **`exact_arithmetic`** - rationals, nearest floats, enclosures, running error
//! - **`parse_and_check`** - MPS input and hybrid feasibility checks
//! - **`exact_lp`** - exact LP solves and Farkas rays
//! - **`safe_bounds`** - bound-shift, project-and-shift and exact LP bounds
//! - **`presolve_roundtrip`** - exact presolve and postsolve
//! - **`repair_heuristic`** - rounding and exact repair
//! - **`branch_and_bound`** - the full solver with trace statistics
//! - **`certificate`** - writing, checking and tampering with certificates
//! - **`bench`** - seeded batch runs and shifted geometric means
//!
//! ```bash
//! cargo run --example branch_and_bound
//! ```

pub mod bounding;
pub mod certificate;
pub mod cli;
pub mod exactlp;
pub mod fplp;
pub mod generate;
pub mod heuristics;
pub mod lp;
pub mod model;
pub mod numerics;
pub mod presolve;
pub mod tree;
