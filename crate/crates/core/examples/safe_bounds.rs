//! Turning an untrusted float LP solution into a valid dual bound with the
//! three safe bounding methods.
//!
//! ```bash
//! cargo run --example safe_bounds
//! ```

use ratmip::bounding::{bound_shift, exact_lp_bound, project_and_shift, BoundingContext};
use ratmip::exactlp::{exact_relaxation, solve_exact_lp};
use ratmip::fplp::{float_relaxation, solve_fp_lp};
use ratmip::generate::{random_mip, MipShape};
use ratmip::model::approximate;
use ratmip::numerics::format_rational;

fn main() {
    let shape = MipShape { tighten: 0.0, ..MipShape::default() };
    for seed in 0..5 {
        let model = random_mip(seed, &shape);
        let lp = exact_relaxation(&model, &model.lower, &model.upper);
        let float = float_relaxation(&approximate(&model), &model.lower, &model.upper);
        let fp = solve_fp_lp(&float, None, None);
        let exact = solve_exact_lp(&lp, None);
        let mut ctx = BoundingContext::new(&lp);
        println!("seed {seed}: float LP {:.9}, exact LP {}", fp.objective, format_rational(&exact.z));
        for res in [bound_shift(&ctx, &lp, &fp.y), project_and_shift(&mut ctx, &lp, &fp.y), exact_lp_bound(&lp, None)] {
            assert!(!res.success || res.bound <= ratmip::numerics::ExtendedRational::Finite(exact.z.clone()));
            println!("  {:6} success {:5} bound {}", res.method.name(), res.success, res.bound);
        }
    }
}
