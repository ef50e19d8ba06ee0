//! Reading an MPS model with exact coefficients and checking candidate
//! points against it.
//!
//! ```bash
//! cargo run --example parse_and_check
//! ```

use ratmip::heuristics::{check_solution, CheckStats};
use ratmip::model::{approximate, check_solution_exact, parse_mps, write_mps};
use ratmip::numerics::{rat, ratio};

const MODEL: &str = "NAME tiny
ROWS
 N obj
 G cover
 L cap
COLUMNS
 M1 'MARKER' 'INTORG'
 x obj 1 cover 1/3
 x cap 2
 M2 'MARKER' 'INTEND'
 y obj 0.5 cover 1
 y cap 1
RHS
 RHS cover 1 cap 7
BOUNDS
 UP BND x 3
 UP BND y 10
ENDATA
";

fn main() {
    let model = parse_mps(MODEL).unwrap();
    println!("{} columns, {} rows, {} integer", model.num_cols(), model.num_rows(), model.num_integer());
    let float = approximate(&model);
    println!("float shadow is faithful: {}", float.is_faithful());

    for x in [vec![rat(3), rat(0)], vec![rat(1), ratio(2, 3)], vec![ratio(1, 2), rat(1)], vec![rat(3), rat(2)]] {
        let mut stats = CheckStats::default();
        let fast = check_solution(&model, &float, &x, &mut stats);
        let exact = check_solution_exact(&model, &x);
        let shown: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        println!("x = {shown:?}: hybrid {fast}, exact {exact:?}, rows decided by floats {}", stats.rows_fast);
    }

    println!("\nround trip:\n{}", write_mps(&model));
}
