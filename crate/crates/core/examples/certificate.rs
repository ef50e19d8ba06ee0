//! Writing a proof certificate and verifying it with the independent
//! checker, then showing that a tampered certificate is rejected.
//!
//! ```bash
//! cargo run --example certificate
//! ```

use ratmip::certificate::mutations::{mutate, Mutation};
use ratmip::certificate::{check_certificate, Certificate};
use ratmip::model::parse_mps;
use ratmip::tree::{solve, Config};

fn main() {
    let model = parse_mps(include_str!("../fixtures/parity.mps")).unwrap();
    let out = solve(&model, &Config { certificate: true, ..Config::default() });
    println!("status {}, {} nodes", out.result.status, out.result.nodes);
    let cert = out.certificate.expect("certificate for a solved model");
    let text = cert.to_text();
    println!("{text}");

    let reread = Certificate::parse(&text).unwrap();
    let report = check_certificate(&model, &reread).unwrap();
    println!("accepted: {} constraints, {} derivations", report.constraints, report.derivations);

    for m in Mutation::ALL {
        if let Some(bad) = mutate(&cert, m) {
            println!("{:22} -> {}", m.name(), check_certificate(&model, &bad).unwrap_err());
        }
    }
}
