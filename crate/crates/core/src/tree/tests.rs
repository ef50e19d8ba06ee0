use super::*;
use crate::bounding::BoundMethod;
use crate::certificate::check_certificate;
use crate::model::parse_mps;
use crate::numerics::{rat, ratio};

fn fixture(name: &str) -> Model {
    let text = match name {
        "knapsack" => include_str!("../../fixtures/knapsack.mps"),
        "parity" => include_str!("../../fixtures/parity.mps"),
        "exactness" => include_str!("../../fixtures/exactness.mps"),
        "trap" => include_str!("../../fixtures/trap.mps"),
        "decimal" => include_str!("../../fixtures/decimal.mps"),
        _ => unreachable!(),
    };
    parse_mps(text).unwrap()
}

fn quiet() -> Config {
    Config { presolve: false, heuristics: false, record_trace: true, ..Config::default() }
}

#[test]
fn knapsack_optimum() {
    let m = fixture("knapsack");
    for config in [quiet(), Config::default(), Config { certificate: true, ..quiet() }] {
        let out = solve(&m, &config);
        assert_eq!(out.result.status, SolveStatus::Optimal);
        let inc = out.result.incumbent.unwrap();
        assert_eq!(inc.x, vec![rat(1), rat(0)]);
        assert_eq!(inc.objective, rat(-5));
        assert_eq!(out.result.dual_bound, ExtendedRational::Finite(rat(-5)));
        assert_eq!(out.result.gap, ExtendedRational::zero());
    }
}

#[test]
fn parity_is_infeasible_with_and_without_presolve() {
    let m = fixture("parity");
    let out = solve(&m, &quiet());
    assert_eq!(out.result.status, SolveStatus::Infeasible);
    assert!(out.result.nodes > 1);
    let out = solve(&m, &Config::default());
    assert_eq!(out.result.status, SolveStatus::Infeasible);
    assert_eq!(out.result.nodes, 0);
}

#[test]
fn tolerance_trap_is_solved_exactly() {
    let out = solve(&fixture("trap"), &quiet());
    assert_eq!(out.result.status, SolveStatus::Optimal);
    assert_eq!(out.result.incumbent.unwrap().x, vec![rat(0)]);
    let out = solve(&fixture("exactness"), &quiet());
    assert_eq!(out.result.objective(), Some(ratio(1_000_000_000, 1_000_000_001)));
    let out = solve(&fixture("decimal"), &quiet());
    assert_eq!(out.result.objective(), Some(rat(2)));
}

#[test]
fn pure_lp_needs_one_node() {
    let text = "NAME lp\nROWS\n N obj\n G r\nCOLUMNS\n x obj 1 r 3\nRHS\n RHS r 1\nENDATA\n";
    let out = solve(&parse_mps(text).unwrap(), &quiet());
    assert_eq!(out.result.status, SolveStatus::Optimal);
    assert_eq!(out.result.nodes, 1);
    assert_eq!(out.result.objective(), Some(ratio(1, 3)));
}

#[test]
fn unbounded_relaxation() {
    let text = "NAME u\nROWS\n N obj\n G r\nCOLUMNS\n x obj -1 r 1\nRHS\n RHS r 1\nENDATA\n";
    let out = solve(&parse_mps(text).unwrap(), &quiet());
    assert_eq!(out.result.status, SolveStatus::Unbounded);
}

#[test]
fn node_limit_reports_bounds() {
    let out = solve(&fixture("knapsack"), &Config { node_limit: Some(1), ..quiet() });
    assert_eq!(out.result.status, SolveStatus::NodeLimit);
    assert_eq!(out.result.nodes, 1);
    assert!(out.result.dual_bound <= ExtendedRational::Finite(rat(-5)));
}

#[test]
fn gap_examples() {
    let f = |v: i64| ExtendedRational::Finite(rat(v));
    assert_eq!(compute_gap(&f(3), &f(3)), ExtendedRational::zero());
    assert_eq!(compute_gap(&f(0), &f(0)), ExtendedRational::zero());
    assert_eq!(compute_gap(&ExtendedRational::PosInf, &f(3)), ExtendedRational::PosInf);
    assert_eq!(compute_gap(&f(1), &f(-1)), ExtendedRational::PosInf);
    assert_eq!(compute_gap(&f(-2), &f(-3)), ExtendedRational::Finite(ratio(1, 3)));
    assert_eq!(compute_gap(&f(0), &f(-3)), ExtendedRational::Finite(rat(1)));
}

#[test]
fn certificates_for_fixtures_check() {
    for name in ["knapsack", "parity", "exactness", "trap", "decimal"] {
        let m = fixture(name);
        for bounding in [BoundingStrategy::Auto, BoundingStrategy::Exlp, BoundingStrategy::Bshift, BoundingStrategy::Pshift] {
            let out = solve(&m, &Config { certificate: true, bounding, ..Config::default() });
            let cert = out.certificate.unwrap_or_else(|| panic!("{name}: {:?}", out.result.warnings));
            let verdict = check_certificate(&m, &cert);
            assert!(verdict.is_ok(), "{name} {bounding:?}: {verdict:?}");
        }
    }
}

#[test]
fn strategy_overrides_limit_methods() {
    let m = fixture("knapsack");
    let out = solve(&m, &Config { bounding: BoundingStrategy::Exlp, ..quiet() });
    assert_eq!(out.result.bounding.calls[BoundMethod::Bshift.index()], 0);
    assert_eq!(out.result.bounding.calls[BoundMethod::Pshift.index()], 0);
    assert!(out.trace.bound_events().all(|e| e.2 == BoundMethod::Exlp));
}

#[test]
fn certificate_mode_disables_presolve() {
    let mut c = Config { certificate: true, ..Config::default() };
    assert_eq!(c.enforce().len(), 1);
    assert!(!c.presolve);
}

#[test]
fn oracle_examples() {
    let r = solve_oracle(&fixture("knapsack")).unwrap();
    assert_eq!(r.objective(), Some(rat(-5)));
    assert_eq!(solve_oracle(&fixture("parity")).unwrap().status, SolveStatus::Infeasible);
    let r = solve_oracle(&fixture("exactness")).unwrap();
    assert_eq!(r.nodes, 1);
    assert_eq!(r.objective(), Some(ratio(1_000_000_000, 1_000_000_001)));
    let text = "NAME o\nROWS\n N obj\nCOLUMNS\n M1 'MARKER' 'INTORG'\n x obj 1\n M2 'MARKER' 'INTEND'\nENDATA\n";
    let m = parse_mps(text).unwrap();
    assert!(matches!(solve_oracle(&m), Err(OracleError::InfiniteBound(0))));
}
