use super::mutations::{mutate, Mutation};
use super::*;
use crate::model::{parse_mps, Model, RowSense};
use crate::numerics::{rat, ExtendedRational};
use crate::tree::{solve, Config};

fn knapsack() -> Model {
    parse_mps(include_str!("../../fixtures/knapsack.mps")).unwrap()
}

fn certified(m: &Model) -> Certificate {
    solve(m, &Config { certificate: true, ..Config::default() }).certificate.unwrap()
}

#[test]
fn text_round_trip() {
    let m = knapsack();
    let cert = certified(&m);
    let text = cert.to_text();
    assert!(text.starts_with("VER 1\nVAR 2\nx1\nx2\nINT 2\n0 1\nOBJ min\n2 0 -5 1 -4\nCON 5\n"));
    assert!(text.contains("RTP range -5 -5\n"));
    assert_eq!(Certificate::parse(&text).unwrap(), cert);
    assert!(check_certificate(&m, &cert).is_ok());
}

#[test]
fn parse_errors_name_the_line() {
    let err = Certificate::parse("VER 1\nVAR x\n").unwrap_err();
    assert_eq!(err, FormatError::Syntax { line: 2, msg: "expected a count, found x".into() });
    assert_eq!(Certificate::parse("VER 1\nVAR 2\na\n"), Err(FormatError::Eof));
}

#[test]
fn every_mutation_is_rejected() {
    let infeasible = parse_mps(include_str!("../../fixtures/parity.mps")).unwrap();
    for m in [knapsack(), infeasible] {
        let cert = certified(&m);
        assert!(check_certificate(&m, &cert).is_ok());
        for mutation in Mutation::ALL {
            let bad = mutate(&cert, mutation).unwrap_or_else(|| panic!("{} not applicable", mutation.name()));
            assert!(check_certificate(&m, &bad).is_err(), "{} accepted", mutation.name());
        }
    }
}

#[test]
fn empty_domain_certificate() {
    let text = "NAME e\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n LO BND x 2\n UP BND x 1\nENDATA\n";
    let m = parse_mps(text).unwrap();
    let cert = certified(&m);
    assert_eq!(cert.relation, Relation::Infeasible);
    assert_eq!(cert.derivations.len(), 1);
    assert!(check_certificate(&m, &cert).is_ok());
}

#[test]
fn hand_written_rounding_proof() {
    // 2x - 2y = 1 over integers: halve and round up to x - y >= 1, then
    // subtract the halved equation.
    let m = parse_mps(include_str!("../../fixtures/parity.mps")).unwrap();
    let (constraints, _) = model_constraints(&m);
    let half = crate::numerics::ratio(1, 2);
    let one = rat(1);
    let ders = vec![
        Derivation {
            constraint: Constraint { name: "up".into(), sense: RowSense::Ge, rhs: rat(1), coefs: vec![(0, one.clone()), (1, -one.clone())] },
            reason: Reason::Rnd(vec![(0, half.clone())]),
        },
        Derivation {
            constraint: Constraint { name: "no".into(), sense: RowSense::Ge, rhs: half.clone(), coefs: vec![] },
            reason: Reason::Lin(vec![(0, -half), (5, one)]),
        },
    ];
    let cert = Certificate {
        var_names: m.col_names.clone(),
        integers: vec![0, 1],
        objective: vec![],
        constraints,
        relation: Relation::Infeasible,
        solutions: vec![],
        derivations: ders,
    };
    assert_eq!(check_certificate(&m, &cert).map(|r| r.derivations), Ok(2));
    let mut weak = cert.clone();
    weak.relation = Relation::Range { lower: ExtendedRational::NegInf, upper: ExtendedRational::PosInf };
    weak.derivations.clear();
    assert!(check_certificate(&m, &weak).is_ok());
    let mut wrong_model = m.clone();
    wrong_model.rows[0].rhs = rat(4);
    assert_eq!(check_certificate(&wrong_model, &cert), Err(CheckError::Constraint(0)));
}

#[test]
fn rounding_needs_integer_columns() {
    // 2x >= 1 rounds to x >= 1 only when x is integer.
    let text = |int: bool| {
        let (a, b) = if int { (" M1 'MARKER' 'INTORG'\n", " M2 'MARKER' 'INTEND'\n") } else { ("", "") };
        format!("NAME r\nROWS\n N obj\n G r\nCOLUMNS\n{a} x obj 1 r 2\n{b}RHS\n RHS r 1\nBOUNDS\n UP BND x 5\nENDATA\n")
    };
    for int in [true, false] {
        let m = parse_mps(&text(int)).unwrap();
        let (constraints, _) = model_constraints(&m);
        let cert = Certificate {
            var_names: m.col_names.clone(),
            integers: if int { vec![0] } else { vec![] },
            objective: vec![(0, rat(1))],
            constraints,
            relation: Relation::Range { lower: ExtendedRational::Finite(rat(1)), upper: ExtendedRational::Finite(rat(5)) },
            solutions: vec![("five".into(), vec![(0, rat(5))])],
            derivations: vec![Derivation {
                constraint: Constraint { name: "x1".into(), sense: RowSense::Ge, rhs: rat(1), coefs: vec![(0, rat(1))] },
                reason: Reason::Rnd(vec![(0, crate::numerics::ratio(1, 2))]),
            }],
        };
        let verdict = check_certificate(&m, &cert);
        assert_eq!(verdict.is_ok(), int, "{verdict:?}");
        if !int {
            assert!(matches!(verdict, Err(CheckError::Derivation { index: 3, .. })));
        }
    }
}

#[test]
fn infeasible_claim_with_solution_is_rejected() {
    let m = knapsack();
    let mut cert = certified(&m);
    cert.relation = Relation::Infeasible;
    assert!(matches!(check_certificate(&m, &cert), Err(CheckError::Relation(_))));
}
