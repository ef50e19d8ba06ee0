//! Certificate emission from a finished search.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use super::format::{Certificate, Constraint, Derivation, Reason, Relation, Sparse};
use crate::bounding::ProofKind;
use crate::model::{Model, RowSense, Solution};
use crate::numerics::{ExtendedRational, Rational};
use crate::presolve::BoundSide;
use crate::tree::{LeafProof, ProofNode, ProofTree};

#[derive(Debug, Error, PartialEq)]
pub enum EmitError {
    #[error("node {0} of the search tree has no proof")]
    OpenNode(usize),
    #[error("proof at node {0} needs an infinite bound of column {1}")]
    InfiniteBound(usize, usize),
    #[error("no search tree recorded")]
    NoTree,
}

/// Constraint section: model rows, then `x_j >= l_j` and `-x_j >= -u_j` for
/// every finite bound. Returns the indices of the bound constraints.
pub fn model_constraints(model: &Model) -> (Vec<Constraint>, Vec<[Option<usize>; 2]>) {
    let mut cons: Vec<Constraint> = model
        .rows
        .iter()
        .map(|r| Constraint { name: r.name.clone(), sense: r.sense, rhs: r.rhs.clone(), coefs: r.coefs.clone() })
        .collect();
    let mut index = vec![[None, None]; model.num_cols()];
    for j in 0..model.num_cols() {
        if let Some(l) = model.lower[j].finite() {
            index[j][0] = Some(cons.len());
            let coefs = vec![(j, Rational::from_integer(1.into()))];
            cons.push(Constraint { name: format!("lb_{j}"), sense: RowSense::Ge, rhs: l.clone(), coefs });
        }
        if let Some(u) = model.upper[j].finite() {
            index[j][1] = Some(cons.len());
            let coefs = vec![(j, Rational::from_integer((-1).into()))];
            cons.push(Constraint { name: format!("ub_{j}"), sense: RowSense::Ge, rhs: -u.clone(), coefs });
        }
    }
    (cons, index)
}

fn sparse(v: &[Rational]) -> Sparse {
    v.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(j, a)| (j, a.clone())).collect()
}

struct Emitter<'a> {
    model: &'a Model,
    tree: &'a ProofTree,
    cons: Vec<Constraint>,
    bound_index: Vec<[Option<usize>; 2]>,
    ders: Vec<Derivation>,
    /// Derivation index of the assumption introduced at each node.
    asm: HashMap<usize, usize>,
}

/// Conclusion of a proof node: `c.x >= rhs`, or absurd (`0 >= rhs > 0`).
#[derive(Debug, Clone)]
struct Conclusion {
    index: usize,
    rhs: Rational,
    absurd: bool,
}

impl Emitter<'_> {
    fn base(&self) -> usize {
        self.cons.len()
    }

    fn push(&mut self, constraint: Constraint, reason: Reason) -> usize {
        self.ders.push(Derivation { constraint, reason });
        self.base() + self.ders.len() - 1
    }

    fn objective(&self) -> Sparse {
        sparse(&self.model.objective)
    }

    fn leaf(&mut self, id: usize, leaf: &LeafProof) -> Result<Conclusion, EmitError> {
        let m = self.model.num_rows();
        let y = &leaf.proof.y;
        let farkas = leaf.proof.kind == ProofKind::Farkas;
        let mut reduced: Vec<Rational> =
            if farkas { vec![Rational::zero(); self.model.num_cols()] } else { self.model.objective.clone() };
        let mut terms = Vec::new();
        let mut rhs = Rational::zero();
        for (i, row) in self.model.rows.iter().enumerate().take(m) {
            if y[i].is_zero() {
                continue;
            }
            for (j, a) in &row.coefs {
                reduced[*j] -= a * &y[i];
            }
            rhs += &y[i] * &row.rhs;
            terms.push((i, y[i].clone()));
        }
        for (j, r) in reduced.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let side = if r.is_positive() { BoundSide::Lower } else { BoundSide::Upper };
            let local = leaf.changes.iter().rev().find(|c| c.col == j && c.side == side);
            match local {
                Some(change) => {
                    // Assumption x_j <= k (L) takes r < 0, x_j >= k (G) r > 0.
                    terms.push((self.asm[&change.node], r.clone()));
                    rhs += r * &change.value;
                }
                None => {
                    let k = if side == BoundSide::Lower { 0 } else { 1 };
                    let idx = self.bound_index[j][k].ok_or(EmitError::InfiniteBound(id, j))?;
                    // Upper bounds are stored as -x_j >= -u_j.
                    let mult = if side == BoundSide::Lower { r.clone() } else { -r.clone() };
                    rhs += &mult * &self.cons[idx].rhs;
                    terms.push((idx, mult));
                }
            }
        }
        terms.sort_by_key(|(i, _)| *i);
        let absurd = farkas;
        let coefs = if farkas { Vec::new() } else { self.objective() };
        let index = self.push(
            Constraint { name: format!("n{id}"), sense: RowSense::Ge, rhs: rhs.clone(), coefs },
            Reason::Lin(terms),
        );
        Ok(Conclusion { index, rhs, absurd })
    }

    fn node(&mut self, id: usize) -> Result<Conclusion, EmitError> {
        match &self.tree.nodes[id] {
            ProofNode::Open => Err(EmitError::OpenNode(id)),
            ProofNode::Leaf(leaf) => {
                let leaf = leaf.clone();
                self.leaf(id, &leaf)
            }
            ProofNode::Branched { col, k, left, right } => {
                let (col, k, left, right) = (*col, k.clone(), *left, *right);
                let one = Rational::from_integer(1.into());
                let a1 = self.push(
                    Constraint { name: format!("a{left}"), sense: RowSense::Le, rhs: k.clone(), coefs: vec![(col, one.clone())] },
                    Reason::Asm,
                );
                self.asm.insert(left, a1);
                let c1 = self.node(left)?;
                let a2 = self.push(
                    Constraint { name: format!("a{right}"), sense: RowSense::Ge, rhs: &k + &one, coefs: vec![(col, one)] },
                    Reason::Asm,
                );
                self.asm.insert(right, a2);
                let c2 = self.node(right)?;
                let (rhs, absurd, coefs) = match (c1.absurd, c2.absurd) {
                    (true, true) => (c1.rhs.clone().min(c2.rhs.clone()), true, Vec::new()),
                    (true, false) => (c2.rhs.clone(), false, self.objective()),
                    (false, true) => (c1.rhs.clone(), false, self.objective()),
                    (false, false) => (c1.rhs.clone().min(c2.rhs.clone()), false, self.objective()),
                };
                let index = self.push(
                    Constraint { name: format!("n{id}"), sense: RowSense::Ge, rhs: rhs.clone(), coefs },
                    Reason::Uns { i1: c1.index, a1, i2: c2.index, a2 },
                );
                Ok(Conclusion { index, rhs, absurd })
            }
        }
    }
}

/// Builds the certificate for a solved instance: infeasibility when there
/// is no incumbent, otherwise optimality of the incumbent.
pub fn emit(model: &Model, tree: Option<&ProofTree>, incumbent: Option<&Solution>) -> Result<Certificate, EmitError> {
    let (cons, bound_index) = model_constraints(model);
    let relation = match incumbent {
        None => Relation::Infeasible,
        Some(s) => {
            let v = ExtendedRational::Finite(&s.objective - &model.obj_offset);
            Relation::Range { lower: v.clone(), upper: v }
        }
    };
    let solutions = incumbent.map(|s| vec![("best".to_string(), sparse(&s.x))]).unwrap_or_default();
    let empty = ProofTree::default();
    let mut em = Emitter { model, tree: &empty, cons, bound_index, ders: Vec::new(), asm: HashMap::new() };
    if let Some(j) = model.empty_domain() {
        // l_j > u_j: x_j >= l_j plus -x_j >= -u_j gives 0 >= l_j - u_j > 0.
        let [Some(lo), Some(up)] = em.bound_index[j] else { unreachable!("empty domain has finite bounds") };
        let rhs = &em.cons[lo].rhs + &em.cons[up].rhs;
        let one = Rational::from_integer(1.into());
        em.push(
            Constraint { name: "empty".into(), sense: RowSense::Ge, rhs, coefs: Vec::new() },
            Reason::Lin(vec![(lo, one.clone()), (up, one)]),
        );
    } else {
        let tree = tree.ok_or(EmitError::NoTree)?;
        em.tree = tree;
        em.node(0)?;
    }
    Ok(Certificate {
        var_names: model.col_names.clone(),
        integers: (0..model.num_cols()).filter(|&j| model.integer[j]).collect(),
        objective: sparse(&model.objective),
        constraints: em.cons,
        relation,
        solutions,
        derivations: em.ders,
    })
}
