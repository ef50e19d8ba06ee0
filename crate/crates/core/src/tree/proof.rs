use std::rc::Rc;

use crate::bounding::DualProof;
use crate::numerics::Rational;
use crate::presolve::BoundSide;

/// A branching bound change, owned by the child node that introduced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Change {
    pub col: usize,
    pub side: BoundSide,
    pub value: Rational,
    pub node: usize,
}

/// Multipliers proving a node's bound, together with the branching changes
/// in force where they were computed. Those changes say which assumption
/// supplies each local variable bound.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafProof {
    pub proof: DualProof,
    pub changes: Rc<Vec<Change>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProofNode {
    Open,
    Leaf(Rc<LeafProof>),
    /// Left child has `x_col <= k`, right child `x_col >= k + 1`.
    Branched { col: usize, k: Rational, left: usize, right: usize },
}

/// The explored tree as far as a certificate needs it; node 0 is the root.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProofTree {
    pub nodes: Vec<ProofNode>,
}
