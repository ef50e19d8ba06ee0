use crate::bounding::BoundMethod;
use crate::model::SolutionOrigin;
use crate::numerics::{ExtendedRational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneReason {
    /// Bound inherited from the parent already reaches the incumbent.
    Inherited,
    Bound,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    Node { id: usize, depth: usize },
    Bound { node: usize, depth: usize, method: BoundMethod, success: bool, bound: ExtendedRational },
    BshiftDisabled { node: usize, calls: usize },
    /// The float LP stopped at the objective limit, the cheap bounds could
    /// not prune, and the LP was solved again without limit.
    ObjectiveLimitFallback { node: usize },
    /// Budget state before a repair call.
    Repair { node: usize, repair_calls: usize, exlp_calls: usize, continuous_fraction: Rational, success: bool },
    Incumbent { node: usize, objective: Rational, origin: SolutionOrigin },
    Prune { node: usize, reason: PruneReason, bound: ExtendedRational, incumbent: Option<Rational> },
    Branch { node: usize, col: usize, value: Rational, strong: usize },
    /// Global bounds after a node (objective offset included).
    Bounds { primal: ExtendedRational, dual: ExtendedRational },
}

/// Local bounds of a processed node, for replaying its relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceNode {
    pub id: usize,
    pub depth: usize,
    pub lower: Vec<ExtendedRational>,
    pub upper: Vec<ExtendedRational>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub enabled: bool,
    pub events: Vec<TraceEvent>,
    pub nodes: Vec<TraceNode>,
}

impl Trace {
    pub fn new(enabled: bool) -> Self {
        Self { enabled, ..Self::default() }
    }

    pub fn push(&mut self, event: TraceEvent) {
        if self.enabled {
            self.events.push(event);
        }
    }

    pub fn bound_events(&self) -> impl Iterator<Item = (usize, usize, BoundMethod, bool, &ExtendedRational)> {
        self.events.iter().filter_map(|e| match e {
            TraceEvent::Bound { node, depth, method, success, bound } => Some((*node, *depth, *method, *success, bound)),
            _ => None,
        })
    }
}
