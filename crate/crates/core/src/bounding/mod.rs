//! Safe dual bounds from untrusted float LP results: bound-shift,
//! project-and-shift and exact LP, plus the statistics that drive the
//! choice between them.

mod methods;

pub use methods::{bound_shift, exact_lp_bound, project_and_shift, BoundingContext};

use std::collections::VecDeque;
use std::time::Duration;

use crate::exactlp::ExactLpResult;
use crate::numerics::{add_up, mul_up, nearest_float, ExtendedRational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMethod {
    Bshift,
    Pshift,
    Exlp,
}

impl BoundMethod {
    pub const ALL: [BoundMethod; 3] = [BoundMethod::Bshift, BoundMethod::Pshift, BoundMethod::Exlp];

    pub fn index(self) -> usize {
        match self {
            Self::Bshift => 0,
            Self::Pshift => 1,
            Self::Exlp => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Bshift => "bshift",
            Self::Pshift => "pshift",
            Self::Exlp => "exlp",
        }
    }
}

/// What the multipliers prove.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofKind {
    /// `c.x >= bound` over the node.
    Objective,
    /// The node is empty.
    Farkas,
}

/// Row multipliers justifying a bound. Bound multipliers are implied: the
/// reduced cost `c - A^T y` (or `-A^T y` for a Farkas proof) of each column
/// multiplies its lower bound when positive and its upper bound when
/// negative.
#[derive(Debug, Clone, PartialEq)]
pub struct DualProof {
    pub y: Vec<Rational>,
    pub kind: ProofKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualBoundResult {
    /// Valid lower bound on the node LP value; `+inf` for a proven empty
    /// node, `-inf` on failure.
    pub bound: ExtendedRational,
    pub method: BoundMethod,
    pub success: bool,
    pub proof: Option<DualProof>,
    pub time: Duration,
    /// Full exact solve, for the exact LP method.
    pub exact: Option<ExactLpResult>,
}

impl DualBoundResult {
    pub(crate) fn failure(method: BoundMethod, time: Duration) -> Self {
        Self { bound: ExtendedRational::NegInf, method, success: false, proof: None, time, exact: None }
    }

    pub fn proves_infeasible(&self) -> bool {
        self.success && self.bound == ExtendedRational::PosInf
    }
}

const GAP_CAPACITY: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundingStats {
    pub calls: [usize; 3],
    pub successes: [usize; 3],
    pub time: [Duration; 3],
    /// Recent absolute differences between float LP value and safe bound.
    pub recent_gaps: VecDeque<f64>,
    pub bshift_disabled: bool,
    /// Bound-shift is disabled once at least `min_calls` calls succeeded
    /// with a rate below `threshold`.
    pub bshift_threshold: Rational,
    pub bshift_min_calls: usize,
    pub objlimit_fallbacks: usize,
}

impl Default for BoundingStats {
    fn default() -> Self {
        Self::new(crate::numerics::ratio(1, 5))
    }
}

impl BoundingStats {
    pub fn new(bshift_threshold: Rational) -> Self {
        Self {
            calls: [0; 3],
            successes: [0; 3],
            time: [Duration::ZERO; 3],
            recent_gaps: VecDeque::with_capacity(GAP_CAPACITY),
            bshift_disabled: false,
            bshift_threshold,
            bshift_min_calls: 20,
            objlimit_fallbacks: 0,
        }
    }

    pub fn record(&mut self, result: &DualBoundResult, float_objective: Option<f64>) {
        let k = result.method.index();
        self.calls[k] += 1;
        self.time[k] += result.time;
        if result.success {
            self.successes[k] += 1;
            if let (Some(z), Some(b)) = (float_objective, result.bound.finite()) {
                let gap = (z - nearest_float(b).value).abs();
                if gap.is_finite() {
                    if self.recent_gaps.len() == GAP_CAPACITY {
                        self.recent_gaps.pop_front();
                    }
                    self.recent_gaps.push_back(gap);
                }
            }
        }
        if result.method == BoundMethod::Bshift && self.calls[0] >= self.bshift_min_calls {
            let rate = Rational::new(self.successes[0].into(), self.calls[0].into());
            if rate < self.bshift_threshold {
                self.bshift_disabled = true;
            }
        }
    }

    pub fn mean_gap(&self) -> f64 {
        if self.recent_gaps.is_empty() {
            0.0
        } else {
            self.recent_gaps.iter().sum::<f64>() / self.recent_gaps.len() as f64
        }
    }

    pub fn total_time(&self) -> Duration {
        self.time.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundingStrategy {
    #[default]
    Auto,
    Bshift,
    Pshift,
    Exlp,
}

/// Methods to try at a node, in order. The exact LP at the end of the
/// cheap list is only used as a fallback or near-cutoff escalation.
pub fn select_bounding_method(
    depth: usize,
    stats: &BoundingStats,
    strategy: BoundingStrategy,
    exlp_depth: usize,
) -> Vec<BoundMethod> {
    use BoundMethod::*;
    match strategy {
        BoundingStrategy::Bshift => vec![Bshift, Exlp],
        BoundingStrategy::Pshift => vec![Pshift, Exlp],
        BoundingStrategy::Exlp => vec![Exlp],
        BoundingStrategy::Auto => {
            if exlp_depth > 0 && depth.is_multiple_of(exlp_depth) {
                return vec![Exlp];
            }
            let mut v = Vec::with_capacity(3);
            if !stats.bshift_disabled {
                v.push(Bshift);
            }
            v.push(Pshift);
            v.push(Exlp);
            v
        }
    }
}

/// Does the float LP value say the node is (nearly) cut off?
pub fn near_cutoff(float_objective: f64, incumbent: &Rational) -> bool {
    let inc = nearest_float(incumbent).value;
    float_objective >= inc - 1e-6 * (1.0 + inc.abs())
}

/// Objective limit handed to the float LP: the incumbent plus a margin
/// derived from the observed bounding error, rounded upward.
pub fn inflate_objective_limit(incumbent: &Rational, stats: &BoundingStats) -> f64 {
    let inc = nearest_float(incumbent).value;
    let floor = mul_up(1e-9, add_up(1.0, inc.abs()));
    let observed = mul_up(2.0, stats.mean_gap());
    add_up(inc, floor.max(observed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn result(method: BoundMethod, success: bool) -> DualBoundResult {
        DualBoundResult {
            bound: if success { ExtendedRational::zero() } else { ExtendedRational::NegInf },
            method,
            success,
            proof: None,
            time: Duration::ZERO,
            exact: None,
        }
    }

    #[test]
    fn selection_rules() {
        let stats = BoundingStats::default();
        assert_eq!(select_bounding_method(5, &stats, BoundingStrategy::Auto, 5), vec![BoundMethod::Exlp]);
        assert_eq!(select_bounding_method(0, &stats, BoundingStrategy::Auto, 5), vec![BoundMethod::Exlp]);
        assert_eq!(
            select_bounding_method(3, &stats, BoundingStrategy::Auto, 5),
            vec![BoundMethod::Bshift, BoundMethod::Pshift, BoundMethod::Exlp]
        );
    }

    #[test]
    fn bshift_disables_below_rate() {
        let mut stats = BoundingStats::default();
        for k in 0..25 {
            stats.record(&result(BoundMethod::Bshift, k < 3), None);
        }
        assert_eq!((stats.calls[0], stats.successes[0]), (25, 3));
        assert!(stats.bshift_disabled);
        assert_eq!(
            select_bounding_method(3, &stats, BoundingStrategy::Auto, 5),
            vec![BoundMethod::Pshift, BoundMethod::Exlp]
        );

        let mut healthy = BoundingStats::default();
        for k in 0..25 {
            healthy.record(&result(BoundMethod::Bshift, k % 4 == 0), None);
        }
        assert!(!healthy.bshift_disabled);

        // Too few calls for the rule to apply.
        let mut early = BoundingStats::default();
        for _ in 0..19 {
            early.record(&result(BoundMethod::Bshift, false), None);
        }
        assert!(!early.bshift_disabled);
    }

    #[test]
    fn objective_limit_inflation() {
        let mut stats = BoundingStats::default();
        assert_eq!(inflate_objective_limit(&rat(0), &stats), 1e-9);
        let big = inflate_objective_limit(&rat(1_000_000), &stats);
        assert!((big - 1_000_000.0 - 1e-3).abs() < 1e-8);
        stats.recent_gaps.extend([1e-4; 4]);
        let lim = inflate_objective_limit(&rat(1), &stats);
        assert!(lim >= 1.0 + 2e-4 && lim - (1.0 + 2e-4) < 1e-15);
    }

    #[test]
    fn gap_ring_buffer_is_bounded() {
        let mut stats = BoundingStats::default();
        for _ in 0..100 {
            stats.record(&result(BoundMethod::Pshift, true), Some(0.5));
        }
        assert_eq!(stats.recent_gaps.len(), GAP_CAPACITY);
        assert_eq!(stats.mean_gap(), 0.5);
    }
}
