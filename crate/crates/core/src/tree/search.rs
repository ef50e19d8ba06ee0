use std::collections::BTreeMap;
use std::rc::Rc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};

use super::branching::{pick, score, tie_ranks, Pseudocosts, DOWN, UP};
use super::proof::{Change, LeafProof, ProofNode, ProofTree};
use super::trace::{PruneReason, Trace, TraceEvent, TraceNode};
use super::{Config, SolveStatus, Timings};
use crate::bounding::{
    bound_shift, exact_lp_bound, inflate_objective_limit, near_cutoff, project_and_shift, select_bounding_method,
    BoundMethod, BoundingContext, BoundingStats, BoundingStrategy, DualBoundResult, DualProof, ProofKind,
};
use crate::exactlp::{exact_relaxation, ExactLpResult, ExactStatus};
use crate::fplp::{float_relaxation, solve_fp_lp, FpLpResult};
use crate::heuristics::{
    check_solution, fp_round_and_dive, is_integral, repair_counted, snap_candidate, CheckStats, RepairBudget,
    RepairOutcome,
};
use crate::lp::{lagrangian_bound, rationalize, Basis, LpProblem, LpStatus};
use crate::model::{approximate, FloatModel, Model, RowSense, Solution, SolutionOrigin};
use crate::numerics::{float_to_rational, nearest_float, ExtendedRational, Rational};
use crate::presolve::BoundSide;

/// Strong branching evaluates at most this many unreliable candidates.
const STRONG_CANDIDATES: usize = 64;

struct NodeState {
    bound: ExtendedRational,
    proof: Option<Rc<LeafProof>>,
}

struct Node {
    id: usize,
    depth: usize,
    changes: Rc<Vec<Change>>,
    bound: ExtendedRational,
    proof: Option<Rc<LeafProof>>,
    warm: Option<Basis>,
    /// Float LP value of the parent and the branching that created this node.
    origin: Option<(f64, usize, usize, f64)>,
}

pub(super) struct SearchOutcome {
    pub status: SolveStatus,
    pub incumbent: Option<Solution>,
    pub dual_bound: ExtendedRational,
    pub nodes: usize,
    pub stats: BoundingStats,
    pub budget: RepairBudget,
    pub check: CheckStats,
    pub timings: Timings,
    pub trace: Trace,
    pub proof: Option<ProofTree>,
}

pub(super) struct Search<'a> {
    model: &'a Model,
    config: &'a Config,
    float: FloatModel,
    root_float: LpProblem<f64>,
    ctx: BoundingContext,
    stats: BoundingStats,
    budget: RepairBudget,
    check: CheckStats,
    pseudo: Pseudocosts,
    rank: Vec<usize>,
    continuous_fraction: Rational,
    incumbent: Option<Solution>,
    open: BTreeMap<(ExtendedRational, usize), Node>,
    trace: Trace,
    proof: Option<ProofTree>,
    processed: usize,
    next_id: usize,
    timings: Timings,
    unbounded: bool,
}

fn node_bounds(model: &Model, changes: &[Change]) -> (Vec<ExtendedRational>, Vec<ExtendedRational>) {
    let (mut lower, mut upper) = (model.lower.clone(), model.upper.clone());
    for c in changes {
        let v = ExtendedRational::Finite(c.value.clone());
        match c.side {
            BoundSide::Lower => lower[c.col] = v,
            BoundSide::Upper => upper[c.col] = v,
        }
    }
    (lower, upper)
}

impl<'a> Search<'a> {
    pub fn new(model: &'a Model, config: &'a Config) -> Self {
        let float = approximate(model);
        let root_float = float_relaxation(&float, &model.lower, &model.upper);
        let ctx = BoundingContext::new(&exact_relaxation(model, &model.lower, &model.upper));
        Self {
            model,
            config,
            float,
            root_float,
            ctx,
            stats: BoundingStats::new(config.bshift_threshold.clone()),
            budget: RepairBudget::new(config.repair_ratio.clone(), config.continuous_cutoff.clone()),
            check: CheckStats::default(),
            pseudo: Pseudocosts::new(model.num_cols()),
            rank: tie_ranks(model.num_cols(), config.seed),
            continuous_fraction: model.continuous_fraction(),
            incumbent: None,
            open: BTreeMap::new(),
            trace: Trace::new(config.record_trace),
            proof: config.certificate.then(ProofTree::default),
            processed: 0,
            next_id: 0,
            timings: Timings::default(),
            unbounded: false,
        }
    }

    fn new_node(&mut self) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        if let Some(p) = &mut self.proof {
            p.nodes.push(ProofNode::Open);
        }
        id
    }

    fn set_proof_node(&mut self, id: usize, node: ProofNode) {
        if let Some(p) = &mut self.proof {
            p.nodes[id] = node;
        }
    }

    /// Incumbent value without the objective offset, the scale of LP bounds.
    fn cutoff(&self) -> Option<Rational> {
        self.incumbent.as_ref().map(|s| &s.objective - &self.model.obj_offset)
    }

    fn prunable(&self, bound: &ExtendedRational) -> bool {
        self.cutoff().is_some_and(|c| bound >= &ExtendedRational::Finite(c))
    }

    fn global_dual(&self, current: Option<&ExtendedRational>) -> ExtendedRational {
        let open_min = self.open.keys().next().map(|(b, _)| b.clone());
        let d = match (open_min, current) {
            (Some(a), Some(b)) => a.min(b.clone()),
            (Some(a), None) => a,
            (None, Some(b)) => b.clone(),
            (None, None) => ExtendedRational::PosInf,
        };
        let d = match self.cutoff() {
            Some(c) => d.min(ExtendedRational::Finite(c)),
            None => d,
        };
        match d {
            ExtendedRational::Finite(v) => ExtendedRational::Finite(v + &self.model.obj_offset),
            other => other,
        }
    }

    fn primal(&self) -> ExtendedRational {
        self.incumbent.as_ref().map_or(ExtendedRational::PosInf, |s| ExtendedRational::Finite(s.objective.clone()))
    }

    fn out_of_time(&self, start: Instant) -> bool {
        self.config.time_limit.is_some_and(|t| start.elapsed() >= t)
    }

    pub fn run(mut self) -> SearchOutcome {
        let start = Instant::now();
        let root = self.new_node();
        let mut next = Some(Node {
            id: root,
            depth: 0,
            changes: Rc::new(Vec::new()),
            bound: ExtendedRational::NegInf,
            proof: None,
            warm: None,
            origin: None,
        });
        let mut plunge = 0;
        let mut status = None;
        loop {
            let node = match next.take() {
                Some(n) => n,
                None => match self.open.pop_first() {
                    Some((_, n)) => {
                        plunge = 0;
                        n
                    }
                    None => break,
                },
            };
            if self.out_of_time(start) {
                status = Some(SolveStatus::TimeLimit);
                self.open.insert((node.bound.clone(), node.id), node);
                break;
            }
            if self.config.node_limit.is_some_and(|l| self.processed >= l) {
                status = Some(SolveStatus::NodeLimit);
                self.open.insert((node.bound.clone(), node.id), node);
                break;
            }
            let children = self.process(node);
            if self.unbounded {
                status = Some(SolveStatus::Unbounded);
                break;
            }
            if let Some((preferred, other)) = children {
                if plunge < self.config.plunge_limit {
                    plunge += 1;
                    self.open.insert((other.bound.clone(), other.id), other);
                    next = Some(preferred);
                } else {
                    self.open.insert((preferred.bound.clone(), preferred.id), preferred);
                    self.open.insert((other.bound.clone(), other.id), other);
                }
            }
            let dual = self.global_dual(next.as_ref().map(|n| &n.bound));
            self.trace.push(TraceEvent::Bounds { primal: self.primal(), dual });
        }
        let status = status.unwrap_or(if self.incumbent.is_some() { SolveStatus::Optimal } else { SolveStatus::Infeasible });
        let dual_bound = match status {
            SolveStatus::Optimal | SolveStatus::Infeasible => self.primal(),
            SolveStatus::Unbounded => ExtendedRational::NegInf,
            _ => self.global_dual(None),
        };
        self.timings.total = start.elapsed();
        self.timings.bounding = self.stats.time;
        self.timings.repair_success = self.budget.time_success;
        self.timings.repair_fail = self.budget.time_fail;
        SearchOutcome {
            status,
            incumbent: self.incumbent,
            dual_bound,
            nodes: self.processed,
            stats: self.stats,
            budget: self.budget,
            check: self.check,
            timings: self.timings,
            trace: self.trace,
            proof: self.proof,
        }
    }

    fn prune(&mut self, id: usize, reason: PruneReason, bound: ExtendedRational, proof: Option<Rc<LeafProof>>) {
        let incumbent = self.incumbent.as_ref().map(|s| s.objective.clone());
        self.trace.push(TraceEvent::Prune { node: id, reason, bound, incumbent });
        if let Some(p) = proof {
            self.set_proof_node(id, ProofNode::Leaf(p));
        }
    }

    fn run_method(
        &mut self,
        method: BoundMethod,
        lp: &LpProblem<Rational>,
        y: Option<&[f64]>,
        warm: Option<&Basis>,
    ) -> DualBoundResult {
        match (method, y) {
            (BoundMethod::Bshift, Some(y)) => bound_shift(&self.ctx, lp, y),
            (BoundMethod::Pshift, Some(y)) => project_and_shift(&mut self.ctx, lp, y),
            (BoundMethod::Exlp, _) => exact_lp_bound(lp, warm),
            (m, None) => DualBoundResult::failure(m, Duration::ZERO),
        }
    }

    fn record(&mut self, id: usize, depth: usize, r: &DualBoundResult, float_obj: Option<f64>) {
        let was_disabled = self.stats.bshift_disabled;
        self.stats.record(r, float_obj);
        self.trace.push(TraceEvent::Bound {
            node: id,
            depth,
            method: r.method,
            success: r.success,
            bound: r.bound.clone(),
        });
        if !was_disabled && self.stats.bshift_disabled {
            self.trace.push(TraceEvent::BshiftDisabled { node: id, calls: self.stats.calls[0] });
        }
    }

    /// Runs the selected methods in order. A cheap bound that fails to prune
    /// while the float value sits at the cutoff escalates to the exact LP.
    fn bound_node(
        &mut self,
        id: usize,
        depth: usize,
        lp: &LpProblem<Rational>,
        sol: &FpLpResult,
        warm: Option<&Basis>,
    ) -> DualBoundResult {
        let methods = select_bounding_method(depth, &self.stats, self.config.bounding, self.config.exlp_depth);
        let float_obj = Some(sol.objective);
        let mut accepted: Option<DualBoundResult> = None;
        for method in methods {
            if method == BoundMethod::Exlp && accepted.is_some() && !self.escalate(&accepted, float_obj) {
                break;
            }
            let r = self.run_method(method, lp, Some(&sol.y), warm);
            self.record(id, depth, &r, float_obj);
            if r.success && (accepted.as_ref().is_none_or(|a| r.bound > a.bound) || r.exact.is_some()) {
                accepted = Some(r);
            }
            if method == BoundMethod::Exlp || (accepted.is_some() && !self.escalate(&accepted, float_obj)) {
                break;
            }
        }
        accepted.expect("the exact LP always yields a bound")
    }

    /// Cheap methods for a float LP stopped at the objective limit.
    fn bound_at_limit(&mut self, id: usize, depth: usize, lp: &LpProblem<Rational>, sol: &FpLpResult) -> Option<DualBoundResult> {
        let methods: Vec<BoundMethod> = match self.config.bounding {
            BoundingStrategy::Bshift => vec![BoundMethod::Bshift],
            BoundingStrategy::Pshift => vec![BoundMethod::Pshift],
            BoundingStrategy::Exlp => vec![],
            BoundingStrategy::Auto if self.stats.bshift_disabled => vec![BoundMethod::Pshift],
            BoundingStrategy::Auto => vec![BoundMethod::Bshift, BoundMethod::Pshift],
        };
        for method in methods {
            let r = self.run_method(method, lp, Some(&sol.y), None);
            self.record(id, depth, &r, None);
            if r.success && self.prunable(&r.bound) {
                return Some(r);
            }
        }
        None
    }

    fn escalate(&self, accepted: &Option<DualBoundResult>, float_obj: Option<f64>) -> bool {
        match (accepted, self.cutoff(), float_obj) {
            (Some(a), Some(c), Some(z)) => a.bound < ExtendedRational::Finite(c.clone()) && near_cutoff(z, &c),
            _ => false,
        }
    }

    /// Farkas proof from the float phase-1 duals, verified exactly.
    fn farkas_shift(&mut self, lp: &LpProblem<Rational>, sol: &FpLpResult) -> Option<DualBoundResult> {
        let t = Instant::now();
        let y: Vec<Rational> = rationalize(&sol.y)
            .into_iter()
            .zip(&lp.senses)
            .map(|(v, s)| match s {
                RowSense::Ge if v.is_negative() => Rational::zero(),
                RowSense::Le if v.is_positive() => Rational::zero(),
                _ => v,
            })
            .collect();
        let eval = lagrangian_bound(lp, &y, false);
        self.timings.farkas += t.elapsed();
        (eval.bound > ExtendedRational::zero()).then(|| DualBoundResult {
            bound: ExtendedRational::PosInf,
            method: BoundMethod::Bshift,
            success: true,
            proof: Some(DualProof { y, kind: ProofKind::Farkas }),
            time: t.elapsed(),
            exact: None,
        })
    }

    fn float_lp(&self, lower: &[ExtendedRational], upper: &[ExtendedRational], changes: &[Change]) -> LpProblem<f64> {
        let mut lp = self.root_float.clone();
        let to_f = |v: &ExtendedRational| v.finite().map(|q| nearest_float(q).value).filter(|v| v.is_finite());
        for c in changes {
            lp.lower[c.col] = to_f(&lower[c.col]);
            lp.upper[c.col] = to_f(&upper[c.col]);
        }
        lp
    }

    fn solve_float(&mut self, lp: &LpProblem<f64>, warm: Option<&Basis>, limit: Option<f64>) -> FpLpResult {
        let t = Instant::now();
        let sol = solve_fp_lp(lp, warm, limit);
        self.timings.lp += t.elapsed();
        sol
    }

    fn offer(&mut self, id: usize, sol: Solution) {
        if self.incumbent.as_ref().is_some_and(|inc| sol.objective >= inc.objective) {
            return;
        }
        if !check_solution(self.model, &self.float, &sol.x, &mut self.check) {
            return;
        }
        self.trace.push(TraceEvent::Incumbent { node: id, objective: sol.objective.clone(), origin: sol.origin });
        self.incumbent = Some(sol);
    }

    /// Integer-rounded float point: repair when the budget allows, plain
    /// exact check otherwise.
    fn try_candidate(&mut self, id: usize, candidate: &[f64]) {
        let t = Instant::now();
        if self.budget.permits(self.stats.calls[BoundMethod::Exlp.index()], &self.continuous_fraction) {
            let (calls, exlp) = (self.budget.repair_calls, self.stats.calls[BoundMethod::Exlp.index()]);
            let outcome = repair_counted(self.model, candidate, &self.model.lower, &self.model.upper, &mut self.budget);
            if !matches!(outcome, RepairOutcome::Rejected { .. }) {
                self.trace.push(TraceEvent::Repair {
                    node: id,
                    repair_calls: calls,
                    exlp_calls: exlp,
                    continuous_fraction: self.continuous_fraction.clone(),
                    success: matches!(outcome, RepairOutcome::Repaired(_)),
                });
            }
            if let RepairOutcome::Repaired(sol) = outcome {
                self.offer(id, sol);
            }
        } else if let Some(x) = snap_candidate(self.model, candidate) {
            self.offer(id, Solution::new(self.model, x, SolutionOrigin::Heuristic));
        }
        self.timings.heuristics += t.elapsed();
    }

    fn integral_exact(&self, x: &[Rational]) -> bool {
        (0..x.len()).all(|j| !self.model.integer[j] || x[j].is_integer())
    }

    fn integral_float(&self, x: &[f64]) -> bool {
        (0..x.len()).all(|j| !self.model.integer[j] || is_integral(x[j]))
    }

    fn leaf(&self, r: &DualBoundResult, changes: &Rc<Vec<Change>>) -> Option<Rc<LeafProof>> {
        r.proof.clone().map(|proof| Rc::new(LeafProof { proof, changes: changes.clone() }))
    }

    /// Exact LP at a node, folded into the node bound. Returns `None` when
    /// the node is finished.
    fn exact_at(&mut self, node: &Node, lp: &LpProblem<Rational>, warm: Option<&Basis>, st: &mut NodeState) -> Option<ExactLpResult> {
        let r = exact_lp_bound(lp, warm);
        self.record(node.id, node.depth, &r, None);
        self.fold(node, &r, st);
        let e = r.exact.expect("exact LP result");
        match e.status {
            ExactStatus::Optimal => Some(e),
            ExactStatus::Infeasible => {
                self.prune(node.id, PruneReason::Infeasible, st.bound.clone(), st.proof.clone());
                None
            }
            ExactStatus::Unbounded => {
                self.unbounded = true;
                None
            }
        }
    }

    fn fold(&self, node: &Node, r: &DualBoundResult, st: &mut NodeState) {
        if r.success && (r.bound > st.bound || st.proof.is_none()) && r.proof.is_some() {
            st.bound = r.bound.clone();
            st.proof = self.leaf(r, &node.changes);
        }
    }

    /// Prunes the node if its bound reaches the incumbent.
    fn try_prune(&mut self, id: usize, st: &NodeState) -> bool {
        if st.bound == ExtendedRational::PosInf {
            self.prune(id, PruneReason::Infeasible, st.bound.clone(), st.proof.clone());
            return true;
        }
        if self.prunable(&st.bound) {
            self.prune(id, PruneReason::Bound, st.bound.clone(), st.proof.clone());
            return true;
        }
        false
    }

    /// Processes one node; returns the children (preferred first) when it
    /// branches.
    fn process(&mut self, node: Node) -> Option<(Node, Node)> {
        let id = node.id;
        self.processed += 1;
        self.trace.push(TraceEvent::Node { id, depth: node.depth });
        let (lower, upper) = node_bounds(self.model, &node.changes);
        if self.trace.enabled {
            self.trace.nodes.push(TraceNode { id, depth: node.depth, lower: lower.clone(), upper: upper.clone() });
        }
        if self.prunable(&node.bound) {
            self.prune(id, PruneReason::Inherited, node.bound.clone(), node.proof.clone());
            return None;
        }
        let exact_lp = exact_relaxation(self.model, &lower, &upper);
        let flp = self.float_lp(&lower, &upper, &node.changes);
        // Nodes bounded by the exact LP alone get neither an objective limit
        // nor a float Farkas shortcut.
        let exact_only = select_bounding_method(node.depth, &self.stats, self.config.bounding, self.config.exlp_depth)
            == [BoundMethod::Exlp];
        let limit = if exact_only { None } else { self.cutoff().map(|c| inflate_objective_limit(&c, &self.stats)) };
        let mut sol = self.solve_float(&flp, node.warm.as_ref(), limit);
        let mut st = NodeState { bound: node.bound.clone(), proof: node.proof.clone() };

        if sol.status == LpStatus::ObjectiveLimit {
            if let Some(r) = self.bound_at_limit(id, node.depth, &exact_lp, &sol) {
                self.fold(&node, &r, &mut st);
                self.try_prune(id, &st);
                return None;
            }
            self.stats.objlimit_fallbacks += 1;
            self.trace.push(TraceEvent::ObjectiveLimitFallback { node: id });
            sol = self.solve_float(&flp, node.warm.as_ref(), None);
        }
        if let (Some((parent_obj, col, dir, dist)), LpStatus::Optimal) = (node.origin, sol.status) {
            self.pseudo.record(col, dir, sol.objective - parent_obj, dist);
        }

        let mut exact = None;
        match sol.status {
            LpStatus::Optimal => {
                let r = self.bound_node(id, node.depth, &exact_lp, &sol, node.warm.as_ref());
                self.fold(&node, &r, &mut st);
                match r.exact {
                    Some(e) if e.status == ExactStatus::Optimal => exact = Some(e),
                    Some(e) if e.status == ExactStatus::Unbounded => {
                        self.unbounded = true;
                        return None;
                    }
                    _ => {}
                }
            }
            LpStatus::Infeasible if exact_only => exact = Some(self.exact_at(&node, &exact_lp, node.warm.as_ref(), &mut st)?),
            LpStatus::Infeasible => match self.farkas_shift(&exact_lp, &sol) {
                Some(r) => self.fold(&node, &r, &mut st),
                None => exact = Some(self.exact_at(&node, &exact_lp, node.warm.as_ref(), &mut st)?),
            },
            _ => exact = Some(self.exact_at(&node, &exact_lp, node.warm.as_ref(), &mut st)?),
        }
        if self.try_prune(id, &st) {
            return None;
        }

        let float_x = (sol.status == LpStatus::Optimal).then(|| sol.x.clone());
        let float_obj = if sol.status == LpStatus::Optimal { sol.objective } else { f64::NAN };
        let mut warm = sol.basis.clone().or(node.warm.clone());
        let mut heuristics_done = false;
        loop {
            let values: Vec<Value> = match (&exact, &float_x) {
                (Some(e), _) => {
                    if self.integral_exact(&e.x) {
                        self.offer(id, Solution::new(self.model, e.x.clone(), SolutionOrigin::LpIntegral));
                        if !self.try_prune(id, &st) {
                            // Only reachable if the bound proof is weaker than
                            // the LP value; the point is optimal here anyway.
                            self.prune(id, PruneReason::Bound, st.bound.clone(), st.proof.clone());
                        }
                        return None;
                    }
                    warm = e.basis.clone().or(warm);
                    e.x.iter().map(|v| Value::Exact(v.clone())).collect()
                }
                (None, Some(x)) if !self.integral_float(x) => x.iter().map(|v| Value::Float(*v)).collect(),
                (None, Some(x)) => {
                    // Integral float point: check or repair it, then settle
                    // the node exactly.
                    let x = x.clone();
                    self.try_candidate(id, &x);
                    if self.try_prune(id, &st) {
                        return None;
                    }
                    exact = Some(self.exact_at(&node, &exact_lp, warm.as_ref(), &mut st)?);
                    if self.try_prune(id, &st) {
                        return None;
                    }
                    continue;
                }
                (None, None) => unreachable!("a node without float point is solved exactly"),
            };

            if self.config.heuristics
                && !heuristics_done
                && (node.depth <= self.config.heuristic_depth || self.processed.is_multiple_of(self.config.heuristic_frequency))
            {
                heuristics_done = true;
                if let Some(x) = &float_x {
                    let t = Instant::now();
                    let cand = fp_round_and_dive(&flp, x, &self.model.integer, sol.basis.as_ref());
                    self.timings.heuristics += t.elapsed();
                    if let Some(c) = cand {
                        self.try_candidate(id, &c);
                    }
                }
                if self.try_prune(id, &st) {
                    return None;
                }
            }

            let candidates: Vec<(usize, Rational, f64)> = (0..values.len())
                .filter(|&j| self.model.integer[j])
                .filter_map(|j| {
                    let (floor, frac) = values[j].split()?;
                    let inside = ExtendedRational::Finite(floor.clone()) >= lower[j]
                        && ExtendedRational::Finite(&floor + Rational::one()) <= upper[j];
                    inside.then_some((j, floor, frac))
                })
                .collect();
            if candidates.is_empty() {
                // Float values sit outside the local bounds; settle exactly.
                exact = Some(self.exact_at(&node, &exact_lp, warm.as_ref(), &mut st)?);
                if self.try_prune(id, &st) {
                    return None;
                }
                continue;
            }
            return Some(self.branch(node, &values, candidates, st, &flp, float_obj, warm));
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn branch(
        &mut self,
        node: Node,
        values: &[Value],
        candidates: Vec<(usize, Rational, f64)>,
        st: NodeState,
        flp: &LpProblem<f64>,
        float_obj: f64,
        warm: Option<Basis>,
    ) -> (Node, Node) {
        let id = node.id;
        let mut scored = Vec::with_capacity(candidates.len());
        let mut strong = 0;
        for (j, floor, frac) in &candidates {
            let reliable = self.pseudo.observations(*j) >= self.config.reliability;
            let (gd, gu) = if !reliable && strong < STRONG_CANDIDATES && float_obj.is_finite() {
                strong += 1;
                self.strong_branch(flp, *j, floor, *frac, float_obj, warm.as_ref())
            } else {
                (self.pseudo.unit_gain(*j, DOWN) * frac, self.pseudo.unit_gain(*j, UP) * (1.0 - frac))
            };
            scored.push((*j, score(gd, gu)));
        }
        let col = pick(&scored, &self.rank).expect("candidates");
        let (_, k, frac) = candidates.iter().find(|(j, _, _)| *j == col).cloned().expect("chosen");
        self.trace.push(TraceEvent::Branch { node: id, col, value: values[col].rational(), strong });

        let left_id = self.new_node();
        let right_id = self.new_node();
        self.set_proof_node(id, ProofNode::Branched { col, k: k.clone(), left: left_id, right: right_id });
        let child = |cid: usize, side: BoundSide, value: Rational, dir: usize, dist: f64| {
            let mut changes = (*node.changes).clone();
            changes.push(Change { col, side, value, node: cid });
            Node {
                id: cid,
                depth: node.depth + 1,
                changes: Rc::new(changes),
                bound: st.bound.clone(),
                proof: st.proof.clone(),
                warm: warm.clone(),
                origin: float_obj.is_finite().then_some((float_obj, col, dir, dist)),
            }
        };
        let left = child(left_id, BoundSide::Upper, k.clone(), DOWN, frac);
        let right = child(right_id, BoundSide::Lower, k + Rational::one(), UP, 1.0 - frac);
        if frac >= 0.5 {
            (right, left)
        } else {
            (left, right)
        }
    }

    fn strong_branch(
        &mut self,
        flp: &LpProblem<f64>,
        j: usize,
        floor: &Rational,
        frac: f64,
        float_obj: f64,
        warm: Option<&Basis>,
    ) -> (f64, f64) {
        let k = nearest_float(floor).value;
        let mut gains = [0.0; 2];
        for (dir, dist) in [(DOWN, frac), (UP, 1.0 - frac)] {
            let mut lp = flp.clone();
            if dir == DOWN {
                lp.upper[j] = Some(k);
            } else {
                lp.lower[j] = Some(k + 1.0);
            }
            let sol = self.solve_float(&lp, warm, None);
            gains[dir] = match sol.status {
                LpStatus::Optimal => {
                    let gain = (sol.objective - float_obj).max(0.0);
                    self.pseudo.record(j, dir, gain, dist);
                    gain
                }
                LpStatus::Infeasible => f64::INFINITY,
                _ => 0.0,
            };
        }
        (gains[DOWN], gains[UP])
    }
}

/// A branching value: exact from the exact LP, or a float LP value.
#[derive(Debug, Clone)]
enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    /// `(floor, fractional part)` for a fractional value.
    fn split(&self) -> Option<(Rational, f64)> {
        match self {
            Value::Exact(v) if !v.is_integer() => {
                let floor = v.floor();
                let frac = nearest_float(&(v - &floor)).value;
                Some((floor, frac))
            }
            Value::Float(v) if !is_integral(*v) && v.is_finite() => {
                let floor = v.floor();
                Some((float_to_rational(floor)?, v - floor))
            }
            _ => None,
        }
    }

    fn rational(&self) -> Rational {
        match self {
            Value::Exact(v) => v.clone(),
            Value::Float(v) => float_to_rational(*v).unwrap_or_default(),
        }
    }
}
