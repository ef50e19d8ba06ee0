//! Bounded-variable primal simplex over any [`LpScalar`].
//!
//! The basis inverse is kept dense and updated in product form; binary64
//! runs refactorize every 50 pivots. Pricing is Dantzig's rule, falling back
//! to Bland's rule after `3(n+m)` consecutive degenerate pivots. Phase 1
//! adds one artificial column per row that the slack crash basis leaves
//! infeasible and minimizes their sum.

use super::{Basis, LpProblem, LpScalar, LpStatus, VarStatus};

const REFACTOR_INTERVAL: usize = 50;

#[derive(Debug, Clone)]
pub struct LpOptions<T> {
    pub warm: Option<Basis>,
    /// Stop once a Lagrangian (dual) bound exceeds this value.
    pub objective_limit: Option<T>,
    pub max_iterations: Option<usize>,
    /// Costs on the row slacks; used by refinement correction problems.
    pub slack_cost: Option<Vec<T>>,
}

impl<T> Default for LpOptions<T> {
    fn default() -> Self {
        Self { warm: None, objective_limit: None, max_iterations: None, slack_cost: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub x: Vec<T>,
    /// Row activities `a_i.x` as tracked by the simplex.
    pub activities: Vec<T>,
    /// Row duals; for `Infeasible` these are the phase-1 duals (a Farkas
    /// candidate).
    pub y: Vec<T>,
    pub reduced: Vec<T>,
    pub objective: T,
    /// Absent when phase 1 could not complete.
    pub basis: Option<Basis>,
    pub iterations: usize,
    pub warm_started: bool,
}

/// Primal and dual values determined by a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPoint<T> {
    pub x: Vec<T>,
    pub activities: Vec<T>,
    pub y: Vec<T>,
    pub reduced: Vec<T>,
    pub primal_feasible: bool,
    pub dual_feasible: bool,
}

enum Outcome {
    Optimal,
    Unbounded,
    ObjectiveLimit,
    IterationLimit,
    Breakdown,
}

struct Engine<T> {
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, T)>>,
    lower: Vec<Option<T>>,
    upper: Vec<Option<T>>,
    cost: Vec<T>,
    status: Vec<VarStatus>,
    head: Vec<usize>,
    binv: Vec<Vec<T>>,
    x: Vec<T>,
    iterations: usize,
    since_refactor: usize,
    degenerate: usize,
    bland: bool,
    max_iterations: usize,
}

fn neg_tol<T: LpScalar>(tol: &T) -> T {
    -tol.clone()
}

impl<T: LpScalar> Engine<T> {
    fn new(lp: &LpProblem<T>, slack_cost: Option<&[T]>, max_iterations: Option<usize>) -> Self {
        let (n, m) = (lp.num_cols(), lp.num_rows());
        let mut cols = lp.cols.clone();
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut cost = lp.obj.clone();
        for i in 0..m {
            cols.push(vec![(i, -T::one())]);
            let (l, u) = lp.slack_bounds(i);
            lower.push(l);
            upper.push(u);
            cost.push(slack_cost.map_or_else(T::zero, |c| c[i].clone()));
        }
        let total = n + m;
        Self {
            m,
            n,
            cols,
            lower,
            upper,
            cost,
            status: vec![VarStatus::AtLower; total],
            head: Vec::new(),
            binv: Vec::new(),
            x: vec![T::zero(); total],
            iterations: 0,
            since_refactor: 0,
            degenerate: 0,
            bland: false,
            max_iterations: max_iterations.unwrap_or(100 * (total + 10)),
        }
    }

    fn nvars(&self) -> usize {
        self.cols.len()
    }

    fn resting_status(&self, j: usize) -> VarStatus {
        match (&self.lower[j], &self.upper[j]) {
            (Some(_), _) => VarStatus::AtLower,
            (None, Some(_)) => VarStatus::AtUpper,
            (None, None) => VarStatus::Free,
        }
    }

    fn resting_value(&self, j: usize) -> T {
        match self.status[j] {
            VarStatus::AtLower => self.lower[j].clone().expect("finite lower"),
            VarStatus::AtUpper => self.upper[j].clone().expect("finite upper"),
            _ => T::zero(),
        }
    }

    /// Inverts the basis matrix by Gauss-Jordan elimination with partial
    /// pivoting. Returns false when it is singular.
    fn factorize(&mut self) -> bool {
        let m = self.m;
        let mut b = vec![vec![T::zero(); m]; m];
        for (k, &j) in self.head.iter().enumerate() {
            for (i, a) in &self.cols[j] {
                b[*i][k] = a.clone();
            }
        }
        let mut inv: Vec<Vec<T>> = (0..m)
            .map(|i| (0..m).map(|k| if i == k { T::one() } else { T::zero() }).collect())
            .collect();
        let tiny = if T::EXACT { T::zero() } else { T::pivot_tol() };
        for c in 0..m {
            let p = (c..m)
                .max_by(|&r1, &r2| {
                    b[r1][c].abs().partial_cmp(&b[r2][c].abs()).unwrap_or(std::cmp::Ordering::Equal).then(r2.cmp(&r1))
                })
                .expect("nonempty range");
            if b[p][c].abs() <= tiny {
                return false;
            }
            b.swap(c, p);
            inv.swap(c, p);
            let piv = b[c][c].clone();
            for k in 0..m {
                b[c][k] = b[c][k].clone() / &piv;
                inv[c][k] = inv[c][k].clone() / &piv;
            }
            for r in 0..m {
                if r == c || b[r][c].is_zero() {
                    continue;
                }
                let f = b[r][c].clone();
                for k in 0..m {
                    if !b[c][k].is_zero() {
                        b[r][k] = b[r][k].clone() - f.clone() * &b[c][k];
                    }
                    if !inv[c][k].is_zero() {
                        inv[r][k] = inv[r][k].clone() - f.clone() * &inv[c][k];
                    }
                }
            }
        }
        self.binv = inv;
        self.since_refactor = 0;
        true
    }

    fn compute_primal(&mut self) {
        let mut rhs = vec![T::zero(); self.m];
        for j in 0..self.nvars() {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let v = self.resting_value(j);
            if !v.is_zero() {
                for (i, a) in &self.cols[j] {
                    rhs[*i] = rhs[*i].clone() - a.clone() * &v;
                }
            }
            self.x[j] = v;
        }
        for r in 0..self.m {
            let mut s = T::zero();
            for (k, v) in rhs.iter().enumerate() {
                if !v.is_zero() && !self.binv[r][k].is_zero() {
                    s = s + self.binv[r][k].clone() * v;
                }
            }
            self.x[self.head[r]] = s;
        }
    }

    fn duals(&self) -> Vec<T> {
        let mut y = vec![T::zero(); self.m];
        for (r, &j) in self.head.iter().enumerate() {
            let c = &self.cost[j];
            if c.is_zero() {
                continue;
            }
            for k in 0..self.m {
                if !self.binv[r][k].is_zero() {
                    y[k] = y[k].clone() + c.clone() * &self.binv[r][k];
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[T]) -> T {
        self.cols[j].iter().fold(self.cost[j].clone(), |acc, (i, a)| acc - a.clone() * &y[*i])
    }

    fn column(&self, j: usize) -> Vec<T> {
        (0..self.m)
            .map(|r| {
                self.cols[j].iter().fold(T::zero(), |acc, (i, a)| {
                    if self.binv[r][*i].is_zero() {
                        acc
                    } else {
                        acc + self.binv[r][*i].clone() * a
                    }
                })
            })
            .collect()
    }

    fn pivot_inverse(&mut self, r: usize, alpha: &[T]) {
        let piv = alpha[r].clone();
        for k in 0..self.m {
            self.binv[r][k] = self.binv[r][k].clone() / &piv;
        }
        let pivot_row = self.binv[r].clone();
        for (i, a) in alpha.iter().enumerate() {
            if i == r || a.is_zero() {
                continue;
            }
            for (k, p) in pivot_row.iter().enumerate() {
                if !p.is_zero() {
                    self.binv[i][k] = self.binv[i][k].clone() - a.clone() * p;
                }
            }
        }
    }

    fn can_increase(&self, j: usize) -> bool {
        match self.status[j] {
            VarStatus::AtLower => self.upper[j].as_ref().is_none_or(|u| Some(u) != self.lower[j].as_ref()),
            VarStatus::Free => true,
            _ => false,
        }
    }

    fn can_decrease(&self, j: usize) -> bool {
        match self.status[j] {
            VarStatus::AtUpper => self.lower[j].as_ref().is_none_or(|l| Some(l) != self.upper[j].as_ref()),
            VarStatus::Free => true,
            _ => false,
        }
    }

    /// `sum_j min(d_j l_j, d_j u_j)` over all variables; `None` stands for
    /// minus infinity.
    fn lagrangian(&self, d: &[Option<T>]) -> Option<T> {
        let tol = T::opt_tol();
        let mut total = T::zero();
        for (j, dj) in d.iter().enumerate() {
            let Some(dj) = dj else { continue };
            if dj.abs() <= tol {
                continue;
            }
            let side = if dj.is_positive() { &self.lower[j] } else { &self.upper[j] };
            total = total + dj.clone() * side.as_ref()?;
        }
        Some(total)
    }

    fn run(&mut self, limit: Option<&T>) -> Outcome {
        let opt_tol = T::opt_tol();
        let feas_tol = T::feas_tol();
        let piv_tol = T::pivot_tol();
        loop {
            if self.iterations >= self.max_iterations {
                return Outcome::IterationLimit;
            }
            if !T::EXACT && self.since_refactor >= REFACTOR_INTERVAL {
                if !self.factorize() {
                    return Outcome::Breakdown;
                }
                self.compute_primal();
            }
            let y = self.duals();
            let d: Vec<Option<T>> = (0..self.nvars())
                .map(|j| (self.status[j] != VarStatus::Basic).then(|| self.reduced_cost(j, &y)))
                .collect();
            if let Some(lim) = limit {
                if self.lagrangian(&d).is_some_and(|l| &l > lim) {
                    return Outcome::ObjectiveLimit;
                }
            }

            let mut entering: Option<(usize, T)> = None;
            for (j, dj) in d.iter().enumerate() {
                let Some(dj) = dj else { continue };
                let eligible = (dj < &neg_tol(&opt_tol) && self.can_increase(j))
                    || (dj > &opt_tol && self.can_decrease(j));
                if !eligible {
                    continue;
                }
                if self.bland {
                    entering = Some((j, dj.clone()));
                    break;
                }
                if entering.as_ref().is_none_or(|(_, best)| dj.abs() > best.abs()) {
                    entering = Some((j, dj.clone()));
                }
            }
            let Some((j, dj)) = entering else {
                return Outcome::Optimal;
            };
            let increasing = dj.is_negative();
            let alpha = self.column(j);

            // (ratio, position or None for a bound flip, |pivot|, leaving index)
            let mut best: Option<(T, Option<usize>, T, usize)> = None;
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                best = Some((u.clone() - l, None, T::one(), j));
            }
            for (r, a) in alpha.iter().enumerate() {
                let g = if increasing { a.clone() } else { -a.clone() };
                let bv = self.head[r];
                let ratio = if g > piv_tol {
                    match &self.lower[bv] {
                        Some(l) => (self.x[bv].clone() - l) / &g,
                        None => continue,
                    }
                } else if g < neg_tol(&piv_tol) {
                    match &self.upper[bv] {
                        Some(u) => (u.clone() - &self.x[bv]) / &(-g.clone()),
                        None => continue,
                    }
                } else {
                    continue;
                };
                let ratio = if ratio.is_negative() { T::zero() } else { ratio };
                let take = match &best {
                    None => true,
                    Some((br, _, bg, bidx)) => {
                        if ratio < br.clone() - &feas_tol {
                            true
                        } else if ratio <= br.clone() + &feas_tol {
                            if self.bland {
                                bv < *bidx
                            } else {
                                g.abs() > *bg
                            }
                        } else {
                            false
                        }
                    }
                };
                if take {
                    best = Some((ratio, Some(r), g.abs(), bv));
                }
            }
            let Some((t, pos, _, _)) = best else {
                return Outcome::Unbounded;
            };

            self.iterations += 1;
            if t <= feas_tol {
                self.degenerate += 1;
                if self.degenerate >= 3 * (self.n + self.m) {
                    self.bland = true;
                }
            } else {
                self.degenerate = 0;
                self.bland = false;
            }
            let step = if increasing { t.clone() } else { -t.clone() };
            if !step.is_zero() {
                self.x[j] = self.x[j].clone() + &step;
                for (r, a) in alpha.iter().enumerate() {
                    if !a.is_zero() {
                        let bv = self.head[r];
                        self.x[bv] = self.x[bv].clone() - a.clone() * &step;
                    }
                }
            }
            match pos {
                None => {
                    self.status[j] = if increasing { VarStatus::AtUpper } else { VarStatus::AtLower };
                    self.x[j] = self.resting_value(j);
                }
                Some(r) => {
                    let leaving = self.head[r];
                    let g = if increasing { alpha[r].clone() } else { -alpha[r].clone() };
                    self.status[leaving] = if g.is_positive() { VarStatus::AtLower } else { VarStatus::AtUpper };
                    self.x[leaving] = self.resting_value(leaving);
                    self.status[j] = VarStatus::Basic;
                    self.head[r] = j;
                    self.pivot_inverse(r, &alpha);
                    self.since_refactor += 1;
                }
            }
        }
    }

    fn primal_feasible(&self) -> bool {
        let tol = T::feas_tol();
        (0..self.nvars()).all(|j| {
            self.lower[j].as_ref().is_none_or(|l| self.x[j] >= l.clone() - &tol)
                && self.upper[j].as_ref().is_none_or(|u| self.x[j] <= u.clone() + &tol)
        })
    }

    fn dual_feasible(&self, y: &[T]) -> bool {
        let tol = T::opt_tol();
        (0..self.nvars()).all(|j| {
            let d = self.reduced_cost(j, y);
            match self.status[j] {
                VarStatus::Basic => true,
                VarStatus::Free => d.abs() <= tol,
                VarStatus::AtLower if self.lower[j] == self.upper[j] => true,
                VarStatus::AtLower => d >= neg_tol(&tol),
                VarStatus::AtUpper => d <= tol,
            }
        })
    }

    /// Loads a basis; false when it does not fit the problem or is singular.
    fn load(&mut self, basis: &Basis) -> bool {
        if basis.cols.len() != self.n || basis.rows.len() != self.m || basis.num_basic() != self.m {
            return false;
        }
        self.head.clear();
        for (j, s) in basis.cols.iter().chain(&basis.rows).enumerate() {
            let ok = match s {
                VarStatus::Basic => {
                    self.head.push(j);
                    true
                }
                VarStatus::AtLower => self.lower[j].is_some(),
                VarStatus::AtUpper => self.upper[j].is_some(),
                VarStatus::Free => self.lower[j].is_none() && self.upper[j].is_none(),
            };
            if !ok {
                return false;
            }
            self.status[j] = *s;
        }
        if !self.factorize() {
            return false;
        }
        self.compute_primal();
        true
    }

    /// Slack crash basis plus artificials. Returns the number of artificials.
    fn crash(&mut self) -> usize {
        let (n, m) = (self.n, self.m);
        for j in 0..n {
            self.status[j] = self.resting_status(j);
            self.x[j] = self.resting_value(j);
        }
        let mut act = vec![T::zero(); m];
        for j in 0..n {
            if !self.x[j].is_zero() {
                for (i, a) in &self.cols[j] {
                    act[*i] = act[*i].clone() + a.clone() * &self.x[j];
                }
            }
        }
        self.head = (n..n + m).collect();
        let mut diag: Vec<T> = vec![-T::one(); m];
        let mut artificials = 0;
        for i in 0..m {
            let s = n + i;
            let below = self.lower[s].as_ref().filter(|l| act[i] < **l).cloned();
            let above = self.upper[s].as_ref().filter(|u| act[i] > **u).cloned();
            let target = match (below, above) {
                (Some(l), _) => {
                    self.status[s] = VarStatus::AtLower;
                    l
                }
                (None, Some(u)) => {
                    self.status[s] = VarStatus::AtUpper;
                    u
                }
                (None, None) => {
                    self.status[s] = VarStatus::Basic;
                    self.x[s] = act[i].clone();
                    continue;
                }
            };
            // a_i.x - s_i + w * art = 0 with art = (target - act) / w >= 0
            let gap = target.clone() - &act[i];
            let w = if gap.is_positive() { T::one() } else { -T::one() };
            self.x[s] = target;
            self.cols.push(vec![(i, w.clone())]);
            self.lower.push(Some(T::zero()));
            self.upper.push(None);
            self.cost.push(T::zero());
            self.status.push(VarStatus::Basic);
            self.x.push(gap.abs());
            self.head[i] = self.cols.len() - 1;
            diag[i] = w;
            artificials += 1;
        }
        self.binv = (0..m)
            .map(|i| (0..m).map(|k| if i == k { T::one() / &diag[i] } else { T::zero() }).collect())
            .collect();
        self.since_refactor = 0;
        artificials
    }

    /// Pivots basic artificials out and deletes all artificial columns.
    fn drop_artificials(&mut self) -> bool {
        let base = self.n + self.m;
        let piv_tol = T::pivot_tol();
        for r in 0..self.m {
            if self.head[r] < base {
                continue;
            }
            let mut choice: Option<(usize, T, Vec<T>)> = None;
            for j in 0..base {
                if self.status[j] == VarStatus::Basic {
                    continue;
                }
                let alpha = self.column(j);
                let mag = alpha[r].abs();
                if mag > piv_tol && choice.as_ref().is_none_or(|(_, best, _)| mag > *best) {
                    choice = Some((j, mag, alpha));
                    if T::EXACT {
                        break;
                    }
                }
            }
            let Some((j, _, alpha)) = choice else { return false };
            let leaving = self.head[r];
            self.status[leaving] = VarStatus::AtLower;
            self.status[j] = VarStatus::Basic;
            self.head[r] = j;
            self.pivot_inverse(r, &alpha);
        }
        self.cols.truncate(base);
        self.lower.truncate(base);
        self.upper.truncate(base);
        self.cost.truncate(base);
        self.status.truncate(base);
        self.x.truncate(base);
        if !T::EXACT && !self.factorize() {
            return false;
        }
        self.compute_primal();
        true
    }

    fn basis(&self) -> Basis {
        Basis { cols: self.status[..self.n].to_vec(), rows: self.status[self.n..self.n + self.m].to_vec() }
    }

    fn finish(&self, status: LpStatus, warm_started: bool) -> LpSolution<T> {
        let y = self.duals();
        let reduced = (0..self.n).map(|j| self.reduced_cost(j, &y)).collect();
        let objective = (0..self.n + self.m).fold(T::zero(), |acc, j| acc + self.cost[j].clone() * &self.x[j]);
        LpSolution {
            status,
            x: self.x[..self.n].to_vec(),
            activities: self.x[self.n..self.n + self.m].to_vec(),
            y,
            reduced,
            objective,
            basis: Some(self.basis()),
            iterations: self.iterations,
            warm_started,
        }
    }
}

fn outcome_status(o: Outcome) -> LpStatus {
    match o {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Unbounded => LpStatus::Unbounded,
        Outcome::ObjectiveLimit => LpStatus::ObjectiveLimit,
        Outcome::IterationLimit | Outcome::Breakdown => LpStatus::IterationLimit,
    }
}

fn bounds_consistent<T: LpScalar>(lp: &LpProblem<T>) -> bool {
    lp.lower.iter().zip(&lp.upper).all(|(l, u)| match (l, u) {
        (Some(l), Some(u)) => l <= u,
        _ => true,
    })
}

/// Solves `min c.x` over the rows and bounds of `lp`.
pub fn solve_lp<T: LpScalar>(lp: &LpProblem<T>, opts: &LpOptions<T>) -> LpSolution<T> {
    let mut e = Engine::new(lp, opts.slack_cost.as_deref(), opts.max_iterations);
    if !bounds_consistent(lp) {
        // An empty box: the zero ray over the rows already certifies it.
        let mut sol = e.finish_empty(LpStatus::Infeasible);
        sol.y = vec![T::zero(); lp.num_rows()];
        return sol;
    }

    let warm_ok = opts.warm.as_ref().is_some_and(|b| e.load(b)) && e.primal_feasible();
    if !warm_ok {
        e.status = vec![VarStatus::AtLower; e.nvars()];
        e.iterations = 0;
        let artificials = e.crash();
        if artificials > 0 {
            let phase2_cost: Vec<T> = e.cost[..e.n + e.m].to_vec();
            let base = e.n + e.m;
            for j in 0..e.nvars() {
                e.cost[j] = if j >= base { T::one() } else { T::zero() };
            }
            match e.run(None) {
                Outcome::Optimal => {}
                other => return e.finish_empty(outcome_status_phase1(other)).with_iterations(e.iterations),
            }
            let infeasibility = (base..e.nvars()).fold(T::zero(), |acc, j| acc + &e.x[j]);
            let phase1_tol = if T::EXACT { T::zero() } else { T::of_rational(&crate::numerics::ratio(1, 100_000_000)) };
            if infeasibility > phase1_tol {
                let y = e.duals();
                let mut sol = e.finish_empty(LpStatus::Infeasible);
                sol.y = y;
                sol.iterations = e.iterations;
                return sol;
            }
            if !e.drop_artificials() {
                return e.finish_empty(LpStatus::IterationLimit).with_iterations(e.iterations);
            }
            e.cost = phase2_cost;
            e.degenerate = 0;
            e.bland = false;
        }
    }
    let outcome = e.run(opts.objective_limit.as_ref());
    e.finish(outcome_status(outcome), warm_ok)
}

fn outcome_status_phase1(o: Outcome) -> LpStatus {
    match o {
        Outcome::Unbounded | Outcome::Breakdown | Outcome::IterationLimit | Outcome::ObjectiveLimit => {
            LpStatus::IterationLimit
        }
        Outcome::Optimal => LpStatus::Optimal,
    }
}

impl<T: LpScalar> Engine<T> {
    fn finish_empty(&self, status: LpStatus) -> LpSolution<T> {
        LpSolution {
            status,
            x: vec![T::zero(); self.n],
            activities: vec![T::zero(); self.m],
            y: vec![T::zero(); self.m],
            reduced: vec![T::zero(); self.n],
            objective: T::zero(),
            basis: None,
            iterations: 0,
            warm_started: false,
        }
    }
}

impl<T> LpSolution<T> {
    fn with_iterations(mut self, it: usize) -> Self {
        self.iterations = it;
        self
    }
}

/// Primal/dual values of a given basis, or `None` when the basis does not
/// fit or is singular.
pub fn evaluate_basis<T: LpScalar>(lp: &LpProblem<T>, basis: &Basis, slack_cost: Option<&[T]>) -> Option<BasisPoint<T>> {
    let mut e = Engine::new(lp, slack_cost, None);
    if !e.load(basis) {
        return None;
    }
    let y = e.duals();
    let reduced = (0..e.n).map(|j| e.reduced_cost(j, &y)).collect();
    Some(BasisPoint {
        x: e.x[..e.n].to_vec(),
        activities: e.x[e.n..].to_vec(),
        primal_feasible: e.primal_feasible(),
        dual_feasible: e.dual_feasible(&y),
        y,
        reduced,
    })
}
