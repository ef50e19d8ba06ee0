//! Exact presolving. Every comparison is done in rational arithmetic with
//! zero tolerance; the reductions are recorded on a stack that maps reduced
//! solutions back to the original model.

mod postsolve;

pub use postsolve::{postsolve, BoundSide, PostsolveError, PostsolveStack, Reduction};

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::model::{Model, RowSense};
use crate::numerics::{ExtendedRational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct PresolveOptions {
    pub max_rounds: usize,
    /// Detect parallel rows on the rayon pool. Results do not depend on it.
    pub parallel: bool,
    /// The loop ends after a round changing fewer than this fraction of
    /// rows plus columns.
    pub min_change: Rational,
}

impl Default for PresolveOptions {
    fn default() -> Self {
        Self { max_rounds: 10, parallel: true, min_change: crate::numerics::ratio(1, 100) }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PresolveStats {
    pub rounds: usize,
    pub fixed: usize,
    pub aggregated: usize,
    pub bound_changes: usize,
    pub rows_deleted: usize,
    pub coefs_changed: usize,
    /// Reductions performed in each round.
    pub round_reductions: Vec<usize>,
    pub time: Duration,
}

impl PresolveStats {
    pub fn total(&self) -> usize {
        self.round_reductions.iter().sum()
    }
}

/// Why presolve declared the model infeasible. Row and column indices refer
/// to the original model; row data is that of the transformed row.
#[derive(Debug, Clone, PartialEq)]
pub enum InfeasibilityWitness {
    EmptyDomain { col: usize, lower: ExtendedRational, upper: ExtendedRational },
    /// The activity range `[min, max]` of the row misses its right-hand side.
    Activity { row: usize, min: ExtendedRational, max: ExtendedRational, sense: RowSense, rhs: Rational },
    /// Two parallel rows with incompatible right-hand sides.
    Parallel { first: usize, second: usize },
    /// An equality over integer columns with coprime integer coefficients and
    /// a fractional right-hand side.
    Fractional { row: usize, rhs: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PresolveOutcome {
    Reduced { model: Model, stack: PostsolveStack },
    Infeasible(InfeasibilityWitness),
}

type Step<T = ()> = Result<T, InfeasibilityWitness>;

/// Finite part plus the number of infinite contributions.
#[derive(Debug, Clone)]
struct Side {
    finite: Rational,
    infinite: usize,
}

impl Side {
    fn new() -> Self {
        Self { finite: Rational::zero(), infinite: 0 }
    }

    fn add(&mut self, c: Option<Rational>) {
        match c {
            Some(v) => self.finite += v,
            None => self.infinite += 1,
        }
    }

    fn total(&self, inf: ExtendedRational) -> ExtendedRational {
        if self.infinite > 0 {
            inf
        } else {
            ExtendedRational::Finite(self.finite.clone())
        }
    }

    /// The sum without one term.
    fn without(&self, c: &Option<Rational>) -> Option<Rational> {
        match c {
            Some(v) if self.infinite == 0 => Some(&self.finite - v),
            None if self.infinite == 1 => Some(self.finite.clone()),
            _ => None,
        }
    }
}

fn contribution(a: &Rational, l: &ExtendedRational, u: &ExtendedRational) -> (Option<Rational>, Option<Rational>) {
    let at = |b: &ExtendedRational| b.finite().map(|v| a * v);
    if a.is_positive() {
        (at(l), at(u))
    } else {
        (at(u), at(l))
    }
}

fn set_coef(coefs: &mut Vec<(usize, Rational)>, k: usize, delta: Rational) {
    match coefs.binary_search_by_key(&k, |(c, _)| *c) {
        Ok(pos) => {
            coefs[pos].1 += delta;
            if coefs[pos].1.is_zero() {
                coefs.remove(pos);
            }
        }
        Err(pos) if !delta.is_zero() => coefs.insert(pos, (k, delta)),
        Err(_) => {}
    }
}

struct Work {
    m: Model,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    stack: Vec<Reduction>,
    stats: PresolveStats,
    changes: usize,
}

impl Work {
    fn new(m: Model) -> Self {
        Self {
            row_alive: vec![true; m.num_rows()],
            col_alive: vec![true; m.num_cols()],
            m,
            stack: Vec::new(),
            stats: PresolveStats::default(),
            changes: 0,
        }
    }

    fn record(&mut self, r: Reduction) {
        match &r {
            Reduction::Fix { .. } => self.stats.fixed += 1,
            Reduction::Substitute { .. } => self.stats.aggregated += 1,
            Reduction::BoundChange { .. } => self.stats.bound_changes += 1,
            Reduction::DeleteRow { .. } | Reduction::MergeParallel { .. } => self.stats.rows_deleted += 1,
            Reduction::ScaleRow { .. } | Reduction::StrengthenCoef { .. } | Reduction::RoundRhs { .. } => {
                self.stats.coefs_changed += 1
            }
        }
        self.changes += 1;
        self.stack.push(r);
    }

    fn alive_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m.num_rows()).filter(|&i| self.row_alive[i])
    }

    fn column_lists(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut cols = vec![Vec::new(); self.m.num_cols()];
        for i in self.alive_rows() {
            for (j, a) in &self.m.rows[i].coefs {
                cols[*j].push((i, a.clone()));
            }
        }
        cols
    }

    fn activity(&self, i: usize) -> (Side, Side) {
        let (mut min, mut max) = (Side::new(), Side::new());
        for (j, a) in &self.m.rows[i].coefs {
            let (lo, hi) = contribution(a, &self.m.lower[*j], &self.m.upper[*j]);
            min.add(lo);
            max.add(hi);
        }
        (min, max)
    }

    fn delete_row(&mut self, i: usize) {
        self.row_alive[i] = false;
        self.record(Reduction::DeleteRow { row: i });
    }

    fn check_domain(&self, j: usize) -> Step {
        if self.m.lower[j] > self.m.upper[j] {
            return Err(InfeasibilityWitness::EmptyDomain {
                col: j,
                lower: self.m.lower[j].clone(),
                upper: self.m.upper[j].clone(),
            });
        }
        Ok(())
    }

    /// Applies `x_j >= value` or `x_j <= value` if it is tighter. Continuous
    /// bounds are only tightened from infinite to finite unless `force`,
    /// which keeps propagation from creeping through endless small steps.
    fn tighten(&mut self, j: usize, side: BoundSide, value: Rational, force: bool) -> Step<bool> {
        let value = match (self.m.integer[j], side) {
            (true, BoundSide::Lower) => value.ceil(),
            (true, BoundSide::Upper) => value.floor(),
            (false, _) => value,
        };
        let value = ExtendedRational::Finite(value);
        let current = match side {
            BoundSide::Lower => &self.m.lower[j],
            BoundSide::Upper => &self.m.upper[j],
        };
        let improves = match side {
            BoundSide::Lower => &value > current,
            BoundSide::Upper => &value < current,
        };
        if !improves || (!force && !self.m.integer[j] && current.is_finite()) {
            return Ok(false);
        }
        match side {
            BoundSide::Lower => self.m.lower[j] = value.clone(),
            BoundSide::Upper => self.m.upper[j] = value.clone(),
        }
        self.record(Reduction::BoundChange { col: j, side, value });
        self.check_domain(j)?;
        Ok(true)
    }

    fn fix_col(&mut self, j: usize, value: Rational) {
        for i in 0..self.m.num_rows() {
            if !self.row_alive[i] {
                continue;
            }
            let row = &mut self.m.rows[i];
            if let Ok(pos) = row.coefs.binary_search_by_key(&j, |(k, _)| *k) {
                let (_, a) = row.coefs.remove(pos);
                row.rhs -= a * &value;
            }
        }
        let c = std::mem::take(&mut self.m.objective[j]);
        self.m.obj_offset += c * &value;
        self.m.lower[j] = ExtendedRational::Finite(value.clone());
        self.m.upper[j] = ExtendedRational::Finite(value.clone());
        self.col_alive[j] = false;
        self.record(Reduction::Fix { col: j, value });
    }

    fn fix_settled(&mut self) {
        for j in 0..self.m.num_cols() {
            if self.col_alive[j] && self.m.lower[j] == self.m.upper[j] {
                if let ExtendedRational::Finite(v) = self.m.lower[j].clone() {
                    self.fix_col(j, v);
                }
            }
        }
    }

    fn round_integer_bounds(&mut self) -> Step {
        for j in 0..self.m.num_cols() {
            if !self.m.integer[j] {
                continue;
            }
            if let Some(l) = self.m.lower[j].finite().cloned() {
                self.tighten(j, BoundSide::Lower, l, true)?;
            }
            if let Some(u) = self.m.upper[j].finite().cloned() {
                self.tighten(j, BoundSide::Upper, u, true)?;
            }
            self.check_domain(j)?;
        }
        Ok(())
    }

    /// Activity-based bound tightening; also detects infeasible and
    /// redundant rows.
    fn propagate(&mut self, force: bool) -> Step {
        for i in 0..self.m.num_rows() {
            if !self.row_alive[i] {
                continue;
            }
            let (min, max) = self.activity(i);
            let row = &self.m.rows[i];
            let (min_t, max_t) = (min.total(ExtendedRational::NegInf), max.total(ExtendedRational::PosInf));
            let b = ExtendedRational::Finite(row.rhs.clone());
            let infeasible = match row.sense {
                RowSense::Le => min_t > b,
                RowSense::Ge => max_t < b,
                RowSense::Eq => min_t > b || max_t < b,
            };
            if infeasible {
                return Err(InfeasibilityWitness::Activity {
                    row: i,
                    min: min_t,
                    max: max_t,
                    sense: row.sense,
                    rhs: row.rhs.clone(),
                });
            }
            let redundant = match row.sense {
                RowSense::Le => max_t <= b,
                RowSense::Ge => min_t >= b,
                RowSense::Eq => min_t == b && max_t == b,
            };
            if redundant {
                self.delete_row(i);
                continue;
            }
            let mut candidates = Vec::new();
            for (j, a) in &row.coefs {
                let (cmin, cmax) = contribution(a, &self.m.lower[*j], &self.m.upper[*j]);
                if row.sense != RowSense::Ge {
                    if let Some(rest) = min.without(&cmin) {
                        let v = (&row.rhs - rest) / a;
                        candidates.push((*j, if a.is_positive() { BoundSide::Upper } else { BoundSide::Lower }, v));
                    }
                }
                if row.sense != RowSense::Le {
                    if let Some(rest) = max.without(&cmax) {
                        let v = (&row.rhs - rest) / a;
                        candidates.push((*j, if a.is_positive() { BoundSide::Lower } else { BoundSide::Upper }, v));
                    }
                }
            }
            for (j, side, v) in candidates {
                self.tighten(j, side, v, force)?;
            }
        }
        Ok(())
    }

    fn is_binary(&self, j: usize) -> bool {
        self.m.integer[j]
            && self.m.lower[j] == ExtendedRational::zero()
            && self.m.upper[j] == ExtendedRational::Finite(Rational::one())
    }

    /// Coefficient strengthening on binary columns of inequality rows,
    /// working on the `<=` form of each row.
    fn strengthen(&mut self) {
        for i in 0..self.m.num_rows() {
            if !self.row_alive[i] || self.m.rows[i].sense == RowSense::Eq {
                continue;
            }
            let sigma = if self.m.rows[i].sense == RowSense::Le { Rational::one() } else { -Rational::one() };
            let mut maxact = Rational::zero();
            let mut bounded = true;
            for (j, a) in &self.m.rows[i].coefs {
                let a = &sigma * a;
                let bound = if a.is_positive() { &self.m.upper[*j] } else { &self.m.lower[*j] };
                match bound.finite() {
                    Some(v) => maxact += a * v,
                    None => bounded = false,
                }
            }
            if !bounded {
                continue;
            }
            let mut b = &sigma * &self.m.rows[i].rhs;
            for idx in 0..self.m.rows[i].coefs.len() {
                if maxact <= b {
                    break;
                }
                let j = self.m.rows[i].coefs[idx].0;
                if !self.is_binary(j) {
                    continue;
                }
                let a = &sigma * &self.m.rows[i].coefs[idx].1;
                let (new_a, new_b) = if a.is_positive() {
                    let rest = &maxact - &a;
                    if rest >= b {
                        continue;
                    }
                    let d = &b - rest;
                    maxact -= &d;
                    (&a - &d, &b - &d)
                } else {
                    if &maxact + &a >= b {
                        continue;
                    }
                    let d = &b - &a - &maxact;
                    (&a + d, b.clone())
                };
                let old = self.m.rows[i].coefs[idx].1.clone();
                let stored = &sigma * &new_a;
                let new_rhs = &sigma * &new_b;
                self.m.rows[i].coefs[idx].1 = stored.clone();
                self.m.rows[i].rhs = new_rhs.clone();
                b = new_b;
                self.record(Reduction::StrengthenCoef { row: i, col: j, old, new: stored, new_rhs });
            }
        }
    }

    /// Removes continuous, implied-free columns that appear in a single
    /// equality, together with that equality.
    fn singleton_columns(&mut self) {
        let cols = self.column_lists();
        for j in 0..self.m.num_cols() {
            if !self.col_alive[j] || self.m.integer[j] || cols[j].len() != 1 {
                continue;
            }
            let i = cols[j][0].0;
            let row = &self.m.rows[i];
            if !self.row_alive[i] || row.sense != RowSense::Eq || row.coefs.len() < 2 {
                continue;
            }
            let (min, max) = self.activity(i);
            let a = cols[j][0].1.clone();
            let rhs = row.rhs.clone();
            let (cmin, cmax) = contribution(&a, &self.m.lower[j], &self.m.upper[j]);
            let at = |rest: Option<Rational>, inf: ExtendedRational| match rest {
                Some(r) => ExtendedRational::Finite((&rhs - r) / &a),
                None => inf,
            };
            let (lo, hi) = if a.is_positive() {
                (at(max.without(&cmax), ExtendedRational::NegInf), at(min.without(&cmin), ExtendedRational::PosInf))
            } else {
                (at(min.without(&cmin), ExtendedRational::NegInf), at(max.without(&cmax), ExtendedRational::PosInf))
            };
            if lo < self.m.lower[j] || hi > self.m.upper[j] {
                continue;
            }
            let terms: Vec<(usize, Rational)> =
                row.coefs.iter().filter(|(k, _)| *k != j).map(|(k, ak)| (*k, -(ak / &a))).collect();
            let constant = &rhs / &a;
            let c = std::mem::take(&mut self.m.objective[j]);
            for (k, p) in &terms {
                self.m.objective[*k] += &c * p;
            }
            self.m.obj_offset += &c * &constant;
            self.row_alive[i] = false;
            self.col_alive[j] = false;
            self.stats.rows_deleted += 1;
            self.record(Reduction::Substitute { col: j, terms, constant });
        }
    }

    /// Eliminates one column of each two-term equality.
    fn doubletons(&mut self) -> Step {
        for i in 0..self.m.num_rows() {
            let row = &self.m.rows[i];
            if !self.row_alive[i] || row.sense != RowSense::Eq || row.coefs.len() != 2 {
                continue;
            }
            let b = row.rhs.clone();
            let eligible = |e: &(usize, Rational), o: &(usize, Rational)| {
                !self.m.integer[e.0]
                    || (self.m.integer[o.0] && (&o.1 / &e.1).is_integer() && (&b / &e.1).is_integer())
            };
            let (first, second) = (row.coefs[0].clone(), row.coefs[1].clone());
            let orders = if self.m.integer[first.0] && !self.m.integer[second.0] {
                [(second.clone(), first.clone()), (first, second)]
            } else {
                [(first.clone(), second.clone()), (second, first)]
            };
            let Some(((e, ae), (o, ao))) = orders.into_iter().find(|(e, o)| eligible(e, o)) else {
                continue;
            };
            let p = -(&ao / &ae);
            let q = &b / &ae;
            self.row_alive[i] = false;
            self.stats.rows_deleted += 1;
            // l_e <= p x_o + q <= u_e
            let image = |v: &ExtendedRational| v.finite().map(|v| (v - &q) / &p);
            let (lo, hi) = if p.is_positive() {
                (image(&self.m.lower[e]), image(&self.m.upper[e]))
            } else {
                (image(&self.m.upper[e]), image(&self.m.lower[e]))
            };
            if let Some(lo) = lo {
                self.tighten(o, BoundSide::Lower, lo, true)?;
            }
            if let Some(hi) = hi {
                self.tighten(o, BoundSide::Upper, hi, true)?;
            }
            for r in 0..self.m.num_rows() {
                if !self.row_alive[r] {
                    continue;
                }
                let row = &mut self.m.rows[r];
                if let Ok(pos) = row.coefs.binary_search_by_key(&e, |(k, _)| *k) {
                    let (_, a) = row.coefs.remove(pos);
                    row.rhs -= &a * &q;
                    set_coef(&mut row.coefs, o, a * &p);
                }
            }
            let c = std::mem::take(&mut self.m.objective[e]);
            self.m.objective[o] += &c * &p;
            self.m.obj_offset += &c * &q;
            self.col_alive[e] = false;
            self.record(Reduction::Substitute { col: e, terms: vec![(o, p)], constant: q });
        }
        self.fix_settled();
        Ok(())
    }

    /// Rows over integer columns: scale to coprime integer coefficients and
    /// round the right-hand side.
    fn simplify(&mut self) -> Step {
        for i in 0..self.m.num_rows() {
            let row = &self.m.rows[i];
            if !self.row_alive[i] || row.coefs.is_empty() || row.coefs.iter().any(|(j, _)| !self.m.integer[*j]) {
                continue;
            }
            let lcm = row.coefs.iter().fold(BigInt::one(), |acc, (_, a)| acc.lcm(a.denom()));
            let gcd = row.coefs.iter().fold(BigInt::zero(), |acc, (_, a)| acc.gcd(&(a.numer() * &lcm / a.denom())));
            let factor = Rational::new(lcm, gcd);
            if !factor.is_one() {
                let row = &mut self.m.rows[i];
                for (_, a) in row.coefs.iter_mut() {
                    *a *= &factor;
                }
                row.rhs *= &factor;
                self.record(Reduction::ScaleRow { row: i, factor });
            }
            let row = &self.m.rows[i];
            let rounded = match row.sense {
                RowSense::Le => row.rhs.floor(),
                RowSense::Ge => row.rhs.ceil(),
                RowSense::Eq if row.rhs.is_integer() => row.rhs.clone(),
                RowSense::Eq => return Err(InfeasibilityWitness::Fractional { row: i, rhs: row.rhs.clone() }),
            };
            if rounded != row.rhs {
                let old = std::mem::replace(&mut self.m.rows[i].rhs, rounded.clone());
                self.record(Reduction::RoundRhs { row: i, old, new: rounded });
            }
        }
        Ok(())
    }

    /// Rows equal up to a nonzero rational scale are merged, keeping the
    /// tightest ones.
    fn parallel_rows(&mut self, parallel: bool) -> Step {
        let alive: Vec<usize> = self.alive_rows().filter(|&i| !self.m.rows[i].coefs.is_empty()).collect();
        let key = |&i: &usize| {
            let row = &self.m.rows[i];
            let s = row.coefs[0].1.clone();
            let normal: Vec<(usize, Rational)> = row.coefs.iter().map(|(j, a)| (*j, a / &s)).collect();
            (i, normal, s)
        };
        let keyed: Vec<_> = if parallel { alive.par_iter().map(key).collect() } else { alive.iter().map(key).collect() };
        let mut index: HashMap<Vec<(usize, Rational)>, usize> = HashMap::new();
        let mut groups: Vec<Vec<(usize, Rational)>> = Vec::new();
        for (i, normal, s) in keyed {
            let g = *index.entry(normal).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push((i, s));
        }
        for group in groups.into_iter().filter(|g| g.len() > 1) {
            self.merge_group(&group)?;
        }
        Ok(())
    }

    fn merge_group(&mut self, group: &[(usize, Rational)]) -> Step {
        let scale: HashMap<usize, Rational> = group.iter().cloned().collect();
        let (mut eqs, mut les, mut ges) = (Vec::new(), Vec::new(), Vec::new());
        for (i, s) in group {
            let row = &self.m.rows[*i];
            let sense = if s.is_positive() { row.sense } else { row.sense.flipped() };
            let v = &row.rhs / s;
            match sense {
                RowSense::Eq => eqs.push((*i, v)),
                RowSense::Le => les.push((*i, v)),
                RowSense::Ge => ges.push((*i, v)),
            }
        }
        let conflict = |first: usize, second: usize| Err(InfeasibilityWitness::Parallel { first, second });
        let mut drops: Vec<(usize, usize)> = Vec::new();
        if let Some((k, e)) = eqs.first().cloned() {
            let clash = eqs[1..].iter().find(|(_, v)| v != &e).or_else(|| les.iter().find(|(_, v)| v < &e)).or_else(|| ges.iter().find(|(_, v)| v > &e));
            if let Some((i, _)) = clash {
                return conflict(k, *i);
            }
            drops.extend(eqs[1..].iter().chain(&les).chain(&ges).map(|(i, _)| (k, *i)));
        } else {
            // Smallest index among the tightest.
            let best_le = les.iter().min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))).cloned();
            let best_ge = ges.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).cloned();
            if let (Some((li, lv)), Some((gi, gv))) = (&best_le, &best_ge) {
                if gv > lv {
                    return conflict(*li, *gi);
                }
                if gv == lv {
                    self.m.rows[*li].sense = RowSense::Eq;
                    for (i, _) in les.iter().chain(&ges).filter(|(i, _)| i != li) {
                        drops.push((*li, *i));
                    }
                    return self.apply_drops(drops, &scale);
                }
            }
            for (best, list) in [(&best_le, &les), (&best_ge, &ges)] {
                if let Some((bi, _)) = best {
                    drops.extend(list.iter().filter(|(i, _)| i != bi).map(|(i, _)| (*bi, *i)));
                }
            }
        }
        self.apply_drops(drops, &scale)
    }

    fn apply_drops(&mut self, mut drops: Vec<(usize, usize)>, scale: &HashMap<usize, Rational>) -> Step {
        drops.sort_by_key(|(_, d)| *d);
        for (kept, dropped) in drops {
            self.row_alive[dropped] = false;
            let s = &scale[&dropped] / &scale[&kept];
            self.record(Reduction::MergeParallel { kept, dropped, scale: s });
        }
        Ok(())
    }

    /// Fixes columns whose objective and row coefficients all push in the
    /// same direction to the bound on that side.
    fn dual_fix(&mut self) {
        let cols = self.column_lists();
        for j in 0..self.m.num_cols() {
            if !self.col_alive[j] {
                continue;
            }
            let c = &self.m.objective[j];
            let pattern = |want_down: bool| {
                cols[j].iter().all(|(i, a)| match self.m.rows[*i].sense {
                    RowSense::Ge => if want_down { !a.is_positive() } else { !a.is_negative() },
                    RowSense::Le => if want_down { !a.is_negative() } else { !a.is_positive() },
                    RowSense::Eq => false,
                })
            };
            let value = if !c.is_negative() && pattern(true) && self.m.lower[j].is_finite() {
                self.m.lower[j].finite().cloned()
            } else if !c.is_positive() && pattern(false) && self.m.upper[j].is_finite() {
                self.m.upper[j].finite().cloned()
            } else if c.is_zero() && cols[j].is_empty() {
                Some(Rational::zero())
            } else {
                None
            };
            if let Some(v) = value {
                self.fix_col(j, v);
            }
        }
    }

    fn run(&mut self, opts: &PresolveOptions) -> Step {
        self.round_integer_bounds()?;
        for _ in 0..opts.max_rounds {
            self.stats.rounds += 1;
            self.fix_settled();
            self.propagate(false)?;
            self.fix_settled();
            self.strengthen();
            self.singleton_columns();
            self.doubletons()?;
            self.simplify()?;
            self.parallel_rows(opts.parallel)?;
            self.dual_fix();
            let size = self.row_alive.iter().chain(&self.col_alive).filter(|&&a| a).count();
            let changed = std::mem::take(&mut self.changes);
            self.stats.round_reductions.push(changed);
            if changed == 0 || Rational::from_integer(changed.into()) < &opts.min_change * Rational::from_integer(size.into()) {
                break;
            }
        }
        Ok(())
    }

    fn finish(self) -> (Model, PostsolveStack) {
        let col_map: Vec<usize> = (0..self.m.num_cols()).filter(|&j| self.col_alive[j]).collect();
        let row_map: Vec<usize> = (0..self.m.num_rows()).filter(|&i| self.row_alive[i]).collect();
        let mut new_index = vec![usize::MAX; self.m.num_cols()];
        for (r, &o) in col_map.iter().enumerate() {
            new_index[o] = r;
        }
        let mut reduced = Model::new(self.m.name.clone());
        reduced.sense = self.m.sense;
        reduced.obj_offset = self.m.obj_offset.clone();
        for &o in &col_map {
            reduced.add_column(
                self.m.col_names[o].clone(),
                self.m.objective[o].clone(),
                self.m.lower[o].clone(),
                self.m.upper[o].clone(),
                self.m.integer[o],
            );
        }
        for &i in &row_map {
            let row = &self.m.rows[i];
            reduced.add_row(
                row.name.clone(),
                row.coefs.iter().map(|(j, a)| (new_index[*j], a.clone())),
                row.sense,
                row.rhs.clone(),
            );
        }
        (reduced, PostsolveStack { reductions: self.stack, col_map, row_map, original: Model::new("") })
    }
}

/// Runs the reduction loop until a round changes too little or the round
/// limit is reached.
pub fn presolve(model: &Model, opts: &PresolveOptions) -> (PresolveOutcome, PresolveStats) {
    let start = Instant::now();
    let mut work = Work::new(model.clone());
    let result = work.run(opts);
    let mut stats = std::mem::take(&mut work.stats);
    stats.time = start.elapsed();
    match result {
        Err(witness) => (PresolveOutcome::Infeasible(witness), stats),
        Ok(()) => {
            let (reduced, mut stack) = work.finish();
            stack.original = model.clone();
            (PresolveOutcome::Reduced { model: reduced, stack }, stats)
        }
    }
}

/// One pass of activity-based tightening over all rows, every improvement
/// accepted. Integer bounds are rounded inward.
pub fn propagate_bounds(model: &Model) -> Result<Vec<Reduction>, InfeasibilityWitness> {
    let mut work = Work::new(model.clone());
    work.propagate(true)?;
    Ok(work.stack.into_iter().filter(|r| matches!(r, Reduction::BoundChange { .. })).collect())
}

/// The fixings dual fixing would make on `model`.
pub fn dual_fix(model: &Model) -> Vec<Reduction> {
    let mut work = Work::new(model.clone());
    work.dual_fix();
    work.stack
}
