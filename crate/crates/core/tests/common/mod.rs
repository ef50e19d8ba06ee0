//! Test-side oracles. They share no code with the solver beyond the
//! `Rational` type and the model structs.

#![allow(dead_code)]

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ratmip::lp::LpProblem;
use ratmip::model::{Model, RowSense};
use ratmip::numerics::{ExtendedRational, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Random rational with denominator at most `max_den`.
pub fn random_rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(-span * d..=span * d);
    q(n, d)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpVerdict {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

/// Float inverse with partial pivoting; `None` when a pivot is tiny.
fn invert_f64(mut m: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let k = m.len();
    let mut inv: Vec<Vec<f64>> = (0..k).map(|r| (0..k).map(|c| if r == c { 1.0 } else { 0.0 }).collect()).collect();
    for c in 0..k {
        let p = (c..k).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() < 1e-9 {
            return None;
        }
        m.swap(c, p);
        inv.swap(c, p);
        let pivot = m[c][c];
        for cc in 0..k {
            m[c][cc] /= pivot;
            inv[c][cc] /= pivot;
        }
        for r in 0..k {
            if r != c && m[r][c] != 0.0 {
                let f = m[r][c];
                for cc in 0..k {
                    m[r][cc] -= f * m[c][cc];
                    inv[r][cc] -= f * inv[c][cc];
                }
            }
        }
    }
    Some(inv)
}

/// Inverse of a square matrix by exact Gauss-Jordan elimination.
fn invert(mut m: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let k = m.len();
    let mut inv: Vec<Vec<Rational>> =
        (0..k).map(|r| (0..k).map(|c| if r == c { Rational::one() } else { Rational::zero() }).collect()).collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        inv.swap(c, p);
        let pivot = m[c][c].clone();
        for cc in 0..k {
            m[c][cc] /= &pivot;
            inv[c][cc] /= &pivot;
        }
        for r in 0..k {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for cc in 0..k {
                    let v = &f * &m[c][cc];
                    m[r][cc] -= v;
                    let w = &f * &inv[c][cc];
                    inv[r][cc] -= w;
                }
            }
        }
    }
    Some(inv)
}

fn feasible(lp: &LpProblem<Rational>, x: &[Rational]) -> bool {
    let n = lp.obj.len();
    for j in 0..n {
        if lp.lower[j].as_ref().is_some_and(|l| &x[j] < l) || lp.upper[j].as_ref().is_some_and(|u| &x[j] > u) {
            return false;
        }
    }
    let mut act = vec![Rational::zero(); lp.senses.len()];
    for (j, col) in lp.cols.iter().enumerate() {
        for (i, a) in col {
            act[*i] += a * &x[j];
        }
    }
    act.iter().zip(lp.senses.iter().zip(&lp.rhs)).all(|(a, (s, b))| match s {
        RowSense::Ge => a >= b,
        RowSense::Le => a <= b,
        RowSense::Eq => a == b,
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimum of `c.x` over all vertices. Requires every lower bound finite,
/// so the feasible region is pointed.
fn vertex_minimum(lp: &LpProblem<Rational>) -> Option<(Rational, Vec<Rational>)> {
    let n = lp.obj.len();
    let m = lp.senses.len();
    assert!(lp.lower.iter().all(Option::is_some), "oracle needs finite lower bounds");
    let dense: Vec<Vec<Rational>> = {
        let mut a = vec![vec![Rational::zero(); n]; m];
        for (j, col) in lp.cols.iter().enumerate() {
            for (i, v) in col {
                a[*i][j] = v.clone();
            }
        }
        a
    };
    let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
    let dense_f: Vec<Vec<f64>> = dense.iter().map(|r| r.iter().map(f).collect()).collect();
    let rhs_f: Vec<f64> = lp.rhs.iter().map(f).collect();
    let lower_f: Vec<Option<f64>> = lp.lower.iter().map(|b| b.as_ref().map(f)).collect();
    let upper_f: Vec<Option<f64>> = lp.upper.iter().map(|b| b.as_ref().map(f)).collect();
    // Float screen: a candidate is only evaluated exactly when it is
    // feasible up to a generous tolerance. A wrongly screened vertex can
    // only make the oracle disagree with the solver, never agree falsely.
    let tol = |v: f64| 1e-6 * (1.0 + v.abs());
    let near_feasible = |x: &[f64]| {
        (0..n).all(|j| {
            lower_f[j].is_none_or(|l| x[j] >= l - tol(l)) && upper_f[j].is_none_or(|u| x[j] <= u + tol(u))
        }) && (0..m).all(|i| {
            let a: f64 = (0..n).map(|j| dense_f[i][j] * x[j]).sum();
            let b = rhs_f[i];
            match lp.senses[i] {
                RowSense::Ge => a >= b - tol(b),
                RowSense::Le => a <= b + tol(b),
                RowSense::Eq => (a - b).abs() <= tol(b),
            }
        })
    };
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for k in 0..=n.min(m) {
        for vars in subsets(n, k) {
            let rest: Vec<usize> = (0..n).filter(|j| !vars.contains(j)).collect();
            if rest.iter().any(|&j| lp.lower[j].is_none() && lp.upper[j].is_none()) {
                continue;
            }
            for rows in subsets(m, k) {
                let exact_mat = || -> Vec<Vec<Rational>> {
                    rows.iter().map(|&i| vars.iter().map(|&j| dense[i][j].clone()).collect()).collect()
                };
                let mut inv: Option<Vec<Vec<Rational>>> = None;
                let inv_f = match invert_f64(rows.iter().map(|&i| vars.iter().map(|&j| dense_f[i][j]).collect()).collect()) {
                    Some(v) => v,
                    None => match invert(exact_mat()) {
                        // Nearly singular in floats: decide exactly.
                        Some(e) => {
                            let v = e.iter().map(|r| r.iter().map(f).collect()).collect();
                            inv = Some(e);
                            v
                        }
                        None => continue,
                    },
                };
                let choices = 1usize << rest.len();
                'mask: for mask in 0..choices {
                    let mut xf = vec![0.0; n];
                    for (bit, &j) in rest.iter().enumerate() {
                        let v = if mask >> bit & 1 == 1 { upper_f[j] } else { lower_f[j] };
                        match v {
                            Some(v) => xf[j] = v,
                            None => continue 'mask,
                        }
                    }
                    let rf: Vec<f64> =
                        rows.iter().map(|&i| rest.iter().fold(rhs_f[i], |acc, &j| acc - dense_f[i][j] * xf[j])).collect();
                    for (r, &j) in vars.iter().enumerate() {
                        xf[j] = inv_f[r].iter().zip(&rf).map(|(a, b)| a * b).sum();
                    }
                    if !near_feasible(&xf) {
                        continue;
                    }
                    let mut x = vec![Rational::zero(); n];
                    for (bit, &j) in rest.iter().enumerate() {
                        let v = if mask >> bit & 1 == 1 { &lp.upper[j] } else { &lp.lower[j] };
                        x[j] = v.clone().expect("checked above");
                    }
                    if k > 0 {
                        if inv.is_none() {
                            inv = invert(exact_mat());
                        }
                        let Some(inv) = inv.as_ref() else { continue 'mask };
                        let rhs: Vec<Rational> = rows
                            .iter()
                            .map(|&i| rest.iter().fold(lp.rhs[i].clone(), |acc, &j| acc - &dense[i][j] * &x[j]))
                            .collect();
                        for (r, &j) in vars.iter().enumerate() {
                            x[j] = inv[r].iter().zip(&rhs).map(|(a, b)| a * b).sum();
                        }
                    }
                    if feasible(lp, &x) {
                        let z: Rational = lp.obj.iter().zip(&x).map(|(c, v)| c * v).sum();
                        if best.as_ref().is_none_or(|(b, _)| &z < b) {
                            best = Some((z, x));
                        }
                    }
                }
            }
        }
    }
    best
}

/// Exact LP verdict by vertex enumeration plus a recession-cone check.
pub fn lp_oracle(lp: &LpProblem<Rational>) -> LpVerdict {
    let Some((z, _)) = vertex_minimum(lp) else { return LpVerdict::Infeasible };
    let n = lp.obj.len();
    if lp.upper.iter().any(Option::is_none) {
        // Directions d >= 0 with d_j = 0 on bounded columns, rows
        // homogeneous, normalized by sum d = 1.
        let m = lp.senses.len();
        let mut cols = lp.cols.clone();
        for col in &mut cols {
            col.push((m, Rational::one()));
        }
        let mut senses = lp.senses.clone();
        senses.push(RowSense::Eq);
        let mut rhs = vec![Rational::zero(); m];
        rhs.push(Rational::one());
        let cone = LpProblem {
            cols,
            obj: lp.obj.clone(),
            lower: vec![Some(Rational::zero()); n],
            upper: lp.upper.iter().map(|u| if u.is_some() { Some(Rational::zero()) } else { None }).collect(),
            senses,
            rhs,
        };
        if let Some((dz, _)) = vertex_minimum(&cone) {
            if dz.is_negative() {
                return LpVerdict::Unbounded;
            }
        }
    }
    LpVerdict::Optimal(z)
}

/// Random LP with `n` columns and `m` rows, denominators at most 100.
/// Lower bounds are always finite; some upper bounds are infinite.
pub fn random_lp(rng: &mut ChaCha8Rng, n: usize, m: usize) -> LpProblem<Rational> {
    let mut cols = vec![Vec::new(); n];
    let mut senses = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..m {
        for col in cols.iter_mut() {
            if rng.gen_bool(0.6) {
                let a = random_rational(rng, 5, 100);
                if !a.is_zero() {
                    col.push((i, a));
                }
            }
        }
        senses.push(match rng.gen_range(0..10) {
            0..=3 => RowSense::Le,
            4..=7 => RowSense::Ge,
            _ => RowSense::Eq,
        });
        rhs.push(random_rational(rng, 6, 100));
    }
    let lower: Vec<Option<Rational>> = (0..n).map(|_| Some(random_rational(rng, 2, 10) - q(1, 1))).collect();
    let upper = lower
        .iter()
        .map(|l| {
            if rng.gen_bool(0.2) {
                None
            } else {
                Some(l.clone().unwrap() + random_rational(rng, 4, 10).abs() + q(1, 10))
            }
        })
        .collect();
    LpProblem { cols, obj: (0..n).map(|_| random_rational(rng, 5, 100)).collect(), lower, upper, senses, rhs }
}

/// Enumerates every integer assignment (finite bounds required), substitutes
/// it and solves the continuous remainder with the vertex oracle. Returns
/// `None` for an infeasible model, else the optimal internal objective.
pub fn mip_oracle(model: &Model) -> Option<Rational> {
    let ints: Vec<usize> = (0..model.num_cols()).filter(|&j| model.integer[j]).collect();
    let conts: Vec<usize> = (0..model.num_cols()).filter(|&j| !model.integer[j]).collect();
    let ranges: Vec<(i64, i64)> = ints
        .iter()
        .map(|&j| {
            let l = model.lower[j].finite().expect("finite lower").ceil();
            let u = model.upper[j].finite().expect("finite upper").floor();
            (to_i64(&l), to_i64(&u))
        })
        .collect();
    if ranges.iter().any(|(l, u)| l > u) {
        return None;
    }
    let mut pos = vec![usize::MAX; model.num_cols()];
    for (k, &j) in conts.iter().enumerate() {
        pos[j] = k;
    }
    let mut best: Option<Rational> = None;
    let mut current: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let mut value = vec![Rational::zero(); model.num_cols()];
        for (k, &j) in ints.iter().enumerate() {
            value[j] = Rational::from_integer(current[k].into());
        }
        let constant: Rational = ints.iter().map(|&j| &model.objective[j] * &value[j]).sum();
        let mut cols = vec![Vec::new(); conts.len()];
        let mut rhs = Vec::with_capacity(model.num_rows());
        for (i, row) in model.rows.iter().enumerate() {
            let mut b = row.rhs.clone();
            for (j, a) in &row.coefs {
                if model.integer[*j] {
                    b -= a * &value[*j];
                } else {
                    cols[pos[*j]].push((i, a.clone()));
                }
            }
            rhs.push(b);
        }
        let lp = LpProblem {
            cols,
            obj: conts.iter().map(|&j| model.objective[j].clone()).collect(),
            lower: conts.iter().map(|&j| model.lower[j].finite().cloned()).collect(),
            upper: conts.iter().map(|&j| model.upper[j].finite().cloned()).collect(),
            senses: model.rows.iter().map(|r| r.sense).collect(),
            rhs,
        };
        match lp_oracle(&lp) {
            LpVerdict::Optimal(z) => {
                let z = z + constant + &model.obj_offset;
                if best.as_ref().is_none_or(|b| &z < b) {
                    best = Some(z);
                }
            }
            LpVerdict::Unbounded => panic!("oracle expects bounded restrictions"),
            LpVerdict::Infeasible => {}
        }
        let mut k = 0;
        loop {
            if k == ints.len() {
                return best;
            }
            if current[k] < ranges[k].1 {
                current[k] += 1;
                break;
            }
            current[k] = ranges[k].0;
            k += 1;
        }
    }
}

fn activities(lp: &LpProblem<Rational>, x: &[Rational]) -> Vec<Rational> {
    let mut act = vec![Rational::zero(); lp.senses.len()];
    for (j, col) in lp.cols.iter().enumerate() {
        for (i, a) in col {
            act[*i] += a * &x[j];
        }
    }
    act
}

fn sign_ok(sense: RowSense, y: &Rational) -> bool {
    match sense {
        RowSense::Ge => !y.is_negative(),
        RowSense::Le => !y.is_positive(),
        RowSense::Eq => true,
    }
}

/// Certifies `(x, y)` as an optimal primal-dual pair: primal feasibility,
/// dual sign conditions and complementary slackness on rows and bounds.
/// Returns the optimal value.
pub fn verify_optimal(lp: &LpProblem<Rational>, x: &[Rational], y: &[Rational]) -> Result<Rational, String> {
    if x.len() != lp.obj.len() || y.len() != lp.senses.len() {
        return Err("dimension".into());
    }
    if !feasible(lp, x) {
        return Err("primal infeasible".into());
    }
    let act = activities(lp, x);
    for i in 0..lp.senses.len() {
        if !sign_ok(lp.senses[i], &y[i]) {
            return Err(format!("dual sign on row {i}"));
        }
        if !y[i].is_zero() && act[i] != lp.rhs[i] {
            return Err(format!("slackness on row {i}"));
        }
    }
    for (j, col) in lp.cols.iter().enumerate() {
        let d = col.iter().fold(lp.obj[j].clone(), |acc, (i, a)| acc - a * &y[*i]);
        let ok = if d.is_positive() {
            lp.lower[j].as_ref() == Some(&x[j])
        } else if d.is_negative() {
            lp.upper[j].as_ref() == Some(&x[j])
        } else {
            true
        };
        if !ok {
            return Err(format!("reduced cost on column {j}"));
        }
    }
    Ok(lp.obj.iter().zip(x).map(|(c, v)| c * v).sum())
}

/// Checks that `y` proves emptiness: sign-feasible multipliers whose
/// combined row `(y^T A) x >= y^T b` cannot hold anywhere in the box.
pub fn verify_ray(lp: &LpProblem<Rational>, y: &[Rational]) -> bool {
    if y.len() != lp.senses.len() || !y.iter().zip(&lp.senses).all(|(v, s)| sign_ok(*s, v)) {
        return false;
    }
    let rhs: Rational = y.iter().zip(&lp.rhs).map(|(v, b)| v * b).sum();
    let mut max = Rational::zero();
    for (j, col) in lp.cols.iter().enumerate() {
        let g: Rational = col.iter().map(|(i, a)| a * &y[*i]).sum();
        let side = if g.is_positive() {
            &lp.upper[j]
        } else if g.is_negative() {
            &lp.lower[j]
        } else {
            continue;
        };
        match side {
            Some(v) => max += g * v,
            None => return false,
        }
    }
    max < rhs
}

fn to_i64(q: &Rational) -> i64 {
    q.to_integer().try_into().expect("small integer")
}

/// Test-side LP view of a model with given bounds.
pub fn restriction(model: &Model, lower: &[ExtendedRational], upper: &[ExtendedRational]) -> LpProblem<Rational> {
    let mut cols = vec![Vec::new(); model.num_cols()];
    for (i, row) in model.rows.iter().enumerate() {
        for (j, a) in &row.coefs {
            cols[*j].push((i, a.clone()));
        }
    }
    LpProblem {
        cols,
        obj: model.objective.clone(),
        lower: lower.iter().map(|b| b.finite().cloned()).collect(),
        upper: upper.iter().map(|b| b.finite().cloned()).collect(),
        senses: model.rows.iter().map(|r| r.sense).collect(),
        rhs: model.rows.iter().map(|r| r.rhs.clone()).collect(),
    }
}
