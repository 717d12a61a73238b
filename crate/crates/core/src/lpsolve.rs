//! Two-phase tableau simplex for `min cᵀx, Ax = b, x ≥ 0`.
//!
//! Generic over [`Scalar`], so the same code runs in exact rationals or in
//! `f64`. Phase 1 starts from one artificial per row; artificials that stay
//! basic at zero are pivoted out, or their row is dropped as redundant when
//! no structural column can replace them. Bland's rule (lowest index) breaks
//! every tie, so a solve is a deterministic function of its inputs.

use std::fmt;
use std::fs;
use std::path::Path;

use log::debug;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::reduction::SparseCoeffList;
use crate::scalar::{NumericMode, Rational, Scalar};

/// `min costᵀx  s.t.  A·x = rhs, x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub a: SparseCoeffList,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
}

impl LpProblem {
    pub fn check_dims(&self) -> Result<()> {
        self.a.validate()?;
        if self.rhs.len() != self.a.rows {
            return Err(Error::Dimension(format!("rhs has {} entries, A has {} rows", self.rhs.len(), self.a.rows)));
        }
        if self.cost.len() != self.a.cols {
            return Err(Error::Dimension(format!("cost has {} entries, A has {} columns", self.cost.len(), self.a.cols)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PivotRule {
    /// Lowest-index entering and leaving variable.
    Bland,
    /// Most negative reduced cost, switching to Bland after a stall.
    Dantzig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOptions {
    pub pivot: PivotRule,
    /// Defaults to `50·(rows + cols)`.
    pub max_iters: Option<usize>,
    /// Zero tolerance in float mode; ignored in exact mode.
    pub tol: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            pivot: PivotRule::Dantzig,
            max_iters: None,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration_limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    /// `costᵀ·primal` (phase-1 infeasibility when `status = infeasible`).
    pub objective: S,
    pub primal: Vec<S>,
    /// Basic structural columns, 0-based, in row order.
    pub basis: Vec<usize>,
    pub iterations: usize,
    /// Rows removed as linearly dependent, 0-based.
    pub dropped_rows: Vec<usize>,
}

impl<S: Scalar> LpSolution<S> {
    /// Solution JSON; exact values become rational strings, row and column
    /// indices are 1-based.
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "mode": S::MODE,
            "objective": self.objective.to_json(),
            "primal": self.primal.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "basis": self.basis.iter().map(|c| c + 1).collect::<Vec<_>>(),
            "iterations": self.iterations,
            "dropped_rows": self.dropped_rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Anything that can solve an [`LpProblem`] in numeric mode `S`.
pub trait LpBackend<S: Scalar> {
    fn solve(&self, p: &LpProblem, opts: &LpOptions) -> Result<LpSolution<S>>;
}

/// The bundled tableau simplex.
#[derive(Clone, Copy, Debug, Default)]
pub struct Simplex;

impl<S: Scalar> LpBackend<S> for Simplex {
    fn solve(&self, p: &LpProblem, opts: &LpOptions) -> Result<LpSolution<S>> {
        solve(p, opts)
    }
}

/// Basic variable of a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Var {
    /// Artificial of the row with this original index; sorts first.
    Art(usize),
    Col(usize),
}

/// Smallest pivot magnitude accepted in float mode.
const PIVOT_TOL: f64 = 1e-7;

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    b: Vec<S>,
    basis: Vec<Var>,
    /// Original index of each remaining row.
    origin: Vec<usize>,
    d: Vec<S>,
    z: S,
    tol: f64,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.rows[r][q].clone();
        let inv = S::one().div_ref(&piv);
        let support: Vec<usize> = {
            let row = &mut self.rows[r];
            let mut s = Vec::new();
            for (j, v) in row.iter_mut().enumerate() {
                if !v.is_zero_tol(0.0) {
                    *v = v.mul_ref(&inv);
                    s.push(j);
                }
            }
            s
        };
        self.rows[r][q] = S::one();
        self.b[r] = self.b[r].mul_ref(&inv);
        self.b[r].snap(self.tol);

        let (head, tail) = self.rows.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().expect("pivot row exists");
        let br = self.b[r].clone();
        for (i, row) in head.iter_mut().enumerate().chain(tail.iter_mut().enumerate().map(|(k, row)| (r + 1 + k, row))) {
            let f = row[q].clone();
            if f.is_zero_tol(0.0) {
                continue;
            }
            for &j in &support {
                row[j].sub_mul_assign(&f, &prow[j]);
                row[j].snap(self.tol);
            }
            row[q] = S::zero();
            self.b[i].sub_mul_assign(&f, &br);
            self.b[i].snap(self.tol);
            if self.b[i].is_neg_tol(0.0) && !self.b[i].is_neg_tol(self.tol) {
                self.b[i] = S::zero();
            }
        }
        let f = self.d[q].clone();
        if !f.is_zero_tol(0.0) {
            for &j in &support {
                self.d[j].sub_mul_assign(&f, &prow[j]);
                self.d[j].snap(self.tol);
            }
            self.d[q] = S::zero();
            // z holds -objective in the reduced-cost row convention
            self.z.sub_mul_assign(&f, &br);
        }
        self.basis[r] = Var::Col(q);
    }

    fn entering(&self, rule: PivotRule) -> Option<usize> {
        match rule {
            PivotRule::Bland => self.d.iter().position(|dj| dj.is_neg_tol(self.tol)),
            PivotRule::Dantzig => {
                let mut best: Option<usize> = None;
                for (j, dj) in self.d.iter().enumerate() {
                    if dj.is_neg_tol(self.tol) && best.is_none_or(|bj| *dj < self.d[bj]) {
                        best = Some(j);
                    }
                }
                best
            }
        }
    }

    fn leaving(&self, q: usize) -> Option<usize> {
        if S::MODE == NumericMode::Float {
            return self.leaving_harris(q);
        }
        let mut best: Option<(usize, S)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let a = &row[q];
            if !a.is_pos_tol(0.0) {
                continue;
            }
            let ratio = self.b[i].div_ref(a);
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Two-pass ratio test: bound the step with slightly relaxed bounds,
    /// then take the largest pivot element among the rows within that step.
    fn leaving_harris(&self, q: usize) -> Option<usize> {
        let ptol = PIVOT_TOL.max(self.tol);
        let mut theta = f64::INFINITY;
        for (i, row) in self.rows.iter().enumerate() {
            let a = row[q].to_f64();
            if a > ptol {
                theta = theta.min((self.b[i].to_f64() + self.tol) / a);
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let a = row[q].to_f64();
            if a <= ptol || self.b[i].to_f64() / a > theta {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, ba)) => a > ba || (a == ba && self.basis[i] < self.basis[bi]),
            };
            if better {
                best = Some((i, a));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Runs simplex iterations on the current reduced-cost row.
    fn run(&mut self, rule: PivotRule, stall_limit: usize, iters: &mut usize, max_iters: usize) -> LpStatus {
        let mut rule = rule;
        let mut stalled = 0;
        loop {
            let Some(q) = self.entering(rule) else {
                return LpStatus::Optimal;
            };
            let Some(r) = self.leaving(q) else {
                return LpStatus::Unbounded;
            };
            if *iters >= max_iters {
                return LpStatus::IterationLimit;
            }
            let before = self.z.clone();
            self.pivot(r, q);
            *iters += 1;
            if rule == PivotRule::Dantzig {
                if self.z == before {
                    stalled += 1;
                    if stalled > stall_limit {
                        debug!("no progress for {stalled} pivots, switching to Bland's rule");
                        rule = PivotRule::Bland;
                    }
                } else {
                    stalled = 0;
                }
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        self.rows.remove(r);
        self.b.remove(r);
        self.basis.remove(r);
        self.origin.remove(r);
    }
}

/// Solves `p` in the numeric mode of `S`.
pub fn solve<S: Scalar>(p: &LpProblem, opts: &LpOptions) -> Result<LpSolution<S>> {
    p.check_dims()?;
    let m = p.a.rows;
    let n = p.a.cols;
    let tol = if S::MODE == NumericMode::Exact { 0.0 } else { opts.tol };
    let max_iters = opts.max_iters.unwrap_or(50 * (m + n));
    let stall_limit = 3 * n;

    let mut rows = vec![vec![S::zero(); n]; m];
    for (r, c, v) in &p.a.entries {
        rows[*r][*c] = rows[*r][*c].add_ref(&S::from_rational(v));
    }
    let mut b: Vec<S> = p.rhs.iter().map(S::from_rational).collect();
    for i in 0..m {
        if b[i].is_neg_tol(0.0) {
            b[i] = b[i].neg_ref();
            for v in rows[i].iter_mut() {
                *v = v.neg_ref();
            }
        }
    }
    // phase 1: minimize the sum of artificials, d_j = -Σ_i a_ij
    let mut d = vec![S::zero(); n];
    let mut z = S::zero();
    for i in 0..m {
        for (j, v) in rows[i].iter().enumerate() {
            if !v.is_zero_tol(0.0) {
                d[j] = d[j].sub_ref(v);
            }
        }
        z = z.sub_ref(&b[i]);
    }
    let mut t = Tableau {
        rows,
        b,
        basis: (0..m).map(Var::Art).collect(),
        origin: (0..m).collect(),
        d,
        z,
        tol,
    };
    let mut iters = 0;
    let status = t.run(opts.pivot, stall_limit, &mut iters, max_iters);
    if status == LpStatus::IterationLimit {
        return Ok(finish(&t, p, LpStatus::IterationLimit, iters, Vec::new()));
    }
    debug_assert_eq!(status, LpStatus::Optimal, "phase 1 is bounded below");
    let infeasibility = t.z.neg_ref();
    debug!("phase 1 finished after {iters} pivots, infeasibility {infeasibility}");
    if infeasibility.is_pos_tol(tol) {
        let mut sol = finish(&t, p, LpStatus::Infeasible, iters, Vec::new());
        sol.objective = infeasibility;
        return Ok(sol);
    }

    // drive remaining artificials out of the basis
    let mut dropped = Vec::new();
    let mut r = 0;
    while r < t.rows.len() {
        if let Var::Art(orig) = t.basis[r] {
            match t.rows[r].iter().position(|v| !v.is_zero_tol(tol)) {
                Some(q) => {
                    t.pivot(r, q);
                    iters += 1;
                    r += 1;
                }
                None => {
                    dropped.push(orig);
                    t.remove_row(r);
                }
            }
        } else {
            r += 1;
        }
    }
    dropped.sort_unstable();
    if !dropped.is_empty() {
        debug!("dropped {} redundant rows", dropped.len());
    }

    // phase 2 reduced costs: d_j = c_j - Σ_i c_B(i) a_ij
    let cost: Vec<S> = p.cost.iter().map(S::from_rational).collect();
    let mut d = cost.clone();
    let mut z = S::zero();
    for (i, var) in t.basis.iter().enumerate() {
        let Var::Col(j) = *var else { unreachable!("artificials were removed") };
        let cb = &cost[j];
        if cb.is_zero_tol(0.0) {
            continue;
        }
        for (k, v) in t.rows[i].iter().enumerate() {
            if !v.is_zero_tol(0.0) {
                d[k].sub_mul_assign(cb, v);
            }
        }
        z.sub_mul_assign(cb, &t.b[i]);
    }
    for var in &t.basis {
        if let Var::Col(j) = *var {
            d[j] = S::zero();
        }
    }
    for v in d.iter_mut() {
        v.snap(tol);
    }
    t.d = d;
    t.z = z;
    let status = t.run(opts.pivot, stall_limit, &mut iters, max_iters);
    Ok(finish(&t, p, status, iters, dropped))
}

fn finish<S: Scalar>(t: &Tableau<S>, p: &LpProblem, status: LpStatus, iterations: usize, dropped: Vec<usize>) -> LpSolution<S> {
    let mut primal = vec![S::zero(); p.a.cols];
    let mut basis = Vec::new();
    for (i, var) in t.basis.iter().enumerate() {
        if let Var::Col(j) = *var {
            primal[j] = t.b[i].clone();
            basis.push(j);
        }
    }
    let objective = p
        .cost
        .iter()
        .zip(&primal)
        .fold(S::zero(), |acc, (c, x)| if c.is_zero() { acc } else { acc.add_ref(&S::from_rational(c).mul_ref(x)) });
    LpSolution {
        status,
        objective,
        primal,
        basis,
        iterations,
        dropped_rows: dropped,
    }
}

/// Independent certificate data for a candidate point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck<S> {
    /// `‖A·x - rhs‖_∞`
    pub max_eq_residual: S,
    pub min_component: S,
    pub objective: S,
}

pub fn check_point<S: Scalar>(p: &LpProblem, point: &[S]) -> Result<PointCheck<S>> {
    p.check_dims()?;
    if point.len() != p.a.cols {
        return Err(Error::Dimension(format!("point has {} entries, LP has {} columns", point.len(), p.a.cols)));
    }
    let ax = p.a.mul_vec(point);
    let mut res = S::zero();
    for (lhs, rhs) in ax.iter().zip(&p.rhs) {
        let diff = lhs.sub_ref(&S::from_rational(rhs)).abs_ref();
        if diff > res {
            res = diff;
        }
    }
    let min_component = point.iter().fold(None::<S>, |acc, v| match acc {
        Some(m) if m <= *v => Some(m),
        _ => Some(v.clone()),
    });
    let objective = point
        .iter()
        .zip(&p.cost)
        .fold(S::zero(), |acc, (x, c)| acc.add_ref(&S::from_rational(c).mul_ref(x)));
    Ok(PointCheck {
        max_eq_residual: res,
        min_component: min_component.unwrap_or_else(S::zero),
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn dense(rows: &[&[i64]], rhs: &[i64], cost: &[i64]) -> LpProblem {
        let mut a = SparseCoeffList::new(rows.len(), cost.len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    a.push(i, j, r(v));
                }
            }
        }
        LpProblem {
            a,
            rhs: rhs.iter().map(|&v| r(v)).collect(),
            cost: cost.iter().map(|&v| r(v)).collect(),
        }
    }

    #[test]
    fn two_variable_lp() {
        let p = dense(&[&[1, 1]], &[1], &[1, 0]);
        for rule in [PivotRule::Bland, PivotRule::Dantzig] {
            let opts = LpOptions { pivot: rule, ..Default::default() };
            let s: LpSolution<Rational> = solve(&p, &opts).unwrap();
            assert_eq!(s.status, LpStatus::Optimal);
            assert_eq!(s.objective, r(0));
            assert_eq!(s.primal, vec![r(0), r(1)]);
            let f: LpSolution<f64> = solve(&p, &opts).unwrap();
            assert_eq!(f.primal, vec![0.0, 1.0]);
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = dense(&[&[1, 1], &[1, 1]], &[1, 2], &[0, 0]);
        let s: LpSolution<Rational> = solve(&p, &LpOptions::default()).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        let p = dense(&[&[1, -1]], &[1], &[0, -1]);
        let s: LpSolution<Rational> = solve(&p, &LpOptions::default()).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let p = dense(&[&[1, 1, 0], &[2, 2, 0], &[0, 0, 1], &[0, 0, 0]], &[1, 2, 3, 0], &[-1, 0, 1]);
        let s: LpSolution<Rational> = solve(&p, &LpOptions::default()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, r(2));
        assert_eq!(s.primal, vec![r(1), r(0), r(3)]);
        assert_eq!(s.dropped_rows.len(), 2);
        assert!(s.dropped_rows.contains(&3));
    }

    #[test]
    fn negative_rhs_rows() {
        let p = dense(&[&[-1, -1]], &[-4], &[2, 3]);
        let s: LpSolution<Rational> = solve(&p, &LpOptions::default()).unwrap();
        assert_eq!(s.objective, r(8));
    }

    #[test]
    fn iteration_limit_is_a_status() {
        let p = dense(&[&[1, 1, 0], &[0, 1, 1]], &[1, 1], &[-1, -1, -1]);
        let opts = LpOptions { max_iters: Some(0), ..Default::default() };
        let s: LpSolution<Rational> = solve(&p, &opts).unwrap();
        assert_eq!(s.status, LpStatus::IterationLimit);
    }

    #[test]
    fn dimension_mismatch() {
        let mut p = dense(&[&[1, 1]], &[1], &[1, 0]);
        p.cost.pop();
        assert!(solve::<Rational>(&p, &LpOptions::default()).is_err());
        assert!(check_point(&dense(&[&[1, 1]], &[1], &[1, 0]), &[r(1)]).is_err());
    }

    #[test]
    fn solution_json() {
        let p = dense(&[&[2, 1]], &[1], &[1, 1]);
        let s: LpSolution<Rational> = solve(&p, &LpOptions::default()).unwrap();
        let j = s.to_json();
        assert_eq!(j["status"], "optimal");
        assert_eq!(j["mode"], "exact");
        assert_eq!(j["objective"], "1/2");
        assert_eq!(j["primal"][0], "1/2");
        assert_eq!(j["basis"][0], 1);
    }
}
