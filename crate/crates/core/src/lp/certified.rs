//! Certified solve of a [`MetricLpModel`].
//!
//! The solve works on an equivalent reduced program: pinned distances become
//! constants, Servant points before an agent's first or after its last
//! assignment are dropped (at `w = 0` they can sit on that assignment), and
//! triangle rows are added only when violated. The answer is then expanded
//! back to the full model and every full row is checked.

use std::collections::HashSet;

use super::model::{MetricLpModel, Var};
use super::simplex::{CoveringLp, SimplexStatus};

pub const CERT_TOL: f64 = 1e-9;
const SEPARATION_TOL: f64 = 1e-11;
const MAX_ROUNDS: usize = 400;
const DROP_THRESHOLD: usize = 150;
const DROP_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericFailure,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    /// t_0..t_n
    pub times: Vec<f64>,
    /// Full distance matrix over the model's points.
    pub distances: Vec<Vec<f64>>,
    pub certificate_gap: f64,
    pub max_violation: f64,
    pub iterations: usize,
    pub rows_used: usize,
}

impl LpSolution {
    fn failed(status: LpStatus) -> Self {
        LpSolution {
            status,
            value: f64::NAN,
            times: Vec::new(),
            distances: Vec::new(),
            certificate_gap: f64::INFINITY,
            max_violation: f64::INFINITY,
            iterations: 0,
            rows_used: 0,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn var_value(&self, v: Var) -> f64 {
        match v {
            Var::T(j) => self.times[j],
            Var::Y => self.value,
            Var::D(a, b) => self.distances[a][b],
        }
    }
}

#[derive(Clone, Copy)]
enum Term {
    Var(usize),
    Const(f64),
}

struct Reduced {
    /// Full point index of each kept point.
    kept: Vec<usize>,
    /// kept position of each full point's representative.
    rep: Vec<usize>,
    fixed: Vec<bool>,
    /// dist[a][b] over kept positions
    dist: Vec<Vec<Term>>,
    time: Vec<Term>,
    y: usize,
    nvars: usize,
}

impl Reduced {
    fn new(model: &MetricLpModel, eliminate: bool) -> Reduced {
        let n = model.n();
        let k = model.k();
        let m = model.num_points();
        let mut rep_full: Vec<usize> = (0..m).collect();
        if eliminate && model.w == 0.0 {
            for i in 1..=k {
                let stages: Vec<usize> = model.config.stages_of(i).collect();
                match (stages.first(), stages.last()) {
                    (Some(&f), Some(&l)) => {
                        for j in 1..f {
                            rep_full[model.point(i, j)] = model.point(i, f);
                        }
                        for j in l + 1..=n {
                            rep_full[model.point(i, j)] = model.point(i, l);
                        }
                    }
                    _ => {
                        for j in 1..=n {
                            rep_full[model.point(i, j)] = 0;
                        }
                    }
                }
            }
        }
        let kept: Vec<usize> = (0..m).filter(|&p| rep_full[p] == p).collect();
        let mut pos = vec![usize::MAX; m];
        for (t, &p) in kept.iter().enumerate() {
            pos[p] = t;
        }
        let rep: Vec<usize> = (0..m).map(|p| pos[rep_full[p]]).collect();
        let fixed: Vec<bool> = kept.iter().map(|&p| model.pinned_distance(0, p).is_some()).collect();

        let mut nvars = 0;
        let mut time = Vec::with_capacity(n + 1);
        for pin in &model.time_pins {
            time.push(match pin {
                Some(v) => Term::Const(*v),
                None => {
                    nvars += 1;
                    Term::Var(nvars - 1)
                }
            });
        }
        let y = nvars;
        nvars += 1;
        let kk = kept.len();
        let mut dist = vec![vec![Term::Const(0.0); kk]; kk];
        for b in 1..kk {
            for a in 0..b {
                let t = match model.pinned_distance(kept[a], kept[b]) {
                    Some(v) => Term::Const(v),
                    None => {
                        nvars += 1;
                        Term::Var(nvars - 1)
                    }
                };
                dist[a][b] = t;
                dist[b][a] = t;
            }
        }
        Reduced { kept, rep, fixed, dist, time, y, nvars }
    }

    fn value(&self, t: Term, x: &[f64]) -> f64 {
        match t {
            Term::Var(j) => x[j],
            Term::Const(v) => v,
        }
    }

    fn dist_matrix(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.dist.iter().map(|row| row.iter().map(|&t| self.value(t, x)).collect()).collect()
    }
}

/// Accumulates `Σ coef·term >= rhs` into sparse coefficients and a constant rhs.
struct RowBuilder {
    coefs: Vec<(usize, f64)>,
    rhs: f64,
}

impl RowBuilder {
    fn new() -> Self {
        RowBuilder { coefs: Vec::with_capacity(4), rhs: 0.0 }
    }

    fn add(&mut self, t: Term, c: f64) {
        match t {
            Term::Var(j) => match self.coefs.iter_mut().find(|(v, _)| *v == j) {
                Some(e) => e.1 += c,
                None => self.coefs.push((j, c)),
            },
            Term::Const(v) => self.rhs -= c * v,
        }
    }

    fn push_into(mut self, lp: &mut CoveringLp) {
        self.coefs.retain(|&(_, c)| c != 0.0);
        if !self.coefs.is_empty() {
            lp.add_row(self.coefs, self.rhs);
        }
    }
}

fn base_rows(model: &MetricLpModel, red: &Reduced, lp: &mut CoveringLp) {
    let n = model.n();
    for i in 0..=model.k() {
        for j in 0..n {
            let a = model.point(i, j);
            let b = model.point(i, j + 1);
            if red.kept[red.rep[a]] != a || red.kept[red.rep[b]] != b {
                continue;
            }
            let mut r = RowBuilder::new();
            r.add(red.time[j + 1], 1.0);
            r.add(red.time[j], -1.0);
            r.add(red.dist[red.rep[a]][red.rep[b]], -1.0);
            r.push_into(lp);
        }
    }
    for row in model.objective_rows() {
        let mut r = RowBuilder::new();
        for (v, c) in row.coefs {
            match v {
                Var::Y => r.add(Term::Var(red.y), c),
                Var::T(j) => r.add(red.time[j], c),
                Var::D(a, b) => r.add(red.dist[red.rep[a]][red.rep[b]], c),
            }
        }
        r.push_into(lp);
    }
}

/// Adds violated triangle rows; returns how many were added.
fn separate(
    red: &Reduced,
    lp: &mut CoveringLp,
    x: &[f64],
    added: &mut HashSet<(usize, usize, usize)>,
    row_keys: &mut Vec<Option<(usize, usize, usize)>>,
) -> usize {
    let d = red.dist_matrix(x);
    let kk = red.kept.len();
    let mut found: Vec<(f64, usize, usize, usize)> = Vec::new();
    for b in 1..kk {
        for a in 0..b {
            let dab = d[a][b];
            let fixed_ab = red.fixed[a] && red.fixed[b];
            // Most violated intermediate point for this pair.
            let mut best = (SEPARATION_TOL, usize::MAX);
            for c in 0..kk {
                if c == a || c == b || (fixed_ab && red.fixed[c]) {
                    continue;
                }
                let viol = dab - d[a][c] - d[c][b];
                if viol > best.0 {
                    best = (viol, c);
                }
            }
            if best.1 != usize::MAX && !added.contains(&(a, b, best.1)) {
                found.push((best.0, a, b, best.1));
            }
        }
    }
    found.sort_by(|p, q| q.0.total_cmp(&p.0));
    let cap = (2 * kk).max(60);
    let mut count = 0;
    for &(_, a, b, c) in found.iter().take(cap) {
        added.insert((a, b, c));
        let mut r = RowBuilder::new();
        r.add(red.dist[a][c], 1.0);
        r.add(red.dist[c][b], 1.0);
        r.add(red.dist[a][b], -1.0);
        let before = lp.num_rows();
        r.push_into(lp);
        if lp.num_rows() > before {
            row_keys.push(Some((a, b, c)));
        }
        count += 1;
    }
    count
}

fn run(model: &MetricLpModel, opts: SolveOptions, seed_scale: f64, iter_budget: usize) -> LpSolution {
    let red = Reduced::new(model, opts.eliminate_idle_points);
    let mut cost = vec![0.0; red.nvars];
    cost[red.y] = 1.0;
    let mut lp = CoveringLp::new(cost);
    base_rows(model, &red, &mut lp);
    let mut row_keys: Vec<Option<(usize, usize, usize)>> = vec![None; lp.num_rows()];
    let mut added = HashSet::new();
    let mut perturbed = false;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > MAX_ROUNDS || lp.iterations > iter_budget {
            return LpSolution::failed(LpStatus::NumericFailure);
        }
        if !perturbed {
            lp.perturb_costs(seed_scale);
            perturbed = true;
        }
        match lp.dual_simplex(iter_budget) {
            SimplexStatus::Optimal => {}
            SimplexStatus::Infeasible => return LpSolution::failed(LpStatus::Infeasible),
            _ => return LpSolution::failed(LpStatus::NumericFailure),
        }
        let x = lp.primal();
        if lp.num_rows() > DROP_THRESHOLD {
            let keys = &row_keys;
            let dropped = lp.drop_slack_rows(|r| keys[r].is_none(), DROP_SLACK);
            let mut kept = Vec::with_capacity(row_keys.len());
            for (key, gone) in row_keys.drain(..).zip(dropped) {
                match (key, gone) {
                    (Some(t), true) => {
                        added.remove(&t);
                    }
                    (key, false) => kept.push(key),
                    (None, true) => unreachable!(),
                }
            }
            row_keys = kept;
        }
        if separate(&red, &mut lp, &x, &mut added, &mut row_keys) > 0 {
            continue;
        }
        lp.restore_costs();
        perturbed = false;
        if lp.primal_simplex(iter_budget) != SimplexStatus::Optimal {
            return LpSolution::failed(LpStatus::NumericFailure);
        }
        let x = lp.primal();
        if separate(&red, &mut lp, &x, &mut added, &mut row_keys) > 0 {
            continue;
        }
        if !lp.refactor() {
            return LpSolution::failed(LpStatus::NumericFailure);
        }
        if lp.primal_simplex(iter_budget) != SimplexStatus::Optimal {
            return LpSolution::failed(LpStatus::NumericFailure);
        }
        let x = lp.primal();
        if separate(&red, &mut lp, &x, &mut added, &mut row_keys) > 0 {
            continue;
        }
        return certify(model, &red, &lp, &x);
    }
}

fn certify(model: &MetricLpModel, red: &Reduced, lp: &CoveringLp, x: &[f64]) -> LpSolution {
    let m = model.num_points();
    let dk = red.dist_matrix(x);
    let mut distances = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in 0..m {
            distances[a][b] = dk[red.rep[a]][red.rep[b]];
        }
    }
    let times: Vec<f64> = red.time.iter().map(|&t| red.value(t, x)).collect();
    let value = x[red.y];
    let mut sol = LpSolution {
        status: LpStatus::Optimal,
        value,
        times,
        distances,
        certificate_gap: 0.0,
        max_violation: 0.0,
        iterations: lp.iterations,
        rows_used: lp.num_rows(),
    };

    let viol = model.max_violation(&sol.times, value, &sol.distances);

    // Dual side: u >= 0 and A^T u <= c certify b·u as a lower bound.
    let u = lp.duals();
    let mut dual_infeas: f64 = 0.0;
    for &ui in &u {
        dual_infeas = dual_infeas.max(-ui);
    }
    let mut atu = vec![0.0; lp.num_vars()];
    for (row, &ui) in lp.rows().iter().zip(&u) {
        for &(j, a) in row {
            atu[j] += a * ui;
        }
    }
    for (j, &c) in lp.true_cost().iter().enumerate() {
        dual_infeas = dual_infeas.max(atu[j] - c);
    }
    let dual_obj: f64 = u.iter().zip(lp.rhs()).map(|(a, b)| a * b).sum();
    sol.certificate_gap = (value - dual_obj).abs();
    sol.max_violation = viol.max(dual_infeas);
    if sol.certificate_gap > CERT_TOL || sol.max_violation > CERT_TOL {
        sol.status = LpStatus::NumericFailure;
    }
    sol
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Drop Servant points outside the agent's first..last assignment (only at w = 0).
    pub eliminate_idle_points: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { eliminate_idle_points: true }
    }
}

pub fn solve_certified(model: &MetricLpModel) -> LpSolution {
    solve_certified_with(model, SolveOptions::default())
}

pub fn solve_certified_with(model: &MetricLpModel, opts: SolveOptions) -> LpSolution {
    let mut last = LpSolution::failed(LpStatus::NumericFailure);
    for (scale, budget) in [(1e-7, 200_000), (1e-9, 400_000), (1e-6, 800_000)] {
        let sol = run(model, opts, scale, budget);
        match sol.status {
            LpStatus::NumericFailure => last = sol,
            _ => return sol,
        }
    }
    last
}
