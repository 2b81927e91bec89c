//! Dense-inverse dual simplex for covering-type LPs:
//! minimize `c·x` subject to `a_r·x >= b_r`, `x >= 0`, with `c >= 0`.
//!
//! The all-logical basis is dual feasible from the start, so no phase 1 is
//! needed, and rows can be appended at any time without losing the basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PIVOT_TOL: f64 = 1e-9;
const PRIMAL_TOL: f64 = 1e-11;
const DUAL_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Infeasible,
    IterationLimit,
    Singular,
}

#[derive(Debug, Clone)]
pub struct CoveringLp {
    nvars: usize,
    cost: Vec<f64>,
    work_cost: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    cols: Vec<Vec<(usize, f64)>>,
    /// basis[r] = variable basic in row r; variables >= nvars are logicals.
    basis: Vec<usize>,
    /// position in basis, or usize::MAX when nonbasic
    where_basic: Vec<usize>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    d: Vec<f64>,
    since_refactor: usize,
    pub iterations: usize,
    rng: ChaCha8Rng,
}

impl CoveringLp {
    pub fn new(cost: Vec<f64>) -> Self {
        assert!(cost.iter().all(|&c| c >= 0.0), "costs must be nonnegative");
        let nvars = cost.len();
        CoveringLp {
            nvars,
            work_cost: cost.clone(),
            d: cost.clone(),
            cost,
            rows: Vec::new(),
            rhs: Vec::new(),
            cols: vec![Vec::new(); nvars],
            basis: Vec::new(),
            where_basic: vec![usize::MAX; nvars],
            binv: Vec::new(),
            xb: Vec::new(),
            since_refactor: 0,
            iterations: 0,
            rng: ChaCha8Rng::seed_from_u64(0x5eed),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    fn logical(&self, r: usize) -> usize {
        self.nvars + r
    }

    /// Appends `coefs·x >= rhs` with its logical basic.
    pub fn add_row(&mut self, coefs: Vec<(usize, f64)>, rhs: f64) {
        let r = self.rows.len();
        // New inverse row: a_B^T B^{-1} in the old columns, -1 in the new one.
        let mut new_row = vec![0.0; r + 1];
        let mut activity = 0.0;
        for &(j, a) in &coefs {
            let p = self.where_basic[j];
            if p != usize::MAX {
                for (t, v) in self.binv[p].iter().enumerate() {
                    new_row[t] += a * v;
                }
                activity += a * self.xb[p];
            }
        }
        new_row[r] = -1.0;
        for row in &mut self.binv {
            row.push(0.0);
        }
        self.binv.push(new_row);
        for &(j, a) in &coefs {
            self.cols[j].push((r, a));
        }
        self.rows.push(coefs);
        self.rhs.push(rhs);
        self.where_basic.push(r);
        self.basis.push(self.nvars + r);
        self.d.push(0.0);
        self.xb.push(activity - rhs);
    }

    pub fn perturb_costs(&mut self, scale: f64) {
        for j in 0..self.nvars {
            let delta = scale * (1.0 + self.rng.gen::<f64>());
            self.work_cost[j] = self.cost[j] + delta;
        }
        self.recompute_duals();
    }

    pub fn restore_costs(&mut self) {
        self.work_cost.copy_from_slice(&self.cost);
        self.recompute_duals();
    }

    fn column_dot(&self, j: usize, v: &[f64]) -> f64 {
        if j < self.nvars {
            self.cols[j].iter().map(|&(r, a)| a * v[r]).sum()
        } else {
            -v[j - self.nvars]
        }
    }

    /// `B^{-1} A_j`
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.rows.len();
        let mut w = vec![0.0; m];
        if j < self.nvars {
            for &(r, a) in &self.cols[j] {
                for i in 0..m {
                    w[i] += self.binv[i][r] * a;
                }
            }
        } else {
            let r = j - self.nvars;
            for i in 0..m {
                w[i] = -self.binv[i][r];
            }
        }
        w
    }

    fn row_alphas(&self, r: usize) -> Vec<f64> {
        let rho = &self.binv[r];
        let mut alpha = vec![0.0; self.nvars + self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let f = rho[i];
            if f != 0.0 {
                for &(j, a) in row {
                    alpha[j] += f * a;
                }
                alpha[self.nvars + i] = -f;
            }
        }
        alpha
    }

    fn cost_of(&self, j: usize) -> f64 {
        if j < self.nvars {
            self.work_cost[j]
        } else {
            0.0
        }
    }

    pub fn duals(&self) -> Vec<f64> {
        let m = self.rows.len();
        let mut y = vec![0.0; m];
        for (p, &j) in self.basis.iter().enumerate() {
            let c = self.cost_of(j);
            if c != 0.0 {
                for (t, v) in self.binv[p].iter().enumerate() {
                    y[t] += c * v;
                }
            }
        }
        y
    }

    fn recompute_duals(&mut self) {
        let y = self.duals();
        let total = self.nvars + self.rows.len();
        self.d = (0..total)
            .map(|j| {
                if self.where_basic[j] != usize::MAX {
                    0.0
                } else {
                    self.cost_of(j) - self.column_dot(j, &y)
                }
            })
            .collect();
    }

    /// Rebuilds `B^{-1}` and refreshes `x_B` and `d`.
    ///
    /// Only the square block of structural columns against rows whose logical
    /// is nonbasic needs a dense inversion; rows with a basic logical follow
    /// from it by substitution.
    pub fn refactor(&mut self) -> bool {
        let m = self.rows.len();
        let mut row_logical_pos = vec![usize::MAX; m];
        let mut spos = Vec::new();
        for (p, &j) in self.basis.iter().enumerate() {
            if j < self.nvars {
                spos.push(p);
            } else {
                row_logical_pos[j - self.nvars] = p;
            }
        }
        let krows: Vec<usize> = (0..m).filter(|&r| row_logical_pos[r] == usize::MAX).collect();
        let s = spos.len();
        if krows.len() != s {
            return false;
        }
        let mut kidx = vec![usize::MAX; m];
        for (t, &r) in krows.iter().enumerate() {
            kidx[r] = t;
        }
        // a = [B_RS | I] of size s x 2s; rows follow krows, columns follow spos.
        let mut a = vec![vec![0.0; 2 * s]; s];
        for (c, &p) in spos.iter().enumerate() {
            for &(r, v) in &self.cols[self.basis[p]] {
                if kidx[r] != usize::MAX {
                    a[kidx[r]][c] = v;
                }
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[s + i] = 1.0;
        }
        for col in 0..s {
            let piv = (col..s)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap();
            if a[piv][col].abs() < 1e-12 {
                return false;
            }
            a.swap(col, piv);
            let inv = 1.0 / a[col][col];
            for v in a[col].iter_mut() {
                *v *= inv;
            }
            let pivot_row = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != col {
                    let f = row[col];
                    if f != 0.0 {
                        for (v, pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                            *v -= f * pv;
                        }
                    }
                }
            }
        }
        let mut binv = vec![vec![0.0; m]; m];
        for (c, &p) in spos.iter().enumerate() {
            for (t, &r) in krows.iter().enumerate() {
                binv[p][r] = a[c][s + t];
            }
        }
        for r in 0..m {
            let p = row_logical_pos[r];
            if p == usize::MAX {
                continue;
            }
            // s_r = sum_j A[r][j] x_j - b_r over structural basics.
            let mut out = vec![0.0; m];
            for &(j, v) in &self.rows[r] {
                let q = self.where_basic[j];
                if q != usize::MAX {
                    for (o, &bv) in out.iter_mut().zip(&binv[q]) {
                        *o += v * bv;
                    }
                }
            }
            out[r] = -1.0;
            binv[p] = out;
        }
        self.binv = binv;
        self.xb = (0..m)
            .map(|p| self.binv[p].iter().zip(&self.rhs).map(|(x, b)| x * b).sum())
            .collect();
        self.recompute_duals();
        self.since_refactor = 0;
        true
    }

    fn pivot(&mut self, r: usize, q: usize, w: &[f64], alpha: &[f64]) {
        let m = self.rows.len();
        let theta_p = self.xb[r] / w[r];
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta_p * w[i];
            }
        }
        self.xb[r] = theta_p;

        let theta_d = self.d[q] / alpha[q];
        for (dj, aj) in self.d.iter_mut().zip(alpha) {
            if *aj != 0.0 {
                *dj -= theta_d * aj;
            }
        }
        let leaving = self.basis[r];
        self.d[q] = 0.0;
        for (p, &j) in self.basis.iter().enumerate() {
            if p != r {
                self.d[j] = 0.0;
            }
        }

        let inv = 1.0 / w[r];
        for v in self.binv[r].iter_mut() {
            *v *= inv;
        }
        let pr = self.binv[r].clone();
        for i in 0..m {
            if i != r && w[i] != 0.0 {
                let f = w[i];
                for (v, pv) in self.binv[i].iter_mut().zip(&pr) {
                    *v -= f * pv;
                }
            }
        }
        self.where_basic[leaving] = usize::MAX;
        self.where_basic[q] = r;
        self.basis[r] = q;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    fn maybe_refactor(&mut self) -> bool {
        if self.since_refactor >= REFACTOR_EVERY {
            return self.refactor();
        }
        true
    }

    pub fn dual_simplex(&mut self, max_iter: usize) -> SimplexStatus {
        for _ in 0..max_iter {
            if !self.maybe_refactor() {
                return SimplexStatus::Singular;
            }
            let mut r = usize::MAX;
            let mut worst = -PRIMAL_TOL;
            for (p, &x) in self.xb.iter().enumerate() {
                if x < worst {
                    worst = x;
                    r = p;
                }
            }
            if r == usize::MAX {
                return SimplexStatus::Optimal;
            }
            let alpha = self.row_alphas(r);
            let total = alpha.len();
            let mut bound = f64::INFINITY;
            for j in 0..total {
                if self.where_basic[j] == usize::MAX && alpha[j] < -PIVOT_TOL {
                    bound = bound.min((self.d[j].max(0.0) + DUAL_TOL) / -alpha[j]);
                }
            }
            if bound.is_infinite() {
                return SimplexStatus::Infeasible;
            }
            let mut q = usize::MAX;
            let mut best = 0.0;
            for j in 0..total {
                if self.where_basic[j] == usize::MAX
                    && alpha[j] < -PIVOT_TOL
                    && self.d[j].max(0.0) / -alpha[j] <= bound
                    && -alpha[j] > best
                {
                    best = -alpha[j];
                    q = j;
                }
            }
            let w = self.ftran(q);
            if (w[r] - alpha[q]).abs() > 1e-7 * (1.0 + alpha[q].abs()) {
                if !self.refactor() {
                    return SimplexStatus::Singular;
                }
                continue;
            }
            if self.d[q] < 0.0 {
                self.d[q] = 0.0;
            }
            self.pivot(r, q, &w, &alpha);
        }
        SimplexStatus::IterationLimit
    }

    pub fn primal_simplex(&mut self, max_iter: usize) -> SimplexStatus {
        for _ in 0..max_iter {
            if !self.maybe_refactor() {
                return SimplexStatus::Singular;
            }
            let mut q = usize::MAX;
            let mut worst = -DUAL_TOL;
            for (j, &dj) in self.d.iter().enumerate() {
                if self.where_basic[j] == usize::MAX && dj < worst {
                    worst = dj;
                    q = j;
                }
            }
            if q == usize::MAX {
                return SimplexStatus::Optimal;
            }
            let w = self.ftran(q);
            let mut bound = f64::INFINITY;
            for (i, &wi) in w.iter().enumerate() {
                if wi > PIVOT_TOL {
                    bound = bound.min((self.xb[i].max(0.0) + PRIMAL_TOL) / wi);
                }
            }
            if bound.is_infinite() {
                // Unbounded direction; cannot happen for the evacuation LPs.
                return SimplexStatus::Infeasible;
            }
            let mut r = usize::MAX;
            let mut best = 0.0;
            for (i, &wi) in w.iter().enumerate() {
                if wi > PIVOT_TOL && self.xb[i].max(0.0) / wi <= bound && wi > best {
                    best = wi;
                    r = i;
                }
            }
            if self.xb[r] < 0.0 {
                self.xb[r] = 0.0;
            }
            let alpha = self.row_alphas(r);
            self.pivot(r, q, &w, &alpha);
        }
        SimplexStatus::IterationLimit
    }

    /// Primal values of the structural variables.
    pub fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.nvars];
        for (p, &j) in self.basis.iter().enumerate() {
            if j < self.nvars {
                x[j] = self.xb[p].max(0.0);
            }
        }
        x
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn true_cost(&self) -> &[f64] {
        &self.cost
    }

    /// Removes rows whose logical is basic with slack above `tol`, then refactors.
    pub fn drop_slack_rows(&mut self, keep: impl Fn(usize) -> bool, tol: f64) -> Vec<bool> {
        let m = self.rows.len();
        let mut drop = vec![false; m];
        for r in 0..m {
            let p = self.where_basic[self.logical(r)];
            if p != usize::MAX && self.xb[p] > tol && !keep(r) {
                drop[r] = true;
            }
        }
        if !drop.iter().any(|&x| x) {
            return drop;
        }
        let mut remap = vec![usize::MAX; m];
        let mut next = 0;
        for r in 0..m {
            if !drop[r] {
                remap[r] = next;
                next += 1;
            }
        }
        let old_basis = std::mem::take(&mut self.basis);
        let mut rows = Vec::with_capacity(next);
        let mut rhs = Vec::with_capacity(next);
        for r in 0..m {
            if !drop[r] {
                rows.push(std::mem::take(&mut self.rows[r]));
                rhs.push(self.rhs[r]);
            }
        }
        self.rows = rows;
        self.rhs = rhs;
        self.cols = vec![Vec::new(); self.nvars];
        for (r, row) in self.rows.iter().enumerate() {
            for &(j, a) in row {
                self.cols[j].push((r, a));
            }
        }
        let mut basis = Vec::with_capacity(next);
        for &j in &old_basis {
            if j < self.nvars {
                basis.push(j);
            } else {
                let r = j - self.nvars;
                if !drop[r] {
                    basis.push(self.nvars + remap[r]);
                }
            }
        }
        debug_assert_eq!(basis.len(), next);
        self.basis = basis;
        self.where_basic = vec![usize::MAX; self.nvars + next];
        for (p, &j) in self.basis.iter().enumerate() {
            self.where_basic[j] = p;
        }
        self.d = vec![0.0; self.nvars + next];
        self.refactor();
        drop
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_covering_lp() {
        // min x + y  s.t. x + 2y >= 4, 3x + y >= 6  -> x = 1.6, y = 1.2
        let mut lp = CoveringLp::new(vec![1.0, 1.0]);
        lp.add_row(vec![(0, 1.0), (1, 2.0)], 4.0);
        lp.add_row(vec![(0, 3.0), (1, 1.0)], 6.0);
        assert_eq!(lp.dual_simplex(100), SimplexStatus::Optimal);
        let x = lp.primal();
        assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
        let y = lp.duals();
        let dual_obj: f64 = y.iter().zip(lp.rhs()).map(|(a, b)| a * b).sum();
        assert!((dual_obj - 2.8).abs() < 1e-12);
    }

    #[test]
    fn rows_added_after_solve() {
        let mut lp = CoveringLp::new(vec![1.0, 2.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], 2.0);
        assert_eq!(lp.dual_simplex(100), SimplexStatus::Optimal);
        assert!((lp.primal()[0] - 2.0).abs() < 1e-12);
        lp.add_row(vec![(0, -1.0), (1, 1.0)], 0.0);
        assert_eq!(lp.dual_simplex(100), SimplexStatus::Optimal);
        let x = lp.primal();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible() {
        let mut lp = CoveringLp::new(vec![1.0]);
        lp.add_row(vec![(0, -1.0)], 1.0);
        assert_eq!(lp.dual_simplex(100), SimplexStatus::Infeasible);
    }

    #[test]
    fn perturbation_then_cleanup() {
        let mut lp = CoveringLp::new(vec![1.0, 1.0, 0.0]);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], 1.0);
        lp.add_row(vec![(0, 1.0), (2, 1.0)], 1.0);
        lp.perturb_costs(1e-6);
        assert_eq!(lp.dual_simplex(100), SimplexStatus::Optimal);
        lp.restore_costs();
        assert_eq!(lp.primal_simplex(100), SimplexStatus::Optimal);
        let x = lp.primal();
        assert!((x[0] + x[1] - 1.0).abs() < 1e-12);
    }
}
