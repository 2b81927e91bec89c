//! Safeguarded Newton iteration for square systems with parameters boxed in [0,1].

use crate::error::{EvacError, Result};

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Central-difference step for the Jacobian.
    pub h: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-10, max_iter: 100, h: 1e-7 }
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn project(x: &mut [f64]) {
    for v in x {
        *v = v.clamp(0.0, 1.0);
    }
}

/// Gaussian elimination with partial pivoting; `None` when the matrix is numerically singular.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-300);
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..m {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = (r + 1..m).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn jacobian<F>(f: &F, x: &[f64], fx: &[f64], h: f64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let m = x.len();
    let rows = fx.len();
    let mut jac = vec![vec![0.0; m]; rows];
    for i in 0..m {
        let lo = (x[i] - h).max(0.0);
        let hi = (x[i] + h).min(1.0);
        let eval = |v: f64| {
            let mut y = x.to_vec();
            y[i] = v;
            f(&y).ok()
        };
        let (flo, fhi, span) = match (eval(lo), eval(hi)) {
            (Some(a), Some(b)) => (a, b, hi - lo),
            (None, Some(b)) => (fx.to_vec(), b, hi - x[i]),
            (Some(a), None) => (a, fx.to_vec(), x[i] - lo),
            (None, None) => continue,
        };
        if span <= 0.0 {
            continue;
        }
        for r in 0..rows {
            jac[r][i] = (fhi[r] - flo[r]) / span;
        }
    }
    jac
}

/// Newton direction, falling back to a Levenberg-Marquardt step when the Jacobian is singular.
fn direction(jac: &[Vec<f64>], fx: &[f64], mu: f64) -> Option<Vec<f64>> {
    let m = jac.first().map_or(0, |r| r.len());
    let rhs: Vec<f64> = fx.iter().map(|v| -v).collect();
    if mu == 0.0 && jac.len() == m {
        if let Some(d) = solve_dense(jac.to_vec(), rhs.clone()) {
            return Some(d);
        }
    }
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    for (row, &r) in jac.iter().zip(&rhs) {
        for i in 0..m {
            b[i] += row[i] * r;
            for j in 0..m {
                a[i][j] += row[i] * row[j];
            }
        }
    }
    let damp = mu.max(1e-12) * (1.0 + a.iter().enumerate().map(|(i, r)| r[i]).fold(0.0, f64::max));
    for (i, r) in a.iter_mut().enumerate() {
        r[i] += damp;
    }
    solve_dense(a, b)
}

fn newton_from<F>(f: &F, x0: &[f64], opts: &NewtonOptions) -> Option<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut x = x0.to_vec();
    project(&mut x);
    let mut fx = f(&x).ok()?;
    for _ in 0..opts.max_iter {
        if inf_norm(&fx) <= opts.tol {
            return Some(x);
        }
        let jac = jacobian(f, &x, &fx, opts.h);
        let base = sq_norm(&fx);
        let mut improved = false;
        for mu in [0.0, 1e-6, 1e-3, 1e-1, 1.0] {
            let Some(d) = direction(&jac, &fx, mu) else { continue };
            let mut alpha = 1.0;
            for _ in 0..40 {
                let mut y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
                project(&mut y);
                if let Ok(fy) = f(&y) {
                    if sq_norm(&fy) < base * (1.0 - 1e-4 * alpha) || inf_norm(&fy) <= opts.tol {
                        x = y;
                        fx = fy;
                        improved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if improved {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    (inf_norm(&fx) <= opts.tol).then_some(x)
}

/// Bisection on a sign change of a scalar residual over [0,1], nearest bracket to `x0` first.
fn bisect<F>(f: &F, x0: f64, tol: f64) -> Option<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let g = |x: f64| f(&[x]).ok().map(|v| v[0]);
    const GRID: usize = 400;
    let pts: Vec<(f64, Option<f64>)> = (0..=GRID).map(|i| i as f64 / GRID as f64).map(|x| (x, g(x))).collect();
    let mut brackets: Vec<(f64, f64, f64)> = Vec::new();
    for w in pts.windows(2) {
        if let ((a, Some(fa)), (b, Some(fb))) = (w[0], w[1]) {
            if fa == 0.0 {
                return Some(a);
            }
            if fa.signum() != fb.signum() {
                brackets.push((a, b, fa));
            }
        }
    }
    brackets.sort_by(|p, q| (p.0 - x0).abs().total_cmp(&(q.0 - x0).abs()));
    for (mut a, mut b, mut fa) in brackets {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let fm = g(mid)?;
            if fm.abs() <= tol || b - a < 1e-16 {
                return Some(mid);
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
    }
    None
}

/// Solves `f(x) = 0` for `x` in [0,1]^m starting at `x0`.
///
/// Damped Newton with backtracking and box projection; on failure a scalar system falls back
/// to bisection and a larger one restarts from nearby points.
pub fn solve_box<F>(f: F, x0: &[f64], opts: &NewtonOptions) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    for (index, &value) in x0.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) || !value.is_finite() {
            return Err(EvacError::ParameterOutOfBox { index, value });
        }
    }
    if x0.is_empty() {
        let r = f(x0)?;
        return if inf_norm(&r) <= opts.tol {
            Ok(Vec::new())
        } else {
            Err(EvacError::NoConvergence(format!("fixed plan has residual {:e}", inf_norm(&r))))
        };
    }
    if let Some(x) = newton_from(&f, x0, opts) {
        return Ok(x);
    }
    if x0.len() == 1 {
        if let Some(x) = bisect(&f, x0[0], opts.tol) {
            if f(&[x]).map(|r| inf_norm(&r) <= opts.tol).unwrap_or(false) {
                return Ok(vec![x]);
            }
        }
    } else {
        for shift in [0.02, -0.02, 0.1, -0.1] {
            for i in 0..x0.len() {
                let mut start = x0.to_vec();
                start[i] = (start[i] + shift).clamp(0.0, 1.0);
                if let Some(x) = newton_from(&f, &start, opts) {
                    return Ok(x);
                }
            }
        }
    }
    let r = f(x0).map(|r| inf_norm(&r)).unwrap_or(f64::INFINITY);
    Err(EvacError::NoConvergence(format!("residual {r:e} at the starting point; Newton and fallbacks failed")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_circle_line_intersection() {
        // x^2 + y^2 = 0.5, x = y
        let f = |p: &[f64]| Ok(vec![p[0] * p[0] + p[1] * p[1] - 0.5, p[0] - p[1]]);
        let x = solve_box(f, &[0.9, 0.2], &NewtonOptions::default()).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-9 && (x[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn scalar_kink_falls_back_to_bisection() {
        // |x - 0.3| - 0.1 has roots 0.2 and 0.4, Newton from the kink has zero slope
        let f = |p: &[f64]| Ok(vec![(p[0] - 0.3).abs().max(0.1) - 0.1 + (p[0] - 0.6).max(0.0)]);
        let x = solve_box(f, &[0.7], &NewtonOptions::default()).unwrap();
        assert!(f(&x).unwrap()[0].abs() <= 1e-10);
    }

    #[test]
    fn start_outside_box_is_rejected() {
        let f = |p: &[f64]| Ok(vec![p[0]]);
        assert!(matches!(
            solve_box(f, &[1.5], &NewtonOptions::default()),
            Err(EvacError::ParameterOutOfBox { index: 0, .. })
        ));
    }

    #[test]
    fn no_root_reports_no_convergence() {
        let f = |p: &[f64]| Ok(vec![p[0] * p[0] + 1.0]);
        assert!(matches!(solve_box(f, &[0.5], &NewtonOptions::default()), Err(EvacError::NoConvergence(_))));
    }

    #[test]
    fn dense_solver_handles_pivoting() {
        let x = solve_dense(vec![vec![0.0, 1.0], vec![2.0, 0.0]], vec![3.0, 4.0]).unwrap();
        assert_eq!(x, vec![2.0, 3.0]);
        assert!(solve_dense(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }
}
