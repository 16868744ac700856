//! Damped Newton iterations in one and two unknowns.

use fieldcore::{Dual, Scalar};

use crate::SolutionError;

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    /// Convergence threshold on the residual (max norm).
    pub tol: f64,
    pub max_iter: usize,
    /// Backtracking halvings allowed per step.
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-12, max_iter: 50, max_halvings: 20 }
    }
}

/// Solve `f(x) = 0` from `x0`; `f` returns `(value, derivative)`.
///
/// A step is halved while it fails to reduce `|f|` (a step landing where
/// `f` is undefined counts as a failure).
pub fn solve_1d<F>(mut f: F, x0: f64, opts: NewtonOptions) -> Result<f64, SolutionError>
where
    F: FnMut(f64) -> Result<(f64, f64), SolutionError>,
{
    let mut x = x0;
    let (mut r, mut dr) = f(x)?;
    for _ in 0..opts.max_iter {
        if r.abs() < opts.tol {
            return Ok(x);
        }
        if dr == 0.0 || !dr.is_finite() {
            return Err(SolutionError::Singular { at: x, det: dr });
        }
        let step = r / dr;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial = x - lambda * step;
            if let Ok((rt, drt)) = f(trial) {
                if rt.is_finite() && rt.abs() < r.abs() {
                    x = trial;
                    r = rt;
                    dr = drt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if r.abs() < opts.tol {
        Ok(x)
    } else {
        Err(SolutionError::NoConvergence { residual: r.abs(), iterations: opts.max_iter })
    }
}

/// Root of `f` in `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign:
/// Newton steps that leave the bracket are replaced by bisection.
/// Converges when the bracket or the residual is below `tol`.
pub fn solve_bracketed<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, SolutionError>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(SolutionError::NoBracket { lo, hi });
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 || fx.abs() < tol * 1e-3 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if (hi - lo).abs() < tol * x.abs().max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton.is_finite() && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(x)
}

/// Solve a 2×2 system `F(z) = 0`; `f` returns `(F, ∂F/∂z)`.
pub fn solve_2d<F>(mut f: F, z0: [f64; 2], opts: NewtonOptions) -> Result<[f64; 2], SolutionError>
where
    F: FnMut([f64; 2]) -> Result<([f64; 2], [[f64; 2]; 2]), SolutionError>,
{
    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let mut z = z0;
    let (mut r, mut jac) = f(z)?;
    for _ in 0..opts.max_iter {
        if norm(r) < opts.tol {
            return Ok(z);
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let scale = jac.iter().flatten().fold(0f64, |m, v| m.max(v.abs())).max(1.0);
        if det.abs() < 1e-14 * scale * scale || !det.is_finite() {
            return Err(SolutionError::Singular { at: z[0], det });
        }
        let step = [
            (jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            (jac[0][0] * r[1] - jac[1][0] * r[0]) / det,
        ];
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial = [z[0] - lambda * step[0], z[1] - lambda * step[1]];
            if let Ok((rt, jt)) = f(trial) {
                if norm(rt).is_finite() && norm(rt) < norm(r) {
                    z = trial;
                    r = rt;
                    jac = jt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm(r) < opts.tol {
        Ok(z)
    } else {
        Err(SolutionError::NoConvergence { residual: norm(r), iterations: opts.max_iter })
    }
}

/// Carries a root computed in `f64` over to a derivative-carrying scalar.
///
/// `g` is the implicit relation written generically; starting from the
/// converged `root`, each Newton step taken in `S` fixes one more order of
/// derivatives, so two steps suffice for first and second derivatives.
pub fn lift_root<S, G>(g: G, root: f64, steps: usize) -> S
where
    S: Scalar,
    G: Fn(Dual<S>) -> Dual<S>,
{
    let mut z = S::cst(root);
    for _ in 0..steps {
        let d = g(Dual::var(z));
        z -= d.re / d.eps;
    }
    z
}
