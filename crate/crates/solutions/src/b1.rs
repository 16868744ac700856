//! The kinetic-energy-preserving family: velocities defined implicitly by
//!
//! ```text
//! u = c1 cos T(ux + vy),   v = c1 sin T(ux + vy),
//! θ = T(ux + vy),          σ = θ + c2.
//! ```
//!
//! Since `(u, v) = c1 (cos θ, sin θ)`, the system collapses to one scalar
//! relation for θ, `θ = T(c1 (x cos θ + y sin θ))`. For `T = ½ arcsin` it is
//! used in the form `sin 2θ = c1 (x cos θ + y sin θ)`, which stays regular
//! where arcsin would leave its principal branch, so curves can be
//! continued onto the neighbouring branches.

use fieldcore::Dual;

use crate::funcs::ArbFn;
use crate::newton::{lift_root, solve_1d, solve_2d, NewtonOptions};
use crate::real::Real;
use crate::SolutionError;

/// Step of the continuation from the origin along the ray to a point.
const RAY_STEP: f64 = 0.01;
/// Largest accepted jump between a branch hint and the continued root.
const MAX_BRANCH_JUMP: f64 = 0.5;

/// Solves the implicit velocity relations at `(x, y)` by Newton's method
/// from `guess`, returning `(u, v)` with both residuals below 1e-12.
pub fn solve_b1_implicit(
    x: f64,
    y: f64,
    t: &ArbFn,
    c1: f64,
    guess: (f64, f64),
) -> Result<(f64, f64), SolutionError> {
    let system = |z: [f64; 2]| {
        let [u, v] = z;
        let xi = Dual::var(u * x + v * y);
        let tt = t.eval(xi);
        let (s, c) = (tt.re.sin(), tt.re.cos());
        let dt = tt.eps;
        let r = [u - c1 * c, v - c1 * s];
        if !(r[0].is_finite() && r[1].is_finite() && dt.is_finite()) {
            return Err(SolutionError::Domain { x, y });
        }
        let jac = [
            [1.0 + c1 * s * dt * x, c1 * s * dt * y],
            [-c1 * c * dt * x, 1.0 - c1 * c * dt * y],
        ];
        Ok((r, jac))
    };
    let [u, v] = solve_2d(system, [guess.0, guess.1], NewtonOptions::default())?;
    Ok((u, v))
}

#[derive(Debug, Clone)]
pub(crate) struct B1Model {
    pub c1: f64,
    pub c2: f64,
    pub t: ArbFn,
}

impl B1Model {
    /// Radius (in units of 1/|c1|) inside which the principal branch is used.
    pub const PRINCIPAL_RADIUS: f64 = 0.95;

    /// Scalar relation whose root is θ.
    fn relation<S: Real>(&self, th: S, x: S, y: S) -> S {
        let xi = (x * th.cos() + y * th.sin()) * self.c1;
        match self.t {
            ArbFn::ArcsinHalf => (th * 2.0).sin() - xi,
            ArbFn::Identity => th - xi,
            ref f => th - f.eval(xi),
        }
    }

    fn check_regular(&self, th: f64, x: f64, y: f64) -> Result<(), SolutionError> {
        let d = self.relation(Dual::var(th), Dual::constant(x), Dual::constant(y)).eps;
        if d.abs() < 1e-9 || !d.is_finite() {
            return Err(SolutionError::Singular { at: th, det: d });
        }
        Ok(())
    }

    /// θ on the branch continued along the ray from the origin, where
    /// `(u, v) = (c1 cos T(0), c1 sin T(0))`.
    pub fn principal_theta(&self, x: f64, y: f64) -> Result<f64, SolutionError> {
        let r = x.hypot(y);
        if r * self.c1.abs() >= Self::PRINCIPAL_RADIUS {
            return Err(SolutionError::Domain { x, y });
        }
        let t0 = self.t.eval(0.0);
        let mut uv = (self.c1 * t0.cos(), self.c1 * t0.sin());
        let n = (r / RAY_STEP).ceil().max(1.0) as usize;
        for k in 1..=n {
            let f = k as f64 / n as f64;
            uv = solve_b1_implicit(f * x, f * y, &self.t, self.c1, uv)?;
        }
        let th = self.t.eval(uv.0 * x + uv.1 * y);
        let th = self.theta_near(x, y, th)?;
        Ok(th)
    }

    /// θ continued from a nearby value `hint`.
    pub fn theta_near(&self, x: f64, y: f64, hint: f64) -> Result<f64, SolutionError> {
        let f = |th: f64| {
            let d = self.relation(Dual::var(th), Dual::constant(x), Dual::constant(y));
            if d.re.is_finite() && d.eps.is_finite() {
                Ok((d.re, d.eps))
            } else {
                Err(SolutionError::Domain { x, y })
            }
        };
        let th = solve_1d(f, hint, NewtonOptions::default())?;
        if (th - hint).abs() > MAX_BRANCH_JUMP {
            return Err(SolutionError::Branch { at: th });
        }
        self.check_regular(th, x, y)?;
        Ok(th)
    }

    /// `[σ, θ, u, v]` on the principal branch, or continued from `hint`.
    pub fn fields<S: Real>(&self, x: S, y: S, hint: Option<f64>) -> Result<[S; 4], SolutionError> {
        let root = match hint {
            None => self.principal_theta(x.re(), y.re())?,
            Some(h) => self.theta_near(x.re(), y.re(), h)?,
        };
        let th: S = lift_root(|t| self.relation(t, Dual::constant(x), Dual::constant(y)), root, 2);
        Ok([th + self.c2, th, th.cos() * self.c1, th.sin() * self.c1])
    }
}
