//! Residuals of the reduced equations that the solution families are
//! obtained from, evaluated on their claimed solutions.

use fieldcore::{Dual, Scalar};

use crate::funcs::ArbFn;
use crate::profile::{denominator, SimilarityProfile};
use crate::SolutionError;

/// A reduced system together with the solution substituted into it.
#[derive(Debug, Clone, Copy)]
pub enum ReducedSystem<'a> {
    /// Four ODEs for `F, G, T, S` of the kinetic-energy family, with
    /// `F = c1 cos T`, `G = c1 sin T`, `S = T + c2` substituted for an
    /// arbitrary `T`. Evaluated at a value of the symmetry variable.
    B1Reduced { t: &'a ArbFn, c1: f64, c2: f64 },
    /// Second-order PDE for the invariant `ξ(x, y)` of the partially
    /// invariant solution, with `ξ = ½(x² + εy²)` substituted.
    KXiPde { eps: f64 },
    /// First-order system for σ given `θ = J(y/x)`, with the closed-form σ
    /// substituted, followed by the mixed-derivative compatibility of the
    /// system's right-hand sides.
    SimSigmaSystem { profile: &'a SimilarityProfile, c3: f64 },
}

/// Where a reduced system is evaluated.
#[derive(Debug, Clone, Copy)]
pub enum At {
    Xi(f64),
    Point(f64, f64),
}

pub fn reduced_system_residual(sys: &ReducedSystem<'_>, at: At) -> Result<Vec<f64>, SolutionError> {
    match (*sys, at) {
        (ReducedSystem::B1Reduced { t, c1, c2 }, At::Xi(xi)) => Ok(b1_reduced(t, c1, c2, xi)?.to_vec()),
        (ReducedSystem::KXiPde { eps }, At::Point(x, y)) => {
            let r = k_xi_pde(x, y, |x, y| (x * x + y * y * eps) * 0.5);
            if r.is_finite() {
                Ok(vec![r])
            } else {
                Err(SolutionError::Domain { x, y })
            }
        }
        (ReducedSystem::SimSigmaSystem { profile, c3 }, At::Point(x, y)) => {
            Ok(sigma_system(profile, c3, x, y)?.to_vec())
        }
        (_, At::Xi(xi)) => Err(SolutionError::Domain { x: xi, y: f64::NAN }),
        (_, At::Point(x, y)) => Err(SolutionError::Domain { x, y }),
    }
}

fn b1_reduced(t: &ArbFn, c1: f64, _c2: f64, xi: f64) -> Result<[f64; 4], SolutionError> {
    let tt = t.eval(Dual::var(xi));
    let (tv, tp) = (tt.re, tt.eps);
    if !(tv.is_finite() && tp.is_finite()) {
        return Err(SolutionError::Domain { x: xi, y: f64::NAN });
    }
    let (f, g, sp) = (c1 * tv.cos(), c1 * tv.sin(), tp);
    let (fp, gp) = (-c1 * tv.sin() * tp, c1 * tv.cos() * tp);
    let (s2, c2t) = (2.0 * tv).sin_cos();
    Ok([
        f * sp - (c2t * f + s2 * g) * tp,
        g * sp - (s2 * f - c2t * g) * tp,
        (g * fp + f * gp) * s2 + (f * fp - g * gp) * c2t,
        f * fp + g * gp,
    ])
}

type D2 = Dual<Dual<f64>>;

/// Left-hand side of the PDE for the invariant ξ of the partially
/// invariant solution, with second derivatives of `xi` by nested duals.
pub fn k_xi_pde(x: f64, y: f64, xi: impl Fn(D2, D2) -> D2) -> f64 {
    let second = |dx: [f64; 2], dy: [f64; 2]| {
        let px = Dual::new(Dual::new(x, dx[0]), Dual::new(dx[1], 0.0));
        let py = Dual::new(Dual::new(y, dy[0]), Dual::new(dy[1], 0.0));
        xi(px, py)
    };
    let along_x = second([1.0, 1.0], [0.0, 0.0]);
    let along_y = second([0.0, 0.0], [1.0, 1.0]);
    let mixed = second([1.0, 0.0], [0.0, 1.0]);
    let (k, kx, kxx) = (along_x.re.re, along_x.re.eps, along_x.eps.eps);
    let (ky, kyy) = (along_y.re.eps, along_y.eps.eps);
    let kxy = mixed.eps.eps;

    let r2 = x * x + y * y;
    let r4 = r2 * r2;
    let d = x * x - y * y;
    let q = r4 - 4.0 * k * k;
    let sq = q.max(0.0).sqrt();
    let first = (kxx - kyy) * (q * (k * d - x * y * sq));
    let second = if kxy == 0.0 {
        0.0
    } else {
        -(4.0 * x * y * k + d * sq) / (x * y * sq - d * k) * kxy
    };
    let third = r4 * ((x + y) * kx - (x - y) * ky) * ((x - y) * kx + (x + y) * ky);
    let fourth = -4.0 * r4 * k * (x * kx + y * ky - k);
    first + second + third + fourth
}

/// `[σ_x − f, σ_y − g, g_x − f_y]` where `(f, g)` are the gradients that
/// `θ = J(y/x)` imposes on σ.
fn sigma_system(p: &SimilarityProfile, c3: f64, x: f64, y: f64) -> Result<[f64; 3], SolutionError> {
    let rhs = |x: D2, y: D2| -> Result<(D2, D2), SolutionError> {
        let xi = y / x;
        let j = p.j(xi)?;
        let jp = p.j_prime(xi, j);
        let (s2, c2) = (j * 2.0).sin_cos();
        Ok(((s2 - xi * c2) * jp / x, -((xi * s2 + c2) * jp / x)))
    };
    let sigma = |x: Dual<f64>, y: Dual<f64>| -> Result<Dual<f64>, SolutionError> {
        let j = p.j(y / x)?;
        p.sigma(x, y, j, c3)
    };
    let sx = sigma(Dual::var(x), Dual::constant(y))?.eps;
    let sy = sigma(Dual::constant(x), Dual::var(y))?.eps;
    let var = |v: f64| Dual::new(Dual::constant(v), Dual::constant(1.0));
    let cst = |v: f64| Dual::constant(Dual::constant(v));
    let (f, _) = rhs(cst(x), var(y))?;
    let (_, g) = rhs(var(x), cst(y))?;
    let out = [sx - f.re.re, sy - g.re.re, g.eps.re - f.eps.re];
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(SolutionError::Domain { x, y })
    }
}

/// `((ξ² − 1) sin2J + 2ξ cos2J)·J′` along the profile, with J′ taken from
/// the lifted derivative of J rather than from the first integral itself.
pub fn first_integral(p: &SimilarityProfile, xi: f64) -> Result<f64, SolutionError> {
    let j = p.j(Dual::var(xi))?;
    Ok(denominator(xi, j.re) * j.eps)
}

/// Residual of the second-order ODE for J obtained by differentiating the
/// first integral, with `J′` and `J″` from a twice-lifted root.
pub fn profile_ode_residual(p: &SimilarityProfile, xi: f64) -> Result<f64, SolutionError> {
    let x: D2 = Dual::new(Dual::var(xi), Dual::constant(1.0));
    let j = p.j(x)?;
    let (j0, j1, j2) = (j.re.re, j.re.eps, j.eps.eps);
    let (s2, c2) = (2.0 * j0).sin_cos();
    Ok(denominator(xi, j0) * j2
        + 2.0 * (xi * s2 + c2) * j1
        + 2.0 * (-2.0 * xi * s2 + (xi * xi - 1.0) * c2) * j1 * j1)
}
