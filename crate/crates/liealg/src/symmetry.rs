//! Symmetry action on solutions: push a solution's graph forward along a
//! flow and check that the image is again a solution.

use fieldcore::{pde_residual, Dual, FieldJet, PlasticState};

use crate::flow::{flow, integrate_flow};
use crate::generator::{Field, Gen};
use crate::LieError;

pub const PREIMAGE_TOL: f64 = 1e-12;
pub const PREIMAGE_MAX_ITER: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub max_residual: f64,
    pub tested: usize,
    /// Points where the preimage solve failed or left the field's domain.
    pub excluded: usize,
}

/// A group action `p ↦ exp(t·g)p`, differentiable through dual inputs.
pub trait Action {
    fn act(&self, p: [Dual<f64>; 6], t: f64) -> Result<[Dual<f64>; 6], LieError>;
}

impl Action for Gen {
    fn act(&self, p: [Dual<f64>; 6], t: f64) -> Result<[Dual<f64>; 6], LieError> {
        flow(*self, p, t)
    }
}

/// Any field, flowed by numerical integration.
#[derive(Debug, Clone, Copy)]
pub struct Integrated<F>(pub F);

impl<F: Field> Action for Integrated<F> {
    fn act(&self, p: [Dual<f64>; 6], t: f64) -> Result<[Dual<f64>; 6], LieError> {
        integrate_flow(&self.0, p, t)
    }
}

/// Image of the graph point over `(x, y)` and its derivatives along x and y.
fn push_forward<G: Action>(g: &G, jet: &FieldJet, x: f64, y: f64, t: f64) -> Result<([f64; 6], [f64; 6], [f64; 6]), LieError> {
    let s = jet.state;
    let base = [x, y, s.sigma, s.theta, s.u, s.v];
    let col = |d: &PlasticState, ex: f64, ey: f64| [ex, ey, d.sigma, d.theta, d.u, d.v];
    let along = |dir: [f64; 6]| -> Result<[Dual<f64>; 6], LieError> {
        g.act(std::array::from_fn(|i| Dual::new(base[i], dir[i])), t)
    };
    let ax = along(col(&jet.d_x, 1.0, 0.0))?;
    let ay = along(col(&jet.d_y, 0.0, 1.0))?;
    Ok((ax.map(|c| c.re), ax.map(|c| c.eps), ay.map(|c| c.eps)))
}

/// The transformed solution's jet at `target`, found by solving for the
/// preimage `(x, y)` with Newton's method from `guess`.
pub fn transformed_jet<G: Action, F, E>(g: &G, field: &F, t: f64, target: (f64, f64), guess: (f64, f64)) -> Result<FieldJet, LieError>
where
    F: Fn(f64, f64) -> Result<FieldJet, E>,
{
    let (mut x, mut y) = guess;
    let scale = 1.0 + target.0.abs().max(target.1.abs());
    for _ in 0..PREIMAGE_MAX_ITER {
        let jet = field(x, y).map_err(|_| LieError::Preimage { x, y })?;
        let (img, dx, dy) = push_forward(g, &jet, x, y, t)?;
        let (gx, gy) = (img[0] - target.0, img[1] - target.1);
        let det = dx[0] * dy[1] - dy[0] * dx[1];
        if !det.is_finite() || det.abs() < 1e-14 {
            return Err(LieError::Preimage { x, y });
        }
        if gx.abs().max(gy.abs()) < PREIMAGE_TOL * scale {
            // ∂f/∂(x', y') = ∂f/∂(x, y) · M⁻¹, M = ∂(x', y')/∂(x, y).
            let inv = [[dy[1] / det, -dy[0] / det], [-dx[1] / det, dx[0] / det]];
            let wrt = |row: usize| {
                PlasticState::from_array(std::array::from_fn(|k| dx[k + 2] * inv[0][row] + dy[k + 2] * inv[1][row]))
            };
            let state = PlasticState::new(img[2], img[3], img[4], img[5]);
            return Ok(FieldJet { state, d_x: wrt(0), d_y: wrt(1) });
        }
        x -= (dy[1] * gx - dy[0] * gy) / det;
        y -= (dx[0] * gy - dx[1] * gx) / det;
    }
    Err(LieError::Preimage { x, y })
}

/// Transforms the solution by `exp(t·g)` and evaluates the residual of the
/// image at the images of `points`. Each image point is reconstructed from
/// scratch: Newton starts at the image coordinates themselves (or at the
/// source point when those fall outside the field's domain).
pub fn symmetry_check<G: Action, F, E>(g: &G, field: F, t: f64, points: &[(f64, f64)]) -> Result<SymmetryReport, LieError>
where
    F: Fn(f64, f64) -> Result<FieldJet, E>,
{
    let mut report = SymmetryReport { max_residual: 0.0, tested: 0, excluded: 0 };
    for &(x0, y0) in points {
        let Ok(jet) = field(x0, y0) else {
            report.excluded += 1;
            continue;
        };
        let (img, _, _) = push_forward(g, &jet, x0, y0, t)?;
        let target = (img[0], img[1]);
        let guess = if field(target.0, target.1).is_ok() { target } else { (x0, y0) };
        let moved = transformed_jet(g, &field, t, target, guess)
            .or_else(|_| transformed_jet(g, &field, t, target, (x0, y0)));
        match moved.ok().and_then(|j| pde_residual(&j).ok()) {
            Some(r) => {
                report.tested += 1;
                report.max_residual = r.iter().fold(report.max_residual, |m, c| m.max(c.abs()));
            }
            None => report.excluded += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    /// Rigid rotation with angular speed b and constant stress.
    fn rigid(x: f64, y: f64) -> Result<FieldJet, Infallible> {
        let b = 1.3;
        Ok(FieldJet {
            state: PlasticState::new(0.2, 0.4, b * y - 0.1, -b * x + 0.5),
            d_x: PlasticState::new(0.0, 0.0, 0.0, -b),
            d_y: PlasticState::new(0.0, 0.0, b, 0.0),
        })
    }

    fn grid() -> Vec<(f64, f64)> {
        (0..5).flat_map(|i| (0..5).map(move |j| (-1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64))).collect()
    }

    #[test]
    fn identity_at_zero_time() {
        let r = symmetry_check(&Gen::B3, rigid, 0.0, &grid()).unwrap();
        assert_eq!(r.tested, 25);
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn pressure_shift_and_rotation() {
        for (g, t) in [(Gen::P5, 0.7), (Gen::L, std::f64::consts::FRAC_PI_6), (Gen::B1, 0.3), (Gen::B4, -0.6)] {
            let r = symmetry_check(&g, rigid, t, &grid()).unwrap();
            assert_eq!(r.excluded, 0, "{g}");
            assert!(r.max_residual < 1e-8, "{g}: {}", r.max_residual);
        }
    }

    #[test]
    fn non_symmetry_is_detected() {
        // A shear x ↦ x + t·y is not a symmetry of the rigid solution's image.
        let shear = |x: f64, y: f64| -> Result<FieldJet, Infallible> {
            let mut j = rigid(x, y)?;
            j.state.u += 0.5 * x;
            j.d_x.u += 0.5;
            Ok(j)
        };
        let r = symmetry_check(&Gen::P5, shear, 0.3, &grid()).unwrap();
        assert!(r.max_residual > 0.1);
    }

    #[test]
    fn translation_preimage_is_exact() {
        let j = transformed_jet(&Gen::P1, &rigid, 0.5, (0.3, 0.2), (0.3, 0.2)).unwrap();
        let direct = rigid(-0.2, 0.2).unwrap();
        assert!(j.max_rel_diff(&direct) < 1e-14);
    }
}
