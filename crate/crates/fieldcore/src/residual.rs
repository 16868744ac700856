use std::f64::consts::PI;

use crate::{FeedVelocity, FieldError, FieldJet, PlasticState, K};

/// Relative step used by [`numeric_jet_default`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Residuals `(r_a, r_b, r_c, r_d)` of the four equations at one jet.
///
/// Written term by term as the system reads, without trigonometric
/// rewriting, so a wrong formula upstream shows up here as a nonzero entry.
pub fn pde_residual(jet: &FieldJet) -> Result<[f64; 4], FieldError> {
    if !jet.is_finite() {
        return Err(FieldError::NonFinite { what: "jet" });
    }
    let s = &jet.state;
    let (dx, dy) = (&jet.d_x, &jet.d_y);
    let (s2, c2) = (2.0 * s.theta).sin_cos();
    let r_a = dx.sigma - 2.0 * K * (dx.theta * c2 + dy.theta * s2);
    let r_b = dy.sigma - 2.0 * K * (dx.theta * s2 - dy.theta * c2);
    let r_c = (dy.u + dx.v) * s2 + (dx.u - dy.v) * c2;
    let r_d = dx.u + dy.v;
    Ok([r_a, r_b, r_c, r_d])
}

/// Fourth-order central-difference jet of `field` at `(x, y)`.
///
/// The step is `h·max(1, |x|, |y|)`. Values of θ on the stencil are shifted
/// by multiples of π towards the centre value first: the equations only see
/// 2θ, and a branch cut crossing the stencil would otherwise swamp the
/// difference quotient.
pub fn numeric_jet<F, E>(field: F, x: f64, y: f64, h: f64) -> Result<FieldJet, FieldError>
where
    F: Fn(f64, f64) -> Result<PlasticState, E>,
{
    let eval = |px: f64, py: f64| field(px, py).map_err(|_| FieldError::Domain { x: px, y: py });
    let centre = eval(x, y)?;
    if !centre.is_finite() {
        return Err(FieldError::NonFinite { what: "field value" });
    }
    let step = h * 1f64.max(x.abs()).max(y.abs());
    let unwrap = |mut s: PlasticState| {
        s.theta -= PI * ((s.theta - centre.theta) / PI).round();
        s
    };
    let diff = |ex: f64, ey: f64| -> Result<PlasticState, FieldError> {
        let at = |k: f64| eval(x + k * step * ex, y + k * step * ey).map(unwrap);
        let (p1, p2, m1, m2) = (at(1.0)?, at(2.0)?, at(-1.0)?, at(-2.0)?);
        let w = 1.0 / (12.0 * step);
        // Differences first, so a constant field gives exactly zero.
        let near = PlasticState::combine(&[(1.0, p1), (-1.0, m1)]);
        let far = PlasticState::combine(&[(1.0, p2), (-1.0, m2)]);
        Ok(PlasticState::combine(&[(8.0 * w, near), (-w, far)]))
    };
    let jet = FieldJet { state: centre, d_x: diff(1.0, 0.0)?, d_y: diff(0.0, 1.0)? };
    if !jet.is_finite() {
        return Err(FieldError::NonFinite { what: "difference quotient" });
    }
    Ok(jet)
}

/// [`numeric_jet`] with the default relative step.
pub fn numeric_jet_default<F, E>(field: F, x: f64, y: f64) -> Result<FieldJet, FieldError>
where
    F: Fn(f64, f64) -> Result<PlasticState, E>,
{
    numeric_jet(field, x, y, DEFAULT_FD_STEP)
}

/// A slope dy/dx that may be vertical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    Infinite,
}

impl Slope {
    pub fn finite(self) -> Option<f64> {
        match self {
            Slope::Finite(m) => Some(m),
            Slope::Infinite => None,
        }
    }
}

/// Slopes `(tan θ, −cot θ)` of the two slip-line families through a point.
pub fn characteristic_slopes(theta: f64) -> (Slope, Slope) {
    let (s, c) = theta.sin_cos();
    let tiny = 1e-15;
    let first = if c.abs() < tiny { Slope::Infinite } else { Slope::Finite(s / c) };
    let second = if s.abs() < tiny { Slope::Infinite } else { Slope::Finite(-c / s) };
    (first, second)
}

/// Slope `(V0 − v)/(U0 − u)` of a plasticity-region limit through `(x, y)`.
pub fn plasticity_limit_slope<F, E>(
    x: f64,
    y: f64,
    feed: &FeedVelocity,
    field: F,
) -> Result<f64, FieldError>
where
    F: Fn(f64, f64) -> Result<PlasticState, E>,
{
    let s = field(x, y).map_err(|_| FieldError::Domain { x, y })?;
    let den = feed.u0 - s.u;
    if den.abs() < 1e-12 {
        return Err(FieldError::NearStagnation { denominator: den });
    }
    Ok((feed.v0 - s.v) / den)
}
