//! Physical state, forward-mode scalars and the residual operator of the
//! planar ideal-plasticity system
//!
//! ```text
//! σ_x − 2k(θ_x cos2θ + θ_y sin2θ) = 0
//! σ_y − 2k(θ_x sin2θ − θ_y cos2θ) = 0
//! (u_y + v_x) sin2θ + (u_x − v_y) cos2θ = 0
//! u_x + v_y = 0
//! ```
//!
//! with the yield constant fixed to `k = 1/2`.

mod dual;
mod residual;
mod sampling;
mod scalar;
mod state;

pub use dual::Dual;
pub use residual::{
    characteristic_slopes, numeric_jet, numeric_jet_default, pde_residual, plasticity_limit_slope,
    Slope, DEFAULT_FD_STEP,
};
pub use sampling::QuasiRandom;
pub use scalar::Scalar;
pub use state::{normalize_angle, FeedVelocity, FieldJet, PlasticState};

/// Yield limit in shear. Rescaling σ recovers any other value.
pub const K: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error("point ({x}, {y}) lies outside the field's domain")]
    Domain { x: f64, y: f64 },
    #[error("relative velocity {denominator:e} too small for an x-parametrised slope")]
    NearStagnation { denominator: f64 },
    #[error("feed velocity must be nonzero")]
    ZeroFeed,
}
