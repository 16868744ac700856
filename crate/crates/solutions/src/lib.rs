//! Exact solution families of the planar ideal-plasticity system.
//!
//! Every family is written once, generically over [`Real`] scalars, and
//! evaluated on forward-mode duals to obtain analytic first derivatives.
//! Implicit relations (the kinetic-energy family, the similarity profile)
//! are solved in `f64` and then lifted onto duals by Newton steps, and
//! quadrature-defined terms carry their integrand as the exact derivative.

pub mod b1;
pub mod elliptic;
pub mod errata;
mod family;
pub mod funcs;
pub mod newton;
mod params;
pub mod profile;
pub mod quadrature;
pub mod real;
pub mod reduced;
mod solution;

pub use b1::solve_b1_implicit;
pub use elliptic::jacobi_cn;
pub use family::Family;
pub use funcs::ArbFn;
pub use params::{ParamSpec, Params};
pub use profile::SimilarityProfile;
pub use real::{Integrand, Real};
pub use reduced::{reduced_system_residual, At, ReducedSystem};

pub use solution::{make_solution, Solution};

/// Distance kept from singular sets by domain predicates.
pub const DOMAIN_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolutionError {
    #[error("unknown solution family `{0}`")]
    UnknownFamily(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("point ({x}, {y}) lies outside the solution's domain")]
    Domain { x: f64, y: f64 },
    #[error("no root of the implicit relation near the requested branch at {at}")]
    Branch { at: f64 },
    #[error("root not bracketed in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("Newton iteration stalled with residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("singular Jacobian (determinant {det:e}) at {at}")]
    Singular { at: f64, det: f64 },
    #[error("quadrature tolerance not reached: value {value}, error estimate {error:e}")]
    Quadrature { value: f64, error: f64 },
}

impl From<fieldcore::FieldError> for SolutionError {
    fn from(e: fieldcore::FieldError) -> Self {
        match e {
            fieldcore::FieldError::Domain { x, y } => SolutionError::Domain { x, y },
            other => SolutionError::InvalidParam { name: "field".into(), reason: other.to_string() },
        }
    }
}
