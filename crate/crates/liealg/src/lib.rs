//! Lie point symmetries of the planar ideal-plasticity system.
//!
//! Generators are vector fields on `(x, y, σ, θ, u, v)` evaluated over any
//! [`fieldcore::Scalar`], so brackets, nested brackets and flow Jacobians all
//! come from forward-mode dual numbers rather than symbolic algebra. The
//! commutation tables are integer data checked against those numerics.

pub mod catalog;
pub mod family;
pub mod flow;
pub mod generator;
pub mod span;
pub mod structure;
pub mod symmetry;

pub use catalog::{
    catalog_dir, load_catalog, parse_catalog, verify_catalogs, verify_subalgebra_closure, ClosureOptions,
    ClosureReport, Domain, EntryVerdict, SubalgebraEntry,
};
pub use family::{verify_infinite_family, InfiniteFamily};
pub use flow::{flow, integrate_flow};
pub use generator::{eval_generator, lie_bracket, Bracket, Combo, Field, Gen, Point6, SignFlippedK};
pub use span::{
    expand_in_basis, sample_points, verify_structure_table, verify_structure_table_seeded, CellResult, Expansion, SpanFit,
    TableReport,
};
pub use structure::{automorphism_check, jacobi_check, JacobiReport, Reflection, StructureTable};
pub use symmetry::{symmetry_check, transformed_jet, Action, Integrated, SymmetryReport};

#[derive(Debug, thiserror::Error)]
pub enum LieError {
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("generator {0} is not in the table's basis")]
    NotInTable(Gen),
    #[error("need at least {need} sample points, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("basis is numerically rank deficient (singular value ratio {ratio:e}); resample")]
    Conditioning { ratio: f64 },
    #[error("flow integration did not settle with {steps} steps")]
    StepSize { steps: usize },
    #[error("preimage solve failed near ({x}, {y})")]
    Preimage { x: f64, y: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("parameter '{0}' has no value")]
    UnboundParameter(String),
    #[error("entry {0} has a basis element that vanishes")]
    ZeroCombo(String),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}
