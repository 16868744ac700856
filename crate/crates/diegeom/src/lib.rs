//! Geometry built on exact plasticity solutions: flow lines, limits of the
//! plastic region, slip lines, and extrusion dies whose walls follow the
//! flow.

pub mod die;
pub mod export;
pub mod figures;
pub mod trace;

use std::path::PathBuf;

use thiserror::Error;

pub use die::{assemble_die, intersections, limit_normal_mismatch, LimitSeed, polyline_gap, Crossing, DieGeometry, DieSpec, SNAP_TOL};
pub use export::{export_csv, export_svg, parse_csv, write_csv, write_svg};
pub use figures::{figure_spec, reproduce_figure, FigureCheck, FigureOutput, FigureSpec, Layout};
pub use trace::{
    convergence_ratio, flow_tangency_error, partial_step, polyline_tangent, tangency_error, trace, Field, limit_slope_error, max_angle_to, trace_flow_line,
    trace_plasticity_limit, trace_slip_line, CurveKind, Polyline, Seed, SlipBranch, Stop,
};

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("start point ({x}, {y}) is outside the solution's domain")]
    OutsideDomain { x: f64, y: f64 },
    #[error("direction field vanishes at the start point ({x}, {y})")]
    Stagnation { x: f64, y: f64 },
    #[error("trace stopped after {got} of {wanted} steps")]
    ShortTrace { wanted: usize, got: usize },
    #[error("{limit} limit does not reach the {contour} contour (closest approach {gap:.3e})")]
    Assembly { limit: String, contour: String, gap: f64 },
    #[error("nothing to export")]
    Empty,
    #[error("no figure {0}; figures are numbered 1 to 5")]
    UnknownFigure(u32),
    #[error("bad CSV at line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error(transparent)]
    Solution(#[from] solutions::SolutionError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}
