//! Least-squares membership of a sampled vector field in the span of a basis.

use fieldcore::QuasiRandom;
use nalgebra::{DMatrix, DVector, SVD};

use crate::generator::{Bracket, Combo, Field, Gen, Point6};
use crate::structure::StructureTable;
use crate::LieError;

/// Samples per basis element required before a fit is attempted.
pub const MIN_OVERSAMPLING: usize = 2;
/// Smallest singular value, relative to the largest, accepted as full rank.
pub const RANK_TOL: f64 = 1e-10;
/// Residuals below this mean "in the span"...
pub const IN_SPAN: f64 = 1e-6;
/// ...and above this, "not in the span". Anything between is inconclusive.
pub const OUT_OF_SPAN: f64 = 1e-2;

/// Quasi-random points of `[−2, 2]⁶` away from `u = v = 0`, where `B1`
/// vanishes and would be indistinguishable from zero.
pub fn sample_points(n: usize, seed: u64) -> Vec<Point6> {
    let mut q = QuasiRandom::new(6, seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p: Point6 = q.next_in(&[(-2.0, 2.0); 6]).try_into().expect("six coordinates");
        if p[4].abs() + p[5].abs() >= 0.1 {
            out.push(p);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub coefficients: Vec<f64>,
    /// Largest Euclidean misfit over the sample points.
    pub residual: f64,
}

/// A factored design matrix: one basis, many right-hand sides.
pub struct SpanFit {
    design: DMatrix<f64>,
    svd: SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    points: usize,
}

impl SpanFit {
    pub fn new<F: Field>(points: &[Point6], basis: &[F]) -> Result<Self, LieError> {
        let need = MIN_OVERSAMPLING * basis.len();
        if points.len() < need {
            return Err(LieError::TooFewSamples { need, got: points.len() });
        }
        let mut design = DMatrix::zeros(6 * points.len(), basis.len());
        for (k, p) in points.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                for (i, c) in b.eval(p).into_iter().enumerate() {
                    design[(6 * k + i, j)] = c;
                }
            }
        }
        let svd = SVD::new(design.clone(), true, true);
        let s = &svd.singular_values;
        let (hi, lo) = (s.max(), s.min());
        if !(lo > RANK_TOL * hi) {
            return Err(LieError::Conditioning { ratio: lo / hi });
        }
        Ok(SpanFit { design, svd, points: points.len() })
    }

    /// Fit sampled values, one 6-vector per construction point.
    pub fn expand(&self, values: &[Point6]) -> Expansion {
        assert_eq!(values.len(), self.points);
        let rhs = DVector::from_iterator(6 * values.len(), values.iter().flatten().copied());
        let c = self.svd.solve(&rhs, 0.0).expect("factorisation has both bases");
        let misfit = &self.design * &c - rhs;
        let residual = misfit
            .as_slice()
            .chunks(6)
            .map(|m| m.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        Expansion { coefficients: c.iter().copied().collect(), residual }
    }

    pub fn expand_field<F: Field>(&self, f: &F, points: &[Point6]) -> Expansion {
        let values: Vec<Point6> = points.iter().map(|p| f.eval(p)).collect();
        self.expand(&values)
    }
}

/// Constant coefficients `c` minimising `Σ‖v_k − Σ c_i basis_i(p_k)‖²`.
pub fn expand_in_basis<F: Field>(samples: &[(Point6, Point6)], basis: &[F]) -> Result<Expansion, LieError> {
    let points: Vec<Point6> = samples.iter().map(|s| s.0).collect();
    let values: Vec<Point6> = samples.iter().map(|s| s.1).collect();
    Ok(SpanFit::new(&points, basis)?.expand(&values))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub row: Gen,
    pub col: Gen,
    pub expected: Combo,
    pub found: Combo,
    pub coefficient_error: f64,
    pub residual: f64,
}

/// Measured agreement of one bracket with its tabulated entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellResult {
    pub row: Gen,
    pub col: Gen,
    pub coefficient_error: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub table: String,
    pub pairs: usize,
    /// Every cell in row-major order of the table's basis.
    pub cells: Vec<CellResult>,
    pub max_coefficient_error: f64,
    pub max_residual: f64,
    pub failures: Vec<CellFailure>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Computes every bracket of the table's basis at `n_points` sample points,
/// expands it in that basis and compares with the tabulated entry.
pub fn verify_structure_table(table: &StructureTable, n_points: usize, tol: f64) -> Result<TableReport, LieError> {
    verify_structure_table_seeded(table, n_points, tol, 0x5eed)
}

/// As [`verify_structure_table`], with the sample points drawn from `seed`.
pub fn verify_structure_table_seeded(
    table: &StructureTable,
    n_points: usize,
    tol: f64,
    seed: u64,
) -> Result<TableReport, LieError> {
    let points = sample_points(n_points, seed);
    let fit = SpanFit::new(&points, &table.order)?;
    let mut report = TableReport {
        table: table.name.clone(),
        pairs: 0,
        cells: Vec::with_capacity(table.dim() * table.dim()),
        max_coefficient_error: 0.0,
        max_residual: 0.0,
        failures: Vec::new(),
    };
    for (i, &a) in table.order.iter().enumerate() {
        for (j, &b) in table.order.iter().enumerate() {
            report.pairs += 1;
            let e = fit.expand_field(&Bracket(a, b), &points);
            let expected = table.cell(i, j);
            let mut found = [0.0; 15];
            let mut err: f64 = 0.0;
            for (k, g) in table.order.iter().enumerate() {
                found[g.index()] = e.coefficients[k];
            }
            for (f, x) in found.iter().zip(expected) {
                err = err.max((f - *x as f64).abs());
            }
            report.cells.push(CellResult { row: a, col: b, coefficient_error: err, residual: e.residual });
            report.max_coefficient_error = report.max_coefficient_error.max(err);
            report.max_residual = report.max_residual.max(e.residual);
            if err >= tol || e.residual >= tol {
                report.failures.push(CellFailure {
                    row: a,
                    col: b,
                    expected: Combo::from_coefficients(&expected.map(|k| k as f64)),
                    found: Combo::from_coefficients(&found.map(|c| if c.abs() < tol { 0.0 } else { c })),
                    coefficient_error: err,
                    residual: e.residual,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOURTEEN: [Gen; 14] = [
        Gen::B1,
        Gen::D2,
        Gen::B2,
        Gen::D1,
        Gen::L,
        Gen::P5,
        Gen::B3,
        Gen::B4,
        Gen::B5,
        Gen::B6,
        Gen::P1,
        Gen::P2,
        Gen::P3,
        Gen::P4,
    ];

    struct Quadratic;
    impl Field for Quadratic {
        fn eval<S: fieldcore::Scalar>(&self, p: &[S; 6]) -> [S; 6] {
            let z = S::zero();
            [p[0] * p[0], z, z, z, z, z]
        }
    }

    fn sampled<F: Field>(f: &F, pts: &[Point6]) -> Vec<(Point6, Point6)> {
        pts.iter().map(|p| (*p, f.eval(p))).collect()
    }

    #[test]
    fn samples_avoid_the_velocity_origin() {
        let pts = sample_points(500, 2);
        assert!(pts.iter().all(|p| p[4].abs() + p[5].abs() >= 0.1));
        assert!(pts.iter().flatten().all(|c| c.abs() <= 2.0));
    }

    #[test]
    fn multiple_of_a_basis_element() {
        let pts = sample_points(40, 1);
        let two_b1 = Combo::new(vec![(2.0, Gen::B1)]);
        let e = expand_in_basis(&sampled(&two_b1, &pts), &FOURTEEN).unwrap();
        assert!((e.coefficients[0] - 2.0).abs() < 1e-10);
        assert!(e.residual < 1e-10);
    }

    #[test]
    fn bracket_lands_on_one_generator() {
        let pts = sample_points(40, 1);
        let e = expand_in_basis(&sampled(&Bracket(Gen::B3, Gen::B2), &pts), &FOURTEEN).unwrap();
        let b6 = FOURTEEN.iter().position(|&g| g == Gen::B6).unwrap();
        for (k, c) in e.coefficients.iter().enumerate() {
            let want = if k == b6 { -1.0 } else { 0.0 };
            assert!((c - want).abs() < 1e-10);
        }
        assert!(e.residual < IN_SPAN);
    }

    #[test]
    fn field_outside_the_span() {
        let pts = sample_points(40, 1);
        let e = expand_in_basis(&sampled(&Quadratic, &pts), &FOURTEEN).unwrap();
        assert!(e.residual > 0.1 && e.residual > OUT_OF_SPAN);
    }

    #[test]
    fn too_few_samples_and_rank_loss() {
        let pts = sample_points(10, 1);
        assert!(matches!(expand_in_basis(&sampled(&Gen::P1, &pts), &FOURTEEN), Err(LieError::TooFewSamples { .. })));
        let pts = sample_points(40, 1);
        let dup = [Gen::P1, Gen::P2, Gen::P1];
        assert!(matches!(expand_in_basis(&sampled(&Gen::P1, &pts), &dup), Err(LieError::Conditioning { .. })));
    }
}
