//! The angle profile `θ = J(y/x)` of the similarity solutions with a
//! nonzero first integral
//!
//! ```text
//! ((ξ² − 1) sin2J + 2ξ cos2J) J′ = c1,
//! ```
//!
//! whose general solution is known in the inverse form `ξ = ξ(J)`.

use fieldcore::{Dual, Scalar};

use crate::newton::{lift_root, solve_bracketed};
use crate::quadrature::lifted;
use crate::real::{Integrand, Real};
use crate::SolutionError;

/// Anchor of the profile branch and lower limit of its integrals.
pub const XI_ANCHOR: f64 = 1.0;
const GRID: usize = 40_000;
const XI_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Regime {
    /// |c1| > 1: circular tangent.
    Circular,
    /// |c1| < 1: hyperbolic tangent.
    Hyperbolic,
    /// |c1| = 1: linear.
    Linear,
}

/// One monotone branch of `J(ξ)` through the anchor `ξ = 1`.
#[derive(Debug, Clone)]
pub struct SimilarityProfile {
    c1: f64,
    c2: f64,
    regime: Regime,
    s: f64,
    /// `(ξ, J)` samples, ξ strictly increasing.
    table: Vec<(f64, f64)>,
}

/// `(ξ² − 1) sin2J + 2ξ cos2J`, the coefficient of `J′` in the first integral.
pub fn denominator<S: Scalar>(xi: S, j: S) -> S {
    let (s2, c2) = (j * 2.0).sin_cos();
    (xi * xi - 1.0) * s2 + xi * c2 * 2.0
}

impl SimilarityProfile {
    pub fn new(c1: f64, c2: f64) -> Result<Self, SolutionError> {
        if c1 == 0.0 || !c1.is_finite() {
            return Err(SolutionError::InvalidParam {
                name: "c1".into(),
                reason: "the similarity profile needs a finite nonzero c1".into(),
            });
        }
        if !c2.is_finite() {
            return Err(SolutionError::InvalidParam { name: "c2".into(), reason: "must be finite".into() });
        }
        let (regime, s) = if (c1.abs() - 1.0).abs() < 1e-12 {
            (Regime::Linear, 1.0)
        } else if c1.abs() > 1.0 {
            (Regime::Circular, (c1 * c1 - 1.0).sqrt())
        } else {
            (Regime::Hyperbolic, (1.0 - c1 * c1).sqrt())
        };
        let mut p = SimilarityProfile { c1, c2, regime, s, table: Vec::new() };
        p.table = p.build_table()?;
        Ok(p)
    }

    #[cfg(test)]
    fn inverse_only(c1: f64, c2: f64) -> Self {
        let (regime, s) = if (c1.abs() - 1.0).abs() < 1e-12 {
            (Regime::Linear, 1.0)
        } else if c1.abs() > 1.0 {
            (Regime::Circular, (c1 * c1 - 1.0).sqrt())
        } else {
            (Regime::Hyperbolic, (1.0 - c1 * c1).sqrt())
        };
        SimilarityProfile { c1, c2, regime, s, table: Vec::new() }
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Inverse of the profile: the ξ at which the solution takes angle `j`.
    pub fn xi_of<S: Scalar>(&self, j: S) -> S {
        let t = j.tan();
        let arg = (j - self.c2) / self.c1;
        let big_t = match self.regime {
            Regime::Circular => (arg * self.s).tan(),
            Regime::Hyperbolic => (arg * self.s).tanh(),
            Regime::Linear => arg,
        };
        (big_t * self.c1 + big_t * t - t * self.s) / (big_t - self.s - big_t * t * self.c1)
    }

    /// `J′(ξ)` from the first integral.
    pub fn j_prime<S: Scalar>(&self, xi: S, j: S) -> S {
        S::cst(self.c1) / denominator(xi, j)
    }

    /// ξ-interval covered by this branch.
    pub fn range(&self) -> (f64, f64) {
        (self.table[0].0, self.table[self.table.len() - 1].0)
    }

    /// The `(ξ, J)` samples, increasing in ξ.
    pub fn table(&self) -> &[(f64, f64)] {
        &self.table
    }

    /// Scans J-windows of growing half-width around c2 until one contains a
    /// branch through the anchor: for |c1| > 1 the inverse is only
    /// quasi-periodic and the anchor may be reached far from c2.
    fn build_table(&self) -> Result<Vec<(f64, f64)>, SolutionError> {
        let pi = std::f64::consts::PI;
        for half_width in [pi, 4.0 * pi, 16.0 * pi] {
            let n = GRID * (half_width / pi) as usize;
            if let Some(table) = self.scan(half_width, n) {
                return Ok(table);
            }
        }
        Err(SolutionError::Branch { at: XI_ANCHOR })
    }

    fn scan(&self, half_width: f64, grid: usize) -> Option<Vec<(f64, f64)>> {
        let h = 2.0 * half_width / grid as f64;
        let samples: Vec<(f64, f64)> = (0..=grid)
            .map(|i| {
                let j = self.c2 - half_width + h * i as f64;
                (self.xi_of(j), j)
            })
            .collect();
        // Runs of consecutive grid segments on which ξ is finite, bounded
        // and strictly monotone with one sign of dξ/dJ.
        let usable = |xi: f64| xi.is_finite() && xi.abs() < XI_LIMIT;
        let sign = |k: usize| {
            let (a, b) = (samples[k].0, samples[k + 1].0);
            if usable(a) && usable(b) && a != b {
                (b - a).signum()
            } else {
                0.0
            }
        };
        let mut runs: Vec<&[(f64, f64)]> = Vec::new();
        let mut k = 0;
        while k < grid {
            let sg = sign(k);
            if sg == 0.0 {
                k += 1;
                continue;
            }
            let start = k;
            while k < grid && sign(k) == sg {
                k += 1;
            }
            runs.push(&samples[start..=k]);
        }
        // Among runs through the anchor, take the one whose J-interval lies
        // closest to c2, then the longest.
        let distance = |run: &[(f64, f64)]| {
            let (ja, jb) = (run[0].1, run[run.len() - 1].1);
            (ja - self.c2).max(self.c2 - jb).max(0.0)
        };
        let best = runs
            .into_iter()
            .filter(|run| {
                let (a, b) = (run[0].0, run[run.len() - 1].0);
                a.min(b) < XI_ANCHOR && XI_ANCHOR < a.max(b)
            })
            .min_by(|p, q| {
                distance(p).total_cmp(&distance(q)).then(q.len().cmp(&p.len()))
            });
        let mut table = best?.to_vec();
        if table[0].0 > table[table.len() - 1].0 {
            table.reverse();
        }
        Some(table)
    }

    /// `J(ξ)` on this branch, with the relative residual `|ξ(J) − ξ|/max(1, |ξ|)`.
    pub fn solve(&self, xi: f64) -> Result<(f64, f64), SolutionError> {
        let (lo, hi) = self.range();
        if !(xi >= lo && xi <= hi) {
            return Err(SolutionError::Branch { at: xi });
        }
        let i = self.table.partition_point(|&(x, _)| x <= xi).clamp(1, self.table.len() - 1);
        let (ja, jb) = (self.table[i - 1].1, self.table[i].1);
        let g = |j: f64| {
            let d = self.xi_of(Dual::var(j));
            (d.re - xi, d.eps)
        };
        let mut j = solve_bracketed(g, ja, jb, 1e-15)?;
        let scale = xi.abs().max(1.0);
        for _ in 0..3 {
            let (r, dr) = g(j);
            if r.abs() <= 1e-13 * scale || dr == 0.0 {
                break;
            }
            let next = j - r / dr;
            if g(next).0.abs() >= r.abs() {
                break;
            }
            j = next;
        }
        Ok((j, g(j).0.abs() / scale))
    }

    /// `J(ξ)` carrying derivatives of `xi`.
    pub fn j<S: Real>(&self, xi: S) -> Result<S, SolutionError> {
        let (root, _) = self.solve(xi.re())?;
        Ok(lift_root(|j| self.xi_of(j) - Dual::constant(xi), root, 2))
    }

    fn quad<I: Integrand>(&self, f: &I, a: f64, b: f64) -> Result<f64, SolutionError> {
        lifted(f, a, b)
    }

    /// Mean pressure `½(ξ cos2J − sin2J) − ½∫_{1}^{ξ} cos2J dξ − c1 ln x + c3`
    /// at `(x, y)`, given the angle `j = J(y/x)` already evaluated.
    pub fn sigma<S: Real>(&self, x: S, y: S, j: S, c3: f64) -> Result<S, SolutionError> {
        let xi = y / x;
        let (s2, c2) = (j * 2.0).sin_cos();
        let cos_int = lifted(&CosIntegrand(self), XI_ANCHOR, xi)?;
        Ok((xi * c2 - s2) * 0.5 - cos_int * 0.5 - x.ln() * self.c1 + c3)
    }

    /// `∫_{a}^{b} sin(2J) J′/ξ dξ`.
    pub fn quad_phi(&self, a: f64, b: f64) -> Result<f64, SolutionError> {
        if a == b {
            return Ok(0.0);
        }
        self.check_interval(a, b)?;
        self.quad(&PhiIntegrand(self), a, b)
    }

    /// `∫_{a}^{b} ξ sin(2J) J′ dξ`.
    pub fn quad_psi(&self, a: f64, b: f64) -> Result<f64, SolutionError> {
        self.check_interval(a, b)?;
        self.quad(&PsiIntegrand(self), a, b)
    }

    /// `∫_{a}^{b} cos(2J) dξ`.
    pub fn quad_cos(&self, a: f64, b: f64) -> Result<f64, SolutionError> {
        self.check_interval(a, b)?;
        self.quad(&CosIntegrand(self), a, b)
    }

    fn check_interval(&self, a: f64, b: f64) -> Result<(), SolutionError> {
        let (lo, hi) = self.range();
        for v in [a, b] {
            if !(v >= lo && v <= hi) || v == 0.0 {
                return Err(SolutionError::Branch { at: v });
            }
        }
        if a.min(b) <= 0.0 && a.max(b) >= 0.0 {
            return Err(SolutionError::Branch { at: 0.0 });
        }
        Ok(())
    }

    fn j_or_nan<S: Real>(&self, xi: S) -> S {
        self.j(xi).unwrap_or(S::cst(f64::NAN))
    }
}

/// `J(ξ)` on the given branch.
pub fn similarity_j(xi: f64, profile: &SimilarityProfile) -> Result<f64, SolutionError> {
    profile.solve(xi).map(|(j, _)| j)
}

/// `∫_{xi0}^{xi1} sin(2J(ξ)) J′(ξ)/ξ dξ`.
pub fn quad_phi(xi0: f64, xi1: f64, profile: &SimilarityProfile) -> Result<f64, SolutionError> {
    profile.quad_phi(xi0, xi1)
}

pub(crate) struct PhiIntegrand<'a>(pub &'a SimilarityProfile);
pub(crate) struct PsiIntegrand<'a>(pub &'a SimilarityProfile);
pub(crate) struct CosIntegrand<'a>(pub &'a SimilarityProfile);

impl Integrand for PhiIntegrand<'_> {
    fn at<S: Real>(&self, xi: S) -> S {
        let j = self.0.j_or_nan(xi);
        (j * 2.0).sin() * self.0.j_prime(xi, j) / xi
    }
}

impl Integrand for PsiIntegrand<'_> {
    fn at<S: Real>(&self, xi: S) -> S {
        let j = self.0.j_or_nan(xi);
        (j * 2.0).sin() * self.0.j_prime(xi, j) * xi
    }
}

impl Integrand for CosIntegrand<'_> {
    fn at<S: Real>(&self, xi: S) -> S {
        (self.0.j_or_nan(xi) * 2.0).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_profile() -> SimilarityProfile {
        SimilarityProfile::new(-0.5, 0.0).unwrap()
    }

    #[test]
    fn inverse_satisfies_first_integral_in_every_regime() {
        for c1 in [2.0, 0.5, -0.5, 1.0, -1.0, 0.2] {
            let p = SimilarityProfile::inverse_only(c1, 0.1);
            for j in [0.3, 0.7, 1.2, -0.4] {
                let d = p.xi_of(Dual::var(j));
                if !d.re.is_finite() || d.eps == 0.0 {
                    continue;
                }
                let first_integral = denominator(d.re, j) / d.eps;
                assert!((first_integral - c1).abs() < 1e-9 * c1.abs().max(1.0), "c1={c1} J={j}");
            }
        }
    }

    #[test]
    fn default_branch_covers_expected_range() {
        let p = default_profile();
        let (lo, hi) = p.range();
        assert!((0.0..1e-6).contains(&lo), "lo = {lo}");
        assert!(hi > 100.0, "hi = {hi}");
        let t = p.table();
        assert!(t.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1));
    }

    #[test]
    fn solve_meets_residual_and_hits_table() {
        let p = default_profile();
        for xi in [0.05, 0.4, 1.0, 2.5, 17.0, 120.0] {
            let (j, res) = p.solve(xi).unwrap();
            assert!(res < 1e-12, "xi={xi} residual {res}");
            assert!((p.xi_of(j) - xi).abs() / xi.max(1.0) < 1e-12);
        }
        assert!(matches!(p.solve(1e9), Err(SolutionError::Branch { .. })));
        assert!(matches!(p.solve(-1.0), Err(SolutionError::Branch { .. })));
    }

    #[test]
    fn lifted_derivative_is_first_integral_slope() {
        let p = default_profile();
        for xi in [0.3, 1.0, 4.0] {
            let j = p.j(Dual::var(xi)).unwrap();
            assert!((denominator(xi, j.re) * j.eps - p.c1()).abs() < 1e-12);
        }
    }

    #[test]
    fn anchor_branch_exists_in_every_regime() {
        for c1 in [2.0, 0.5, -0.5, 1.0, -1.0, 0.2, -3.0] {
            let p = SimilarityProfile::new(c1, 0.0).unwrap();
            let (j, res) = p.solve(XI_ANCHOR).unwrap();
            assert!(res < 1e-12, "c1={c1} J={j}");
        }
    }

    #[test]
    fn rejects_zero_c1() {
        assert!(SimilarityProfile::new(0.0, 0.0).is_err());
    }

    #[test]
    fn phi_is_additive_and_vanishes_on_empty_interval() {
        let p = default_profile();
        assert_eq!(p.quad_phi(1.3, 1.3).unwrap(), 0.0);
        let ab = p.quad_phi(0.5, 1.0).unwrap();
        let bc = p.quad_phi(1.0, 3.0).unwrap();
        let ac = p.quad_phi(0.5, 3.0).unwrap();
        assert!((ab + bc - ac).abs() < 2e-10);
        assert!(p.quad_phi(-0.5, 1.0).is_err());
    }
}
