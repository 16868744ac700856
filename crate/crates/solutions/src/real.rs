//! Scalar extensions needed by the solution formulas: Jacobi elliptic
//! functions, and lifting of numerically computed primitives so that
//! quadrature-defined terms still carry exact derivatives.

use fieldcore::{Dual, Scalar};

use crate::elliptic;

/// A function of one variable that can be evaluated on any [`Real`].
pub trait Integrand {
    fn at<S: Real>(&self, s: S) -> S;
}

pub trait Real: Scalar {
    /// Jacobi `(sn, cn, dn)` with parameter `m = k²`, `0 ≤ m < 1`.
    fn sn_cn_dn(self, m: f64) -> (Self, Self, Self);

    /// A value `F(self)` known only as a number, whose derivative `F'` is
    /// available as `f`. Derivative parts are propagated exactly.
    fn lift_primitive<F: Integrand>(self, value: f64, f: &F) -> Self;
}

impl Real for f64 {
    fn sn_cn_dn(self, m: f64) -> (f64, f64, f64) {
        elliptic::sn_cn_dn(self, m)
    }

    fn lift_primitive<F: Integrand>(self, value: f64, _f: &F) -> f64 {
        value
    }
}

impl<T: Real> Real for Dual<T> {
    fn sn_cn_dn(self, m: f64) -> (Self, Self, Self) {
        let (s, c, d) = self.re.sn_cn_dn(m);
        (
            Dual::new(s, c * d * self.eps),
            Dual::new(c, -(s * d) * self.eps),
            Dual::new(d, -(s * c) * m * self.eps),
        )
    }

    fn lift_primitive<F: Integrand>(self, value: f64, f: &F) -> Self {
        Dual::new(self.re.lift_primitive(value, f), f.at(self.re) * self.eps)
    }
}

/// Derivative of `f` at `x` by one forward-mode pass.
pub fn derivative<S: Real>(f: impl Fn(Dual<S>) -> Dual<S>, x: S) -> S {
    f(Dual::var(x)).eps
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cube;
    impl Integrand for Cube {
        fn at<S: Real>(&self, s: S) -> S {
            s * s * s
        }
    }

    #[test]
    fn lifted_primitive_carries_first_and_second_derivative() {
        // F(x) = x⁴/4 has F' = x³ and F'' = 3x².
        let x = 1.3;
        let v: Dual<Dual<f64>> = Dual::new(Dual::var(x), Dual::constant(1.0));
        let lifted = v.lift_primitive(x.powi(4) / 4.0, &Cube);
        assert!((lifted.re.re - x.powi(4) / 4.0).abs() < 1e-15);
        assert!((lifted.re.eps - x.powi(3)).abs() < 1e-14);
        assert!((lifted.eps.eps - 3.0 * x * x).abs() < 1e-14);
    }

    #[test]
    fn elliptic_derivative_matches_difference() {
        let (u, m) = (0.7, 0.25);
        let d = Dual::var(u).sn_cn_dn(m).1.eps;
        let h = 1e-6;
        let fd = (elliptic::sn_cn_dn(u + h, m).1 - elliptic::sn_cn_dn(u - h, m).1) / (2.0 * h);
        assert!((d - fd).abs() < 1e-9);
    }
}
