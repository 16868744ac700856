use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::Scalar;

/// Forward-mode dual number `re + eps·ε` with `ε² = 0`.
///
/// `T` is itself a [`Scalar`], so `Dual<Dual<f64>>` carries mixed second
/// derivatives: seed the inner and outer infinitesimals with two directions
/// and read `x.eps.eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    /// A variable with unit derivative.
    pub fn var(re: T) -> Self {
        Dual { re, eps: T::one() }
    }

    pub fn constant(re: T) -> Self {
        Dual { re, eps: T::zero() }
    }

    /// Apply a function with value `f` and derivative `df` at `self.re`.
    #[inline]
    fn chain(self, f: T, df: T) -> Self {
        Dual { re: f, eps: df * self.eps }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = T::one() / o.re;
        let q = self.re * inv;
        Dual::new(q, (self.eps - q * o.eps) * inv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> Add<f64> for Dual<T> {
    type Output = Self;
    fn add(self, o: f64) -> Self {
        Dual::new(self.re + o, self.eps)
    }
}

impl<T: Scalar> Sub<f64> for Dual<T> {
    type Output = Self;
    fn sub(self, o: f64) -> Self {
        Dual::new(self.re - o, self.eps)
    }
}

impl<T: Scalar> Mul<f64> for Dual<T> {
    type Output = Self;
    fn mul(self, o: f64) -> Self {
        Dual::new(self.re * o, self.eps * o)
    }
}

impl<T: Scalar> Div<f64> for Dual<T> {
    type Output = Self;
    fn div(self, o: f64) -> Self {
        Dual::new(self.re / o, self.eps / o)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn cst(v: f64) -> Self {
        Dual::constant(T::cst(v))
    }
    fn re(&self) -> f64 {
        self.re.re()
    }
    fn sin(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(s, c)
    }
    fn cos(self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.chain(c, -s)
    }
    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = self.re.sin_cos();
        (self.chain(s, c), self.chain(c, -s))
    }
    fn tan(self) -> Self {
        let t = self.re.tan();
        self.chain(t, t * t + 1.0)
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.re.ln(), T::one() / self.re)
    }
    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        self.chain(r, T::one() / (r * 2.0))
    }
    fn atan(self) -> Self {
        self.chain(self.re.atan(), T::one() / (self.re * self.re + 1.0))
    }
    fn asin(self) -> Self {
        let d = (-(self.re * self.re) + 1.0).sqrt();
        self.chain(self.re.asin(), T::one() / d)
    }
    fn sinh(self) -> Self {
        self.chain(self.re.sinh(), self.re.cosh())
    }
    fn cosh(self) -> Self {
        self.chain(self.re.cosh(), self.re.sinh())
    }
    fn tanh(self) -> Self {
        let t = self.re.tanh();
        self.chain(t, -(t * t) + 1.0)
    }
    fn powf(self, p: f64) -> Self {
        self.chain(self.re.powf(p), self.re.powf(p - 1.0) * p)
    }
    fn atan2(self, x: Self) -> Self {
        let y = self;
        let r2 = x.re * x.re + y.re * y.re;
        Dual::new(y.re.atan2(x.re), (x.re * y.eps - y.re * x.eps) / r2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = Dual<f64>;
    type DD = Dual<Dual<f64>>;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-6;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn elementary_derivatives_match_differences() {
        let x = 0.37;
        let cases: Vec<(fn(D) -> D, fn(f64) -> f64)> = vec![
            (|a| a.sin(), f64::sin),
            (|a| a.cos(), f64::cos),
            (|a| a.tan(), f64::tan),
            (|a| a.exp(), f64::exp),
            (|a| a.ln(), f64::ln),
            (|a| a.sqrt(), f64::sqrt),
            (|a| a.atan(), f64::atan),
            (|a| a.asin(), f64::asin),
            (|a| a.sinh(), f64::sinh),
            (|a| a.cosh(), f64::cosh),
            (|a| a.tanh(), f64::tanh),
            (|a| a.powf(2.5), |a| a.powf(2.5)),
            (|a| a / (a * a + 1.0), |a| a / (a * a + 1.0)),
        ];
        for (fdual, freal) in cases {
            let d = fdual(D::var(x));
            assert!((d.re - freal(x)).abs() < 1e-15);
            assert!((d.eps - fd(freal, x)).abs() < 1e-8, "{:?}", d);
        }
    }

    #[test]
    fn atan2_partials() {
        let (x, y) = (-0.6, 0.8);
        let dy = D::var(y).atan2(D::constant(x));
        let dx = D::constant(y).atan2(D::var(x));
        assert!((dy.eps - x / (x * x + y * y)).abs() < 1e-14);
        assert!((dx.eps + y / (x * x + y * y)).abs() < 1e-14);
    }

    #[test]
    fn nested_dual_gives_second_derivative() {
        // f(x) = sin(x)·x³  ⇒  f'' = −sin x·x³ + 6x² cos x + 6x sin x
        let x = 0.9;
        let v: DD = Dual::new(Dual::var(x), Dual::constant(1.0));
        let f = v.sin() * v.powi(3);
        let expect = -x.sin() * x.powi(3) + 6.0 * x * x * x.cos() + 6.0 * x * x.sin();
        assert!((f.eps.eps - expect).abs() < 1e-12);
        assert!((f.re.eps - f.eps.re).abs() < 1e-14);
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let d = D::var(2.0).powi(-2);
        assert!((d.re - 0.25).abs() < 1e-15);
        assert!((d.eps + 0.25).abs() < 1e-15);
    }
}
