//! The two infinite-dimensional families of symmetries: spatial fields
//! `ξ(σ, θ)∂x + η(σ, θ)∂y` and velocity fields `φ(σ, θ)∂u + ψ(σ, θ)∂v`,
//! each admissible when its coefficients solve a pair of quasilinear PDEs.

use std::f64::consts::FRAC_PI_2;

use fieldcore::{Dual, Scalar};

use crate::generator::{Field, Gen};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfiniteFamily {
    /// Acts on `(x, y)`.
    Spatial,
    /// Acts on `(u, v)`.
    Velocity,
}

impl InfiniteFamily {
    fn sign(self) -> f64 {
        match self {
            InfiniteFamily::Spatial => 1.0,
            InfiniteFamily::Velocity => -1.0,
        }
    }

    /// Slots of the generator vector the family occupies.
    pub fn slots(self) -> (usize, usize) {
        match self {
            InfiniteFamily::Spatial => (0, 1),
            InfiniteFamily::Velocity => (4, 5),
        }
    }

    /// Residuals of the two constraints at `(σ, θ)`:
    /// `f_σ ∓ (cos2θ f_θ + sin2θ g_θ)` and `f_θ ∓ (cos2θ f_σ + sin2θ g_σ)`,
    /// with the upper sign for the spatial family.
    pub fn residuals<F>(self, pair: &F, sigma: f64, theta: f64) -> [f64; 2]
    where
        F: Fn(Dual<f64>, Dual<f64>) -> [Dual<f64>; 2],
    {
        let along_s = pair(Dual::var(sigma), Dual::constant(theta));
        let along_t = pair(Dual::constant(sigma), Dual::var(theta));
        let (f_s, g_s) = (along_s[0].eps, along_s[1].eps);
        let (f_t, g_t) = (along_t[0].eps, along_t[1].eps);
        let (s2, c2) = (2.0 * theta).sin_cos();
        let k = self.sign();
        [f_s - k * (c2 * f_t + s2 * g_t), f_t - k * (c2 * f_s + s2 * g_s)]
    }
}

/// Largest constraint residual over an `n × n` grid of
/// `(σ, θ) ∈ [−2, 2] × [−π/2, π/2]`.
pub fn verify_infinite_family<F>(which: InfiniteFamily, pair: F, n: usize) -> f64
where
    F: Fn(Dual<f64>, Dual<f64>) -> [Dual<f64>; 2],
{
    let at = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * k as f64 / (n.max(2) - 1) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let r = which.residuals(&pair, at(i, -2.0, 2.0), at(j, -FRAC_PI_2, FRAC_PI_2));
            worst = worst.max(r[0].abs()).max(r[1].abs());
        }
    }
    worst
}

/// The coefficient pair of a named generator in the slots of `which`,
/// as a function of `(σ, θ)` alone (the other coordinates set to zero).
pub fn generator_pair(g: Gen, which: InfiniteFamily) -> impl Fn(Dual<f64>, Dual<f64>) -> [Dual<f64>; 2] {
    let (a, b) = which.slots();
    move |s, t| {
        let z = Dual::<f64>::zero();
        let c = g.eval(&[z, z, s, t, z, z]);
        [c[a], c[b]]
    }
}

/// Named generators that are members of the family.
pub fn members(which: InfiniteFamily) -> [Gen; 4] {
    match which {
        InfiniteFamily::Spatial => [Gen::P1, Gen::P2, Gen::B3, Gen::B4],
        InfiniteFamily::Velocity => [Gen::P3, Gen::P4, Gen::B5, Gen::B6],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translations_are_members() {
        let unit = |_s: Dual<f64>, _t: Dual<f64>| [Dual::constant(1.0), Dual::constant(0.0)];
        assert_eq!(verify_infinite_family(InfiniteFamily::Spatial, unit, 20), 0.0);
        assert_eq!(verify_infinite_family(InfiniteFamily::Velocity, unit, 20), 0.0);
    }

    #[test]
    fn named_members_satisfy_their_constraints() {
        for which in [InfiniteFamily::Spatial, InfiniteFamily::Velocity] {
            for g in members(which) {
                assert!(verify_infinite_family(which, generator_pair(g, which), 20) < 1e-12, "{g}");
            }
        }
    }

    #[test]
    fn members_of_one_family_fail_the_other() {
        let r = verify_infinite_family(InfiniteFamily::Velocity, generator_pair(Gen::B3, InfiniteFamily::Spatial), 20);
        assert!(r > 0.5);
        let r = verify_infinite_family(InfiniteFamily::Spatial, generator_pair(Gen::B5, InfiniteFamily::Velocity), 20);
        assert!(r > 0.5);
    }

    #[test]
    fn written_out_b3_and_b5() {
        let b3 = |s: Dual<f64>, t: Dual<f64>| [s + (t * 2.0).sin() * 0.5, -(t * 2.0).cos() * 0.5];
        assert!(verify_infinite_family(InfiniteFamily::Spatial, b3, 20) < 1e-12);
        let b5 = |s: Dual<f64>, t: Dual<f64>| [s - (t * 2.0).sin() * 0.5, (t * 2.0).cos() * 0.5];
        assert!(verify_infinite_family(InfiniteFamily::Velocity, b5, 20) < 1e-12);
    }
}
