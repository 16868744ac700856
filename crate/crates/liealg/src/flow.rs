//! One-parameter groups generated by the named fields.

use fieldcore::Scalar;

use crate::generator::{Field, Gen};
use crate::LieError;

/// Agreement required between an RK4 run and the run with half the step.
pub const FLOW_TOL: f64 = 1e-12;
const MAX_STEPS: usize = 1 << 16;

fn rk4<S: Scalar, F: Field>(f: &F, p: [S; 6], t: f64, n: usize) -> [S; 6] {
    let h = t / n as f64;
    let add = |a: &[S; 6], b: &[S; 6], k: f64| -> [S; 6] { std::array::from_fn(|i| a[i] + b[i] * k) };
    let mut y = p;
    for _ in 0..n {
        let k1 = f.eval(&y);
        let k2 = f.eval(&add(&y, &k1, h / 2.0));
        let k3 = f.eval(&add(&y, &k2, h / 2.0));
        let k4 = f.eval(&add(&y, &k3, h));
        y = std::array::from_fn(|i| y[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0));
    }
    y
}

/// Integrates `dp/dt = f(p)` with classical RK4, halving the step until two
/// successive runs agree to [`FLOW_TOL`] (relative to the state size). The
/// step sequence depends on the `f64` parts only, so dual inputs
/// differentiate the discrete flow exactly.
pub fn integrate_flow<S: Scalar, F: Field>(f: &F, p: [S; 6], t: f64) -> Result<[S; 6], LieError> {
    if t == 0.0 {
        return Ok(p);
    }
    let mut n = 8;
    let mut coarse = rk4(f, p, t, n);
    while n < MAX_STEPS {
        n *= 2;
        let fine = rk4(f, p, t, n);
        let scale = 1.0 + fine.iter().map(|c| c.re().abs()).fold(0.0, f64::max);
        let gap = fine.iter().zip(&coarse).map(|(a, b)| (a.re() - b.re()).abs()).fold(0.0, f64::max);
        if !gap.is_finite() {
            break;
        }
        if gap < FLOW_TOL * scale {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(LieError::StepSize { steps: n })
}

/// `exp(t·g)` applied to `p`: closed forms for every generator except `K`,
/// whose flow is integrated numerically.
pub fn flow<S: Scalar>(g: Gen, p: [S; 6], t: f64) -> Result<[S; 6], LieError> {
    let [x, y, s, th, u, v] = p;
    let (s2, c2) = (th * 2.0).sin_cos();
    let (hs, hc) = (s2 * 0.5, c2 * 0.5);
    let (e, (sn, cs)) = (t.exp(), t.sin_cos());
    Ok(match g {
        Gen::P1 => [x + t, y, s, th, u, v],
        Gen::P2 => [x, y + t, s, th, u, v],
        Gen::P3 => [x, y, s, th, u + t, v],
        Gen::P4 => [x, y, s, th, u, v + t],
        Gen::P5 => [x, y, s + t, th, u, v],
        Gen::D1 => [x * e, y * e, s, th, u * e, v * e],
        Gen::D2 => [x * e, y * e, s, th, u / e, v / e],
        Gen::L => [x * cs - y * sn, x * sn + y * cs, s, th + t, u * cs - v * sn, u * sn + v * cs],
        Gen::B1 => [x - v * t, y + u * t, s, th, u, v],
        Gen::B2 => [x, y, s, th, u + y * t, v - x * t],
        // σ and θ are invariant along B3–B6, so these are straight lines.
        Gen::B3 => [x + (s + hs) * t, y - hc * t, s, th, u, v],
        Gen::B4 => [x - hc * t, y + (s - hs) * t, s, th, u, v],
        Gen::B5 => [x, y, s, th, u + (s - hs) * t, v + hc * t],
        Gen::B6 => [x, y, s, th, u + hc * t, v + (s + hs) * t],
        Gen::K => return integrate_flow(&Gen::K, p, t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fieldcore::Dual;

    const P: [f64; 6] = [0.4, -0.9, 0.3, 0.6, 1.1, -0.7];

    fn close(a: &[f64; 6], b: &[f64; 6], tol: f64) -> bool {
        a.iter().zip(b).all(|(p, q)| (p - q).abs() < tol)
    }

    #[test]
    fn zero_time_is_identity() {
        for g in Gen::ALL {
            assert_eq!(flow(g, P, 0.0).unwrap(), P);
        }
    }

    #[test]
    fn translation_moves_one_coordinate() {
        let q = flow(Gen::P1, P, 0.25).unwrap();
        assert_eq!(q, [0.65, -0.9, 0.3, 0.6, 1.1, -0.7]);
    }

    #[test]
    fn closed_forms_match_integration() {
        for g in Gen::ALL {
            let exact = flow(g, P, 0.8).unwrap();
            let num = integrate_flow(&g, P, 0.8).unwrap();
            assert!(close(&exact, &num, 1e-10), "{g}: {exact:?} vs {num:?}");
        }
    }

    #[test]
    fn k_flow_to_first_order() {
        let p = [0.8, -0.5, 0.0, 0.0, 1.2, 0.4];
        let t = 1e-4;
        let q = flow(Gen::K, p, t).unwrap();
        let lin = [p[0] * (1.0 - t / 2.0), p[1] * (1.0 + t / 2.0), 0.0, 0.0, p[4] * (1.0 + t / 2.0), p[5] * (1.0 - t / 2.0)];
        assert!(close(&q, &lin, 1e-7));
    }

    #[test]
    fn k_moves_stress_hyperbolically() {
        let q = flow(Gen::K, P, 1.3).unwrap();
        let (s, th) = (P[2], P[3]);
        assert!((q[2] - (s * 1.3f64.cosh() + th * 1.3f64.sinh())).abs() < 1e-11);
        assert!((q[3] - (th * 1.3f64.cosh() + s * 1.3f64.sinh())).abs() < 1e-11);
    }

    #[test]
    fn group_law() {
        for g in Gen::ALL {
            let two = flow(g, flow(g, P, 0.4).unwrap(), -0.9).unwrap();
            let one = flow(g, P, -0.5).unwrap();
            assert!(close(&two, &one, 1e-9), "{g}");
        }
    }

    #[test]
    fn dual_inputs_give_the_flow_jacobian() {
        let h = 1e-6;
        for dir in 0..6 {
            let seeded: [Dual<f64>; 6] = std::array::from_fn(|i| Dual::new(P[i], if i == dir { 1.0 } else { 0.0 }));
            let d = flow(Gen::K, seeded, 0.7).unwrap().map(|c| c.eps);
            let (mut pp, mut pm) = (P, P);
            pp[dir] += h;
            pm[dir] -= h;
            let (fp, fm) = (flow(Gen::K, pp, 0.7).unwrap(), flow(Gen::K, pm, 0.7).unwrap());
            for i in 0..6 {
                assert!(((fp[i] - fm[i]) / (2.0 * h) - d[i]).abs() < 1e-5);
            }
        }
    }
}
