//! Side-by-side evaluation of formulas as originally printed and as
//! corrected here. Each probe returns the worst residual of both readings
//! over a few interior points; a probe documents a correction when the
//! printed reading fails and the corrected one passes.

use fieldcore::{numeric_jet_default, pde_residual, Dual, PlasticState, Scalar};

use crate::funcs::ArbFn;
use crate::profile::{denominator, SimilarityProfile};
use crate::{make_solution, Family, Params, Solution, SolutionError};

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub id: &'static str,
    pub family: Option<Family>,
    /// What is measured, e.g. "max |pde residual|".
    pub measure: &'static str,
    pub printed: f64,
    pub corrected: f64,
    pub tol: f64,
}

impl Probe {
    /// The printed reading fails and the corrected one passes.
    pub fn confirms_correction(&self) -> bool {
        !(self.printed < self.tol) && self.corrected < self.tol
    }
}

const PDE: &str = "max |pde residual|";

fn worst_residual<F>(field: F, pts: &[(f64, f64)]) -> f64
where
    F: Fn(f64, f64) -> Result<PlasticState, SolutionError>,
{
    pts.iter()
        .map(|&(x, y)| match numeric_jet_default(&field, x, y).and_then(|j| pde_residual(&j)) {
            Ok(r) => r.iter().fold(0f64, |m, v| m.max(v.abs())),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn worst_analytic(s: &Solution, pts: &[(f64, f64)]) -> f64 {
    pts.iter()
        .map(|&(x, y)| match s.jet(x, y).map_err(|_| ()).and_then(|j| pde_residual(&j).map_err(|_| ())) {
            Ok(r) => r.iter().fold(0f64, |m, v| m.max(v.abs())),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn probe(id: &'static str, family: Family, printed: f64, s: &Solution, pts: &[(f64, f64)]) -> Probe {
    Probe {
        id,
        family: Some(family),
        measure: PDE,
        printed,
        corrected: worst_analytic(s, pts),
        tol: family.residual_tolerance(),
    }
}

/// Every probe, evaluated.
pub fn all_probes() -> Result<Vec<Probe>, SolutionError> {
    Ok(vec![
        k_pis_angle()?,
        polar_angle_half_argument()?,
        b1_relation_without_t()?,
        similarity_pressure()?,
        similarity_pressure_gradient()?,
        profile_relation_sign()?,
        profile_ode()?,
        c1nz_add_b_velocity()?,
        c1nz_mul_b_velocity()?,
        c1z_add_b_velocity()?,
        c1z_mul_a_velocity()?,
        c1z_mul_c_constants()?,
    ])
}

const QUADRANT: [(f64, f64); 4] = [(0.8, 0.3), (0.5, 1.1), (1.3, 0.9), (0.6, 0.45)];

/// Angle of the partially invariant solution with `xy` where `2xy` belongs.
pub fn k_pis_angle() -> Result<Probe, SolutionError> {
    let params = Params::new().with("c2", -1.0).with("c3", -2.0).with("c4", 4.0).with("c5", 1.0);
    let s = make_solution(Family::KPis, &params)?;
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            st.theta = -0.5 * ((x * x - y * y) / (x * y)).atan();
            Ok(st)
        },
        &QUADRANT,
    );
    Ok(probe("k-pis-angle", Family::KPis, printed, &s, &QUADRANT))
}

/// `½ arctan(2xy/(x² − y²))` equals the polar angle only for |y| < |x|;
/// beyond the diagonals it is off by π/2, which flips the pressure
/// equations.
pub fn polar_angle_half_argument() -> Result<Probe, SolutionError> {
    let s = make_solution(Family::SimC1zAddB, &Params::new())?;
    let pts = [(0.4, 0.9), (0.3, -1.1), (0.5, 1.4)];
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            st.theta = 0.5 * (2.0 * x * y / (x * x - y * y)).atan();
            Ok(st)
        },
        &pts,
    );
    Ok(probe("polar-angle-half-argument", Family::SimC1zAddB, printed, &s, &pts))
}

/// Velocity relations printed with the argument `ux + yv` in place of
/// `T(ux + yv)`; for `T = ½ arcsin` the velocity direction then disagrees
/// with θ.
pub fn b1_relation_without_t() -> Result<Probe, SolutionError> {
    let s = make_solution(Family::B1Implicit, &Params::new())?;
    let pts = [(0.05, 0.02), (-0.04, 0.06), (0.08, -0.05)];
    let c1 = 5.0;
    let printed = worst_residual(
        |x, y| {
            // u = c1 cos ξ, v = c1 sin ξ with ξ = ux + vy: angle φ = ξ.
            let st = s.state(x, y)?;
            let mut phi = st.theta;
            for _ in 0..100 {
                phi = c1 * (x * phi.cos() + y * phi.sin());
            }
            let theta = ArbFn::ArcsinHalf.eval(phi);
            Ok(PlasticState::new(theta, theta, c1 * phi.cos(), c1 * phi.sin()))
        },
        &pts,
    );
    Ok(probe("b1-relation-without-t", Family::B1Implicit, printed, &s, &pts))
}

fn profile_solution(family: Family) -> Result<Solution, SolutionError> {
    make_solution(family, &Params::new())
}

/// Pressure of the similarity solution without the `∫ cos 2J dξ` term.
pub fn similarity_pressure() -> Result<Probe, SolutionError> {
    let s = profile_solution(Family::SimC1nzAddA)?;
    let p = s.profile().expect("profile family").clone();
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            let xi = y / x;
            let j = st.theta;
            st.sigma = 0.5 * (xi * (2.0 * j).cos() - (2.0 * j).sin() - 2.0 * p.c1() * x.ln());
            Ok(st)
        },
        &QUADRANT,
    );
    Ok(probe("similarity-pressure", Family::SimC1nzAddA, printed, &s, &QUADRANT))
}

/// Pressure gradient printed with `cos J` and `sin ξ` in place of `cos 2J`
/// and `sin 2J`. Measured as the worst mismatch against the gradient of
/// the closed-form pressure.
pub fn similarity_pressure_gradient() -> Result<Probe, SolutionError> {
    let s = profile_solution(Family::SimC1nzAddA)?;
    let p = s.profile().expect("profile family");
    let (mut printed, mut corrected) = (0f64, 0f64);
    for &(x, y) in &QUADRANT {
        let jet = s.jet(x, y)?;
        let xi = y / x;
        let j = jet.state.theta;
        let jp = p.j_prime(xi, j);
        let printed_x = (jp / x) * (-xi * j.cos() + xi.sin());
        let printed_y = -(jp / x) * (xi * j.sin() + j.cos());
        let fixed_x = (jp / x) * ((2.0 * j).sin() - xi * (2.0 * j).cos());
        let fixed_y = -(jp / x) * (xi * (2.0 * j).sin() + (2.0 * j).cos());
        printed = printed.max((jet.d_x.sigma - printed_x).abs()).max((jet.d_y.sigma - printed_y).abs());
        corrected = corrected.max((jet.d_x.sigma - fixed_x).abs()).max((jet.d_y.sigma - fixed_y).abs());
    }
    Ok(Probe {
        id: "similarity-pressure-gradient",
        family: Some(Family::SimC1nzAddA),
        measure: "max |σ gradient mismatch|",
        printed,
        corrected,
        tol: 1e-8,
    })
}

/// The implicit profile relation with the printed sign of the tangent
/// term: its solutions do not keep the first integral constant.
pub fn profile_relation_sign() -> Result<Probe, SolutionError> {
    let p = SimilarityProfile::new(-0.5, 0.0)?;
    let (c1, c2) = (p.c1(), p.c2());
    let s = (1.0 - c1 * c1).sqrt();
    // Printed: ξ = (T c1 + T t + t s)/(s − T t c1 + T), T = tanh(s (J − c2)/c1).
    let printed_xi = |j: Dual<f64>| {
        let t = j.tan();
        let tt = ((j - c2) * (s / c1)).tanh();
        (tt * c1 + tt * t + t * s) / (tt * (-c1) * t + tt + s)
    };
    let (mut printed, mut corrected) = (0f64, 0f64);
    for j in [0.3, 0.6, 0.9, 1.2] {
        let d = printed_xi(Dual::var(j));
        printed = printed.max((denominator(d.re, j) / d.eps - c1).abs());
        let d = p.xi_of(Dual::var(j));
        corrected = corrected.max((denominator(d.re, j) / d.eps - c1).abs());
    }
    Ok(Probe {
        id: "profile-relation-sign",
        family: None,
        measure: "max |first integral − c1|",
        printed,
        corrected,
        tol: 1e-8,
    })
}

/// Second-order ODE for J printed with `cos J` and `−2 sin 2J` where
/// differentiating the first integral gives `cos 2J` and `−2ξ sin 2J`.
pub fn profile_ode() -> Result<Probe, SolutionError> {
    let p = SimilarityProfile::new(-0.5, 0.0)?;
    let (mut printed, mut corrected) = (0f64, 0f64);
    for xi in [0.3, 0.8, 2.0, 5.0] {
        let x = Dual::new(Dual::var(xi), Dual::constant(1.0));
        let j = p.j(x)?;
        let (j0, j1, j2) = (j.re.re, j.re.eps, j.eps.eps);
        let (s2, c2) = (2.0 * j0).sin_cos();
        let r = denominator(xi, j0) * j2
            + 2.0 * (xi * s2 + j0.cos()) * j1
            + 2.0 * (-2.0 * s2 + (xi * xi - 1.0) * c2) * j1 * j1;
        printed = printed.max(r.abs());
        corrected = corrected.max(crate::reduced::profile_ode_residual(&p, xi)?.abs());
    }
    Ok(Probe {
        id: "profile-ode",
        family: None,
        measure: "max |ODE residual|",
        printed,
        corrected,
        tol: 1e-8,
    })
}

/// Velocity `v` of the additive family (b) printed with `c1` where `2c1`
/// belongs.
pub fn c1nz_add_b_velocity() -> Result<Probe, SolutionError> {
    let s = profile_solution(Family::SimC1nzAddB)?;
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            let (c1, c4) = (-0.5, 1.0);
            st.v = -c4 * (c1 + 1.0) * (2.0 * st.theta).cos() / c1;
            Ok(st)
        },
        &QUADRANT,
    );
    Ok(probe("c1nz-add-b-velocity", Family::SimC1nzAddB, printed, &s, &QUADRANT))
}

/// Velocity `v` of the multiplicative family (b) printed with an
/// independent constant where the scale `c4` of `u` is required.
pub fn c1nz_mul_b_velocity() -> Result<Probe, SolutionError> {
    let s = profile_solution(Family::SimC1nzMulB)?;
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            let (c1, omega1) = (-0.5, 2.0);
            st.v = 0.5 * omega1 * (2.0 * st.theta).cos() / c1;
            Ok(st)
        },
        &QUADRANT,
    );
    Ok(probe("c1nz-mul-b-velocity", Family::SimC1nzMulB, printed, &s, &QUADRANT))
}

/// Velocity `v` of the c1 = 0 additive family (b) printed as
/// `−K′ + ξK + xH + c` where incompressibility requires `ξK′ − K + xH + c`.
pub fn c1z_add_b_velocity() -> Result<Probe, SolutionError> {
    let s = make_solution(Family::SimC1zAddB, &Params::new())?;
    let h = ArbFn::ExpDecay { a: 2.0, s: 0.1 };
    let k = ArbFn::Identity;
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            let xi = y / x;
            st.v = -k.deriv(xi) + xi * k.eval(xi) + x * h.eval(x * x + y * y);
            Ok(st)
        },
        &QUADRANT,
    );
    Ok(probe("c1z-add-b-velocity", Family::SimC1zAddB, printed, &s, &QUADRANT))
}

/// Velocity `u` of the c1 = 0 multiplicative family (a) as printed, with
/// the quadrature term `−(y/x) Q ∫ ((ξ² + 1)Q′ + ξQ)/ξ dξ`.
pub fn c1z_mul_a_velocity() -> Result<Probe, SolutionError> {
    let s = make_solution(Family::SimC1zMulA, &Params::new())?;
    let p = ArbFn::ExpDecay { a: 1.0, s: 0.5 };
    let q = ArbFn::Poly(vec![0.0, 1.0, 0.5]);
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            let xi = y / x;
            let g = |t: f64| ((t * t + 1.0) * q.deriv(t) + t * q.eval(t)) / t;
            let integral = crate::quadrature::integrate(
                |t| Ok(g(t)),
                1.0,
                xi,
                crate::quadrature::QuadOptions::default(),
            )?
            .value;
            st.u = y * p.eval(x * x + y * y) - xi * q.eval(xi) * integral;
            Ok(st)
        },
        &QUADRANT,
    );
    Ok(probe("c1z-mul-a-velocity", Family::SimC1zMulA, printed, &s, &QUADRANT))
}

/// Independent constants `c3 ≠ c4` in the rotational family.
pub fn c1z_mul_c_constants() -> Result<Probe, SolutionError> {
    let s = make_solution(Family::SimC1zMulC, &Params::new().with("c3", 1.5).with("omega2", 0.7))?;
    let printed = worst_residual(
        |x, y| {
            let mut st = s.state(x, y)?;
            st.v = -2.5 * x * (x * x + y * y).powf(0.35);
            Ok(st)
        },
        &QUADRANT,
    );
    let rejected = make_solution(Family::SimC1zMulC, &Params::new().with("c3", 1.5).with("c4", 2.5));
    debug_assert!(rejected.is_err());
    Ok(probe("c1z-mul-c-constants", Family::SimC1zMulC, printed, &s, &QUADRANT))
}
