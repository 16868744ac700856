use std::f64::consts::PI;
use std::sync::Arc;

use fieldcore::{Dual, FieldJet, PlasticState, QuasiRandom};

use crate::b1::B1Model;
use crate::funcs::ArbFn;
use crate::profile::{PhiIntegrand, PsiIntegrand, SimilarityProfile, XI_ANCHOR};
use crate::quadrature::lifted;
use crate::real::{Integrand, Real};
use crate::{Family, Params, SolutionError, DOMAIN_GUARD};

/// Clearance from singular sets required of sample points.
const SAMPLE_CLEARANCE: f64 = 0.05;

/// An instance of a solution family with fixed constants.
#[derive(Debug, Clone)]
pub struct Solution {
    family: Family,
    params: Params,
    model: Model,
}

#[derive(Debug, Clone)]
enum Model {
    Rigid { b: [f64; 3], sigma0: f64, theta0: f64 },
    B1(B1Model),
    KPis { c: [f64; 5] },
    /// θ = atan(y/x), σ = c2 − θ, with one of the velocity fields below.
    PolarAngle { c2: f64, velocity: PolarVelocity },
    /// θ = J(y/x) on a similarity profile.
    Profile { p: Arc<SimilarityProfile>, c3: f64, velocity: ProfileVelocity },
}

#[derive(Debug, Clone)]
enum PolarVelocity {
    AddA { omega: f64, u0: f64, v0: f64, f: ArbFn },
    AddB { u0: f64, v0: f64, h: ArbFn, k: ArbFn },
    MulA { u0: f64, v0: f64, p: ArbFn, q: ArbFn },
    MulB { v0: f64, f: ArbFn },
    MulC { c3: f64, omega2: f64 },
}

#[derive(Debug, Clone, Copy)]
enum ProfileVelocity {
    AddA([f64; 5]),
    AddB([f64; 3]),
    MulA([f64; 4]),
    MulB([f64; 3]),
}

/// Builds a family instance, filling defaults and validating constants.
pub fn make_solution(family: Family, params: &Params) -> Result<Solution, SolutionError> {
    let p = params.resolve(family.schema())?;
    let n = |name: &str| p.num(name);
    let f = |name: &str| p.func(name).clone();
    let model = match family {
        Family::Rigid => Model::Rigid {
            b: [n("b1"), n("b2"), n("b3")],
            sigma0: n("sigma0"),
            theta0: n("theta0"),
        },
        Family::B1Implicit => {
            if n("c1") == 0.0 {
                return Err(invalid("c1", "a zero speed leaves nothing to solve for"));
            }
            Model::B1(B1Model { c1: n("c1"), c2: n("c2"), t: f("T") })
        }
        Family::KPis => Model::KPis { c: [n("c1"), n("c2"), n("c3"), n("c4"), n("c5")] },
        Family::SimC1zAddA => polar(
            n("c2"),
            PolarVelocity::AddA { omega: n("omega"), u0: n("u0"), v0: n("v0"), f: f("F") },
        ),
        Family::SimC1zAddB => {
            polar(n("c2"), PolarVelocity::AddB { u0: n("u0"), v0: n("v0"), h: f("H"), k: f("K") })
        }
        Family::SimC1zMulA => {
            polar(n("c2"), PolarVelocity::MulA { u0: n("u0"), v0: n("v0"), p: f("P"), q: f("Q") })
        }
        Family::SimC1zMulB => polar(n("c2"), PolarVelocity::MulB { v0: n("v0"), f: f("F") }),
        Family::SimC1zMulC => {
            if n("c4") != n("c3") {
                return Err(invalid(
                    "c4",
                    "must equal c3: the velocities are incompressible and compatible with the angle only then",
                ));
            }
            polar(n("c2"), PolarVelocity::MulC { c3: n("c3"), omega2: n("omega2") })
        }
        Family::SimC1nzAddA
        | Family::SimC1nzAddB
        | Family::SimC1nzMulA
        | Family::SimC1nzMulB => {
            let profile = SimilarityProfile::new(n("c1"), n("c2"))?;
            let velocity = match family {
                Family::SimC1nzAddA => {
                    ProfileVelocity::AddA([n("c4"), n("c5"), n("c6"), n("c7"), n("c8")])
                }
                Family::SimC1nzAddB => ProfileVelocity::AddB([n("c4"), n("c5"), n("c6")]),
                Family::SimC1nzMulA => ProfileVelocity::MulA([n("c4"), n("c5"), n("c6"), n("c7")]),
                _ => ProfileVelocity::MulB([n("c4"), n("c5"), n("c6")]),
            };
            Model::Profile { p: Arc::new(profile), c3: n("c3"), velocity }
        }
    };
    Ok(Solution { family, params: p, model })
}

fn polar(c2: f64, velocity: PolarVelocity) -> Model {
    Model::PolarAngle { c2, velocity }
}

fn invalid(name: &str, reason: &str) -> SolutionError {
    SolutionError::InvalidParam { name: name.into(), reason: reason.into() }
}

/// `Q′(s)/s`.
struct QPrimeOverS<'a>(&'a ArbFn);
impl Integrand for QPrimeOverS<'_> {
    fn at<S: Real>(&self, s: S) -> S {
        self.0.deriv(s) / s
    }
}

/// `s·F′(s)`.
struct SFPrime<'a>(&'a ArbFn);
impl Integrand for SFPrime<'_> {
    fn at<S: Real>(&self, s: S) -> S {
        self.0.deriv(s) * s
    }
}

impl Model {
    /// Signed distance-like measure to the singular set; positive inside.
    fn clearance(&self, x: f64, y: f64) -> f64 {
        match self {
            Model::Rigid { .. } => f64::INFINITY,
            Model::B1(m) => B1Model::PRINCIPAL_RADIUS / m.c1.abs() - x.hypot(y),
            Model::KPis { .. } => x.hypot(y),
            Model::PolarAngle { velocity: PolarVelocity::MulA { .. }, .. } => {
                if x * y > 0.0 {
                    x.abs().min(y.abs())
                } else {
                    -1.0
                }
            }
            Model::PolarAngle { .. } => x.abs(),
            Model::Profile { p, .. } => {
                if x <= 0.0 || y <= 0.0 {
                    return -1.0;
                }
                let (lo, hi) = p.range();
                let xi = y / x;
                x.min(y).min(xi - lo).min(hi - xi)
            }
        }
    }

    fn sample_box(&self) -> [(f64, f64); 2] {
        match self {
            Model::Rigid { .. } => [(-2.0, 2.0), (-2.0, 2.0)],
            Model::B1(m) => {
                let h = 0.6 / m.c1.abs();
                [(-h, h), (-h, h)]
            }
            Model::KPis { .. } => [(-1.5, 1.5), (-1.5, 1.5)],
            Model::PolarAngle { velocity: PolarVelocity::MulA { .. }, .. } => [(0.2, 1.5), (0.2, 1.5)],
            Model::PolarAngle { .. } => [(0.2, 1.5), (-1.5, 1.5)],
            Model::Profile { .. } => [(0.4, 1.5), (0.2, 1.5)],
        }
    }

    /// `[σ, θ, u, v]` at `(x, y)`.
    fn fields<S: Real>(&self, x: S, y: S, hint: Option<f64>) -> Result<[S; 4], SolutionError> {
        let c = S::cst;
        match self {
            Model::Rigid { b, sigma0, theta0 } => {
                Ok([c(*sigma0), c(*theta0), y * b[0] + b[1], x * -b[0] + b[2]])
            }
            Model::B1(m) => m.fields(x, y, hint),
            Model::KPis { c: k } => {
                let r2 = x * x + y * y;
                let theta = (y * y - x * x).atan2(x * y * 2.0) * 0.5;
                let sigma = r2.ln() * -0.5 + k[0];
                let u = x * k[1] / r2 + y * k[2] + k[3];
                let v = y * k[1] / r2 - x * k[2] + k[4];
                Ok([sigma, theta, u, v])
            }
            Model::PolarAngle { c2, velocity } => {
                let xi = y / x;
                let theta = xi.atan();
                let eta = x * x + y * y;
                let (u, v) = match velocity {
                    PolarVelocity::AddA { omega, u0, v0, f } => {
                        let fp = f.deriv(xi);
                        (y * -*omega + fp + *u0, x * *omega + xi * fp - f.eval(xi) + *v0)
                    }
                    PolarVelocity::AddB { u0, v0, h, k } => {
                        let kp = k.deriv(xi);
                        let he = h.eval(eta);
                        (kp - y * he + *u0, xi * kp - k.eval(xi) + x * he + *v0)
                    }
                    PolarVelocity::MulA { u0, v0, p, q } => {
                        let pe = p.eval(eta);
                        let integral = lifted(&QPrimeOverS(q), XI_ANCHOR, xi)?;
                        (y * pe + integral + *u0, q.eval(xi) - x * pe + *v0)
                    }
                    PolarVelocity::MulB { v0, f } => {
                        (f.eval(xi), lifted(&SFPrime(f), XI_ANCHOR, xi)? + *v0)
                    }
                    PolarVelocity::MulC { c3, omega2 } => {
                        let scale = eta.powf(0.5 * omega2) * *c3;
                        (y * scale, -(x * scale))
                    }
                };
                Ok([c(*c2) - theta, theta, u, v])
            }
            Model::Profile { p, c3, velocity } => {
                let c1 = p.c1();
                let xi = y / x;
                let j = p.j(xi)?;
                let c2j = (j * 2.0).cos();
                let sigma = p.sigma(x, y, j, *c3)?;
                let phi = || lifted(&PhiIntegrand(p), XI_ANCHOR, xi);
                let (u, v) = match *velocity {
                    ProfileVelocity::AddA([c4, c5, c6, c7, c8]) => {
                        let psi = lifted(&PsiIntegrand(p), XI_ANCHOR, xi)?;
                        (
                            c2j * (-c5 / (2.0 * c1)) + phi()? * (c6 / c1) + y.ln() * c6 - y * c4 + c7,
                            x.ln() * c5 + x * c4 + psi * (c5 / c1) - c2j * (c6 / (2.0 * c1)) + c8,
                        )
                    }
                    ProfileVelocity::AddB([c4, c5, c6]) => {
                        let k = c4 * (c1 + 1.0);
                        (y.ln() * k + phi()? * (k / c1) + c5, c2j * (-k / (2.0 * c1)) + c6)
                    }
                    ProfileVelocity::MulA([c4, c5, c6, c7]) => (
                        phi()? * (2.0 * c4) + y * c5 + y.ln() * (2.0 * c1 * c4) + c6,
                        x * -c5 - c2j * c4 + c7,
                    ),
                    ProfileVelocity::MulB([c4, c5, c6]) => {
                        (y.ln() * -c4 - phi()? * (c4 / c1) + c5, c2j * (c4 / (2.0 * c1)) + c6)
                    }
                };
                Ok([sigma, j, u, v])
            }
        }
    }
}

impl Solution {
    pub fn family(&self) -> Family {
        self.family
    }

    /// All constants and functions, defaults included.
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// The angle profile, for the similarity families with `c1 ≠ 0`.
    pub fn profile(&self) -> Option<&SimilarityProfile> {
        match &self.model {
            Model::Profile { p, .. } => Some(p),
            _ => None,
        }
    }

    /// Whether `(x, y)` lies in the declared domain (singular sets excluded
    /// with a guard band).
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x.is_finite() && y.is_finite() && self.model.clearance(x, y) > DOMAIN_GUARD
    }

    /// Box from which interior sample points are drawn.
    pub fn sample_region(&self) -> [(f64, f64); 2] {
        self.model.sample_box()
    }

    /// `n` quasi-random points of the sample region, kept a fixed distance
    /// away from singular sets and where the fields evaluate.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<(f64, f64)> {
        let bounds = self.sample_region();
        let mut q = QuasiRandom::new(2, seed);
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0;
        while out.len() < n && attempts < 100 * n {
            attempts += 1;
            let p = q.next_in(&bounds);
            let (x, y) = (p[0], p[1]);
            if self.model.clearance(x, y) > SAMPLE_CLEARANCE && self.state(x, y).is_ok() {
                out.push((x, y));
            }
        }
        out
    }

    /// Generic evaluation `[σ, θ, u, v]` on any scalar type.
    pub fn eval<S: Real>(&self, x: S, y: S) -> Result<[S; 4], SolutionError> {
        if !self.contains(x.re(), y.re()) {
            return Err(SolutionError::Domain { x: x.re(), y: y.re() });
        }
        self.model.fields(x, y, None)
    }

    pub fn state(&self, x: f64, y: f64) -> Result<PlasticState, SolutionError> {
        self.jet_with(x, y, None, false).map(|j| j.state)
    }

    /// Value and analytic first derivatives at `(x, y)`.
    pub fn jet(&self, x: f64, y: f64) -> Result<FieldJet, SolutionError> {
        self.jet_with(x, y, None, true)
    }

    /// Like [`Solution::jet`], but on the angle branch nearest to
    /// `theta_hint`. For the implicit family this continues the root from
    /// the hint, reaching branches away from the origin; elsewhere θ is
    /// shifted by a multiple of π.
    pub fn jet_near(&self, x: f64, y: f64, theta_hint: f64) -> Result<FieldJet, SolutionError> {
        self.jet_with(x, y, Some(theta_hint), true)
    }

    pub fn state_near(&self, x: f64, y: f64, theta_hint: f64) -> Result<PlasticState, SolutionError> {
        self.jet_with(x, y, Some(theta_hint), false).map(|j| j.state)
    }

    fn jet_with(
        &self,
        x: f64,
        y: f64,
        hint: Option<f64>,
        derivatives: bool,
    ) -> Result<FieldJet, SolutionError> {
        let b1 = matches!(self.model, Model::B1(_));
        let inside = if b1 && hint.is_some() {
            x.is_finite() && y.is_finite()
        } else {
            self.contains(x, y)
        };
        if !inside {
            return Err(SolutionError::Domain { x, y });
        }
        let b1_hint = if b1 { hint } else { None };
        let mut jet = if derivatives {
            let fx = self.model.fields(Dual::var(x), Dual::constant(y), b1_hint)?;
            let fy = self.model.fields(Dual::constant(x), Dual::var(y), b1_hint)?;
            let re = |f: &[Dual<f64>; 4]| PlasticState::new(f[0].re, f[1].re, f[2].re, f[3].re);
            let eps = |f: &[Dual<f64>; 4]| PlasticState::new(f[0].eps, f[1].eps, f[2].eps, f[3].eps);
            FieldJet { state: re(&fx), d_x: eps(&fx), d_y: eps(&fy) }
        } else {
            let f = self.model.fields(x, y, b1_hint)?;
            FieldJet { state: PlasticState::new(f[0], f[1], f[2], f[3]), ..FieldJet::default() }
        };
        if let (Some(h), false) = (hint, b1) {
            jet.state.theta += PI * ((h - jet.state.theta) / PI).round();
        }
        if !jet.is_finite() {
            return Err(SolutionError::Domain { x, y });
        }
        Ok(jet)
    }
}
