use std::f64::consts::PI;

use crate::FieldError;

/// Mean pressure σ, angle θ and velocity (u, v) at one point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlasticState {
    pub sigma: f64,
    pub theta: f64,
    pub u: f64,
    pub v: f64,
}

impl PlasticState {
    pub const ZERO: PlasticState = PlasticState { sigma: 0.0, theta: 0.0, u: 0.0, v: 0.0 };

    pub fn new(sigma: f64, theta: f64, u: f64, v: f64) -> Self {
        PlasticState { sigma, theta, u, v }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.sigma, self.theta, self.u, self.v]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        PlasticState::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn speed(&self) -> f64 {
        self.u.hypot(self.v)
    }

    /// Same state with θ folded into (−π/2, π/2]. The governing equations
    /// only see 2θ, so this is a reporting convenience.
    pub fn normalized(self) -> Self {
        PlasticState { theta: normalize_angle(self.theta), ..self }
    }

    pub(crate) fn combine(terms: &[(f64, PlasticState)]) -> Self {
        let mut out = [0.0; 4];
        for (w, s) in terms {
            for (o, c) in out.iter_mut().zip(s.to_array()) {
                *o += w * c;
            }
        }
        PlasticState::from_array(out)
    }
}

/// Fold an angle into (−π/2, π/2].
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(PI);
    if t > PI / 2.0 {
        t -= PI;
    }
    t
}

/// A state together with its first partial derivatives in x and y.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldJet {
    pub state: PlasticState,
    pub d_x: PlasticState,
    pub d_y: PlasticState,
}

impl FieldJet {
    pub fn is_finite(&self) -> bool {
        self.state.is_finite() && self.d_x.is_finite() && self.d_y.is_finite()
    }

    /// Largest componentwise difference, relative to `max(1, |entry|)`.
    pub fn max_rel_diff(&self, other: &FieldJet) -> f64 {
        let a = [self.state, self.d_x, self.d_y];
        let b = [other.state, other.d_x, other.d_y];
        let mut worst: f64 = 0.0;
        for (sa, sb) in a.iter().zip(b.iter()) {
            for (p, q) in sa.to_array().iter().zip(sb.to_array()) {
                worst = worst.max((p - q).abs() / p.abs().max(q.abs()).max(1.0));
            }
        }
        worst
    }
}

/// Velocity of the rigid material entering (or leaving) the plastic zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedVelocity {
    pub u0: f64,
    pub v0: f64,
}

impl FeedVelocity {
    pub fn new(u0: f64, v0: f64) -> Result<Self, FieldError> {
        if !(u0.is_finite() && v0.is_finite()) {
            return Err(FieldError::NonFinite { what: "feed velocity" });
        }
        if u0 == 0.0 && v0 == 0.0 {
            return Err(FieldError::ZeroFeed);
        }
        Ok(FeedVelocity { u0, v0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_folding_lands_in_half_open_interval() {
        assert_eq!(normalize_angle(PI / 2.0), PI / 2.0);
        assert!((normalize_angle(-PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert!((normalize_angle(3.0) - (3.0 - PI)).abs() < 1e-15);
        assert!((normalize_angle(0.2 + 7.0 * PI) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn zero_feed_rejected() {
        assert_eq!(FeedVelocity::new(0.0, 0.0), Err(FieldError::ZeroFeed));
        assert!(FeedVelocity::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn combine_is_linear() {
        let a = PlasticState::new(1.0, 2.0, 3.0, 4.0);
        let b = PlasticState::new(-1.0, 0.5, 0.0, 2.0);
        let c = PlasticState::combine(&[(2.0, a), (-1.0, b)]);
        assert_eq!(c, PlasticState::new(3.0, 3.5, 6.0, 6.0));
    }
}
