//! Built-in arbitrary functions that solution families are parametrised by.

use std::fmt;
use std::str::FromStr;

use fieldcore::Dual;

use crate::real::Real;
use crate::SolutionError;

/// A smooth function of one variable, selectable by name.
#[derive(Debug, Clone, PartialEq)]
pub enum ArbFn {
    /// `½·arcsin(x)`.
    ArcsinHalf,
    Identity,
    /// `cn(1/(1 + cosh(atan(b·x))), ρ)`: a bump taking values in (−1, 1].
    CnBump { b: f64, rho: f64 },
    /// `a·exp(−s·x)`.
    ExpDecay { a: f64, s: f64 },
    /// Polynomial with coefficients in ascending order.
    Poly(Vec<f64>),
}

impl ArbFn {
    pub fn eval<S: Real>(&self, x: S) -> S {
        match self {
            ArbFn::ArcsinHalf => x.asin() * 0.5,
            ArbFn::Identity => x,
            ArbFn::CnBump { b, rho } => {
                let chi = S::one() / ((x * *b).atan().cosh() + 1.0);
                chi.sn_cn_dn(rho * rho).1
            }
            ArbFn::ExpDecay { a, s } => (x * -*s).exp() * *a,
            ArbFn::Poly(c) => c.iter().rev().fold(S::zero(), |acc, &ci| acc * x + ci),
        }
    }

    /// First derivative, exact to rounding.
    pub fn deriv<S: Real>(&self, x: S) -> S {
        self.eval(Dual::var(x)).eps
    }

    pub fn name(&self) -> &'static str {
        match self {
            ArbFn::ArcsinHalf => "arcsin_half",
            ArbFn::Identity => "identity",
            ArbFn::CnBump { .. } => "cn_bump",
            ArbFn::ExpDecay { .. } => "exp_decay",
            ArbFn::Poly(_) => "poly",
        }
    }

    fn validate(self) -> Result<Self, SolutionError> {
        if let ArbFn::CnBump { rho, .. } = self {
            if !(0.0..1.0).contains(&(rho * rho)) {
                return Err(SolutionError::InvalidParam {
                    name: "rho".into(),
                    reason: format!("modulus {rho} needs 0 ≤ ρ² < 1"),
                });
            }
        }
        Ok(self)
    }
}

impl fmt::Display for ArbFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArbFn::ArcsinHalf | ArbFn::Identity => f.write_str(self.name()),
            ArbFn::CnBump { b, rho } => write!(f, "cn_bump({b},{rho})"),
            ArbFn::ExpDecay { a, s } => write!(f, "exp_decay({a},{s})"),
            ArbFn::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly({})", parts.join(","))
            }
        }
    }
}

/// Parses `name` or `name(arg, ...)`; arguments are numbers, optionally
/// written `key=value`, and `pi` may appear as a factor (`4pi`, `4*pi`).
impl FromStr for ArbFn {
    type Err = SolutionError;

    fn from_str(s: &str) -> Result<Self, SolutionError> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], parse_args(&s[i + 1..s.len() - 1])?),
            Some(_) => return Err(SolutionError::UnknownFunction(s.into())),
            None => (s, Vec::new()),
        };
        let arity = |n: usize| -> Result<(), SolutionError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(SolutionError::InvalidParam {
                    name: name.into(),
                    reason: format!("expected {n} arguments, got {}", args.len()),
                })
            }
        };
        let f = match name.trim() {
            "arcsin_half" => {
                arity(0)?;
                ArbFn::ArcsinHalf
            }
            "identity" => {
                arity(0)?;
                ArbFn::Identity
            }
            "cn_bump" => {
                arity(2)?;
                ArbFn::CnBump { b: args[0], rho: args[1] }
            }
            "exp_decay" => {
                arity(2)?;
                ArbFn::ExpDecay { a: args[0], s: args[1] }
            }
            "poly" if !args.is_empty() => ArbFn::Poly(args),
            _ => return Err(SolutionError::UnknownFunction(s.into())),
        };
        f.validate()
    }
}

fn parse_args(list: &str) -> Result<Vec<f64>, SolutionError> {
    list.split(',')
        .filter(|a| !a.trim().is_empty())
        .map(|a| {
            let a = a.trim();
            let value = a.split_once('=').map_or(a, |(_, v)| v.trim());
            parse_number(value).ok_or_else(|| SolutionError::InvalidParam {
                name: a.into(),
                reason: "not a number".into(),
            })
        })
        .collect()
}

/// A float, or a float times `pi`.
pub(crate) fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(head) = s.strip_suffix("pi") {
        let head = head.trim_end_matches('*').trim();
        return match head {
            "" => Some(std::f64::consts::PI),
            "-" => Some(-std::f64::consts::PI),
            h => h.parse::<f64>().ok().map(|v| v * std::f64::consts::PI),
        };
    }
    s.parse().ok()
}
