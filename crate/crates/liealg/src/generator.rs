use std::fmt;
use std::str::FromStr;

use fieldcore::{Dual, Scalar};

use crate::LieError;

/// Coordinates `(x, y, σ, θ, u, v)` of the space the generators act on.
pub type Point6 = [f64; 6];

pub const X: usize = 0;
pub const Y: usize = 1;
pub const SIGMA: usize = 2;
pub const THETA: usize = 3;
pub const U: usize = 4;
pub const V: usize = 5;

/// A vector field on the six-dimensional space, written once for every
/// scalar type so that derivatives come from dual numbers.
pub trait Field {
    fn eval<S: Scalar>(&self, p: &[S; 6]) -> [S; 6];
}

/// The fifteen named point-symmetry generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    P1,
    P2,
    P3,
    P4,
    P5,
    D1,
    D2,
    L,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    K,
}

impl Gen {
    pub const ALL: [Gen; 15] = [
        Gen::P1,
        Gen::P2,
        Gen::P3,
        Gen::P4,
        Gen::P5,
        Gen::D1,
        Gen::D2,
        Gen::L,
        Gen::B1,
        Gen::B2,
        Gen::B3,
        Gen::B4,
        Gen::B5,
        Gen::B6,
        Gen::K,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; 15] =
            ["P1", "P2", "P3", "P4", "P5", "D1", "D2", "L", "B1", "B2", "B3", "B4", "B5", "B6", "K"];
        NAMES[self.index()]
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gen {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, LieError> {
        Gen::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| LieError::UnknownGenerator(s.to_string()))
    }
}

impl Field for Gen {
    fn eval<S: Scalar>(&self, p: &[S; 6]) -> [S; 6] {
        let [x, y, s, t, u, v] = *p;
        let (z, o) = (S::zero(), S::one());
        let (s2, c2) = (t * 2.0).sin_cos();
        let (hs, hc) = (s2 * 0.5, c2 * 0.5);
        match self {
            Gen::P1 => [o, z, z, z, z, z],
            Gen::P2 => [z, o, z, z, z, z],
            Gen::P3 => [z, z, z, z, o, z],
            Gen::P4 => [z, z, z, z, z, o],
            Gen::P5 => [z, z, o, z, z, z],
            Gen::D1 => [x, y, z, z, u, v],
            Gen::D2 => [x, y, z, z, -u, -v],
            Gen::L => [-y, x, z, o, -v, u],
            Gen::B1 => [-v, u, z, z, z, z],
            Gen::B2 => [z, z, z, z, y, -x],
            Gen::B3 => [s + hs, -hc, z, z, z, z],
            Gen::B4 => [-hc, s - hs, z, z, z, z],
            Gen::B5 => [z, z, z, z, s - hs, hc],
            Gen::B6 => [z, z, z, z, hc, s + hs],
            Gen::K => [
                -(x * hc) - y * (s + hs),
                (s - hs) * x + y * hc,
                t,
                s,
                u * hc + v * (hs - s),
                (s + hs) * u - v * hc,
            ],
        }
    }
}

/// `K` with `+½x cos2θ` in its x coefficient instead of `−½x cos2θ`.
///
/// This reading is not a symmetry: it fails the stress equations'
/// invariance condition and gives `[K, L] ≠ −P5`. Kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignFlippedK;

impl Field for SignFlippedK {
    fn eval<S: Scalar>(&self, p: &[S; 6]) -> [S; 6] {
        let mut c = Gen::K.eval(p);
        c[X] += p[X] * (p[THETA] * 2.0).cos();
        c
    }
}

/// Coefficient vector `(ξx, ξy, ξσ, ξθ, ξu, ξv)` of a generator at `p`.
pub fn eval_generator<F: Field>(g: &F, p: &Point6) -> Point6 {
    g.eval(p)
}

/// A constant-coefficient linear combination of named generators.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Combo {
    pub terms: Vec<(f64, Gen)>,
}

impl Combo {
    pub fn new(terms: Vec<(f64, Gen)>) -> Self {
        Combo { terms }
    }

    pub fn single(g: Gen) -> Self {
        Combo { terms: vec![(1.0, g)] }
    }

    /// Coefficients over [`Gen::ALL`], with repeated names merged.
    pub fn coefficients(&self) -> [f64; 15] {
        let mut c = [0.0; 15];
        for &(k, g) in &self.terms {
            c[g.index()] += k;
        }
        c
    }

    pub fn from_coefficients(c: &[f64; 15]) -> Self {
        let terms = Gen::ALL.into_iter().zip(c).filter(|(_, &k)| k != 0.0).map(|(g, &k)| (k, g)).collect();
        Combo { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().iter().all(|&k| k == 0.0)
    }
}

impl From<Gen> for Combo {
    fn from(g: Gen) -> Self {
        Combo::single(g)
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficients();
        let mut first = true;
        for g in Gen::ALL {
            let k = c[g.index()];
            if k == 0.0 {
                continue;
            }
            let sign = if k < 0.0 { "-" } else if first { "" } else { "+" };
            let sep = if first { "" } else { " " };
            let gap = if first || sign.is_empty() { "" } else { " " };
            if k.abs() == 1.0 {
                write!(f, "{sep}{sign}{gap}{g}")?;
            } else {
                write!(f, "{sep}{sign}{gap}{}*{g}", k.abs())?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Field for Combo {
    fn eval<S: Scalar>(&self, p: &[S; 6]) -> [S; 6] {
        let mut out = [S::zero(); 6];
        for &(k, g) in &self.terms {
            for (o, c) in out.iter_mut().zip(g.eval(p)) {
                *o += c * k;
            }
        }
        out
    }
}

impl<F: Field> Field for &F {
    fn eval<S: Scalar>(&self, p: &[S; 6]) -> [S; 6] {
        (*self).eval(p)
    }
}

/// Derivative of `b`'s coefficients along `a`: `(a·∇)b` at `p`.
fn directional<S: Scalar, A: Field, B: Field>(a: &A, b: &B, p: &[S; 6]) -> [S; 6] {
    let dir = a.eval(p);
    let mut seeded = [Dual::constant(S::zero()); 6];
    for i in 0..6 {
        seeded[i] = Dual::new(p[i], dir[i]);
    }
    b.eval(&seeded).map(|c| c.eps)
}

/// The commutator `[a, b]` as a field in its own right, so brackets nest.
#[derive(Debug, Clone, Copy)]
pub struct Bracket<A, B>(pub A, pub B);

impl<A: Field, B: Field> Field for Bracket<A, B> {
    fn eval<S: Scalar>(&self, p: &[S; 6]) -> [S; 6] {
        let ab = directional(&self.0, &self.1, p);
        let ba = directional(&self.1, &self.0, p);
        let mut out = ab;
        for (o, c) in out.iter_mut().zip(ba) {
            *o -= c;
        }
        out
    }
}

/// `[g1, g2]^i = g1(g2^i) − g2(g1^i)` at `p`.
pub fn lie_bracket<A: Field, B: Field>(g1: &A, g2: &B, p: &Point6) -> Point6 {
    Bracket(g1, g2).eval(p)
}
