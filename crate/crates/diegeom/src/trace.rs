//! Arc-length RK4 tracing of flow lines, plasticity limits and slip lines.

use std::fmt;

use fieldcore::{FeedVelocity, PlasticState};
use solutions::Solution;

use crate::GeomError;

/// Speeds below this count as stagnation.
pub const STAGNATION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Flowline,
    Limit,
    SlipA,
    SlipB,
    Contour,
    /// One arrow of a sampled velocity field.
    Vector,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Flowline => "flowline",
            CurveKind::Limit => "limit",
            CurveKind::SlipA => "sliplineA",
            CurveKind::SlipB => "sliplineB",
            CurveKind::Contour => "contour",
            CurveKind::Vector => "vector",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Flowline, Self::Limit, Self::SlipA, Self::SlipB, Self::Contour, Self::Vector]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    Steps,
    Domain,
    Stagnation,
    /// The curve came back to its start.
    Closed,
    /// Not traced (assembled or sampled curves).
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub id: String,
    pub kind: CurveKind,
    pub points: Vec<(f64, f64)>,
    pub start: (f64, f64),
    /// Signed arc-length step; zero for curves that were not traced.
    pub ds: f64,
    pub family: String,
    pub stop: Stop,
    /// Angle branch at each point, for continuing implicit solutions.
    pub thetas: Vec<f64>,
}

impl Polyline {
    pub fn new(id: impl Into<String>, kind: CurveKind, points: Vec<(f64, f64)>) -> Self {
        let start = points.first().copied().unwrap_or((0.0, 0.0));
        Polyline {
            id: id.into(),
            kind,
            points,
            start,
            ds: 0.0,
            family: String::new(),
            stop: Stop::None,
            thetas: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> (f64, f64) {
        *self.points.last().expect("non-empty polyline")
    }

    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).sum()
    }

    /// Same curve, opposite orientation.
    pub fn reversed(&self) -> Self {
        let mut r = self.clone();
        r.points.reverse();
        r.thetas.reverse();
        r.ds = -r.ds;
        r.start = r.points.first().copied().unwrap_or(r.start);
        r
    }

    /// Largest and smallest distance between consecutive points.
    pub fn spacing(&self) -> (f64, f64) {
        self.points.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).fold((f64::INFINITY, 0.0), |(lo, hi), d| {
            (lo.min(d), hi.max(d))
        })
    }
}

/// Unit tangent and angle at a point.
type Probe<'a> = dyn FnMut(f64, f64, f64) -> Result<((f64, f64), f64), Stop> + 'a;

fn unit(a: f64, b: f64) -> Result<(f64, f64), Stop> {
    let n = a.hypot(b);
    if !(n >= STAGNATION) {
        return Err(Stop::Stagnation);
    }
    Ok((a / n, b / n))
}

fn align(d: (f64, f64), reference: (f64, f64)) -> (f64, f64) {
    if d.0 * reference.0 + d.1 * reference.1 < 0.0 {
        (-d.0, -d.1)
    } else {
        d
    }
}

/// One classical RK4 step of length `ds` from `(x, y)`. Stage directions
/// are aligned with `reference` (then with the first stage), so fields
/// defined only up to sign (slip lines) trace consistently. Returns the new
/// point and the first-stage direction.
fn rk4_step(
    (x, y): (f64, f64),
    theta: f64,
    ds: f64,
    reference: (f64, f64),
    probe: &mut Probe<'_>,
) -> Result<((f64, f64), (f64, f64)), Stop> {
    let mut stage = |px: f64, py: f64, r: (f64, f64)| -> Result<(f64, f64), Stop> { Ok(align(probe(px, py, theta)?.0, r)) };
    let k1 = stage(x, y, reference)?;
    let k2 = stage(x + 0.5 * ds * k1.0, y + 0.5 * ds * k1.1, k1)?;
    let k3 = stage(x + 0.5 * ds * k2.0, y + 0.5 * ds * k2.1, k1)?;
    let k4 = stage(x + ds * k3.0, y + ds * k3.1, k1)?;
    let next = (
        x + ds / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        y + ds / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    );
    Ok((next, k1))
}

/// Classical RK4 in arc length, `n_steps` of size `ds`.
fn rk4(start: (f64, f64), hint: f64, ds: f64, n_steps: usize, probe: &mut Probe<'_>) -> (Vec<(f64, f64)>, Vec<f64>, Stop) {
    let mut p = start;
    let mut pts = vec![start];
    let mut thetas = Vec::new();
    let (mut prev, mut theta) = match probe(p.0, p.1, hint) {
        Ok(v) => v,
        Err(stop) => return (pts, thetas, stop),
    };
    thetas.push(theta);
    for _ in 0..n_steps {
        let (next, k1) = match rk4_step(p, theta, ds, prev, probe) {
            Ok(v) => v,
            Err(stop) => return (pts, thetas, stop),
        };
        let (d, th) = match probe(next.0, next.1, theta) {
            Ok(v) => v,
            Err(stop) => return (pts, thetas, stop),
        };
        prev = align(d, k1);
        theta = th;
        let closed = pts.len() > 10 && segment_distance(start, p, next) < 0.5 * ds.abs();
        p = next;
        pts.push(p);
        thetas.push(theta);
        if closed {
            return (pts, thetas, Stop::Closed);
        }
    }
    (pts, thetas, Stop::Steps)
}

/// Distance from `p` to the segment `a`–`b`.
pub fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (a.0 + t * dx - p.0).hypot(a.1 + t * dy - p.1)
}

/// State on the branch continued from `hint`; the principal branch when
/// there is no hint yet.
pub(crate) fn state_at(s: &Solution, x: f64, y: f64, hint: Option<f64>) -> Result<PlasticState, Stop> {
    match hint {
        Some(h) => s.state_near(x, y, h),
        None => s.state(x, y),
    }
    .map_err(|_| Stop::Domain)
}

/// Offset used to look across an excluded sliver.
const BRIDGE_OFFSET: f64 = 1e-5;
/// Velocities on the two sides must agree to this, times `1 + speed`, for
/// the exclusion to count as removable.
const BRIDGE_AGREEMENT: f64 = 1e-3;

/// Like [`state_at`], but a point in a thin excluded set across which the
/// velocity is continuous gets the average of the states just either side.
/// Genuine singularities, where the two sides disagree, still stop.
fn state_bridged(s: &Solution, x: f64, y: f64, hint: Option<f64>, bridge: bool) -> Result<PlasticState, Stop> {
    let direct = state_at(s, x, y, hint);
    if direct.is_ok() || !bridge {
        return direct;
    }
    let e = BRIDGE_OFFSET;
    for (dx, dy) in [(e, 0.0), (0.0, e)] {
        let Ok(a) = state_at(s, x - dx, y - dy, hint) else { continue };
        let Ok(b) = state_at(s, x + dx, y + dy, Some(hint.unwrap_or(a.theta))) else { continue };
        let scale = 1.0 + a.speed().max(b.speed());
        if (a.u - b.u).hypot(a.v - b.v) > BRIDGE_AGREEMENT * scale {
            continue;
        }
        // Angles are aligned with the hint, so a plain mean is safe unless
        // the sides landed on different branches.
        if (a.theta - b.theta).abs() > 0.5 {
            continue;
        }
        return Ok(PlasticState::new(
            0.5 * (a.sigma + b.sigma),
            0.5 * (a.theta + b.theta),
            0.5 * (a.u + b.u),
            0.5 * (a.v + b.v),
        ));
    }
    Err(Stop::Domain)
}

/// Where a trace begins: a point, an optional angle branch and a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seed {
    pub start: (f64, f64),
    /// Angle to continue from; `None` takes the solution's principal branch.
    pub theta_hint: Option<f64>,
    /// Signed arc-length step.
    pub ds: f64,
    pub n_steps: usize,
    /// Step across thin excluded sets where the velocity is continuous.
    pub bridge: bool,
}

impl Seed {
    pub fn new(x: f64, y: f64, ds: f64, n_steps: usize) -> Self {
        Seed { start: (x, y), theta_hint: None, ds, n_steps, bridge: false }
    }

    pub fn with_hint(mut self, theta: f64) -> Self {
        self.theta_hint = Some(theta);
        self
    }

    pub fn bridging(mut self) -> Self {
        self.bridge = true;
        self
    }

    pub fn reversed(mut self) -> Self {
        self.ds = -self.ds;
        self
    }
}

fn run(s: &Solution, seed: &Seed, kind: CurveKind, id: &str, probe: &mut Probe<'_>) -> Result<Polyline, GeomError> {
    let first = state_bridged(s, seed.start.0, seed.start.1, seed.theta_hint, seed.bridge);
    if let Err(stop) = first {
        return Err(match stop {
            Stop::Stagnation => GeomError::Stagnation { x: seed.start.0, y: seed.start.1 },
            _ => GeomError::OutsideDomain { x: seed.start.0, y: seed.start.1 },
        });
    }
    let hint = seed.theta_hint.unwrap_or(first.map(|st| st.theta).unwrap_or(0.0));
    let (points, thetas, stop) = rk4(seed.start, hint, seed.ds, seed.n_steps, probe);
    if points.len() == 1 && stop == Stop::Stagnation {
        return Err(GeomError::Stagnation { x: seed.start.0, y: seed.start.1 });
    }
    Ok(Polyline {
        id: id.to_string(),
        kind,
        points,
        start: seed.start,
        ds: seed.ds,
        family: s.family().to_string(),
        stop,
        thetas,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlipBranch {
    /// Slope `tan θ`.
    A,
    /// Slope `−cot θ`.
    B,
}

/// The direction field a curve follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field {
    /// The velocity `(u, v)`.
    Flow,
    /// The velocity relative to a rigid feed, `(U0 − u, V0 − v)`.
    Limit(FeedVelocity),
    Slip(SlipBranch),
}

impl Field {
    /// Unnormalised direction at a state.
    pub fn direction(&self, st: &PlasticState) -> (f64, f64) {
        match self {
            Field::Flow => (st.u, st.v),
            Field::Limit(f) => (f.u0 - st.u, f.v0 - st.v),
            Field::Slip(SlipBranch::A) => (st.theta.cos(), st.theta.sin()),
            Field::Slip(SlipBranch::B) => (-st.theta.sin(), st.theta.cos()),
        }
    }

    pub fn kind(&self) -> CurveKind {
        match self {
            Field::Flow => CurveKind::Flowline,
            Field::Limit(_) => CurveKind::Limit,
            Field::Slip(SlipBranch::A) => CurveKind::SlipA,
            Field::Slip(SlipBranch::B) => CurveKind::SlipB,
        }
    }
}

/// Integrates `field` from the seed.
pub fn trace(s: &Solution, field: Field, seed: &Seed) -> Result<Polyline, GeomError> {
    let mut probe = |x: f64, y: f64, h: f64| {
        let st = state_bridged(s, x, y, Some(h), seed.bridge)?;
        let (a, b) = field.direction(&st);
        Ok((unit(a, b)?, st.theta))
    };
    let kind = field.kind();
    run(s, seed, kind, kind.name(), &mut probe)
}

/// One RK4 step of `field` of arc length `ds` from `from`, moving along
/// `reference`. Used to place points exactly on a traced curve between
/// its vertices.
pub fn partial_step(
    s: &Solution,
    field: Field,
    from: (f64, f64),
    theta: f64,
    ds: f64,
    reference: (f64, f64),
    bridge: bool,
) -> Option<(f64, f64)> {
    let mut probe = |x: f64, y: f64, h: f64| {
        let st = state_bridged(s, x, y, Some(h), bridge)?;
        let (a, b) = field.direction(&st);
        Ok((unit(a, b)?, st.theta))
    };
    rk4_step(from, theta, ds, reference, &mut probe).ok().map(|(p, _)| p)
}

/// Flow line: `(x, y)′ = (u, v)/‖(u, v)‖`. Stops at the domain boundary,
/// at stagnation, on returning to the start, or after `n_steps`.
pub fn trace_flow_line(s: &Solution, seed: &Seed) -> Result<Polyline, GeomError> {
    trace(s, Field::Flow, seed)
}

/// Limit of the plastic region for a rigid feed: tangent to the velocity
/// of the material relative to the feed, `(U0 − u, V0 − v)`.
pub fn trace_plasticity_limit(s: &Solution, feed: &FeedVelocity, seed: &Seed) -> Result<Polyline, GeomError> {
    trace(s, Field::Limit(*feed), seed)
}

/// Characteristic with slope `tan θ` (A) or `−cot θ` (B), traced by arc
/// length so vertical tangents pass through.
pub fn trace_slip_line(s: &Solution, branch: SlipBranch, seed: &Seed) -> Result<Polyline, GeomError> {
    trace(s, Field::Slip(branch), seed)
}

/// Tangent at vertex `i` from the derivative of the polynomial through up
/// to five neighbouring vertices, parametrised by chord length. Fourth
/// order on evenly stepped traces, and still sound at unevenly cut ends.
pub fn polyline_tangent(pts: &[(f64, f64)], i: usize) -> (f64, f64) {
    let lo = i.saturating_sub(2);
    let hi = (i + 2).min(pts.len() - 1);
    let mut t = vec![0.0];
    for k in lo + 1..=hi {
        let (a, b) = (pts[k - 1], pts[k]);
        t.push(t[k - 1 - lo] + (b.0 - a.0).hypot(b.1 - a.1));
    }
    let c = i - lo;
    let mut d = (0.0, 0.0);
    for j in 0..t.len() {
        // Derivative of the j-th Lagrange basis polynomial at t[c].
        let w = if j == c {
            (0..t.len()).filter(|&k| k != c).map(|k| 1.0 / (t[c] - t[k])).sum::<f64>()
        } else {
            let num: f64 = (0..t.len()).filter(|&k| k != c && k != j).map(|k| t[c] - t[k]).product();
            let den: f64 = (0..t.len()).filter(|&k| k != j).map(|k| t[j] - t[k]).product();
            num / den
        };
        d.0 += w * pts[lo + j].0;
        d.1 += w * pts[lo + j].1;
    }
    d
}

/// Largest angle between a polyline and a direction field, over interior
/// points. Angle hints come from the trace; a point where the field cannot
/// be evaluated counts as a failure (infinite angle).
pub fn max_angle_to(poly: &Polyline, mut dir: impl FnMut(f64, f64, f64) -> Option<(f64, f64)>) -> f64 {
    let mut worst: f64 = 0.0;
    let pts = &poly.points;
    for i in 1..pts.len().saturating_sub(1) {
        let tangent = polyline_tangent(pts, i);
        let p = pts[i];
        let hint = poly.thetas.get(i).copied().unwrap_or(0.0);
        let Some(d) = dir(p.0, p.1, hint) else { return f64::INFINITY };
        let cross = tangent.0 * d.1 - tangent.1 * d.0;
        let dot = tangent.0 * d.0 + tangent.1 * d.1;
        // Slip directions are defined up to sign.
        let angle = cross.atan2(dot).abs();
        worst = worst.max(angle.min(std::f64::consts::PI - angle));
    }
    worst
}

/// Worst angle between a traced curve and its field. Points in thin
/// excluded sets are evaluated by bridging, as during tracing.
pub fn tangency_error(s: &Solution, field: Field, poly: &Polyline) -> f64 {
    max_angle_to(poly, |x, y, h| state_bridged(s, x, y, Some(h), true).ok().map(|st| field.direction(&st)))
}

/// Flow-line tangency: the worst angle between the trace and `(u, v)`.
pub fn flow_tangency_error(s: &Solution, poly: &Polyline) -> f64 {
    tangency_error(s, Field::Flow, poly)
}

/// Worst angle between a limit curve and the relative velocity.
pub fn limit_slope_error(s: &Solution, feed: &FeedVelocity, poly: &Polyline) -> f64 {
    tangency_error(s, Field::Limit(*feed), poly)
}

/// Ratio of endpoint changes under two successive halvings of the step.
/// A fourth-order method gives about 16.
pub fn convergence_ratio(s: &Solution, seed: &Seed, length: f64) -> Result<f64, GeomError> {
    let end = |k: f64| -> Result<(f64, f64), GeomError> {
        let ds = seed.ds / k;
        let n = (length / ds.abs()).round() as usize;
        let p = trace_flow_line(s, &Seed { ds, n_steps: n, ..*seed })?;
        if p.len() != n + 1 {
            return Err(GeomError::ShortTrace { wanted: n, got: p.len() - 1 });
        }
        Ok(p.last())
    };
    let (a, b, c) = (end(1.0)?, end(2.0)?, end(4.0)?);
    let d1 = (a.0 - b.0).hypot(a.1 - b.1);
    let d2 = (b.0 - c.0).hypot(b.1 - c.1);
    Ok(d1 / d2)
}
