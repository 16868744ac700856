//! Extrusion-die assembly: two tool contours along flow lines, closed off
//! at each end by a limit of the plastic region.

use fieldcore::FeedVelocity;
use solutions::Solution;

use crate::trace::{partial_step, trace, CurveKind, Field, Polyline, Seed};
use crate::GeomError;

/// Limits must meet the contours to within this distance.
pub const SNAP_TOL: f64 = 1e-3;

/// Where a polyline crosses another: segment index and fraction along it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub point: (f64, f64),
    /// Position on the first curve, in segments (`i + t`).
    pub along_a: f64,
    pub along_b: f64,
}

#[derive(Debug, Clone, Copy)]
struct Bbox {
    lo: (f64, f64),
    hi: (f64, f64),
}

impl Bbox {
    fn of(points: &[(f64, f64)]) -> Self {
        let mut b = Bbox { lo: (f64::INFINITY, f64::INFINITY), hi: (f64::NEG_INFINITY, f64::NEG_INFINITY) };
        for &(x, y) in points {
            b.lo = (b.lo.0.min(x), b.lo.1.min(y));
            b.hi = (b.hi.0.max(x), b.hi.1.max(y));
        }
        b
    }

    fn overlaps(&self, o: &Bbox) -> bool {
        self.lo.0 <= o.hi.0 && o.lo.0 <= self.hi.0 && self.lo.1 <= o.hi.1 && o.lo.1 <= self.hi.1
    }
}

const CHUNK: usize = 32;

fn chunks(points: &[(f64, f64)]) -> Vec<(usize, Bbox)> {
    (0..points.len().saturating_sub(1))
        .step_by(CHUNK)
        .map(|i| (i, Bbox::of(&points[i..(i + CHUNK + 1).min(points.len())])))
        .collect()
}

fn segment_crossing(p: (f64, f64), p2: (f64, f64), q: (f64, f64), q2: (f64, f64)) -> Option<(f64, f64)> {
    let r = (p2.0 - p.0, p2.1 - p.1);
    let s = (q2.0 - q.0, q2.1 - q.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom == 0.0 {
        return None;
    }
    let w = (q.0 - p.0, q.1 - p.1);
    let t = (w.0 * s.1 - w.1 * s.0) / denom;
    let u = (w.0 * r.1 - w.1 * r.0) / denom;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some((t, u))
}

/// All transversal crossings of two polylines, ordered along `a`.
/// Crossings at a shared vertex are reported once.
pub fn intersections(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<Crossing> {
    let (ca, cb) = (chunks(a), chunks(b));
    let mut out: Vec<Crossing> = Vec::new();
    for (ia, ba) in &ca {
        for (ib, bb) in &cb {
            if !ba.overlaps(bb) {
                continue;
            }
            for i in *ia..(*ia + CHUNK).min(a.len() - 1) {
                for j in *ib..(*ib + CHUNK).min(b.len() - 1) {
                    if let Some((t, u)) = segment_crossing(a[i], a[i + 1], b[j], b[j + 1]) {
                        let point = (a[i].0 + t * (a[i + 1].0 - a[i].0), a[i].1 + t * (a[i + 1].1 - a[i].1));
                        out.push(Crossing { point, along_a: i as f64 + t, along_b: j as f64 + u });
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.along_a.total_cmp(&y.along_a).then(x.along_b.total_cmp(&y.along_b)));
    out.dedup_by(|x, y| (x.along_a - y.along_a).abs() < 1e-9 && (x.along_b - y.along_b).abs() < 1e-9);
    out
}

/// Smallest distance between the vertices of `a` and the segments of `b`.
pub fn polyline_gap(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    for &p in a {
        for w in b.windows(2) {
            best = best.min(crate::trace::segment_distance(p, w[0], w[1]));
        }
    }
    best
}

fn point_at(points: &[(f64, f64)], s: f64) -> (f64, f64) {
    let i = (s.floor() as usize).min(points.len() - 2);
    let t = s - i as f64;
    let (a, b) = (points[i], points[i + 1]);
    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
}

/// Sub-curve between two fractional positions (`i + t` along segments),
/// running from `from` to `to`, with exact end points. Angle hints follow
/// the points they belong to; cut ends take the hint of the nearer vertex.
pub fn slice(curve: &Polyline, from: f64, to: f64) -> Polyline {
    let pts = &curve.points;
    let theta = |s: f64| curve.thetas.get((s.round() as usize).min(pts.len() - 1)).copied();
    // Vertices this close to a cut (in segments) are dropped rather than
    // left as near-duplicates of the cut point.
    const MERGE: f64 = 1e-4;
    let (lo, hi) = (from.min(to), from.max(to));
    let mut points = vec![point_at(pts, lo)];
    let mut thetas = vec![theta(lo)];
    for k in (lo.floor() as usize + 1)..(hi.ceil() as usize) {
        let kf = k as f64;
        if kf - lo > MERGE && hi - kf > MERGE {
            points.push(pts[k]);
            thetas.push(curve.thetas.get(k).copied());
        }
    }
    points.push(point_at(pts, hi));
    thetas.push(theta(hi));
    if from > to {
        points.reverse();
        thetas.reverse();
    }
    let thetas = thetas.into_iter().collect::<Option<Vec<_>>>().unwrap_or_default();
    Polyline { points, thetas, ..curve.clone() }
}

/// A curve traced both ways from its seed and joined, with the index of
/// the seed in the joined point list and what is needed to place points
/// exactly on it between vertices.
pub struct TwoWay {
    pub curve: Polyline,
    pub seed_index: usize,
    /// `None` for straight segments.
    pub field: Option<Field>,
    pub bridge: bool,
}

fn join(back: Polyline, fwd: Polyline, id: &str, kind: CurveKind, field: Field, bridge: bool) -> TwoWay {
    let seed_index = back.len() - 1;
    let back = back.reversed();
    let mut curve = Polyline { id: id.into(), kind, ..fwd.clone() };
    curve.points = back.points.iter().copied().chain(fwd.points.iter().skip(1).copied()).collect();
    curve.thetas = back.thetas.iter().copied().chain(fwd.thetas.iter().skip(1).copied()).collect();
    curve.start = fwd.start;
    curve.ds = fwd.ds.abs();
    TwoWay { curve, seed_index, field: Some(field), bridge }
}

fn two_way(s: &Solution, field: Field, seed: &Seed, id: &str, kind: CurveKind) -> Result<TwoWay, GeomError> {
    let fwd = Seed { ds: seed.ds.abs(), ..*seed };
    let f = trace(s, field, &fwd)?;
    let b = trace(s, field, &fwd.reversed())?;
    Ok(join(b, f, id, kind, field, seed.bridge))
}

/// Flow line through the seed in both directions, oriented with the flow.
pub fn trace_contour(s: &Solution, seed: &Seed, id: &str) -> Result<TwoWay, GeomError> {
    two_way(s, Field::Flow, seed, id, CurveKind::Contour)
}

/// Limit through the seed in both directions.
pub fn trace_limit(s: &Solution, feed: &FeedVelocity, seed: &Seed, id: &str) -> Result<TwoWay, GeomError> {
    two_way(s, Field::Limit(*feed), seed, id, CurveKind::Limit)
}

/// How a limit of the plastic region is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitSeed {
    /// Integrate the limit equation through a point.
    Traced(Seed),
    /// A straight segment imposed by the design, e.g. an axis along which
    /// the product leaves; it is not checked against the limit equation
    /// here (see [`limit_normal_mismatch`]).
    Line { through: (f64, f64), direction: (f64, f64), half_length: f64 },
}

impl LimitSeed {
    pub fn line(through: (f64, f64), direction: (f64, f64), half_length: f64) -> Self {
        let n = direction.0.hypot(direction.1);
        LimitSeed::Line { through, direction: (direction.0 / n, direction.1 / n), half_length }
    }
}

fn limit_curve(s: &Solution, feed: &FeedVelocity, seed: &LimitSeed, id: &str) -> Result<TwoWay, GeomError> {
    match *seed {
        LimitSeed::Traced(ref seed) => trace_limit(s, feed, seed, id),
        LimitSeed::Line { through: (x, y), direction: (dx, dy), half_length: h } => {
            let mut curve = Polyline::new(id, CurveKind::Limit, vec![(x - h * dx, y - h * dy), (x, y), (x + h * dx, y + h * dy)]);
            curve.family = s.family().to_string();
            Ok(TwoWay { curve, seed_index: 1, field: None, bridge: false })
        }
    }
}

/// Largest jump in normal velocity across a limit curve, between the
/// plastic flow and the rigid velocity `feed`. Zero for an exact limit.
pub fn limit_normal_mismatch(s: &Solution, feed: &FeedVelocity, limit: &Polyline) -> Result<f64, GeomError> {
    let mut worst: f64 = 0.0;
    for w in limit.points.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let len = dx.hypot(dy);
        if len == 0.0 {
            continue;
        }
        let (nx, ny) = (-dy / len, dx / len);
        for &(x, y) in w {
            let st = s.state(x, y)?;
            worst = worst.max(((feed.u0 - st.u) * nx + (feed.v0 - st.v) * ny).abs());
        }
    }
    Ok(worst)
}

/// What to build: seeds for the two contours and both limits, and the
/// velocities of the rigid material entering and leaving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DieSpec {
    pub inner: Seed,
    pub outer: Seed,
    pub entry: LimitSeed,
    pub exit: LimitSeed,
    pub feed: FeedVelocity,
    pub extract: FeedVelocity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DieGeometry {
    pub inner: Polyline,
    pub outer: Polyline,
    pub entry_limit: Polyline,
    pub exit_limit: Polyline,
    pub feed: FeedVelocity,
    pub extract: FeedVelocity,
}

impl DieGeometry {
    pub fn curves(&self) -> [&Polyline; 4] {
        [&self.inner, &self.outer, &self.entry_limit, &self.exit_limit]
    }

    /// Largest distance from a limit end to the contour it should meet.
    pub fn max_snap_gap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for limit in [&self.entry_limit, &self.exit_limit] {
            let ends = [limit.points[0], limit.last()];
            for (end, contour) in ends.iter().zip([&self.inner, &self.outer]) {
                worst = worst.max(polyline_gap(&[*end], &contour.points));
            }
        }
        worst
    }
}

fn seg_len(points: &[(f64, f64)], i: usize) -> f64 {
    let (a, b) = (points[i], points[i + 1]);
    (b.0 - a.0).hypot(b.1 - a.1)
}

/// Arc length between two fractional positions on the same curve.
fn arc_between(points: &[(f64, f64)], a: f64, b: f64) -> f64 {
    let (lo, hi) = (a.min(b), a.max(b));
    let (i0, i1) = (lo.floor() as usize, (hi.floor() as usize).min(points.len() - 2));
    if i0 == i1 {
        return (hi - lo) * seg_len(points, i0);
    }
    let mut total = (1.0 - (lo - i0 as f64)) * seg_len(points, i0);
    for i in i0 + 1..i1 {
        total += seg_len(points, i);
    }
    total + (hi - i1 as f64) * seg_len(points, i1)
}


/// Point at arc length `h` past vertex `i`, on the curve itself rather
/// than on the chord.
fn on_curve(s: &Solution, c: &TwoWay, i: usize, h: f64) -> Option<(f64, f64)> {
    let (a, b) = (c.curve.points[i], c.curve.points[i + 1]);
    let len = (b.0 - a.0).hypot(b.1 - a.1);
    let r = ((b.0 - a.0) / len, (b.1 - a.1) / len);
    match c.field {
        None => Some((a.0 + h * r.0, a.1 + h * r.1)),
        Some(field) => {
            let theta = c.curve.thetas.get(i).copied().unwrap_or(0.0);
            partial_step(s, field, a, theta, h, r, c.bridge)
        }
    }
}

/// Moves a chord crossing onto the curves: solves `A(ha) = B(hb)` for
/// partial steps along the two segments by Newton's method. Falls back to
/// the chord crossing if that fails.
fn refine(s: &Solution, a: &TwoWay, b: &TwoWay, c: Crossing) -> Crossing {
    let seg = |t: &TwoWay, along: f64| {
        let i = (along.floor() as usize).min(t.curve.len() - 2);
        (i, seg_len(&t.curve.points, i), along - i as f64)
    };
    let (ia, la, ta) = seg(a, c.along_a);
    let (ib, lb, tb) = seg(b, c.along_b);
    let (mut ha, mut hb) = (ta * la, tb * lb);
    let gap = |ha: f64, hb: f64| -> Option<(f64, f64, (f64, f64))> {
        let (p, q) = (on_curve(s, a, ia, ha)?, on_curve(s, b, ib, hb)?);
        Some((p.0 - q.0, p.1 - q.1, p))
    };
    let d = 1e-7 * la.max(lb);
    for _ in 0..8 {
        let Some((gx, gy, p)) = gap(ha, hb) else { return c };
        if gx.hypot(gy) < 1e-15 {
            return Crossing { point: p, along_a: ia as f64 + ha / la, along_b: ib as f64 + hb / lb };
        }
        let (Some(pa), Some(ma), Some(pb), Some(mb)) = (gap(ha + d, hb), gap(ha - d, hb), gap(ha, hb + d), gap(ha, hb - d)) else {
            return c;
        };
        let j = [[(pa.0 - ma.0) / (2.0 * d), (pb.0 - mb.0) / (2.0 * d)], [(pa.1 - ma.1) / (2.0 * d), (pb.1 - mb.1) / (2.0 * d)]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-12 {
            return c;
        }
        ha -= (j[1][1] * gx - j[0][1] * gy) / det;
        hb -= (-j[1][0] * gx + j[0][0] * gy) / det;
        if ha.abs() > 2.0 * la || hb.abs() > 2.0 * lb {
            return c;
        }
    }
    match gap(ha, hb) {
        Some((gx, gy, p)) if gx.hypot(gy) < 1e-12 => {
            Crossing { point: p, along_a: ia as f64 + ha / la, along_b: ib as f64 + hb / lb }
        }
        _ => c,
    }
}

/// Traces and trims everything. Each limit is cut between its crossings
/// with the two contours nearest its seed (ties within the snap tolerance
/// go to the crossing nearest the contour's seed, which matters for
/// contours that close on themselves). Each contour runs between the two
/// limit ends on it, from entry to exit. Crossing points are refined onto
/// both curves and shared by the pieces that meet there.
pub fn assemble_die(s: &Solution, spec: &DieSpec) -> Result<DieGeometry, GeomError> {
    let inner = trace_contour(s, &spec.inner, "inner")?;
    let outer = trace_contour(s, &spec.outer, "outer")?;
    let entry = limit_curve(s, &spec.feed, &spec.entry, "entry")?;
    let exit = limit_curve(s, &spec.extract, &spec.exit, "exit")?;

    let cut_limit = |limit: &TwoWay| -> Result<[Crossing; 2], GeomError> {
        let mut ends = Vec::new();
        for contour in [&inner, &outer] {
            let lp = &limit.curve.points;
            let cp = &contour.curve.points;
            let xs = intersections(lp, cp);
            let on_limit = |c: &Crossing| arc_between(lp, limit.seed_index as f64, c.along_a);
            let Some(best) = xs.iter().map(on_limit).min_by(f64::total_cmp) else {
                return Err(GeomError::Assembly {
                    limit: limit.curve.id.clone(),
                    contour: contour.curve.id.clone(),
                    gap: polyline_gap(lp, cp),
                });
            };
            let c = xs
                .iter()
                .filter(|c| on_limit(c) <= best + SNAP_TOL)
                .min_by(|x, y| {
                    let d = |c: &Crossing| arc_between(cp, contour.seed_index as f64, c.along_b);
                    d(x).total_cmp(&d(y))
                })
                .copied()
                .expect("non-empty");
            ends.push(refine(s, limit, contour, c));
        }
        Ok([ends[0], ends[1]])
    };
    let entry_ends = cut_limit(&entry)?;
    let exit_ends = cut_limit(&exit)?;

    let piece = |t: &TwoWay, from: &Crossing, to: &Crossing, along: fn(&Crossing) -> f64| {
        let mut p = slice(&t.curve, along(from), along(to));
        p.points[0] = from.point;
        *p.points.last_mut().unwrap() = to.point;
        p
    };
    let on_limit = |c: &Crossing| c.along_a;
    let on_contour = |c: &Crossing| c.along_b;
    Ok(DieGeometry {
        inner: piece(&inner, &entry_ends[0], &exit_ends[0], on_contour),
        outer: piece(&outer, &entry_ends[1], &exit_ends[1], on_contour),
        entry_limit: piece(&entry, &entry_ends[0], &entry_ends[1], on_limit),
        exit_limit: piece(&exit, &exit_ends[0], &exit_ends[1], on_limit),
        feed: spec.feed,
        extract: spec.extract,
    })
}
