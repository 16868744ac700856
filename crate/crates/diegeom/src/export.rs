//! CSV and SVG output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::trace::{CurveKind, Polyline};
use crate::GeomError;

pub const CSV_HEADER: &str = "curve_id,kind,x,y";

/// One row per point; `{:.16e}` keeps 17 significant digits, enough to
/// read every `f64` back exactly.
pub fn write_csv(curves: &[&Polyline]) -> Result<String, GeomError> {
    if curves.iter().all(|c| c.is_empty()) {
        return Err(GeomError::Empty);
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        for (x, y) in &c.points {
            writeln!(out, "{},{},{:.16e},{:.16e}", c.id, c.kind, x, y).unwrap();
        }
    }
    Ok(out)
}

/// Inverse of [`write_csv`]; rows with the same id, in order, form one
/// curve.
pub fn parse_csv(text: &str) -> Result<Vec<Polyline>, GeomError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(GeomError::Csv { line: 1, msg: format!("expected header `{CSV_HEADER}`") }),
    }
    let mut curves: Vec<Polyline> = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| GeomError::Csv { line: i + 1, msg };
        let fields: Vec<&str> = line.split(',').collect();
        let [id, kind, x, y] = fields[..] else {
            return Err(bad(format!("expected 4 fields, found {}", fields.len())));
        };
        let kind = CurveKind::parse(kind).ok_or_else(|| bad(format!("unknown kind `{kind}`")))?;
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("`{s}`: {e}")));
        let p = (num(x)?, num(y)?);
        match curves.last_mut() {
            Some(c) if c.id == id && c.kind == kind => c.points.push(p),
            _ => curves.push(Polyline::new(id, kind, vec![p])),
        }
    }
    Ok(curves)
}

fn style(kind: CurveKind) -> &'static str {
    match kind {
        CurveKind::Contour => "stroke:#000000;stroke-width:2",
        CurveKind::Limit => "stroke:#c0392b;stroke-width:1.5;stroke-dasharray:6 3",
        CurveKind::Flowline => "stroke:#2471a3;stroke-width:1",
        CurveKind::SlipA => "stroke:#1e8449;stroke-width:0.8",
        CurveKind::SlipB => "stroke:#7d3c98;stroke-width:0.8",
        CurveKind::Vector => "stroke:#555555;stroke-width:0.6",
    }
}

/// One `<path>` per curve in a viewBox fitted to the data with a 5%
/// margin. The y axis points up.
pub fn write_svg(curves: &[&Polyline]) -> Result<String, GeomError> {
    let pts = || curves.iter().flat_map(|c| c.points.iter());
    if pts().next().is_none() {
        return Err(GeomError::Empty);
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let m = 0.05 * span;
    let (w, h) = (x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="600" height="{:.0}" viewBox="{} {} {} {}">"#,
        600.0 * h / w,
        x0 - m,
        -(y1 + m),
        w,
        h
    )
    .unwrap();
    for c in curves {
        if c.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, (x, y)) in c.points.iter().enumerate() {
            write!(d, "{}{:.6} {:.6} ", if i == 0 { "M" } else { "L" }, x, -y).unwrap();
        }
        writeln!(
            out,
            r#"  <path id="{}" class="{}" d="{}" style="fill:none;{};vector-effect:non-scaling-stroke"/>"#,
            c.id,
            c.kind,
            d.trim_end(),
            style(c.kind)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn save(path: &Path, text: String) -> Result<(), GeomError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| GeomError::Io { path: dir.into(), source })?;
    }
    fs::write(path, text).map_err(|source| GeomError::Io { path: path.into(), source })
}

pub fn export_csv(curves: &[&Polyline], path: &Path) -> Result<(), GeomError> {
    save(path, write_csv(curves)?)
}

pub fn export_svg(curves: &[&Polyline], path: &Path) -> Result<(), GeomError> {
    save(path, write_svg(curves)?)
}
