//! Subalgebra catalogs: parsing, parameter draws and closure verification.
//!
//! One entry per line:
//!
//! ```text
//! L_1,2 = { B1 + L + a*D1 } | a:real
//! S_2,40 = { D2 ; K }
//! ```
//!
//! Basis elements are separated by `;`; coefficients are products of
//! literals and parameter names. Domains are `pm1`, `real`,
//! `real_nonzero` and `pos`. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generator::{Bracket, Combo, Gen};
use crate::span::{sample_points, SpanFit};
use crate::LieError;

/// Catalog files shipped with the crate, in reporting order.
pub const SHIPPED: [&str; 4] = ["L_dim1.txt", "S_dim1.txt", "S_dim2.txt", "L_dim2_partial.txt"];
/// Corrected readings of rows that do not close as printed.
pub const CORRECTIONS: &str = "corrections.txt";
pub const CATALOG_DIR_VAR: &str = "PLASTSYM_CATALOG_DIR";

/// `$PLASTSYM_CATALOG_DIR`, or the `catalog/` directory of the source tree.
pub fn catalog_dir() -> PathBuf {
    std::env::var_os(CATALOG_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// ε = ±1.
    Pm1,
    Real,
    RealNonzero,
    /// λ > 0.
    Pos,
}

impl Domain {
    /// Values drawn for closure checks.
    pub fn values(self) -> &'static [f64] {
        match self {
            Domain::Pm1 => &[-1.0, 1.0],
            Domain::Real => &[-0.9, 0.0, 1.1],
            Domain::RealNonzero => &[-1.3, 0.7],
            Domain::Pos => &[0.5, 2.0],
        }
    }

    pub fn contains(self, v: f64) -> bool {
        match self {
            Domain::Pm1 => v.abs() == 1.0,
            Domain::Real => v.is_finite(),
            Domain::RealNonzero => v.is_finite() && v != 0.0,
            Domain::Pos => v.is_finite() && v > 0.0,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "pm1" => Domain::Pm1,
            "real" => Domain::Real,
            "real_nonzero" => Domain::RealNonzero,
            "pos" => Domain::Pos,
            _ => return None,
        })
    }

    /// Domain implied by a conventional parameter name (`eps2`, `delta`, …).
    pub fn infer(name: &str) -> Option<Self> {
        let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
        Some(match stem {
            "eps" => Domain::Pm1,
            "delta" => Domain::RealNonzero,
            "lambda" => Domain::Pos,
            "a" => Domain::Real,
            _ => return None,
        })
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Pm1 => "pm1",
            Domain::Real => "real",
            Domain::RealNonzero => "real_nonzero",
            Domain::Pos => "pos",
        })
    }
}

/// A literal factor times a product of named parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Coef {
    pub factor: f64,
    pub params: Vec<String>,
}

impl Coef {
    fn value(&self, values: &BTreeMap<String, f64>) -> Result<f64, LieError> {
        self.params.iter().try_fold(self.factor, |acc, p| {
            values.get(p).map(|v| acc * v).ok_or_else(|| LieError::UnboundParameter(p.clone()))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComboTemplate {
    pub terms: Vec<(Coef, Gen)>,
}

impl ComboTemplate {
    pub fn instantiate(&self, values: &BTreeMap<String, f64>) -> Result<Combo, LieError> {
        let terms = self.terms.iter().map(|(c, g)| Ok((c.value(values)?, *g))).collect::<Result<_, LieError>>()?;
        Ok(Combo::new(terms))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubalgebraEntry {
    pub id: String,
    pub basis: Vec<ComboTemplate>,
    pub params: Vec<(String, Domain)>,
    /// Source line, for reporting.
    pub line: usize,
}

impl SubalgebraEntry {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn instantiate(&self, values: &BTreeMap<String, f64>) -> Result<Vec<Combo>, LieError> {
        let basis: Vec<Combo> = self.basis.iter().map(|b| b.instantiate(values)).collect::<Result<_, _>>()?;
        if basis.iter().any(Combo::is_zero) {
            return Err(LieError::ZeroCombo(self.id.clone()));
        }
        Ok(basis)
    }

    /// Parameter assignments to test: the full grid of domain values when it
    /// has at most `max` points (repeated cyclically up to `min`), otherwise
    /// `max` seeded random picks.
    pub fn draws(&self, min: usize, max: usize, seed: u64) -> Vec<BTreeMap<String, f64>> {
        let sizes: Vec<usize> = self.params.iter().map(|(_, d)| d.values().len()).collect();
        let total: usize = sizes.iter().product();
        let pick = |idx: &[usize]| -> BTreeMap<String, f64> {
            self.params.iter().zip(idx).map(|((n, d), &i)| (n.clone(), d.values()[i])).collect()
        };
        if total <= max {
            let grid: Vec<_> = (0..total)
                .map(|mut k| {
                    let idx: Vec<usize> = sizes
                        .iter()
                        .map(|&s| {
                            let i = k % s;
                            k /= s;
                            i
                        })
                        .collect();
                    pick(&idx)
                })
                .collect();
            (0..total.max(min)).map(|k| grid[k % total].clone()).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..max)
                .map(|_| {
                    let idx: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(0..s)).collect();
                    pick(&idx)
                })
                .collect()
        }
    }
}

impl fmt::Display for SubalgebraEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {{ ", self.id)?;
        for (k, b) in self.basis.iter().enumerate() {
            if k > 0 {
                f.write_str(" ; ")?;
            }
            for (i, (c, g)) in b.terms.iter().enumerate() {
                let neg = c.factor < 0.0;
                match (i, neg) {
                    (0, true) => f.write_str("-")?,
                    (0, false) => {}
                    (_, true) => f.write_str(" - ")?,
                    (_, false) => f.write_str(" + ")?,
                }
                if c.factor.abs() != 1.0 {
                    write!(f, "{}*", c.factor.abs())?;
                }
                for p in &c.params {
                    write!(f, "{p}*")?;
                }
                write!(f, "{g}")?;
            }
        }
        f.write_str(" }")?;
        for (i, (n, d)) in self.params.iter().enumerate() {
            f.write_str(if i == 0 { " | " } else { ", " })?;
            write!(f, "{n}:{d}")?;
        }
        Ok(())
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|h| h.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn parse_term(term: &str, sign: f64, line: usize) -> Result<(Coef, Gen), LieError> {
    let err = |msg: String| LieError::Parse { line, msg };
    let mut factors: Vec<&str> = term.split('*').collect();
    let gen_name = factors.pop().filter(|s| !s.is_empty()).ok_or_else(|| err(format!("empty term in '{term}'")))?;
    let g: Gen = gen_name.parse().map_err(|_| err(format!("unknown generator '{gen_name}'")))?;
    let mut coef = Coef { factor: sign, params: Vec::new() };
    for f in factors {
        if let Ok(v) = f.parse::<f64>() {
            coef.factor *= v;
        } else if is_ident(f) {
            coef.params.push(f.to_string());
        } else {
            return Err(err(format!("bad coefficient '{f}'")));
        }
    }
    Ok((coef, g))
}

fn parse_combo(s: &str, line: usize) -> Result<ComboTemplate, LieError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(LieError::Parse { line, msg: "empty basis element".into() });
    }
    let mut terms = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1.0, &rest[1..]),
            b'+' => (1.0, &rest[1..]),
            _ => (1.0, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        terms.push(parse_term(&body[..end], sign, line)?);
        rest = &body[end..];
    }
    Ok(ComboTemplate { terms })
}

fn parse_line(text: &str, line: usize) -> Result<SubalgebraEntry, LieError> {
    let err = |msg: &str| LieError::Parse { line, msg: msg.to_string() };
    let (id, rest) = text.split_once('=').ok_or_else(|| err("expected '<id> = { ... }'"))?;
    let id = id.trim();
    if id.is_empty() {
        return Err(err("missing label"));
    }
    let rest = rest.trim();
    let body = rest.strip_prefix('{').ok_or_else(|| err("expected '{'"))?;
    let (inner, tail) = body.split_once('}').ok_or_else(|| err("unclosed '{'"))?;
    let basis = inner.split(';').map(|c| parse_combo(c, line)).collect::<Result<Vec<_>, _>>()?;

    let mut params: Vec<(String, Domain)> = Vec::new();
    let tail = tail.trim();
    if !tail.is_empty() {
        let decl = tail.strip_prefix('|').ok_or_else(|| err("expected '|' before parameter domains"))?;
        for item in decl.split(',') {
            let (name, dom) = item.split_once(':').ok_or_else(|| err("parameter domain must read 'name:domain'"))?;
            let (name, dom) = (name.trim(), dom.trim());
            if !is_ident(name) {
                return Err(err(&format!("bad parameter name '{name}'")));
            }
            let d = Domain::parse(dom).ok_or_else(|| err(&format!("unknown domain '{dom}'")))?;
            params.push((name.to_string(), d));
        }
    }
    // Parameters used but not declared get the conventional domain of their name.
    for b in &basis {
        for (c, _) in &b.terms {
            for p in &c.params {
                if params.iter().all(|(n, _)| n != p) {
                    let d = Domain::infer(p).ok_or_else(|| err(&format!("parameter '{p}' has no domain")))?;
                    params.push((p.clone(), d));
                }
            }
        }
    }
    Ok(SubalgebraEntry { id: id.to_string(), basis, params, line })
}

pub fn parse_catalog(text: &str) -> Result<Vec<SubalgebraEntry>, LieError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_line(l, i + 1))
        .collect()
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<SubalgebraEntry>, LieError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| LieError::Io { path: path.display().to_string(), source: e })?;
    parse_catalog(&text).map_err(|e| match e {
        LieError::Parse { line, msg } => LieError::Parse { line, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureOptions {
    pub min_draws: usize,
    pub max_draws: usize,
    pub n_points: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { min_draws: 3, max_draws: 64, n_points: 40, tol: 1e-8, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureFailure {
    pub values: BTreeMap<String, f64>,
    pub pair: (usize, usize),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub id: String,
    pub draws: usize,
    pub max_residual: f64,
    /// Draws whose basis is linearly dependent.
    pub degenerate: Vec<BTreeMap<String, f64>>,
    pub failures: Vec<ClosureFailure>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.degenerate.is_empty()
    }
}

fn rank(basis: &[Combo]) -> usize {
    let rows: Vec<f64> = basis.iter().flat_map(|c| c.coefficients()).collect();
    DMatrix::from_row_slice(basis.len(), 15, &rows).rank(1e-9)
}

/// Checks that every bracket of basis elements lies in their span, for each
/// parameter draw.
pub fn verify_subalgebra_closure(e: &SubalgebraEntry, opts: &ClosureOptions) -> Result<ClosureReport, LieError> {
    let points = sample_points(opts.n_points, opts.seed);
    let draws = e.draws(opts.min_draws, opts.max_draws, opts.seed);
    let mut report =
        ClosureReport { id: e.id.clone(), draws: draws.len(), max_residual: 0.0, degenerate: Vec::new(), failures: Vec::new() };
    for values in draws {
        let basis = e.instantiate(&values)?;
        if rank(&basis) < basis.len() {
            report.degenerate.push(values);
            continue;
        }
        if basis.len() < 2 {
            continue;
        }
        let fit = SpanFit::new(&points, &basis)?;
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let r = fit.expand_field(&Bracket(&basis[i], &basis[j]), &points).residual;
                report.max_residual = report.max_residual.max(r);
                if r >= opts.tol {
                    report.failures.push(ClosureFailure { values: values.clone(), pair: (i, j), residual: r });
                }
            }
        }
    }
    Ok(report)
}

/// Closure of a printed row, and of its corrected reading when one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryVerdict {
    pub file: String,
    pub printed: ClosureReport,
    pub corrected: Option<ClosureReport>,
}

impl EntryVerdict {
    /// The printed row closes, or its failure is resolved by a correction.
    pub fn resolved(&self) -> bool {
        self.printed.passed() || self.corrected.as_ref().is_some_and(ClosureReport::passed)
    }
}

/// Verifies every shipped catalog in `dir` against its corrections.
pub fn verify_catalogs(dir: &Path, opts: &ClosureOptions) -> Result<Vec<EntryVerdict>, LieError> {
    let corrections = load_catalog(dir.join(CORRECTIONS))?;
    let mut out = Vec::new();
    for file in SHIPPED {
        for entry in load_catalog(dir.join(file))? {
            let printed = verify_subalgebra_closure(&entry, opts)?;
            let corrected = corrections
                .iter()
                .find(|c| c.id == entry.id)
                .map(|c| verify_subalgebra_closure(c, opts))
                .transpose()?;
            out.push(EntryVerdict { file: file.to_string(), printed, corrected });
        }
    }
    Ok(out)
}
