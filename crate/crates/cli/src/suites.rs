//! Check batteries. Each returns flat records; ordering is left to the
//! report, which sorts by id.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use diegeom::{
    convergence_ratio, flow_tangency_error, reproduce_figure, trace_flow_line, CurveKind, FigureOutput, Seed,
};
use fieldcore::{numeric_jet_default, pde_residual};
use liealg::family::{generator_pair, members};
use liealg::{
    automorphism_check, jacobi_check, load_catalog, symmetry_check, verify_infinite_family, verify_structure_table_seeded,
    verify_subalgebra_closure, ClosureOptions, Gen, InfiniteFamily, Integrated, Reflection, SignFlippedK, StructureTable,
};
use solutions::errata::all_probes;
use solutions::reduced::first_integral;
use solutions::{make_solution, reduced_system_residual, ArbFn, At, Family, Params, ReducedSystem, Solution};

use crate::report::{FigureEcho, Record, Status};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Table {
    L,
    S,
}

impl Table {
    pub fn structure(self) -> StructureTable {
        match self {
            Table::L => StructureTable::fourteen(),
            Table::S => StructureTable::seven(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Table::L => "L",
            Table::S => "S",
        }
    }
}

/// Structure constants by sampled brackets, plus the exact integer checks
/// on the tables and the infinite-family constraints.
pub fn algebra(tables: &[Table], samples: usize, tol: f64, seed: u64) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    for &t in tables {
        let table = t.structure();
        let name = t.name();
        let report = verify_structure_table_seeded(&table, samples, tol, seed)?;
        for c in &report.cells {
            let r = Record::below(format!("algebra.{name}.[{},{}]", c.row, c.col), c.coefficient_error.max(c.residual), tol);
            out.push(match (c.row, c.col) {
                (Gen::D2, Gen::P2) if t == Table::L => r.cite("table-d2-p2"),
                (Gen::K, _) | (_, Gen::K) => r.cite("generator-k-sign"),
                _ => r,
            });
        }
        out.push(Record::zero(format!("algebra.{name}.antisymmetry"), table.antisymmetry_violations().len()));
        let jacobi = jacobi_check(&table);
        out.push(Record::zero(format!("algebra.{name}.jacobi"), jacobi.failures.len()));
        if t == Table::L {
            for r in [Reflection::R1, Reflection::R2] {
                out.push(Record::zero(format!("algebra.L.automorphism.{r:?}"), automorphism_check(&table, r).len()));
            }
        }
    }
    for which in [InfiniteFamily::Spatial, InfiniteFamily::Velocity] {
        for g in members(which) {
            let worst = verify_infinite_family(which, generator_pair(g, which), 20);
            out.push(Record::below(format!("algebra.infinite.{which:?}.{g}").to_lowercase(), worst, 1e-12));
        }
    }
    Ok(out)
}

/// Span closure of catalog rows. With `file`, only that catalog; rows are
/// matched against the corrections in `dir` either way.
pub fn catalog(dir: &Path, file: Option<&Path>, seed: u64) -> Result<Vec<Record>, CliError> {
    let opts = ClosureOptions { seed, ..ClosureOptions::default() };
    let corrections = load_catalog(dir.join(liealg::catalog::CORRECTIONS))?;
    let files: Vec<std::path::PathBuf> = match file {
        Some(f) => vec![f.to_path_buf()],
        None => liealg::catalog::SHIPPED.iter().map(|f| dir.join(f)).collect(),
    };
    let mut out = Vec::new();
    for path in files {
        for entry in load_catalog(&path)? {
            let printed = verify_subalgebra_closure(&entry, &opts)?;
            let id = format!("catalog.{}", entry.id);
            if printed.passed() {
                let mut r = Record::below(&id, printed.max_residual, opts.tol);
                if printed.draws < opts.min_draws {
                    r.status = Status::Fail;
                }
                out.push(r);
                continue;
            }
            out.push(Record::info(format!("{id}.printed"), printed.max_residual));
            match corrections.iter().find(|c| c.id == entry.id) {
                Some(c) => {
                    let fixed = verify_subalgebra_closure(c, &opts)?;
                    let mut r = Record::below(&id, fixed.max_residual, opts.tol);
                    if !fixed.passed() || fixed.draws < opts.min_draws {
                        r.status = Status::Fail;
                    }
                    out.push(r.cite(&format!("catalog:{}", entry.id)));
                }
                None => {
                    let mut r = Record::below(&id, printed.max_residual, opts.tol);
                    r.status = Status::Fail;
                    out.push(r);
                }
            }
        }
    }
    Ok(out)
}

/// The parameter instance each family is checked at.
pub fn instance(f: Family) -> Params {
    match f {
        Family::Rigid => Params::new().with("b1", 1.3).with("b2", -0.4).with("b3", 0.7).with("sigma0", 0.2).with("theta0", 0.3),
        Family::KPis => Params::new().with("c2", -1.0).with("c3", -2.0).with("c4", 4.0).with("c5", 1.0),
        Family::SimC1zMulC => Params::new().with("c3", 1.5).with("omega2", 0.7),
        _ => Params::new(),
    }
}

const SAMPLES: usize = 100;
const SIMPLE: [Gen; 9] = [Gen::P1, Gen::P2, Gen::P3, Gen::P4, Gen::P5, Gen::D1, Gen::D2, Gen::L, Gen::B2];

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

fn family_checks(f: Family, seed: u64) -> Result<Vec<Record>, CliError> {
    let s = make_solution(f, &instance(f))?;
    let id = f.id();
    let pts = s.sample_points(SAMPLES, seed);
    let mut out = Vec::new();
    out.push(Record::zero(format!("solutions.{id}.missing_samples"), SAMPLES - pts.len()));
    let (mut worst, mut div, mut fd, mut speed) = (0f64, 0f64, 0f64, 0f64);
    for &(x, y) in &pts {
        let jet = s.jet(x, y)?;
        let r = pde_residual(&jet)?;
        worst = worst.max(max_abs(r));
        div = div.max((jet.d_x.u + jet.d_y.v).abs());
        let num = numeric_jet_default(|a, b| s.state(a, b), x, y)?;
        fd = fd.max(jet.max_rel_diff(&num));
        if f == Family::B1Implicit {
            let c1 = s.params().get("c1").unwrap_or(5.0);
            speed = speed.max((jet.state.u.powi(2) + jet.state.v.powi(2) - c1 * c1).abs());
        }
    }
    out.push(Record::below(format!("solutions.{id}.residual"), worst, f.residual_tolerance()));
    out.push(Record::below(format!("solutions.{id}.divergence"), div, 1e-10));
    out.push(Record::below(format!("solutions.{id}.jet_vs_differences"), fd, 1e-6));
    if f == Family::B1Implicit {
        out.push(Record::below(format!("solutions.{id}.kinetic_energy"), speed, 1e-10));
        for t in [ArbFn::ArcsinHalf, ArbFn::Identity, ArbFn::CnBump { b: 3.0, rho: 0.5 }] {
            let sys = ReducedSystem::B1Reduced { t: &t, c1: 5.0, c2: 0.3 };
            let mut w = 0f64;
            for k in 0..50 {
                let xi = -0.95 + 1.9 * k as f64 / 49.0;
                w = w.max(max_abs(reduced_system_residual(&sys, At::Xi(xi))?));
            }
            out.push(Record::below(format!("reduced.{id}.T={t}"), w, 1e-9));
        }
    }
    if f == Family::KPis {
        let sys = ReducedSystem::KXiPde { eps: 1.0 };
        let w = max_abs(pts.iter().take(30).map(|&(x, y)| {
            reduced_system_residual(&sys, At::Point(x, y)).map(|r| r[0]).unwrap_or(f64::NAN)
        }));
        out.push(Record::below(format!("reduced.{id}.invariant_pde"), w, 1e-8));
    }
    if let Some(p) = s.profile() {
        let c1 = p.c1();
        let fi = max_abs(pts.iter().map(|&(x, y)| first_integral(p, y / x).map(|v| v - c1).unwrap_or(f64::NAN)));
        out.push(Record::below(format!("solutions.{id}.first_integral"), fi, 1e-8));
        let c3 = s.params().get("c3").unwrap_or(0.0);
        let sys = ReducedSystem::SimSigmaSystem { profile: p, c3 };
        let compat = max_abs(pts.iter().map(|&(x, y)| {
            reduced_system_residual(&sys, At::Point(x, y)).map(|r| r[2]).unwrap_or(f64::NAN)
        }));
        out.push(Record::below(format!("solutions.{id}.sigma_mixed_derivatives"), compat, 1e-6));
    }
    out.extend(symmetry_checks(&s, seed)?);
    Ok(out)
}

fn symmetry_checks(s: &Solution, seed: u64) -> Result<Vec<Record>, CliError> {
    let id = s.family().id();
    let mut out = Vec::new();
    let jets = |x: f64, y: f64| s.jet(x, y);
    match s.family() {
        Family::Rigid | Family::KPis => {
            let pts = s.sample_points(30, seed);
            for g in SIMPLE {
                for t in [-0.5, 0.5] {
                    let r = symmetry_check(&g, jets, t, &pts)?;
                    let mut rec = Record::below(format!("symmetry.{id}.{g}.t={t:+}"), r.max_residual, 1e-7);
                    if r.tested < 25 {
                        rec.status = Status::Fail;
                    }
                    out.push(rec);
                }
            }
        }
        Family::SimC1zAddA => {
            let pts = s.sample_points(30, seed);
            for t in [-0.3, 0.3] {
                let r = symmetry_check(&Integrated(Gen::K), jets, t, &pts)?;
                let mut rec = Record::below(format!("symmetry.{id}.K.t={t:+}"), r.max_residual, 1e-5);
                if r.tested < 20 {
                    rec.status = Status::Fail;
                }
                out.push(rec.cite("generator-k-sign"));
            }
            // The printed K must not pass for a symmetry.
            let r = symmetry_check(&Integrated(SignFlippedK), jets, 0.3, &pts)?;
            let status = if r.max_residual > 1e-2 { Status::Pass } else { Status::Fail };
            out.push(Record {
                id: format!("symmetry.{id}.K_as_printed_rejected"),
                status,
                value: r.max_residual,
                tol: Some(1e-2),
                reference: Some("generator-k-sign".into()),
            });
        }
        _ => {}
    }
    Ok(out)
}

/// Residual gates, conservation laws, reduced equations and symmetry
/// action for the given families, plus the errata probes that touch them.
pub fn solutions(families: &[Family], seed: u64) -> Result<Vec<Record>, CliError> {
    let results: Vec<Result<Vec<Record>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = families.iter().map(|&f| scope.spawn(move || family_checks(f, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("family checks do not panic")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    let profile_selected = families.iter().any(|f| f.quadrature_grade());
    for p in all_probes()? {
        let relevant = match p.family {
            Some(f) => families.contains(&f),
            None => profile_selected,
        };
        if !relevant {
            continue;
        }
        out.push(Record::info(format!("errata.{}.printed", p.id), p.printed).cite(p.id));
        let mut r = Record::below(format!("errata.{}.corrected", p.id), p.corrected, p.tol).cite(p.id);
        if !p.confirms_correction() {
            r.status = Status::Fail;
        }
        out.push(r);
    }
    Ok(out)
}

fn tracing_cases() -> Result<Vec<(Solution, Seed)>, CliError> {
    let p = |s: &str| s.parse::<Params>();
    Ok(vec![
        (make_solution(Family::Rigid, &p("b1=1,b2=0.2")?)?, Seed::new(1.0, 0.0, 5e-4, 4000)),
        (make_solution(Family::KPis, &p("c2=-1,c3=-2,c4=4,c5=1")?)?, Seed::new(-0.5, -0.8, 5e-4, 1200)),
        (make_solution(Family::B1Implicit, &p("c1=5")?)?, Seed::new(-0.5, -0.35, 5e-4, 4000).with_hint(1.9528)),
        (make_solution(Family::SimC1zAddA, &Params::new())?, Seed::new(0.5, 0.3, 5e-4, 4000)),
        (make_solution(Family::SimC1zAddB, &Params::new())?, Seed::new(0.0, -2.0, 5e-4, 8000).bridging()),
    ])
}

/// Tangency, step-halving order, closure of the rigid rotation and the
/// winding law of the spiral flow.
pub fn geometry() -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    for (s, seed) in tracing_cases()? {
        let line = trace_flow_line(&s, &seed)?;
        out.push(Record::below(format!("geometry.tangency.{}", s.family().id()), flow_tangency_error(&s, &line), 1e-6));
    }
    let k = make_solution(Family::KPis, &"c2=-1,c3=-2,c4=4,c5=1".parse()?)?;
    let ratio = convergence_ratio(&k, &Seed::new(-0.5, -0.8, 0.02, 0), 0.5)?;
    out.push(Record::below("geometry.step_halving_order_error", (ratio.log2() - 4.0).abs(), 0.25));

    let rigid = make_solution(Family::Rigid, &"b1=1".parse()?)?;
    let n = 6283;
    let turn = trace_flow_line(&rigid, &Seed::new(1.0, 0.0, 2.0 * PI / n as f64, n))?;
    let (x, y) = turn.last();
    let mut closure = Record::below("geometry.rigid_closure_gap", (x - 1.0).hypot(y), 1e-6);
    if turn.len() != n + 1 {
        closure.status = Status::Fail;
    }
    out.push(closure);

    let (c2, c3) = (1.0, 2.0);
    let spiral = make_solution(Family::KPis, &Params::new().with("c2", c2).with("c3", c3))?;
    let line = trace_flow_line(&spiral, &Seed::new(0.5, 0.5, 1e-3, 3000))?;
    let (mut phi, mut prev) = (0.0, f64::NAN);
    let mut invariant = Vec::with_capacity(line.len());
    for q in &line.points {
        let a = q.1.atan2(q.0);
        if prev.is_nan() {
            phi = a;
        } else {
            let d = a - prev;
            phi += d - (d / (2.0 * PI)).round() * 2.0 * PI;
        }
        prev = a;
        invariant.push(q.0 * q.0 + q.1 * q.1 + 2.0 * c2 / c3 * phi);
    }
    let lo = invariant.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = invariant.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.push(Record::below("geometry.spiral_r2_linear_in_angle", hi - lo, 1e-9).cite("log-spiral"));
    Ok(out)
}

fn check_slug(name: &str) -> String {
    name.replace(" (rad)", "")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect::<String>()
        .split('_')
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("_")
}

/// Records and report metadata for one regenerated figure.
pub fn figure_records(out: &FigureOutput) -> (Vec<Record>, FigureEcho) {
    let id = out.spec.id;
    let mut records: Vec<Record> = out
        .checks
        .iter()
        .map(|c| {
            let rid = format!("figure{id}.{}", check_slug(&c.name));
            let r = match c.tol {
                Some(t) => Record::below(rid, c.value, t),
                None => Record::info(rid, c.value),
            };
            if id == 4 && c.tol.is_none() {
                r.cite("figure4-axis-exit")
            } else {
                r
            }
        })
        .collect();
    let empty = out.curves.iter().filter(|c| c.len() < 2).count();
    records.push(Record::zero(format!("figure{id}.degenerate_curves"), empty));
    if out.geometry.is_none() {
        let arrows = out.curves.iter().filter(|c| c.kind == CurveKind::Vector).count();
        records.push(Record::info(format!("figure{id}.arrows"), arrows as f64));
    }
    let echo = FigureEcho {
        id,
        title: out.spec.title.to_string(),
        family: out.spec.family.id().to_string(),
        quoted: out.spec.quoted.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        files: out.files.iter().filter_map(|p| p.file_name()).map(|f| f.to_string_lossy().into_owned()).collect(),
    };
    (records, echo)
}

/// Regenerates figures into `dir` and checks the written files parse.
pub fn figures(ids: &[u32], dir: &Path) -> Result<(Vec<Record>, Vec<FigureEcho>), CliError> {
    let outputs: Vec<Result<FigureOutput, diegeom::GeomError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ids.iter().map(|&id| scope.spawn(move || reproduce_figure(id, dir))).collect();
        handles.into_iter().map(|h| h.join().expect("figure threads do not panic")).collect()
    });
    let mut records = Vec::new();
    let mut echoes = Vec::new();
    for o in outputs {
        let o = o?;
        let (r, e) = figure_records(&o);
        let mut unreadable = 0;
        for f in o.files.iter().filter(|f| f.extension().is_some_and(|e| e == "csv")) {
            let ok = std::fs::read_to_string(f).ok().and_then(|t| diegeom::parse_csv(&t).ok()).is_some_and(|c| !c.is_empty());
            unreadable += usize::from(!ok);
        }
        records.extend(r);
        records.push(Record::zero(format!("figure{}.unreadable_files", o.spec.id), unreadable));
        echoes.push(e);
    }
    echoes.sort_by_key(|e| e.id);
    Ok((records, echoes))
}

/// Parses `ID` or `all` into families.
pub fn parse_families(spec: &str) -> Result<Vec<Family>, CliError> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(Family::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse::<Family>().map_err(|_| CliError::Usage(format!("unknown family `{s}`")))).collect()
}

/// Family ids keyed by name, for help text.
pub fn family_ids() -> BTreeMap<&'static str, Family> {
    Family::ALL.iter().map(|f| (f.id(), *f)).collect()
}
