//! `plastsym`: verification suites, solution evaluation, tracing and figure
//! regeneration for planar ideal plasticity, with machine-readable reports.

pub mod errata;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use diegeom::{tangency_error, trace, Field, Seed, SlipBranch};
use fieldcore::{pde_residual, FeedVelocity};
use solutions::{make_solution, Family, Params};

use crate::report::{Record, RunReport};
use crate::suites::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lie(#[from] liealg::LieError),
    #[error(transparent)]
    Solution(#[from] solutions::SolutionError),
    #[error(transparent)]
    Geometry(#[from] diegeom::GeomError),
    #[error(transparent)]
    Field(#[from] fieldcore::FieldError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("errata: {0}")]
    Errata(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_CHECKS_FAILED,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "plastsym", version, about = "Exact solutions and symmetry checks for planar ideal plasticity")]
pub struct Cli {
    /// Seed for all quasi-random sampling.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Errata document to append cited entries to (default: ERRATA.md next to --out).
    #[arg(long, global = true)]
    pub errata: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Evaluate a solution at a point.
    Eval {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value = "", value_parser = parse_params)]
        params: Params,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        at: (f64, f64),
        /// Angle to continue θ from, for multi-branch families.
        #[arg(long, allow_hyphen_values = true)]
        hint: Option<f64>,
    },
    /// Trace a flow line, plasticity limit or slip line to CSV or SVG.
    Trace {
        #[arg(value_enum)]
        kind: TraceKind,
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value = "", value_parser = parse_params)]
        params: Params,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        start: (f64, f64),
        /// Feed velocity, required for `limit`.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        feed: Option<(f64, f64)>,
        /// Arc-length step; negative traces backwards.
        #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
        ds: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Slip-line family.
        #[arg(long, value_enum, default_value = "a")]
        branch: Branch,
        #[arg(long, allow_hyphen_values = true)]
        hint: Option<f64>,
        /// Step across removable gaps in the solution's domain.
        #[arg(long)]
        bridge: bool,
        /// Output file; `.svg` writes SVG, anything else CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate a die figure as CSV and SVG.
    Figure {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=5))]
        id: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every suite and regenerate all figures.
    Report {
        /// JSON report path; a `.csv` sibling, `ERRATA.md` and `figures/` are written next to it.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Structure constants, Jacobi identity, automorphisms, infinite families.
    Algebra {
        #[arg(long, value_enum)]
        table: Option<TableArg>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Span closure of subalgebra catalogs.
    Catalog {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual gates and related checks for solution families.
    Solutions {
        /// A family id, a comma-separated list, or `all`.
        #[arg(long, default_value = "all", value_parser = suites_families)]
        family: FamilyList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableArg {
    #[value(name = "L")]
    L,
    #[value(name = "S")]
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceKind {
    Flow,
    Limit,
    Slip,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Branch {
    #[value(name = "a", alias = "A")]
    A,
    #[value(name = "b", alias = "B")]
    B,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|_| {
        let ids: Vec<_> = suites::family_ids().into_keys().collect();
        format!("unknown family `{s}` (one of {})", ids.join(", "))
    })
}

/// One or more families given as a single comma-separated argument.
#[derive(Debug, Clone)]
pub struct FamilyList(pub Vec<Family>);

fn suites_families(s: &str) -> Result<FamilyList, String> {
    suites::parse_families(s).map(FamilyList).map_err(|e| e.to_string())
}

fn parse_params(s: &str) -> Result<Params, String> {
    s.parse().map_err(|e: solutions::SolutionError| e.to_string())
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn sibling(out: &Path, name: &str) -> PathBuf {
    out.parent().filter(|d| !d.as_os_str().is_empty()).map(|d| d.join(name)).unwrap_or_else(|| PathBuf::from(name))
}

/// Writes the report, appends errata, prints the summary; returns the exit code.
fn finish(cli: &Cli, mut report: RunReport, out: Option<&Path>, started: Instant) -> Result<i32, CliError> {
    report.wall_time_s = started.elapsed().as_secs_f64();
    match out {
        Some(p) if p.as_os_str() == "-" => println!("{}", report.to_json()),
        Some(p) => report.write(p).map_err(io_err(p))?,
        None => {}
    }
    let errata_path = cli.errata.clone().or_else(|| out.filter(|p| p.as_os_str() != "-").map(|p| sibling(p, "ERRATA.md")));
    if let Some(path) = errata_path {
        let ledger = errata::Ledger::load(&liealg::catalog_dir())?;
        errata::append(&path, &ledger, &report.errata)?;
    }
    print!("{}", report.summary());
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECKS_FAILED })
}

fn execute(cli: &Cli, command: Vec<String>) -> Result<i32, CliError> {
    let started = Instant::now();
    match &cli.command {
        Command::Verify { what } => {
            let (records, out) = match what {
                Verify::Algebra { table, samples, tol, out } => {
                    let tables = match table {
                        Some(TableArg::L) => vec![Table::L],
                        Some(TableArg::S) => vec![Table::S],
                        None => vec![Table::L, Table::S],
                    };
                    (suites::algebra(&tables, *samples, *tol, cli.seed)?, out)
                }
                Verify::Catalog { file, out } => (suites::catalog(&liealg::catalog_dir(), file.as_deref(), cli.seed)?, out),
                Verify::Solutions { family, out } => (suites::solutions(&family.0, cli.seed)?, out),
            };
            finish(cli, RunReport::new(command, cli.seed, records), out.as_deref(), started)
        }
        Command::Eval { family, params, at, hint } => {
            let s = make_solution(*family, params)?;
            let (x, y) = *at;
            let jet = match hint {
                Some(h) => s.jet_near(x, y, *h)?,
                None => s.jet(x, y)?,
            };
            let residual = pde_residual(&jet)?.iter().fold(0f64, |m, r| m.max(r.abs()));
            let st = jet.state;
            let value = serde_json::json!({
                "family": family.id(), "x": x, "y": y,
                "sigma": st.sigma, "theta": st.theta, "u": st.u, "v": st.v,
                "residual": residual,
            });
            println!("{value}");
            Ok(EXIT_OK)
        }
        Command::Trace { kind, family, params, start, feed, ds, steps, branch, hint, bridge, out } => {
            let s = make_solution(*family, params)?;
            let field = match kind {
                TraceKind::Flow => Field::Flow,
                TraceKind::Limit => {
                    let (u, v) = feed.ok_or_else(|| CliError::Usage("`trace limit` needs --feed U,V".into()))?;
                    Field::Limit(FeedVelocity::new(u, v)?)
                }
                TraceKind::Slip => Field::Slip(match branch {
                    Branch::A => SlipBranch::A,
                    Branch::B => SlipBranch::B,
                }),
            };
            let mut seed = Seed::new(start.0, start.1, *ds, *steps);
            if let Some(h) = hint {
                seed = seed.with_hint(*h);
            }
            if *bridge {
                seed = seed.bridging();
            }
            let line = trace(&s, field, &seed)?;
            if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")) {
                diegeom::export_svg(&[&line], out)?;
            } else {
                diegeom::export_csv(&[&line], out)?;
            }
            let tangency = tangency_error(&s, field, &line);
            let records = vec![
                Record::below(format!("trace.{}.tangency", line.kind.name()), tangency, 1e-6),
                Record::info(format!("trace.{}.points", line.kind.name()), line.len() as f64),
                Record::info(format!("trace.{}.arc_length", line.kind.name()), line.arc_length()),
            ];
            println!("{} points, stopped: {:?}", line.len(), line.stop);
            finish(cli, RunReport::new(command, cli.seed, records), None, started)
        }
        Command::Figure { id, out } => {
            let (records, echoes) = suites::figures(&[*id], out)?;
            let mut report = RunReport::new(command, cli.seed, records);
            report.figures = echoes;
            let path = out.join(format!("figure{id}_report.json"));
            finish(cli, report, Some(&path), started)
        }
        Command::Report { out } => {
            let dir = out.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new(".")).to_path_buf();
            let fig_dir = dir.join("figures");
            let catalog = liealg::catalog_dir();
            let seed = cli.seed;
            let (a, c, s, g, f) = std::thread::scope(|scope| {
                let a = scope.spawn(|| suites::algebra(&[Table::L, Table::S], 50, 1e-8, seed));
                let c = scope.spawn(|| suites::catalog(&catalog, None, seed));
                let s = scope.spawn(|| suites::solutions(&Family::ALL, seed));
                let g = scope.spawn(suites::geometry);
                let f = scope.spawn(|| suites::figures(&[1, 2, 3, 4, 5], &fig_dir));
                let j = "suite threads do not panic";
                (a.join().expect(j), c.join().expect(j), s.join().expect(j), g.join().expect(j), f.join().expect(j))
            });
            let mut records = Vec::new();
            for part in [a?, c?, s?, g?] {
                records.extend(part);
            }
            let (fig_records, echoes) = f?;
            records.extend(fig_records);
            let mut report = RunReport::new(command, seed, records);
            report.figures = echoes;
            finish(cli, report, Some(out), started)
        }
    }
}
