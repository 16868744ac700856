//! Check records and the run report built from them.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub id: String,
    pub status: Status,
    pub value: f64,
    /// `None` for values that are reported but not gated.
    pub tol: Option<f64>,
    /// Errata entry this check relies on, if any.
    #[serde(rename = "ref")]
    pub reference: Option<String>,
}

impl Record {
    /// Passes when `value < tol`; NaN fails.
    pub fn below(id: impl Into<String>, value: f64, tol: f64) -> Self {
        let status = if value < tol { Status::Pass } else { Status::Fail };
        Record { id: id.into(), status, value, tol: Some(tol), reference: None }
    }

    /// Passes when `value == 0` exactly (counts of violations).
    pub fn zero(id: impl Into<String>, count: usize) -> Self {
        let status = if count == 0 { Status::Pass } else { Status::Fail };
        Record { id: id.into(), status, value: count as f64, tol: Some(0.0), reference: None }
    }

    pub fn info(id: impl Into<String>, value: f64) -> Self {
        Record { id: id.into(), status: Status::Skip, value, tol: None, reference: None }
    }

    pub fn failed(id: impl Into<String>) -> Self {
        Record { id: id.into(), status: Status::Fail, value: f64::NAN, tol: None, reference: None }
    }

    pub fn cite(mut self, erratum: &str) -> Self {
        self.reference = Some(erratum.to_string());
        self
    }

    pub fn failing(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Figure metadata echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureEcho {
    pub id: u32,
    pub title: String,
    pub family: String,
    pub quoted: Vec<(String, String)>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub checks: Vec<Record>,
    pub errata: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub figures: Vec<FigureEcho>,
    /// The only field that varies between identical runs.
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64, mut checks: Vec<Record>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut errata: Vec<String> = checks.iter().filter_map(|c| c.reference.clone()).collect();
        errata.sort();
        errata.dedup();
        RunReport { command, seed, checks, errata, figures: Vec::new(), wall_time_s: 0.0 }
    }

    /// Failure iff any gated check failed; skipped checks never count.
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Record::failing)
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// `id,status,value,tol,ref`, free of timing so identical runs
    /// produce identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,status,value,tol,ref\n");
        for c in &self.checks {
            let tol = c.tol.map(|t| format!("{t:e}")).unwrap_or_default();
            let reference = c.reference.as_deref().unwrap_or("");
            let _ = writeln!(out, "{},{},{:e},{},{}", quote(&c.id), c.status, c.value, tol, reference);
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in self.checks.iter().filter(|c| c.status != Status::Pass) {
            let tol = c.tol.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
            let _ = writeln!(out, "{:4} {} = {:e}{tol}", c.status, c.id, c.value);
        }
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed, {} reported only; {:.1} s",
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip),
            self.wall_time_s
        );
        if !self.errata.is_empty() {
            let _ = writeln!(out, "errata cited: {}", self.errata.join(", "));
        }
        out
    }

    /// Writes `path` as JSON and a sibling `.csv` with the check table.
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json())?;
        std::fs::write(path.with_extension("csv"), self.to_csv())
    }
}

fn quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skipped_checks_do_not_fail_a_run() {
        let r = RunReport::new(vec![], 42, vec![Record::below("a", 1.0, 2.0), Record::info("b", 9.0)]);
        assert!(r.passed());
        let r = RunReport::new(vec![], 42, vec![Record::below("a", 3.0, 2.0)]);
        assert!(!r.passed());
    }

    #[test]
    fn nan_fails_a_gate() {
        assert!(Record::below("x", f64::NAN, 1.0).failing());
    }

    #[test]
    fn checks_are_sorted_and_errata_collected() {
        let r = RunReport::new(
            vec![],
            1,
            vec![Record::zero("z", 0).cite("e2"), Record::zero("a", 0).cite("e1"), Record::zero("m", 0).cite("e1")],
        );
        let ids: Vec<_> = r.checks.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "m", "z"]);
        assert_eq!(r.errata, ["e1", "e2"]);
    }

    #[test]
    fn csv_quotes_ids_with_commas() {
        let r = RunReport::new(vec![], 1, vec![Record::zero("catalog.L_2,11", 0)]);
        assert_eq!(r.to_csv().lines().nth(1).unwrap(), "\"catalog.L_2,11\",PASS,0e0,0e0,");
    }

    #[test]
    fn json_uses_ref_and_null_for_ungated() {
        let r = RunReport::new(vec!["x".into()], 7, vec![Record::info("jump", 0.06)]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let c = &v["checks"][0];
        assert_eq!(c["status"], "SKIP");
        assert!(c["tol"].is_null() && c["ref"].is_null());
        assert_eq!(v["seed"], 7);
    }
}
