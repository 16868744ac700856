//! The errata ledger: citations from checks resolved against a data file
//! and appended to a Markdown document.

use std::collections::BTreeSet;
use std::path::Path;

use crate::CliError;

pub const ERRATA_FILE: &str = "errata.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Erratum {
    pub id: String,
    pub location: String,
    pub summary: String,
}

#[derive(Debug, Clone, Default)]
pub struct Ledger {
    entries: Vec<Erratum>,
}

impl Ledger {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.splitn(3, '|').map(str::trim).collect();
            if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
                return Err(CliError::Errata(format!("line {}: expected `id | location | summary`", n + 1)));
            }
            entries.push(Erratum { id: parts[0].into(), location: parts[1].into(), summary: parts[2].into() });
        }
        Ok(Ledger { entries })
    }

    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(ERRATA_FILE);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Errata(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Exact id, or the longest entry ending in `:` or `,` that prefixes it.
    pub fn resolve(&self, citation: &str) -> Option<&Erratum> {
        self.entries.iter().find(|e| e.id == citation).or_else(|| {
            self.entries
                .iter()
                .filter(|e| (e.id.ends_with(':') || e.id.ends_with(',')) && citation.starts_with(&e.id))
                .max_by_key(|e| e.id.len())
        })
    }
}

const HEADER: &str = "# Errata\n\nCorrections to printed formulas and tables that the checks rely on.\n\
Entries are appended the first time a run cites them.\n";

/// Appends a section for every citation not already in the document at
/// `path`. Returns the citations that were added.
pub fn append(path: &Path, ledger: &Ledger, citations: &[String]) -> Result<Vec<String>, CliError> {
    let existing = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(CliError::Io { path: path.display().to_string(), source: e }),
    };
    let present: BTreeSet<&str> = existing.lines().filter_map(|l| l.strip_prefix("## ")).map(str::trim).collect();
    let mut text = if existing.is_empty() { HEADER.to_string() } else { existing.clone() };
    let mut added = Vec::new();
    for c in citations {
        if present.contains(c.as_str()) || added.contains(c) {
            continue;
        }
        let e = ledger.resolve(c).ok_or_else(|| CliError::Errata(format!("no errata entry for `{c}`")))?;
        text.push_str(&format!("\n## {c}\n\n- Printed at: {}\n- Correction: {}\n", e.location, e.summary));
        added.push(c.clone());
    }
    if !added.is_empty() || existing.is_empty() {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.display().to_string(), source: e })?;
        }
        std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    }
    Ok(added)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger() -> Ledger {
        Ledger::parse("# c\na | here | fix a\ncatalog: | tables | generic\ncatalog:S_2, | S table | specific\n").unwrap()
    }

    #[test]
    fn resolves_exact_then_longest_prefix() {
        let l = ledger();
        assert_eq!(l.resolve("a").unwrap().summary, "fix a");
        assert_eq!(l.resolve("catalog:S_2,20").unwrap().location, "S table");
        assert_eq!(l.resolve("catalog:L_2,11").unwrap().location, "tables");
        assert!(l.resolve("ab").is_none());
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(Ledger::parse("a | b\n").is_err());
        assert!(Ledger::parse("a | | c\n").is_err());
    }

    #[test]
    fn appending_is_idempotent() {
        let path = std::env::temp_dir().join(format!("errata-{}.md", std::process::id()));
        let _ = std::fs::remove_file(&path);
        let l = ledger();
        assert_eq!(append(&path, &l, &["a".into()]).unwrap(), ["a"]);
        let once = std::fs::read_to_string(&path).unwrap();
        assert!(append(&path, &l, &["a".into()]).unwrap().is_empty());
        assert_eq!(std::fs::read_to_string(&path).unwrap(), once);
        append(&path, &l, &["catalog:S_2,20".into(), "a".into()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("## ").count(), 2);
        assert!(text.contains("## catalog:S_2,20\n\n- Printed at: S table"));
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn shipped_ledger_parses() {
        let l = Ledger::load(&liealg::catalog_dir()).unwrap();
        assert!(l.resolve("k-pis-angle").is_some());
        assert!(l.resolve("catalog:L_2,27").is_some());
    }

    #[test]
    fn unknown_citation_is_an_error() {
        let path = std::env::temp_dir().join(format!("errata-unknown-{}.md", std::process::id()));
        assert!(append(&path, &ledger(), &["nope".into()]).is_err());
        let _ = std::fs::remove_file(&path);
    }
}
