use std::collections::BTreeSet;

use liealg::catalog::{SHIPPED, CORRECTIONS};
use liealg::{catalog_dir, load_catalog, verify_catalogs, ClosureOptions};

#[test]
fn shipped_catalog_sizes() {
    let dir = catalog_dir();
    let count = |f: &str| load_catalog(dir.join(f)).unwrap().len();
    assert_eq!(count("L_dim1.txt"), 53);
    assert_eq!(count("S_dim1.txt"), 39);
    assert_eq!(count("S_dim2.txt"), 61);
    assert_eq!(count("L_dim2_partial.txt"), 43);
}

#[test]
fn labels_are_unique_within_a_file() {
    let dir = catalog_dir();
    for f in SHIPPED.iter().chain([&CORRECTIONS]) {
        let entries = load_catalog(dir.join(f)).unwrap();
        let ids: BTreeSet<_> = entries.iter().map(|e| e.id.clone()).collect();
        assert_eq!(ids.len(), entries.len(), "{f}");
    }
}

#[test]
fn every_row_closes_or_has_a_closing_correction() {
    let verdicts = verify_catalogs(&catalog_dir(), &ClosureOptions::default()).unwrap();
    let unresolved: Vec<_> = verdicts.iter().filter(|v| !v.resolved()).map(|v| v.printed.id.clone()).collect();
    assert!(unresolved.is_empty(), "{unresolved:?}");
    assert!(verdicts.iter().all(|v| v.printed.draws >= 3));
    let failing: BTreeSet<_> = verdicts.iter().filter(|v| !v.printed.passed()).map(|v| v.printed.id.as_str()).collect();
    let corrected: BTreeSet<_> =
        load_catalog(catalog_dir().join(CORRECTIONS)).unwrap().into_iter().map(|e| e.id).collect();
    // Every correction is needed, and every printed failure has one.
    assert_eq!(failing, corrected.iter().map(String::as_str).collect());
}

#[test]
fn directory_override() {
    let tmp = std::env::temp_dir().join(format!("catalog-override-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    for f in SHIPPED.iter().chain([&CORRECTIONS]) {
        std::fs::write(tmp.join(f), "# empty\n").unwrap();
    }
    std::fs::write(tmp.join("S_dim2.txt"), "S_2,1 = { B1 ; D2 }\n").unwrap();
    let v = verify_catalogs(&tmp, &ClosureOptions::default()).unwrap();
    assert_eq!(v.len(), 1);
    assert!(v[0].resolved());
    std::fs::remove_dir_all(&tmp).unwrap();
}
