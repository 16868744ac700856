use std::path::PathBuf;

use diegeom::{export, figure_spec, reproduce_figure, CurveKind, GeomError};

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("diegeom-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn every_die_figure_passes_its_gated_checks() {
    for id in [1, 3, 4, 5] {
        let dir = scratch(&format!("fig{id}"));
        let out = reproduce_figure(id, &dir).unwrap();
        for c in &out.checks {
            assert!(c.passed(), "figure {id}: {} = {:e} (tol {:?})", c.name, c.value, c.tol);
        }
        let g = out.geometry.as_ref().expect("die layout");
        assert!(g.max_snap_gap() < 1e-9, "figure {id}: {:e}", g.max_snap_gap());
        // Every curve appears once as CSV and once as SVG, plus the combined pair.
        assert_eq!(out.files.len(), 2 * out.curves.len() + 2);
        for f in out.files.iter().filter(|f| f.extension().is_some_and(|e| e == "csv")) {
            let text = std::fs::read_to_string(f).unwrap();
            let curves = export::parse_csv(&text).unwrap();
            assert!(!curves.is_empty() && curves.iter().all(|c| c.len() >= 2), "{f:?}");
        }
        let all = std::fs::read_to_string(dir.join(format!("figure{id}_all.svg"))).unwrap();
        assert_eq!(all.matches("<path").count(), out.curves.len());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

#[test]
fn first_figure_contours_run_at_the_quoted_speed() {
    let dir = scratch("speed");
    let out = reproduce_figure(1, &dir).unwrap();
    let spec = figure_spec(1).unwrap();
    let s = spec.solution().unwrap();
    let g = out.geometry.unwrap();
    for c in [&g.inner, &g.outer] {
        assert!(c.arc_length() > 0.5);
        for (i, p) in c.points.iter().enumerate() {
            let st = s.state_near(p.0, p.1, c.thetas[i]).unwrap();
            assert!((st.speed() - 5.0).abs() < 1e-6, "{p:?}: {}", st.speed());
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn velocity_field_figure_is_a_grid_of_arrows() {
    let dir = scratch("fig2");
    let out = reproduce_figure(2, &dir).unwrap();
    assert!(out.geometry.is_none());
    // The singular origin is left out.
    assert_eq!(out.curves.len(), 41 * 41 - 1);
    assert!(out.curves.iter().all(|c| c.kind == CurveKind::Vector && c.len() == 2));
    let csv = std::fs::read_to_string(dir.join("figure2_field.csv")).unwrap();
    assert_eq!(export::parse_csv(&csv).unwrap().len(), 41 * 41 - 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn axis_exit_reports_its_velocity_jump() {
    let dir = scratch("fig4");
    let out = reproduce_figure(4, &dir).unwrap();
    let jump = out.checks.iter().find(|c| c.name.contains("normal-velocity jump")).expect("line check");
    assert!(jump.tol.is_none());
    // On y = 0 the material moves straight down at |F(0)|; extraction is 0.94.
    let s = figure_spec(4).unwrap().solution().unwrap();
    let on_axis = s.state(1.0, 0.0).unwrap();
    assert!(on_axis.u.abs() < 1e-12);
    assert!((jump.value - (on_axis.v + 0.94).abs()).abs() < 1e-9, "{}", jump.value);
    assert!((jump.value - 0.06).abs() < 1e-3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_figures_are_rejected() {
    for id in [0, 6] {
        assert!(matches!(figure_spec(id), Err(GeomError::UnknownFigure(n)) if n == id));
        assert!(matches!(reproduce_figure(id, &scratch("none")), Err(GeomError::UnknownFigure(_))));
    }
}
