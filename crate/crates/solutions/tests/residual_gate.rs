use fieldcore::{numeric_jet_default, pde_residual};
use solutions::{make_solution, Family, Params, Solution};

pub fn instance(f: Family) -> Solution {
    let p = match f {
        Family::Rigid => Params::new().with("b1", 1.3).with("b2", -0.4).with("b3", 0.7),
        Family::KPis => Params::new().with("c2", -1.0).with("c3", -2.0).with("c4", 4.0).with("c5", 1.0),
        Family::SimC1zMulC => Params::new().with("c3", 1.5).with("omega2", 0.7),
        _ => Params::new(),
    };
    make_solution(f, &p).unwrap()
}

#[test]
fn every_family_satisfies_the_system() {
    for f in Family::ALL {
        let s = instance(f);
        let pts = s.sample_points(100, 42);
        assert_eq!(pts.len(), 100, "{f}");
        let (mut worst, mut div, mut fd) = (0f64, 0f64, 0f64);
        for &(x, y) in &pts {
            let jet = s.jet(x, y).unwrap();
            let r = pde_residual(&jet).unwrap();
            worst = worst.max(r.iter().fold(0f64, |m, v| m.max(v.abs())));
            div = div.max(r[3].abs());
            let num = numeric_jet_default(|a, b| s.state(a, b), x, y).unwrap();
            fd = fd.max(jet.max_rel_diff(&num));
        }
        println!("{f:16} residual {worst:.2e} divergence {div:.2e} fd {fd:.2e}");
        assert!(worst < f.residual_tolerance(), "{f}: residual {worst:e}");
        assert!(div < 1e-10, "{f}: divergence {div:e}");
        assert!(fd < 1e-6, "{f}: numeric jet mismatch {fd:e}");
    }
}
