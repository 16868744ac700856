use std::f64::consts::PI;

use fieldcore::{numeric_jet_default, QuasiRandom};
use proptest::prelude::*;
use solutions::profile::{quad_phi, similarity_j};
use solutions::{make_solution, solve_b1_implicit, ArbFn, Family, Params, SimilarityProfile, SolutionError};

#[test]
fn rigid_rotation_at_a_point() {
    let p = "b1=1,b2=0,b3=0,sigma0=0,theta0=0".parse().unwrap();
    let s = make_solution(Family::Rigid, &p).unwrap();
    let st = s.state(2.0, 3.0).unwrap();
    assert_eq!((st.u, st.v), (3.0, -2.0));
}

#[test]
fn polar_family_on_the_axis() {
    let s = make_solution(Family::SimC1zAddA, &Params::new().with("c2", 0.75)).unwrap();
    let st = s.state(1.0, 0.0).unwrap();
    assert_eq!(st.theta, 0.0);
    assert_eq!(st.sigma, 0.75);
}

#[test]
fn polar_angle_matches_atan2_on_right_half_plane() {
    let s = make_solution(Family::SimC1zMulB, &Params::new()).unwrap();
    let mut q = QuasiRandom::new(2, 7);
    for _ in 0..200 {
        let p = q.next_in(&[(0.01, 3.0), (-3.0, 3.0)]);
        let th = s.state(p[0], p[1]).unwrap().theta;
        let d = th - p[1].atan2(p[0]);
        assert!((d - PI * (d / PI).round()).abs() < 1e-12);
    }
}

#[test]
fn rotational_family_has_circular_flow_lines() {
    let s = make_solution(Family::SimC1zMulC, &Params::new().with("c3", 0.8).with("omega2", -1.3)).unwrap();
    for (x, y) in s.sample_points(100, 3) {
        let st = s.state(x, y).unwrap();
        assert!((x * st.u + y * st.v).abs() < 1e-12);
    }
}

#[test]
fn rotational_family_rejects_unequal_constants() {
    let e = make_solution(Family::SimC1zMulC, &Params::new().with("c3", 1.0).with("c4", 2.0)).unwrap_err();
    assert!(matches!(e, SolutionError::InvalidParam { ref name, .. } if name == "c4"));
}

#[test]
fn multiplicative_family_contains_the_rotational_one() {
    let omega2 = 2.0;
    let a = make_solution(
        Family::SimC1zMulA,
        &Params::new().with_fn("P", ArbFn::Poly(vec![0.0, 1.0])).with_fn("Q", ArbFn::Poly(vec![0.0])),
    )
    .unwrap();
    let c = make_solution(Family::SimC1zMulC, &Params::new().with("c3", 1.0).with("omega2", omega2)).unwrap();
    for (x, y) in a.sample_points(50, 11) {
        let (ja, jc) = (a.jet(x, y).unwrap(), c.jet(x, y).unwrap());
        assert!(ja.max_rel_diff(&jc) < 1e-12, "{ja:?} vs {jc:?}");
    }
}

#[test]
fn kinetic_energy_is_conserved() {
    let s = make_solution(Family::B1Implicit, &Params::new()).unwrap();
    let c1 = 5.0;
    for (x, y) in s.sample_points(200, 5) {
        let st = s.state(x, y).unwrap();
        assert!((st.u * st.u + st.v * st.v - c1 * c1).abs() < 1e-10);
        let (u, v) = solve_b1_implicit(x, y, &ArbFn::ArcsinHalf, c1, (st.u, st.v)).unwrap();
        assert!((u * u + v * v - c1 * c1).abs() < 1e-10);
    }
}

#[test]
fn kinetic_energy_family_with_other_functions() {
    for t in ["identity", "cn_bump(2,0.3)", "poly(0,0.5,0.2)"] {
        let p = Params::new().with("c1", 2.0).with_fn("T", t.parse().unwrap());
        let s = make_solution(Family::B1Implicit, &p).unwrap();
        for (x, y) in s.sample_points(20, 1) {
            let r = fieldcore::pde_residual(&s.jet(x, y).unwrap()).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-8), "{t}: {r:?}");
        }
    }
}

#[test]
fn k_pis_jet_agrees_with_differences_at_unit_point() {
    let p = "c2=-1,c3=-2,c4=4,c5=1".parse().unwrap();
    let s = make_solution(Family::KPis, &p).unwrap();
    let a = s.jet(1.0, 1.0).unwrap();
    let n = numeric_jet_default(|x, y| s.state(x, y), 1.0, 1.0).unwrap();
    assert!(a.max_rel_diff(&n) < 1e-7);
}

#[test]
fn k_pis_excludes_origin_only() {
    let s = make_solution(Family::KPis, &"c2=1,c3=1".parse().unwrap()).unwrap();
    assert!(!s.contains(0.0, 0.0));
    assert!(s.contains(1e-3, 0.0) && s.contains(0.0, -1e-3));
    assert!(matches!(s.jet(0.0, 0.0), Err(SolutionError::Domain { .. })));
}

#[test]
fn similarity_domains_need_positive_quadrant() {
    let s = make_solution(Family::SimC1nzAddA, &Params::new()).unwrap();
    assert!(s.contains(1.0, 0.5));
    assert!(!s.contains(-1.0, 0.5) && !s.contains(1.0, -0.5));
}

#[test]
fn jet_near_selects_angle_branch() {
    let s = make_solution(Family::KPis, &"c2=1,c3=1".parse().unwrap()).unwrap();
    let base = s.jet(0.6, 0.2).unwrap();
    let shifted = s.jet_near(0.6, 0.2, base.state.theta + 3.0).unwrap();
    assert!((shifted.state.theta - base.state.theta - PI).abs() < 1e-12);
    assert_eq!(shifted.d_x, base.d_x);
}

#[test]
fn missing_and_unknown_parameters() {
    assert!(make_solution(Family::KPis, &Params::new().with("c2", 1.0)).is_err());
    assert!(make_solution(Family::Rigid, &Params::new().with("b1", 1.0).with("zz", 0.0)).is_err());
    assert!(make_solution(Family::B1Implicit, &Params::new().with("c1", 0.0)).is_err());
    assert!(make_solution(Family::SimC1nzAddA, &Params::new().with("c1", 0.0)).is_err());
}

#[test]
fn phi_matches_substitution_in_angle() {
    // ∫ sin2J J′/ξ dξ = ∫ sin2J / ξ(J) dJ.
    let p = SimilarityProfile::new(-0.5, 0.0).unwrap();
    let (a, b) = (0.5, 4.0);
    let (ja, jb) = (similarity_j(a, &p).unwrap(), similarity_j(b, &p).unwrap());
    let n = 20_000;
    let h = (jb - ja) / n as f64;
    let g = |j: f64| (2.0 * j).sin() / p.xi_of(j);
    // Composite Simpson on the J-grid.
    let mut sum = g(ja) + g(jb);
    for k in 1..n {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * g(ja + k as f64 * h);
    }
    let by_angle = sum * h / 3.0;
    let by_xi = quad_phi(a, b, &p).unwrap();
    assert!((by_angle - by_xi).abs() < 1e-7, "{by_angle} vs {by_xi}");
}

#[test]
fn small_c1_profile_approaches_the_c1_zero_angle() {
    // J → −½ arctan(2ξ/(ξ² − 1)) modulo π/2 as c1 → 0.
    let c1 = 1e-4;
    let p = SimilarityProfile::new(c1, 0.0).unwrap();
    let (lo, hi) = p.range();
    for xi in [0.2, 0.5, 2.0, 5.0] {
        if xi < lo || xi > hi {
            continue;
        }
        let j = similarity_j(xi, &p).unwrap();
        let limit = -0.5 * (2.0 * xi / (xi * xi - 1.0)).atan();
        let d = j - limit;
        let d = d - (PI / 2.0) * (d / (PI / 2.0)).round();
        assert!(d.abs() < 100.0 * c1, "xi={xi}: J={j}, limit={limit}");
    }
}

proptest! {
    #[test]
    fn polar_families_are_divergence_free(
        x in 0.1f64..2.0, y in -2.0f64..2.0,
        omega in -2.0f64..2.0, u0 in -1.0f64..1.0, b in 0.5f64..10.0,
    ) {
        let p = Params::new().with("omega", omega).with("u0", u0)
            .with_fn("F", ArbFn::CnBump { b, rho: 0.5 });
        let s = make_solution(Family::SimC1zAddA, &p).unwrap();
        let j = s.jet(x, y).unwrap();
        prop_assert!((j.d_x.u + j.d_y.v).abs() < 1e-10);
        let r = fieldcore::pde_residual(&j).unwrap();
        prop_assert!(r.iter().all(|v| v.abs() < 1e-8));
    }

    #[test]
    fn pressure_shift_leaves_residual_unchanged(c1 in -3.0f64..3.0, x in 0.2f64..1.5, y in -1.5f64..1.5) {
        let base = make_solution(Family::KPis, &"c2=1,c3=-2".parse().unwrap()).unwrap();
        let p: Params = format!("c1={c1},c2=1,c3=-2").parse().unwrap();
        let shifted = make_solution(Family::KPis, &p).unwrap();
        let (a, b) = (base.jet(x, y).unwrap(), shifted.jet(x, y).unwrap());
        prop_assert!((b.state.sigma - a.state.sigma - c1).abs() < 1e-12);
        prop_assert_eq!(a.d_x, b.d_x);
    }
}
