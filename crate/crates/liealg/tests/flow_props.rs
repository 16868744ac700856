use liealg::{flow, lie_bracket, Gen};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = [f64; 6]> {
    proptest::array::uniform6(-2.0f64..2.0)
}

fn generator() -> impl Strategy<Value = Gen> {
    proptest::sample::select(Gen::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flows_compose(g in generator(), p in point(), s in -0.6f64..0.6, t in -0.6f64..0.6) {
        let two = flow(g, flow(g, p, s).unwrap(), t).unwrap();
        let one = flow(g, p, s + t).unwrap();
        for k in 0..6 {
            prop_assert!((two[k] - one[k]).abs() < 1e-9 * (1.0 + one[k].abs()));
        }
    }

    #[test]
    fn brackets_are_antisymmetric(a in generator(), b in generator(), p in point()) {
        let (ab, ba) = (lie_bracket(&a, &b, &p), lie_bracket(&b, &a, &p));
        for k in 0..6 {
            prop_assert!((ab[k] + ba[k]).abs() < 1e-12);
        }
    }
}
