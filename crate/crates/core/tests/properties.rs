//! Zero-location properties on randomly drawn two-arc Angelesco systems.

use mopuc::laurent::MultiIndex;
use mopuc::measure::{make_angelesco_system, Arc, MeasureSystem, Weight};
use mopuc::para::equispaced_taus;
use mopuc::zeros::{verify_para_theorems, verify_thm5_1, Tolerances};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = Weight> {
    prop_oneof![
        Just(Weight::Uniform),
        (-1.5f64..1.5).prop_map(|lambda| Weight::Exponential { lambda }),
        (0.0f64..2.0, 0.0f64..2.0).prop_map(|(gamma, delta)| Weight::Jacobi { gamma, delta }),
    ]
}

/// Two disjoint arcs inside `(0, 2π)`, each at least 0.4 long.
fn system() -> impl Strategy<Value = MeasureSystem> {
    (0.05f64..1.5, 0.4f64..1.5, 0.05f64..1.0, 0.4f64..1.5, weight(), weight()).prop_map(
        |(start, len1, gap, len2, w1, w2)| {
            let a1 = Arc::new(start, start + len1).unwrap();
            let b = start + len1 + gap;
            let a2 = Arc::new(b, b + len2).unwrap();
            make_angelesco_system(&[a1, a2], &[w1, w2], &[], 0.0)
                .and_then(|s| s.normalized())
                .unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_zeros_stay_in_the_disk(s in system(), n0 in 0usize..3, n1 in 0usize..3) {
        let n = MultiIndex::new(vec![n0, n1]);
        let v = verify_thm5_1(&s, &n, &Tolerances::default()).unwrap();
        prop_assert!(v.passed, "n = {n}: {:?}", v.failures);
    }

    #[test]
    fn paraorthogonal_zeros_on_the_circle(s in system(), n0 in 0usize..3, n1 in 0usize..3) {
        let n = MultiIndex::new(vec![n0, n1]);
        for v in verify_para_theorems(&s, &n, &equispaced_taus(3), &Tolerances::default()).unwrap() {
            prop_assert!(v.passed, "n = {n}, tau = {}: {:?}", v.tau, v.failures);
        }
    }
}
