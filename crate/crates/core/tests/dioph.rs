use proptest::prelude::*;
use zetaps::dioph::{search_solutions, smooth_triple_scan, weierstrass_map, QuadSystem};

fn system_strategy() -> impl Strategy<Value = QuadSystem> {
    (prop::array::uniform3(1u64..=5), prop::collection::btree_set(0u64..=30, 3)).prop_map(|(u, ks)| {
        let k: Vec<u64> = ks.into_iter().collect();
        QuadSystem::new(u, [k[0], k[1], k[2]]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solutions_map_on_curve(sys in system_strategy()) {
        for s in search_solutions(&sys, 2000) {
            prop_assert!(sys.is_solution(s.0, s.1, s.2));
            prop_assert!(weierstrass_map(&sys, s).unwrap().on_curve());
        }
    }

    #[test]
    fn larger_bound_extends_smaller(sys in system_strategy(), b in 10u64..500) {
        let small = search_solutions(&sys, b);
        let large: Vec<_> = search_solutions(&sys, 2 * b)
            .into_iter()
            .filter(|s| s.0 <= b && s.1 <= b && s.2 <= b)
            .collect();
        prop_assert_eq!(small, large);
    }
}

#[test]
fn smooth_scan_tail() {
    let scan = smooth_triple_scan(3, 100_000).unwrap();
    assert_eq!(&scan[..4], &[4, 5, 6, 9]);
    // windows of four consecutive integers with three 3-smooth kernels thin out
    assert!(*scan.last().unwrap() < 100_000 / 2);
}
