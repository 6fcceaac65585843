mod common;

use common::*;
use ksub::{brute_min, join, max_on_interior, meet, persistency_check, relax, CostValue, Cube, LabelingSet};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn minimizer_set_is_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_extendable_f(&mut r, 4, 3, Values::Int(3));
        let g = relax(&f).unwrap().into_table().unwrap();
        let rep = brute_min(&g).unwrap();
        for i in 0..g.cube().cells() {
            let v = g.value_at(i);
            prop_assert!(v >= rep.optimum);
            prop_assert_eq!(rep.minimizers.contains(&i), v == rep.optimum && v.is_finite());
        }
    }

    #[test]
    fn relaxations_are_persistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_extendable_f(&mut r, 4, 4, Values::Int(4));
        let g = relax(&f).unwrap().into_table().unwrap();
        prop_assert!(persistency_check(&f, &g).unwrap());
    }

    #[test]
    fn unique_minimizer_pins_nonzero_labels(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cube = random_cube(&mut r, 4, 4);
        let mut f = random_full_f(&mut r, cube, Values::Int(5));
        let all: Vec<usize> = cube.positive_indices().collect();
        let best = all[r.gen_range(0..all.len())];
        f.set_index(best, CostValue::from_int(-10)).unwrap();
        let g = relax(&f).unwrap().into_table().unwrap();
        let xhat = cube.digits(best);
        for y in brute_min(&g).unwrap().labelings() {
            for (a, b) in y.labels().iter().zip(&xhat) {
                prop_assert!(*a == 0 || a == b);
            }
        }
    }

    #[test]
    fn maximum_is_interior(seed in any::<u64>()) {
        let mut r = rng(seed);
        // k = 1 leaves the relaxation undefined below the single top point.
        let cube = Cube::new(r.gen_range(1..=4), r.gen_range(2..=4)).unwrap();
        let f = random_full_f(&mut r, cube, Values::Rational(12));
        let g = relax(&f).unwrap().into_table().unwrap();
        prop_assert!(max_on_interior(&g).unwrap());
    }

    #[test]
    fn average_inequality_on_interior_pairs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cube = Cube::new(r.gen_range(1..=3), r.gen_range(2..=4)).unwrap();
        let f = random_full_f(&mut r, cube, Values::Int(8));
        let g = relax(&f).unwrap().into_table().unwrap();
        let all = LabelingSet::all_positive(cube);
        let pts: Vec<_> = all.iter().collect();
        for x in &pts {
            for y in &pts {
                let m = meet(x, y).unwrap();
                if m != join(x, y).unwrap() {
                    continue;
                }
                let lhs = g.get(&m).unwrap();
                let two = &lhs + &lhs;
                prop_assert!(two <= &g.get(x).unwrap() + &g.get(y).unwrap());
            }
        }
    }
}

#[test]
fn extension_by_infinity_is_persistent() {
    let mut r = rng(7);
    for _ in 0..50 {
        let cube = Cube::new(r.gen_range(1..=3), r.gen_range(1..=3)).unwrap();
        let f = random_full_f(&mut r, cube, Values::Int(3));
        assert!(persistency_check(&f, &f.to_full()).unwrap());
    }
}
