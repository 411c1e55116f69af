use std::sync::Arc;

use proptest::prelude::*;

use profmeasure::density::{density, functions_equal_to_depth, to_measure};
use profmeasure::descriptor::{load_measure, measure_descriptor};
use profmeasure::measure::{
    case_rng, combine, dirac, equal_to_depth, integrate, pushforward, random_definable, random_sparse, scale,
};
use profmeasure::monad::{functor_map, mult, unit, DoubleFinFn, FinFn, FiniteFunction};
use profmeasure::semiring::{bool2, nat_sat, trop_trunc, zmod, FiniteSemiring};
use profmeasure::space::{Clopen, ContinuousMap, InverseSystem, Point, Space, Tail};
use profmeasure::suites::clopens_by_mask;

fn semirings() -> Vec<Arc<FiniteSemiring>> {
    vec![
        Arc::new(bool2()),
        Arc::new(zmod(2)),
        Arc::new(zmod(3)),
        Arc::new(trop_trunc(2)),
        Arc::new(nat_sat(2)),
    ]
}

fn spaces() -> Vec<Space> {
    vec![
        InverseSystem::cantor(),
        InverseSystem::nat_infty(),
        InverseSystem::product(vec![3, 2]).unwrap(),
    ]
}

fn any_semiring() -> impl Strategy<Value = Arc<FiniteSemiring>> {
    (0..semirings().len()).prop_map(|i| semirings()[i].clone())
}

fn any_space() -> impl Strategy<Value = Space> {
    (0..spaces().len()).prop_map(|i| spaces()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrals_are_additive_and_homogeneous(s in any_semiring(), space in any_space(), seed in any::<u64>(), t in 0usize..5) {
        let t = t % s.size();
        let f = random_sparse(&space, &s, 3, 3, &mut case_rng(seed, 0)).unwrap();
        let g = random_sparse(&space, &s, 3, 3, &mut case_rng(seed, 1)).unwrap();
        let (mf, mg) = (integrate(&f), integrate(&g));
        let sum = combine(&mf, &mg).unwrap();
        let scaled = scale(t, &mf).unwrap();
        prop_assert!(equal_to_depth(&sum, &integrate(&f.plus(&g).unwrap()), 4).unwrap());
        for b in clopens_by_mask(&space, 2).unwrap() {
            prop_assert_eq!(sum.eval(&b).unwrap(), s.add(mf.eval(&b).unwrap(), mg.eval(&b).unwrap()));
            prop_assert_eq!(scaled.eval(&b).unwrap(), s.mul(t, mf.eval(&b).unwrap()));
        }
    }

    #[test]
    fn pushforward_is_functorial(s in any_semiring(), seed in any::<u64>(), values in proptest::collection::vec(0usize..3, 4), fold in proptest::collection::vec(0usize..2, 3)) {
        let c = InverseSystem::cantor();
        let m = integrate(&random_definable(&c, &s, 4, &mut case_rng(seed, 0)).unwrap());
        let f = ContinuousMap::to_finite(c.clone(), 2, 3, values).unwrap();
        let g = ContinuousMap::to_finite(f.target().clone(), 0, 2, fold).unwrap();
        let step = pushforward(&pushforward(&m, &f).unwrap(), &g).unwrap();
        let once = pushforward(&m, &f.then(&g).unwrap()).unwrap();
        prop_assert!(equal_to_depth(&step, &once, 0).unwrap());
        // total mass is preserved
        let top = |sp: &Space| Clopen::top(sp.clone());
        prop_assert_eq!(once.eval(&top(g.target())).unwrap(), m.eval(&top(&c)).unwrap());
        prop_assert!(equal_to_depth(&pushforward(&m, &ContinuousMap::identity(c.clone())).unwrap(), &m, 5).unwrap());
    }

    #[test]
    fn dirac_measures_are_indicators(space in any_space(), level in 0usize..4, cell in any::<usize>(), greatest in any::<bool>()) {
        let s = Arc::new(trop_trunc(2));
        let size = space.level_size(level).unwrap();
        let tail = if greatest { Tail::Greatest } else { Tail::Least };
        let p = Point::through_cell(space.clone(), level, cell % size, tail).unwrap();
        let d = dirac(s.clone(), &p).unwrap();
        for b in clopens_by_mask(&space, 2).unwrap() {
            let expected = if p.is_in(&b).unwrap() { s.one() } else { s.zero() };
            prop_assert_eq!(d.eval(&b).unwrap(), expected);
        }
    }

    #[test]
    fn descriptors_round_trip(s in any_semiring(), space in any_space(), seed in any::<u64>()) {
        let m = integrate(&random_definable(&space, &s, 3, &mut case_rng(seed, 0)).unwrap());
        let back = load_measure(&space, &s, &measure_descriptor(&m, 5).unwrap()).unwrap();
        prop_assert!(equal_to_depth(&m, &back, 5).unwrap());
        let text = serde_json::to_string(&measure_descriptor(&m, 5).unwrap()).unwrap();
        let reparsed = serde_json::from_str(&text).unwrap();
        prop_assert!(equal_to_depth(&m, &load_measure(&space, &s, &reparsed).unwrap(), 5).unwrap());
    }

    #[test]
    fn densities_invert_integration(k in 1usize..4, space in any_space(), seed in any::<u64>()) {
        let s = Arc::new(trop_trunc(k));
        let m = integrate(&random_definable(&space, &s, 3, &mut case_rng(seed, 0)).unwrap());
        let d = density(&m).unwrap();
        prop_assert!(equal_to_depth(&to_measure(&d), &m, 5).unwrap());
        prop_assert!(functions_equal_to_depth(&density(&to_measure(&d)).unwrap(), &d, 5).unwrap());
    }

    #[test]
    fn monad_identities_on_random_functions(s in any_semiring(), values in proptest::collection::vec(0usize..5, 3), table in proptest::collection::vec(0u128..2, 3)) {
        let values: Vec<usize> = values.into_iter().map(|v| v % s.size()).collect();
        let f = FinFn::from_values(s.clone(), &values).unwrap();
        let n = 3u128;
        let sx = f.encode().unwrap();
        let lifted = unit(s.clone(), s.size().pow(3) as u128, sx).unwrap();
        prop_assert_eq!(mult(&DoubleFinFn::new(n, lifted).unwrap()).unwrap(), f.clone());
        // S(φ) preserves pointwise sums
        let phi = FiniteFunction::from_table(table, 2).unwrap();
        let doubled = f.plus(&f).unwrap();
        prop_assert_eq!(functor_map(&phi, &doubled).unwrap(), functor_map(&phi, &f).unwrap().plus(&functor_map(&phi, &f).unwrap()).unwrap());
    }
}
