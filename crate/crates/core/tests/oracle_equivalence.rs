use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use cprop::algorithms::{ac3, dac, darc, dpath, dpc, hyper_arc, path, pc2};
use cprop::engine::{gi_run, EngineConfig, FunctionSet, UpdatePolicy};
use cprop::gen::{random_complete, random_csp, random_normalized, random_order, CspParams};
use cprop::oracle::{self, DEFAULT_ENUMERATION_CAP, DEFAULT_STEP_CAP};
use cprop::order::SchemeFn;
use cprop::propagators::projections;

fn wider() -> CspParams {
    CspParams {
        variables: 2..=5,
        domain_size: 1..=4,
        ..CspParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn arc_algorithms_reach_the_closure(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_csp(&mut rng, &wider());
        let want = oracle::arc_closure(&p).unwrap();
        let got = hyper_arc(&p).unwrap().problem;
        prop_assert!(oracle::is_hyper_arc_consistent(&got));
        prop_assert_eq!(&got, &want);
        prop_assert_eq!(ac3(&p).unwrap().problem, want);
    }

    #[test]
    fn hyper_arc_handles_ternary_constraints(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_csp(&mut rng, &wider().with_ternary(1.0));
        let got = hyper_arc(&p).unwrap().problem;
        prop_assert_eq!(&got, &oracle::arc_closure(&p).unwrap());
        prop_assert_eq!(
            oracle::enumerate_solutions(&got, DEFAULT_ENUMERATION_CAP).unwrap(),
            oracle::enumerate_solutions(&p, DEFAULT_ENUMERATION_CAP).unwrap()
        );
    }

    #[test]
    fn abstract_iteration_matches_round_robin(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_csp(&mut rng, &wider().with_ternary(0.5));
        let fns = projections(&p);
        let rr = oracle::roundrobin_fixpoint(&fns, p.bottoms(), DEFAULT_STEP_CAP).unwrap();
        let boxed = fns.into_iter().map(|f| Box::new(f) as Box<dyn SchemeFn<i64>>).collect();
        let set = FunctionSet::new(p.len(), boxed).unwrap();
        let (d, _) = gi_run(&set.extended(), p.bottoms(), &UpdatePolicy::full(), &EngineConfig::default()).unwrap();
        prop_assert_eq!(d, rr);
    }

    #[test]
    fn path_algorithms_reach_the_closure(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = random_normalized(&mut rng, &wider());
        let want = oracle::path_closure(&n).unwrap();
        let got = path(&n).unwrap().problem;
        prop_assert!(oracle::is_path_consistent(&got));
        prop_assert_eq!(&got, &want);
        prop_assert_eq!(pc2(&n).unwrap().problem, want);
    }

    #[test]
    fn directional_algorithms_reach_the_closure(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_complete(&mut rng, &wider());
        let o = random_order(&mut rng, p.len());
        let want = oracle::dir_arc_closure(&p, &o).unwrap();
        prop_assert_eq!(&darc(&p, &o).unwrap().problem, &want);
        prop_assert_eq!(&dac(&p, &o).unwrap().problem, &want);
        prop_assert!(oracle::is_dir_arc_consistent(&want, &o));

        let n = cprop::normalize(&p).unwrap();
        let want = oracle::dir_path_closure(&n, &o).unwrap();
        prop_assert_eq!(&dpath(&n, &o).unwrap().problem, &want);
        prop_assert_eq!(&dpc(&n, &o).unwrap().problem, &want);
        prop_assert!(oracle::is_dir_path_consistent(&want, &o));
    }
}
