use nearconvex::conjugate::fenchel_value;
use nearconvex::rational::q;
use nearconvex::Rational;
use nearconvex_oracle::conj::generator_conjugate_oracle;
use nearconvex_oracle::gen::Gen;
use nearconvex_oracle::grid::{grid_membership_oracle, nc_oracle_budget};
use nearconvex_oracle::oset::OSet;
use nearconvex_oracle::suite::{run_instance, Mutation};
use proptest::prelude::*;

fn point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d)), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_sets_are_nearly_convex(seed in any::<u64>(), dim in 1usize..=2) {
        let mut g = Gen::new(seed);
        let anchor = g.anchor(dim);
        let s = g.ncset(dim, &anchor);
        prop_assert!(s.is_nearly_convex().unwrap().nearly_convex);
        prop_assert!(nc_oracle_budget(&s, 20_000).nearly_convex);
        prop_assert!(s.contains(&anchor));
    }

    #[test]
    fn library_membership_matches_formulas(seed in any::<u64>(), x in point(2)) {
        let mut g = Gen::new(seed);
        let anchor = g.anchor(2);
        let s = g.ncset(2, &anchor);
        let orc = OSet::from_ncset(&s);
        prop_assert_eq!(s.contains(&x), orc.contains(&x));
        prop_assert!(grid_membership_oracle(&s, &orc, 2).is_empty());
        let ri = s.ri_set().unwrap();
        prop_assert!(grid_membership_oracle(&ri, &orc.ri(), 2).is_empty());
    }

    #[test]
    fn conjugate_matches_generator_oracle(seed in any::<u64>(), w in point(1)) {
        let mut g = Gen::new(seed);
        let anchor = g.anchor(1);
        let f = g.plfunction(1, &anchor);
        prop_assert_eq!(fenchel_value(&f, &w).unwrap(), generator_conjugate_oracle(&f, &w));
    }

    #[test]
    fn instances_replay(i in 0u64..1000) {
        let a = run_instance("thm2.2a", i, Mutation::None).unwrap();
        let b = run_instance("thm2.2a", i, Mutation::None).unwrap();
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
