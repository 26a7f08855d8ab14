//! Property tests for the algebraic invariants of the set kernels and the
//! always-true lemma predicates.

use fp_sumprod::field_sets::{FpSet, PrimeField};
use fp_sumprod::lemma_engine::{check_plunnecke, check_ruzsa_triangle};
use proptest::prelude::*;

fn arb_prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(7u64), Just(31), Just(101), Just(257)]
}

fn arb_set(p: u64) -> impl Strategy<Value = FpSet> {
    let field = PrimeField::new(p).unwrap();
    proptest::collection::vec(0..p, 1..=(p as usize).min(20))
        .prop_map(move |elems| FpSet::from_elems(field, &elems).unwrap())
}

fn arb_pair() -> impl Strategy<Value = (FpSet, FpSet)> {
    arb_prime().prop_flat_map(|p| (arb_set(p), arb_set(p)))
}

fn arb_triple() -> impl Strategy<Value = (FpSet, FpSet, FpSet)> {
    arb_prime().prop_flat_map(|p| (arb_set(p), arb_set(p), arb_set(p)))
}

proptest! {
    #[test]
    fn sumset_commutes((x, y) in arb_pair()) {
        prop_assert_eq!(x.sumset(&y).unwrap(), y.sumset(&x).unwrap());
    }

    #[test]
    fn productset_commutes((x, y) in arb_pair()) {
        prop_assert_eq!(x.productset(&y).unwrap(), y.productset(&x).unwrap());
    }

    #[test]
    fn cauchy_davenport((x, y) in arb_pair()) {
        let p = x.field().modulus();
        prop_assert!(x.sumset(&y).unwrap().len() >= p.min(x.len() + y.len() - 1));
    }

    #[test]
    fn dilation_distributes_over_sumset((x, y) in arb_pair(), a in 0u64..257) {
        let p = x.field().modulus();
        let a = a % p;
        let lhs = x.sumset(&y).unwrap().dilate(a);
        let rhs = x.dilate(a).sumset(&y.dilate(a)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nonzero_dilation_preserves_size((x, _) in arb_pair(), a in 1u64..257) {
        let p = x.field().modulus();
        let a = 1 + a % (p - 1);
        prop_assert_eq!(x.dilate(a).len(), x.len());
    }

    #[test]
    fn difference_is_sumset_of_negation((x, y) in arb_pair()) {
        prop_assert_eq!(x.difference(&y).unwrap(), x.sumset(&y.negate()).unwrap());
    }

    #[test]
    fn double_negation_is_identity((x, _) in arb_pair()) {
        prop_assert_eq!(x.negate().negate(), x);
    }

    #[test]
    fn ruzsa_triangle_always_holds((x, y, z) in arb_triple()) {
        prop_assert!(check_ruzsa_triangle(&x, &y, &z).unwrap().holds);
    }

    #[test]
    fn plunnecke_always_holds((x, y, z) in arb_triple()) {
        prop_assert!(check_plunnecke(&x, &[y, z]).unwrap().holds);
    }
}
