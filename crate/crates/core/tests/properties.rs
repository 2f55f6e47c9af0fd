use std::sync::Arc;

use bialg::automorphisms::{gcybe_equivariance_check, AutomorphismMove};
use bialg::exterior::{contract, wedge_dim, Form, MultiVector};
use bialg::lie::{action_matrix, LieAlgebra};
use bialg::poincare::poincare;
use bialg::scalar::Scalar;
use bialg::schouten::{coboundary, formula_check, is_cocycle, schouten_bracket};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn alg() -> Arc<LieAlgebra> {
    poincare().algebra().clone()
}

/// Sparse small-integer coordinates; zero most of the time.
fn coords(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], len)
}

fn multivector(degree: usize) -> impl Strategy<Value = MultiVector> {
    coords(wedge_dim(10, degree)).prop_map(move |c| {
        let c: Vec<Scalar> = c.into_iter().map(Scalar::from_int).collect();
        MultiVector::from_coords(&alg(), degree, &c)
    })
}

fn rational_bivector() -> impl Strategy<Value = MultiVector> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 45).prop_map(|c| {
        let c: Vec<Scalar> = c.into_iter().map(|(n, d)| Scalar::from_ratio(n, d)).collect();
        MultiVector::from_coords(&alg(), 2, &c)
    })
}

fn covector() -> impl Strategy<Value = Form> {
    prop::collection::vec(-2i64..=2, 10)
        .prop_map(|c| Form::covector(&c.into_iter().map(Scalar::from_int).collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn formula_identity_holds(r in multivector(2), a in covector(), b in covector(), c in covector()) {
        prop_assert!(formula_check(&r, &a, &b, &c).unwrap().is_zero());
    }

    #[test]
    fn schouten_is_symmetric_on_bivectors(r in multivector(2), s in multivector(2)) {
        prop_assert_eq!(schouten_bracket(&r, &s).unwrap(), schouten_bracket(&s, &r).unwrap());
    }

    #[test]
    fn adjoint_action_is_a_derivation_of_schouten(r in multivector(2), s in multivector(2), i in 0usize..10) {
        let x = MultiVector::basis(&alg(), i);
        let lhs = x.act(&schouten_bracket(&r, &s).unwrap());
        let rhs = &schouten_bracket(&x.act(&r), &s).unwrap() + &schouten_bracket(&r, &x.act(&s)).unwrap();
        prop_assert_eq!(lhs, rhs);
        let rr = x.act(&schouten_bracket(&r, &r).unwrap());
        prop_assert_eq!(rr, schouten_bracket(&x.act(&r), &r).unwrap().scale(&Scalar::from_int(2)));
    }

    #[test]
    fn coboundaries_are_cocycles(r in multivector(2)) {
        prop_assert!(is_cocycle(&coboundary(&r)).is_cocycle());
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn split2_recomposes(r in rational_bivector()) {
        let parts = r.split2().unwrap();
        prop_assert!(parts.a.in_block(0) || parts.a.is_zero());
        prop_assert!(parts.b.in_block(1) || parts.b.is_zero());
        prop_assert!(parts.c.in_block(2) || parts.c.is_zero());
        prop_assert_eq!(parts.sum(), r);
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn split3_recomposes(w in multivector(3)) {
        prop_assert_eq!(w.split3().unwrap().sum(), w);
    }

    #[test]
    fn contraction_obeys_graded_leibniz(u in multivector(1), v in multivector(2), a in covector()) {
        // α⌟(u∧v) = (α⌟u)∧v − u∧(α⌟v) for deg u = 1.
        let lhs = contract(&a, &u.wedge(&v).unwrap()).unwrap();
        let rhs = &contract(&a, &u).unwrap().wedge(&v).unwrap() - &u.wedge(&contract(&a, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_a_homomorphism_on_all_degrees(i in 0usize..10, j in 0usize..10, k in 1usize..=3) {
        let g = alg();
        let (x, y) = (MultiVector::basis(&g, i), MultiVector::basis(&g, j));
        let lhs = action_matrix(&x.act(&y), k).unwrap();
        let rhs = action_matrix(&x, k).unwrap().commutator(&action_matrix(&y, k).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn translations_compose_additively(v in coords(4), w in coords(4), r in multivector(2)) {
        let p = poincare();
        let vec = |c: &[i64]| (0..4).fold(MultiVector::zero(p.algebra(), 1), |acc, i| &acc + &p.e(i).scale(&Scalar::from_int(c[i])));
        let (tv, tw) = (vec(&v), vec(&w));
        let mv = AutomorphismMove::translate(p.algebra(), &tv).unwrap();
        let mw = AutomorphismMove::translate(p.algebra(), &tw).unwrap();
        let msum = AutomorphismMove::translate(p.algebra(), &(&tv + &tw)).unwrap();
        prop_assert_eq!(mv.apply(&mw.apply(&r).unwrap()).unwrap(), msum.apply(&r).unwrap());
    }

    #[test]
    fn moves_invert_and_preserve_schouten(r in multivector(2), s in 1i64..5, which in 0usize..6) {
        let p = poincare();
        let t = Scalar::from_int(s);
        let m = match which {
            0 => AutomorphismMove::translate(p.algebra(), &p.e(1).scale(&t)).unwrap(),
            1 => AutomorphismMove::nilpotent_flow(&p.named("X+").unwrap(), t).unwrap(),
            2 => AutomorphismMove::dilation(p.algebra(), t).unwrap(),
            3 => AutomorphismMove::diagonal_flow(&p.named("H").unwrap(), bialg::linalg::rat(s)).unwrap(),
            4 => AutomorphismMove::reflection(&p, (s as usize) % 4).unwrap(),
            _ => AutomorphismMove::rotation(&p, 2, 1, bialg::linalg::rat(s)).unwrap(),
        };
        prop_assert_eq!(m.inverse().unwrap().apply(&m.apply(&r).unwrap()).unwrap(), r.clone());
        prop_assert!(gcybe_equivariance_check(&m, &r).unwrap().is_zero());
    }
}
