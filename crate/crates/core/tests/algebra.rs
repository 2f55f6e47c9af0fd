use std::sync::Arc;

use bialg::error::Error;
use bialg::exterior::{contract, pairing, Form, MultiVector};
use bialg::format::{parse_algebra, parse_multivector};
use bialg::lie::{action_matrix, bracket, semidirect_product, LieAlgebra, LinearMap};
use bialg::poincare::{hermitian, poincare};
use bialg::scalar::Scalar;
use bialg::schouten::{
    coboundary, dual_bracket, gcybe_check, is_cocycle, r_of, schouten_bracket, Cocycle, GcybeVerdict,
};

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

fn sl2() -> LieAlgebra {
    let s = Scalar::from_int;
    LieAlgebra::from_brackets(
        labels(&["H", "X+", "X-"]),
        &[
            (0, 1, vec![(1, s(1))]),
            (0, 2, vec![(2, s(-1))]),
            (1, 2, vec![(0, s(2))]),
        ],
        None,
    )
    .unwrap()
}

#[test]
fn sl2_builds_and_brackets_match_constants() {
    let g = Arc::new(sl2());
    let (h, xp) = (MultiVector::basis(&g, 0), MultiVector::basis(&g, 1));
    assert_eq!(bracket(&h, &xp).unwrap(), xp);
    assert!(bracket(&xp, &xp).unwrap().is_zero());
}

#[test]
fn non_antisymmetric_constants_are_rejected() {
    let mut c = vec![vec![vec![Scalar::zero(); 4]; 4]; 4];
    c[1][2][3] = Scalar::one();
    c[2][1][3] = Scalar::one();
    let err = LieAlgebra::build(labels(&["a", "b", "c", "d"]), &c, None).unwrap_err();
    assert!(matches!(err, Error::AntisymmetryViolation(..)));
}

#[test]
fn abelian_algebra_is_valid() {
    let a = LieAlgebra::abelian(4);
    assert_eq!(a.dim(), 4);
    assert_eq!(a.grading().unwrap().v().len(), 4);
    assert!(a.grading().unwrap().h().is_empty());
}

#[test]
fn lorentz_matrix_model_brackets_agree() {
    // [H, X+] = X+ computed through the Hermitian-matrix action on V.
    let p = poincare();
    let h = p.named("H").unwrap();
    let xp = p.named("X+").unwrap();
    assert_eq!(bracket(&h, &xp).unwrap(), xp);
    let mh = hermitian::action_matrix(&hermitian::sl2c("H").unwrap()).unwrap();
    let mx = hermitian::action_matrix(&hermitian::sl2c("X+").unwrap()).unwrap();
    let comm = bialg::linalg::mat_mul(&mh, &mx)
        .iter()
        .zip(bialg::linalg::mat_mul(&mx, &mh))
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    assert_eq!(comm, mx);
}

#[test]
fn translations_commute() {
    let p = poincare();
    assert!(bracket(&p.e(0), &p.e(2)).unwrap().is_zero());
}

#[test]
fn semidirect_product_reproduces_poincare() {
    let p = poincare();
    let g = p.algebra();
    let gr = g.grading().unwrap();
    let h = Arc::new(g.subalgebra(gr.h()).unwrap());
    let rep: Vec<LinearMap> = gr
        .h()
        .iter()
        .map(|&i| LinearMap::from_rational_rows(&p.action_on_v(&MultiVector::basis(g, i)).unwrap()))
        .collect();
    let built = semidirect_product(&rep, &h, labels(&["e0", "e1", "e2", "e3"])).unwrap();
    assert_eq!(&built, g.as_ref());

    // Trivial h on ℝ³ gives the abelian algebra.
    let trivial = LieAlgebra::abelian(0);
    let ab = semidirect_product(&[], &trivial, labels(&["v0", "v1", "v2"])).unwrap();
    assert!((0..3).all(|i| (0..3).all(|j| ab.bracket_basis(i, j).is_empty())));

    // A representation that breaks the bracket is refused.
    let mut bad = rep.clone();
    bad[0] = LinearMap::identity(4);
    assert!(matches!(
        semidirect_product(&bad, &h, labels(&["e0", "e1", "e2", "e3"])),
        Err(Error::NotARepresentation(..))
    ));
}

#[test]
fn action_matrix_is_a_derivation() {
    let p = poincare();
    let x = &p.named("X+").unwrap() + &p.named("JH").unwrap().scale(&Scalar::from_int(3));
    let (e1, e2) = (p.e(1), p.e(2));
    let lhs = x.act(&e1.wedge(&e2).unwrap());
    let rhs = &x.act(&e1).wedge(&e2).unwrap() + &e1.wedge(&x.act(&e2)).unwrap();
    assert_eq!(lhs, rhs);
    assert!(action_matrix(&MultiVector::zero(p.algebra(), 1), 2).unwrap().is_zero());
    assert_eq!(action_matrix(&x, 4).unwrap_err(), Error::UnsupportedDegree(4));
}

#[test]
fn wedge_examples() {
    let p = poincare();
    let (e1, e2) = (p.e(1), p.e(2));
    assert_eq!(e1.wedge(&e2).unwrap(), -&e2.wedge(&e1).unwrap());
    assert!(e1.wedge(&e1).unwrap().is_zero());
    let h = p.named("H").unwrap();
    let lhs = p.named("e+").unwrap().wedge(&h).unwrap();
    assert_eq!(lhs, &p.e(0).wedge(&h).unwrap() + &p.e(3).wedge(&h).unwrap());
    let w = e1.wedge(&e2).unwrap().wedge(&h).unwrap();
    assert_eq!(w.wedge(&e1).unwrap_err(), Error::DegreeOverflow(3, 1));
}

#[test]
fn contraction_examples() {
    let p = poincare();
    let ep = p.named("e+").unwrap();
    let xp = p.named("X+").unwrap();
    // e⁺ is the covector dual to e₊ in the light-cone basis: (e⁰ + e³)/2.
    let half = Scalar::from_ratio(1, 2);
    let mut c = vec![Scalar::zero(); 10];
    c[0] = half.clone();
    c[3] = half;
    let eplus = Form::covector(&c);
    assert_eq!(contract(&eplus, &ep.wedge(&xp).unwrap()).unwrap(), xp);
    assert!(contract(&Form::zero(10, 1), &ep.wedge(&xp).unwrap()).unwrap().is_zero());

    // ⟨r(α), β⟩ = ⟨r, α⊗β⟩ = ⟨r, α∧β⟩ on bivectors.
    let r = &p.named("b_e0").unwrap() + &p.e(1).wedge(&p.e(2)).unwrap();
    let a = Form::covector(&(0..10).map(|i| Scalar::from_int(i as i64 - 3)).collect::<Vec<_>>());
    let b = Form::covector(&(0..10).map(|i| Scalar::from_int((i * i) as i64 % 5)).collect::<Vec<_>>());
    let lhs = b.pair_vector(&r_of(&r, &a).unwrap());
    assert_eq!(lhs, pairing(&r, &a.wedge(&b).unwrap()).unwrap());
    let two = a.wedge(&b).unwrap();
    assert!(matches!(contract(&two.wedge(&a).unwrap(), &r), Err(Error::DegreeUnderflow(3, 2))));
}

#[test]
fn split_examples() {
    let p = poincare();
    let n = |l: &str| p.named(l).unwrap();
    let a = n("e1").wedge(&n("e2")).unwrap();
    let b = n("e+").wedge(&n("H")).unwrap();
    let c = n("JH").wedge(&n("H")).unwrap();
    let parts = (&(&a + &b) + &c).split2().unwrap();
    assert_eq!((parts.a, parts.b, parts.c), (a, b, c));

    let om = p.omega_invariant().split3().unwrap();
    assert!(om.vvv.is_zero() && om.vhh.is_zero() && om.hhh.is_zero());
    assert!(!om.vvh.is_zero());
    let z = MultiVector::zero(p.algebra(), 3).split3().unwrap();
    assert!(z.blocks().iter().all(|b| b.is_zero()));

    let plain = Arc::new(sl2());
    assert_eq!(MultiVector::zero(&plain, 2).split2().unwrap_err(), Error::NotGraded);
}

#[test]
fn schouten_examples() {
    let p = poincare();
    let n = |l: &str| p.named(l).unwrap();
    assert!(schouten_bracket(&n("JH").wedge(&n("H")).unwrap(), &n("JH").wedge(&n("H")).unwrap())
        .unwrap()
        .is_zero());
    let b = &n("e1").wedge(&n("JX+")).unwrap() + &n("e+").wedge(&n("X+")).unwrap();
    assert!(schouten_bracket(&b, &b).unwrap().is_zero());
    let b0 = n("b_e2").scale(&Scalar::from_int(2));
    assert_eq!(schouten_bracket(&b0, &b0).unwrap(), p.omega_invariant().scale(&Scalar::from_int(4)));

    let other = Arc::new(sl2());
    let r = MultiVector::basis_tuple(&other, &[0, 1]);
    assert_eq!(schouten_bracket(&b, &r).unwrap_err(), Error::AlgebraMismatch);
}

#[test]
fn coboundary_examples() {
    let p = poincare();
    let r = p.named("b_e1").unwrap();
    let d = coboundary(&r);
    assert!(is_cocycle(&d).is_cocycle());
    for i in 0..10 {
        assert_eq!(d.image(i), MultiVector::basis(p.algebra(), i).act(&r));
    }
    assert!(coboundary(&MultiVector::zero(p.algebra(), 2)).matrix().is_zero());
    let zero_map = Cocycle::from_images(p.algebra(), &vec![MultiVector::zero(p.algebra(), 2); 10]).unwrap();
    assert!(is_cocycle(&zero_map).is_cocycle());
}

#[test]
fn dual_brackets_for_triangular_c() {
    let p = poincare();
    let n = |l: &str| p.named(l).unwrap();
    let lc = p.light_cone_basis().unwrap();
    // Dual basis of the light-cone basis: rows of the inverse change of basis.
    let m: Vec<Vec<_>> = (0..10)
        .map(|i| lc.iter().map(|b| b.coeff(&[i]).to_rational().unwrap()).collect())
        .collect();
    let q = bialg::linalg::inverse(&m).unwrap();
    let dual = |k: usize| Form::covector(&q[k].iter().map(|x| Scalar::from_rational(x.clone())).collect::<Vec<_>>());
    let (h, jh, xp, jxp) = (4, 5, 6, 7);

    let c = n("JX+").wedge(&n("X+")).unwrap();
    assert_eq!(dual_bracket(&c, &dual(jxp), &dual(xp)).unwrap(), dual(h).scale(&Scalar::from_int(2)));
    let c = n("JH").wedge(&n("H")).unwrap();
    assert!(dual_bracket(&c, &dual(jh), &dual(h)).unwrap().is_zero());
    assert!(dual_bracket(&c, &dual(xp), &dual(xp)).unwrap().is_zero());
}

#[test]
fn gcybe_examples() {
    let p = poincare();
    let n = |l: &str| p.named(l).unwrap();
    let omega = [p.omega_invariant()];
    let t = |r: &MultiVector| match gcybe_check(r, &omega).unwrap() {
        GcybeVerdict::InSpan { coords, .. } => Some(coords[0].clone()),
        GcybeVerdict::Fails { .. } => None,
    };
    assert_eq!(t(&n("b_e0")), Some(Scalar::from_int(-1)));
    assert_eq!(t(&n("b_e+")), Some(Scalar::zero()));
    assert_eq!(t(&MultiVector::zero(p.algebra(), 2)), Some(Scalar::zero()));
    let bad = &n("e1").wedge(&n("H")).unwrap() + &n("e2").wedge(&n("JH")).unwrap();
    assert_eq!(t(&bad), None);
    // Whenever the verdict holds, [r,r] sits in the Λ²V∧h block only.
    let v = gcybe_check(&n("b_e1"), &omega).unwrap();
    let blocks = v.bracket().split3().unwrap();
    assert!(blocks.vvv.is_zero() && blocks.vhh.is_zero() && blocks.hhh.is_zero());
}

#[test]
fn documents_parse_with_locations() {
    let err = parse_algebra("{\"dim\": 2,\n \"labels\": [\"a\"] ,}").unwrap_err();
    let Error::Document(msg) = err else { panic!("expected a document error") };
    assert!(msg.contains("line 2"), "{msg}");
    let p = poincare();
    let w = parse_multivector(r#"{"degree": 2, "terms": [{"element": "b_e0", "coeff": "1"}]}"#, &p).unwrap();
    assert_eq!(w, p.named("b_e0").unwrap());
}
