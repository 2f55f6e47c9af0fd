use bialg::cohomology::{intertwiner_space, invariants, Acting, Block, ModuleSpec};
use bialg::error::Error;
use bialg::exterior::MultiVector;
use bialg::lie::action_matrix;
use bialg::linalg::Rat;
use bialg::poincare::{hermitian, make_inhomogeneous, poincare, InhomogeneousAlgebra};
use bialg::scalar::Scalar;
use bialg::schouten::{coboundary, schouten_bracket};

fn n(p: &InhomogeneousAlgebra, l: &str) -> MultiVector {
    p.named(l).unwrap()
}

fn w(p: &InhomogeneousAlgebra, x: &str, y: &str) -> MultiVector {
    n(p, x).wedge(&n(p, y)).unwrap()
}

#[test]
fn constructors_and_signature_checks() {
    assert_eq!(poincare().algebra().dim(), 10);
    let a = make_inhomogeneous(1, 2).unwrap();
    assert_eq!(a.algebra().dim(), 6);
    assert_eq!(
        intertwiner_space(a.algebra(), ModuleSpec::wedge(1, Block::V), ModuleSpec::wedge(1, Block::H), Acting::H)
            .unwrap()
            .dim(),
        1
    );
    assert_eq!(make_inhomogeneous(1, 0).unwrap_err(), Error::BadSignature(1, 0));
    let p = poincare();
    assert_eq!(p.omega_gen(3, 0).act(&p.e(0)), p.e(3));
}

#[test]
fn sl2c_generators_match_the_hermitian_model() {
    let p = poincare();
    for name in ["H", "JH", "X+", "JX+", "X-", "JX-"] {
        let from_omega = p.action_on_v(&n(&p, name)).unwrap();
        let from_matrices = hermitian::action_matrix(&hermitian::sl2c(name).unwrap()).unwrap();
        assert_eq!(from_omega, from_matrices, "{name}");
    }
}

#[test]
fn light_cone_actions() {
    let p = poincare();
    let (ep, em, e1, e2) = (n(&p, "e+"), n(&p, "e-"), n(&p, "e1"), n(&p, "e2"));
    assert_eq!(n(&p, "H").act(&ep), ep);
    assert_eq!(n(&p, "H").act(&em), -&em);
    assert!(n(&p, "JH").act(&ep).is_zero());
    assert!(n(&p, "X+").act(&ep).is_zero());
    assert_eq!(n(&p, "X+").act(&em), e1.scale(&Scalar::from_int(2)));
    assert_eq!(n(&p, "JX+").act(&em), e2.scale(&Scalar::from_int(-2)));
}

#[test]
fn omega_light_cone_expansion() {
    let p = poincare();
    let two = Scalar::from_int(2);
    let t = |a: &str, b: &str, x: &str| w(&p, a, b).wedge(&n(&p, x)).unwrap();
    let expect = [
        t("e-", "e+", "H"),
        t("e1", "e2", "JH").scale(&-two.clone()),
        t("e-", "e1", "X+"),
        t("e2", "e-", "JX+"),
        t("e+", "e1", "X-"),
        t("e+", "e2", "JX-"),
    ]
    .iter()
    .fold(MultiVector::zero(p.algebra(), 3), |acc, x| &acc + x);
    let omega = p.omega_invariant();
    assert_eq!(omega, expect);
    for i in 0..10 {
        assert!(MultiVector::basis(p.algebra(), i).act(&omega).is_zero());
    }
    assert_eq!(invariants(p.algebra(), ModuleSpec::wedge(3, Block::All), Acting::G).unwrap().dim(), 1);
}

#[test]
fn kappa_elements() {
    let p = poincare();
    let be0 = &(&w(&p, "e1", "L1") + &w(&p, "e2", "L2")) + &w(&p, "e3", "L3");
    assert_eq!(n(&p, "b_e0"), be0);
    let be1 = &(&w(&p, "e0", "L1") - &w(&p, "e2", "M3")) + &w(&p, "e3", "M2");
    assert_eq!(n(&p, "b_e1"), be1);
    assert_eq!(p.b_x(&n(&p, "H")).unwrap_err(), Error::NotTranslation);
}

/// Basis of the stabilizer of x in h, computed as a nullspace.
fn stabilizer(p: &InhomogeneousAlgebra, x: &MultiVector) -> Vec<MultiVector> {
    let gr = p.algebra().grading().unwrap();
    let h = gr.h().to_vec();
    let cols: Vec<Vec<Rat>> = h
        .iter()
        .map(|&i| {
            let img = MultiVector::basis(p.algebra(), i).act(x).coords();
            img[..4].iter().map(|c| c.to_rational().unwrap()).collect()
        })
        .collect();
    let rows = (0..4).map(|r| {
        cols.iter()
            .enumerate()
            .filter(|(_, c)| !num::Zero::is_zero(&c[r]))
            .map(|(j, c)| (j, c[r].clone()))
            .collect::<Vec<_>>()
    });
    let ns = bialg::linalg::Subspace::nullspace(6, rows);
    ns.basis()
        .iter()
        .map(|v| {
            h.iter().zip(v).fold(MultiVector::zero(p.algebra(), 1), |acc, (&i, c)| {
                &acc + &MultiVector::basis(p.algebra(), i).scale(&Scalar::from_rational(c.clone()))
            })
        })
        .collect()
}

#[test]
fn perturbed_b_x_keeps_t() {
    let p = poincare();
    for (label, t) in [("e0", -1), ("e1", 1), ("e+", 0)] {
        let x = n(&p, label);
        let bx = p.b_x(&x).unwrap();
        let stab = stabilizer(&p, &x);
        assert_eq!(stab.len(), 3, "{label}");
        for s in stab {
            let b = &bx + &x.wedge(&s).unwrap();
            assert_eq!(
                schouten_bracket(&b, &b).unwrap(),
                p.omega_invariant().scale(&Scalar::from_int(t)),
                "{label}"
            );
        }
    }
}

#[test]
fn hodge_star_properties() {
    let p = poincare();
    let star = |x: &MultiVector| p.hodge_star(x).unwrap();
    // *H = ±JH depending on orientation; with Vol = e0^e1^e2^e3 it is -JH.
    let sh = star(&n(&p, "H"));
    assert!(sh == n(&p, "JH") || sh == -&n(&p, "JH"));
    assert_eq!(sh, -&n(&p, "JH"));
    let gr = p.algebra().grading().unwrap();
    for &i in gr.h() {
        let x = MultiVector::basis(p.algebra(), i);
        assert_eq!(star(&star(&x)), -&x);
        for &j in gr.h() {
            let y = MultiVector::basis(p.algebra(), j);
            assert_eq!(star(&y.act(&x)), y.act(&star(&x)));
        }
    }
    assert!(matches!(
        make_inhomogeneous(1, 2).unwrap().hodge_star(&n(&p, "H")),
        Err(Error::WrongDimension { .. })
    ));
}

#[test]
fn f0_and_f1_are_intertwiners_with_antisymmetric_actions() {
    let p = poincare();
    assert!(p.is_h_intertwiner(|x| p.f0(x)).unwrap());
    assert!(p.is_h_intertwiner(|x| p.f1(x)).unwrap());
    let vs = [p.e(0), &p.e(1) + &p.e(3), &p.e(2).scale(&Scalar::from_int(2)) - &p.e(0)];
    for x in &vs {
        for y in &vs {
            // x·F₀(y) = y∧x.
            assert_eq!(x.act(&p.f0(y).unwrap()), y.wedge(x).unwrap());
            let a = x.act(&p.f1(y).unwrap());
            let b = y.act(&p.f1(x).unwrap());
            assert_eq!(a, -&b);
            // x·F₁(y) = g^{jk} e_j ∧ (x×y×e_k).
            let expect = (0..4).fold(MultiVector::zero(p.algebra(), 2), |acc, j| {
                let g = Scalar::from_rational(p.metric().inv(j, j).clone());
                &acc + &p.e(j).wedge(&p.triple_product(x, y, &p.e(j)).unwrap()).unwrap().scale(&g)
            });
            assert_eq!(a, expect);
        }
    }
}

#[test]
fn three_dimensional_special_elements() {
    let a = make_inhomogeneous(1, 2).unwrap();
    let sp = a.special3().unwrap();
    let gr = a.algebra().grading().unwrap();
    for &i in gr.h() {
        assert!(MultiVector::basis(a.algebra(), i).act(&sp.s).is_zero());
    }
    assert!((0..3).any(|j| !a.e(j).act(&sp.s).is_zero()));
    let ds = coboundary(&sp.s);
    for j in 0..3 {
        assert_eq!(sp.t(&a.e(j)), ds.image(j).scale(&Scalar::from_ratio(-1, 2)));
    }
    let defect = (0..3).any(|x| {
        (0..3).any(|y| {
            let f = |u: usize, v: usize| a.e(u).act(&sp.third(&a.e(v)));
            f(x, y) != f(y, x)
        })
    });
    assert!(defect);
    // s is h-invariant but not g-invariant.
    let inv_h = invariants(a.algebra(), ModuleSpec::wedge(2, Block::All), Acting::H).unwrap();
    let module = bialg::cohomology::Module::new(a.algebra(), ModuleSpec::wedge(2, Block::All)).unwrap();
    assert!(inv_h.contains(&module.coords_of(&sp.s).unwrap()));
    assert!(poincare().special3().is_err());
}

#[test]
fn action_matrices_are_nilpotent_for_x_plus() {
    let p = poincare();
    assert!(action_matrix(&n(&p, "X+"), 1).unwrap().is_nilpotent());
    assert!(!action_matrix(&n(&p, "H"), 1).unwrap().is_nilpotent());
}
