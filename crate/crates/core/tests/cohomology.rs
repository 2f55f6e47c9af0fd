use bialg::cohomology::{
    b_elements, coboundary_space, cocycle_space, cohomology_dim, invariants, solve_b_cocycle,
    solve_bc_bracket, span_in_mixed, Acting, Block, Module, ModuleSpec,
};
use bialg::error::Error;
use bialg::exterior::MultiVector;
use bialg::lie::LieAlgebra;
use bialg::poincare::{make_inhomogeneous, poincare};
use bialg::scalar::Scalar;
use bialg::schouten::schouten_bracket;
use std::sync::Arc;

#[test]
fn invariants_of_g_split_into_h_and_v_parts() {
    let p = poincare();
    for (k, block) in [(2, Block::All), (3, Block::All)] {
        let spec = ModuleSpec::wedge(k, block);
        let g = invariants(p.algebra(), spec, Acting::G).unwrap();
        let h = invariants(p.algebra(), spec, Acting::H).unwrap();
        let v = invariants(p.algebra(), spec, Acting::V).unwrap();
        assert_eq!(g, h.intersection(&v), "{spec}");
    }
}

#[test]
fn second_cohomology_of_poincare_vanishes() {
    let p = poincare();
    assert_eq!(invariants(p.algebra(), ModuleSpec::wedge(2, Block::All), Acting::G).unwrap().dim(), 0);
    let d = cohomology_dim(p.algebra(), ModuleSpec::wedge(2, Block::All), Acting::G).unwrap();
    assert_eq!((d.cocycles, d.coboundaries, d.cohomology), (45, 45, 0));
}

#[test]
fn coboundaries_lie_in_cocycles_for_o21() {
    let a = make_inhomogeneous(2, 1).unwrap();
    let spec = ModuleSpec::wedge(2, Block::All);
    let z = cocycle_space(a.algebra(), spec, Acting::G).unwrap();
    let b = coboundary_space(a.algebra(), spec, Acting::G).unwrap();
    assert!(b.is_subspace_of(&z));
    assert_eq!(z.dim(), b.dim());
}

#[test]
fn whitehead_on_the_lorentz_part() {
    // Cocycles h → Λ²g are coboundaries (h = o(1,3) is semisimple).
    let p = poincare();
    let d = cohomology_dim(p.algebra(), ModuleSpec::wedge(2, Block::All), Acting::H).unwrap();
    assert_eq!(d.cohomology, 0);
}

#[test]
fn zero_action_gives_zero_coboundaries() {
    let g = Arc::new(LieAlgebra::abelian(3));
    let b = coboundary_space(&g, ModuleSpec::wedge(2, Block::All), Acting::G).unwrap();
    assert_eq!(b.dim(), 0);
}

#[test]
fn module_specs_parse() {
    assert_eq!("L2V^h".parse::<ModuleSpec>().unwrap(), ModuleSpec::wedge(3, Block::Mixed(1)));
    assert!(matches!("Sym2g".parse::<ModuleSpec>(), Err(Error::UnsupportedModule(_))));
    let p = poincare();
    assert_eq!(Module::new(p.algebra(), "L3g".parse().unwrap()).unwrap().dim(), 120);
    assert_eq!(Module::new(p.algebra(), "V^h".parse().unwrap()).unwrap().dim(), 24);
}

#[test]
fn b_cocycle_for_jh_wedge_h_is_the_v_orbit() {
    let p = poincare();
    let c = p.named("JH").unwrap().wedge(&p.named("H").unwrap()).unwrap();
    let sol = solve_b_cocycle(&c).unwrap();
    let orbit: Vec<MultiVector> = (0..4).map(|i| p.e(i).act(&c)).collect();
    assert_eq!(sol, span_in_mixed(p.algebra(), &orbit).unwrap());
    // Each solution also satisfies the bracket form of the condition.
    for b in b_elements(p.algebra(), &sol).unwrap() {
        assert!(schouten_bracket(&b, &c).unwrap().is_zero());
    }
    assert_eq!(sol, solve_bc_bracket(&c).unwrap());
}

#[test]
fn b_cocycle_for_jx_wedge_x_has_nine_parameters() {
    let p = poincare();
    let c = p.named("JX+").unwrap().wedge(&p.named("X+").unwrap()).unwrap();
    let sol = solve_b_cocycle(&c).unwrap();
    assert_eq!(sol.dim(), 9);
    assert_eq!(sol, solve_bc_bracket(&c).unwrap());
}

#[test]
fn b_cocycle_rejects_bad_input() {
    let p = poincare();
    let n = |l: &str| p.named(l).unwrap();
    let not_triangular = n("H").wedge(&n("X+")).unwrap().scale(&Scalar::one());
    let c = &not_triangular + &n("X-").wedge(&n("JX-")).unwrap();
    assert_eq!(solve_b_cocycle(&c).unwrap_err(), Error::NotTriangular);
    let symbolic = n("JH").wedge(&n("H")).unwrap().scale(&"gamma".parse().unwrap());
    assert_eq!(solve_b_cocycle(&symbolic).unwrap_err(), Error::Parameterized);
    assert!(solve_b_cocycle(&n("e1").wedge(&n("H")).unwrap()).is_err());
}
