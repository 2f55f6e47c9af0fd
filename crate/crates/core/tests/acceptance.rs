//! End-to-end acceptance checks, one printed line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines always
//! reach stdout. A criterion that fails prints FAIL; the process itself only
//! fails when a result deviates from the analysis recorded for the known
//! catalog defect (row 12, see `criterion_1`).

use std::collections::BTreeSet;
use std::process::ExitCode;

use bialg::automorphisms::{gcybe_equivariance_check, AutomorphismMove};
use bialg::catalog::{
    check_triple, triangular_decomposition, verify_all, Bindings, Catalog, Triple, VerifyMode,
};
use bialg::cohomology::{
    cohomology_dim, intertwiner_space, invariant_elements, invariants, solve_b_cocycle, span_in_mixed,
    Acting, Block, ModuleSpec,
};
use bialg::exterior::{Form, MultiVector};
use bialg::linalg::{rat, Rat, Subspace};
use bialg::poincare::{make_inhomogeneous, poincare, InhomogeneousAlgebra};
use bialg::scalar::Scalar;
use bialg::schouten::{formula_check, gcybe_check, schouten_bracket, span_decompose, GcybeVerdict};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
    /// The result matches what is known about this criterion (including a
    /// documented failure).
    as_analysed: bool,
}

impl Outcome {
    fn checked(pass: bool, detail: String) -> Outcome {
        Outcome {
            pass,
            detail,
            as_analysed: pass,
        }
    }
}

fn named(p: &InhomogeneousAlgebra, l: &str) -> MultiVector {
    p.named(l).unwrap()
}

fn wedge(p: &InhomogeneousAlgebra, x: &str, y: &str) -> MultiVector {
    named(p, x).wedge(&named(p, y)).unwrap()
}

fn omega_t(p: &InhomogeneousAlgebra, r: &MultiVector) -> Option<Scalar> {
    match gcybe_check(r, &[p.omega_invariant()]).unwrap() {
        GcybeVerdict::InSpan { coords, .. } => Some(coords[0].clone()),
        _ => None,
    }
}

fn criterion_1(cat: &Catalog) -> Outcome {
    let rows = cat.select(&(1..=21).map(|n| format!("row{n}")).collect::<Vec<_>>()).unwrap();
    let summary = verify_all(&rows, VerifyMode::Symbolic).unwrap();
    let failed: BTreeSet<&str> = summary.failed_ids().into_iter().collect();
    let mut detail = format!("{}/21 rows pass symbolically", summary.passed());

    // Row 12 as printed has [a,b] = 2α₂ e₊∧e₁∧e₂ (the e₋∧e₂ term is not
    // annihilated by X₊ − 2). The failure must be exactly that term.
    let p = cat.algebra();
    let row12 = summary.reports.iter().find(|r| r.id == "row12").unwrap();
    let v = &row12.variants[0];
    let alpha2: Scalar = "alpha2".parse().unwrap();
    let predicted = wedge(p, "e+", "e1")
        .wedge(&named(p, "e2"))
        .unwrap()
        .scale(&alpha2.scale(&rat(2)));
    let row12_as_analysed = v.cc.is_zero() && v.bc.is_zero() && v.bb.is_zero() && v.ab == predicted;
    let at_zero = cat
        .get("row12")
        .and_then(|e| bialg::catalog::verify_entry(p, e, &Bindings::symbolic().with("alpha2", Rat::zero())))
        .unwrap();
    let row6_t = &summary.reports.iter().find(|r| r.id == "row6").unwrap().variants[0].t;
    if !failed.is_empty() {
        detail += &format!(
            "; failing: {}; row12 residual [a,b] = {} (α₂ = 0 passes: {})",
            failed.iter().cloned().collect::<Vec<_>>().join(","),
            p.display(&v.ab),
            at_zero.pass
        );
    }
    detail += &format!("; row6 solves t = {row6_t}");
    Outcome {
        pass: failed.is_empty(),
        as_analysed: failed == BTreeSet::from(["row12"]) && row12_as_analysed && at_zero.pass,
        detail,
    }
}

fn criterion_2(cat: &Catalog) -> Outcome {
    let p = cat.algebra();
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, want) in [("b_e0", -1), ("b_e1", 1), ("b_e+", 0)] {
        let t = omega_t(p, &named(p, label));
        ok &= t == Some(Scalar::from_int(want));
        parts.push(format!("{label}: t = {}", t.map_or("none".into(), |t| t.to_string())));
    }
    for id in ["be0+", "be1+:M1", "be1+:M1+L3", "be1+:H"] {
        let e = cat.get(id).unwrap();
        let triple = e.build(p, &Bindings::symbolic()).unwrap();
        let want = if id.starts_with("be0") { -1 } else { 1 };
        let t = omega_t(p, &triple.r());
        ok &= t == Some(Scalar::from_int(want));
        parts.push(format!("{id}: t = {}", t.map_or("none".into(), |t| t.to_string())));
    }
    Outcome::checked(ok, parts.join(", "))
}

fn criterion_3() -> Outcome {
    let p = poincare();
    let inv = invariants(p.algebra(), ModuleSpec::wedge(2, Block::All), Acting::G).unwrap();
    let d = cohomology_dim(p.algebra(), ModuleSpec::wedge(2, Block::All), Acting::G).unwrap();
    Outcome::checked(
        inv.dim() == 0 && d.cocycles == 45 && d.coboundaries == 45 && d.cohomology == 0,
        format!(
            "(1,3): dim (L2g)^g = {}, Z = {}, B = {}, H = {}",
            inv.dim(),
            d.cocycles,
            d.coboundaries,
            d.cohomology
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (pp, q) in [(1, 2), (3, 0), (4, 0), (2, 2)] {
        let a = make_inhomogeneous(pp, q).unwrap();
        let d = cohomology_dim(a.algebra(), ModuleSpec::wedge(2, Block::All), Acting::G).unwrap();
        ok &= d.cohomology == 0 && d.cocycles == d.coboundaries;
        parts.push(format!("({pp},{q}): Z = B = {}, H = {}", d.coboundaries, d.cohomology));
    }
    Outcome::checked(ok, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let p = poincare();
    let inv = invariant_elements(p.algebra(), ModuleSpec::wedge(3, Block::All), Acting::G).unwrap();
    let proportional = inv.len() == 1 && {
        let (coords, res) = span_decompose(&inv[0], &[p.omega_invariant()]).unwrap();
        res.is_zero() && !coords[0].is_zero()
    };
    Outcome::checked(
        proportional,
        format!("(1,3): dim (L3g)^g = {}, basis vector proportional to Omega: {proportional}", inv.len()),
    )
}

fn criterion_6() -> Outcome {
    let p = poincare();
    let alg = p.algebra();
    let v = ModuleSpec::wedge(1, Block::V);
    let h = ModuleSpec::wedge(1, Block::H);
    let l2h = ModuleSpec::wedge(2, Block::H);
    let vh = intertwiner_space(alg, v, h, Acting::H).unwrap().dim();
    let vl2h = intertwiner_space(alg, v, l2h, Acting::H).unwrap().dim();
    let mut ok = vh == 0 && vl2h == 0;
    let mut parts = vec![format!("Mor(V,h) = {vh}, Mor(V,L2h) = {vl2h}")];
    for (pp, q, want) in [(1, 3, 2), (2, 2, 2), (4, 0, 2), (1, 2, 1), (3, 0, 1)] {
        let a = make_inhomogeneous(pp, q).unwrap();
        let d = intertwiner_space(a.algebra(), h, h, Acting::H).unwrap().dim();
        ok &= d == want;
        parts.push(format!("Mor_h(h,h) at ({pp},{q}) = {d}"));
    }
    Outcome::checked(ok, parts.join(", "))
}

fn v_orbit_span(p: &InhomogeneousAlgebra, c: &MultiVector) -> Subspace {
    let elems: Vec<MultiVector> = (0..4).map(|i| p.e(i).act(c)).collect();
    span_in_mixed(p.algebra(), &elems).unwrap()
}

fn criterion_7() -> Outcome {
    let p = poincare();
    let mut parts = Vec::new();
    let s = solve_b_cocycle(&wedge(&p, "JX+", "X+")).unwrap();
    let mut ok = s.dim() == 9;
    parts.push(format!("JX+^X+: {}", s.dim()));
    let c = wedge(&p, "JH", "H");
    let s = solve_b_cocycle(&c).unwrap();
    let inside = s.is_subspace_of(&v_orbit_span(&p, &c));
    ok &= s.dim() == 4 && inside;
    parts.push(format!("JH^H: {} (in {{vc}}: {inside})", s.dim()));
    for g in [0, 1, -1] {
        let c = &(&wedge(&p, "H", "X+") - &wedge(&p, "JH", "JX+")) + &wedge(&p, "JX+", "X+").scale(&Scalar::from_int(g));
        let s = solve_b_cocycle(&c).unwrap();
        let inside = s.is_subspace_of(&v_orbit_span(&p, &c));
        ok &= s.dim() == 4 && inside;
        parts.push(format!("H^X+ - JH^JX+ + {g} JX+^X+: {} (in {{(-v)c}}: {inside})", s.dim()));
    }
    Outcome::checked(ok, parts.join(", "))
}

fn h_coords(p: &InhomogeneousAlgebra, w: &MultiVector) -> Vec<Rat> {
    let c = w.coords();
    p.algebra()
        .grading()
        .unwrap()
        .h()
        .iter()
        .map(|&i| c[i].to_rational().unwrap())
        .collect()
}

fn criterion_8(cat: &Catalog) -> Outcome {
    let p = cat.algebra();
    let mut ok = true;
    let mut dims = Vec::new();
    let mut shape = true;
    for n in 7..=21 {
        let e = cat.get(&format!("row{n}")).unwrap();
        // Generic rational values keep the rank of b maximal.
        let values = e.params().iter().map(|k| (k.clone(), rat(3))).collect();
        let variant = e.variants().unwrap().remove(0);
        let triple = e.build(p, &Bindings::rational(values).with_all(&variant)).unwrap();
        let d = triangular_decomposition(&triple.b).unwrap();
        ok &= Some(d.v0.dim()) == e.doc().v0_dim && d.h0.dim() == d.v0.dim() && d.is_subalgebra();
        dims.push(d.v0.dim().to_string());
        if n <= 8 {
            let cartan = Subspace::span(6, [h_coords(p, &named(p, "H")), h_coords(p, &named(p, "JH"))]);
            let nil = Subspace::span(6, [h_coords(p, &named(p, "X+")), h_coords(p, &named(p, "JX+"))]);
            shape &= d.h0.dim() == 3 && nil.is_subspace_of(&d.h0) && d.h0.is_subspace_of(&nil.sum(&cartan));
        }
    }
    Outcome::checked(
        ok && shape,
        format!("dim V0 for rows 7..21 = [{}], rows 7-8 h0 = <X+, JX+, lH+mJH>: {shape}", dims.join(",")),
    )
}

fn random_bivector(p: &InhomogeneousAlgebra, rng: &mut ChaCha8Rng) -> MultiVector {
    let dim = bialg::exterior::wedge_dim(10, 2);
    let coords: Vec<Scalar> = (0..dim)
        .map(|_| if rng.gen_bool(0.3) { Scalar::from_int(rng.gen_range(-3..=3)) } else { Scalar::zero() })
        .collect();
    MultiVector::from_coords(p.algebra(), 2, &coords)
}

fn random_covector(rng: &mut ChaCha8Rng) -> Form {
    let coords: Vec<Scalar> = (0..10).map(|_| Scalar::from_int(rng.gen_range(-2..=2))).collect();
    Form::covector(&coords)
}

fn criterion_9(cat: &Catalog) -> Outcome {
    let p = cat.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut formula_ok = 0;
    let mut sym_ok = 0;
    let mut deriv_ok = 0;
    for _ in 0..100 {
        let r = random_bivector(p, &mut rng);
        let (a, b, c) = (random_covector(&mut rng), random_covector(&mut rng), random_covector(&mut rng));
        formula_ok += usize::from(formula_check(&r, &a, &b, &c).unwrap().is_zero());
        let s = random_bivector(p, &mut rng);
        sym_ok += usize::from(schouten_bracket(&r, &s).unwrap() == schouten_bracket(&s, &r).unwrap());
        let x = MultiVector::basis(p.algebra(), rng.gen_range(0..10));
        let lhs = x.act(&schouten_bracket(&r, &s).unwrap());
        let rhs = &schouten_bracket(&x.act(&r), &s).unwrap() + &schouten_bracket(&r, &x.act(&s)).unwrap();
        deriv_ok += usize::from(lhs == rhs);
    }
    let moves = vec![
        AutomorphismMove::translate(p.algebra(), &(&named(p, "e1") - &named(p, "e+").scale(&Scalar::from_int(2)))).unwrap(),
        AutomorphismMove::nilpotent_flow(&named(p, "X+"), "s".parse().unwrap()).unwrap(),
        AutomorphismMove::nilpotent_flow(&named(p, "JX+"), Scalar::from_int(3)).unwrap(),
        AutomorphismMove::dilation(p.algebra(), "lambda0".parse().unwrap()).unwrap(),
        AutomorphismMove::diagonal_flow(&named(p, "H"), rat(2)).unwrap(),
        AutomorphismMove::reflection(p, 3).unwrap(),
        AutomorphismMove::rotation(p, 2, 1, Rat::new(1.into(), 2.into())).unwrap(),
    ];
    let mut equiv_ok = true;
    let mut checked = 0;
    for e in cat.entries() {
        for variant in e.variants().unwrap() {
            let r = e.build(p, &Bindings::symbolic().with_all(&variant)).unwrap().r();
            for m in &moves {
                equiv_ok &= gcybe_equivariance_check(m, &r).unwrap().is_zero();
                checked += 1;
            }
        }
    }
    Outcome::checked(
        formula_ok == 100 && sym_ok == 100 && deriv_ok == 100 && equiv_ok,
        format!(
            "formula {formula_ok}/100, symmetry {sym_ok}/100, ad-derivation {deriv_ok}/100, \
             equivariance on {checked} (move, entry) pairs: {equiv_ok}"
        ),
    )
}

fn nonzero_blocks(p: &InhomogeneousAlgebra, triple: &Triple) -> BTreeSet<&'static str> {
    let report = check_triple(p, triple, &Scalar::zero()).unwrap();
    report.failing_blocks().into_iter().map(|(_, b, _)| b).collect()
}

fn criterion_10(cat: &Catalog) -> Outcome {
    let p = cat.algebra();
    let mut ok = true;
    let mut parts = Vec::new();

    let mut row4 = cat.get("row4").unwrap().build(p, &Bindings::symbolic()).unwrap();
    let beta: Scalar = "beta".parse().unwrap();
    row4.a = &row4.a + &wedge(p, "e1", "e2").scale(&(&beta * &beta).scale(&rat(2)));
    let blocks = nonzero_blocks(p, &row4);
    ok &= blocks == BTreeSet::from(["L2V^h"]);
    parts.push(format!("row4 +beta^2: {blocks:?}"));

    let b = &wedge(p, "e1", "L1") + &wedge(p, "e2", "L2");
    let zero = MultiVector::zero(p.algebra(), 2);
    let truncated = Triple {
        a: zero.clone(),
        b,
        c: zero.clone(),
    };
    let blocks = nonzero_blocks(p, &truncated);
    ok &= blocks == BTreeSet::from(["L2V^h"]);
    parts.push(format!("b_e0 without e3^L3: {blocks:?}"));

    let eps: Scalar = "eps".parse().unwrap();
    let c = &wedge(p, "JX+", "X+") + &wedge(p, "H", "JH").scale(&eps);
    let perturbed = Triple { a: zero.clone(), b: zero, c };
    let blocks = nonzero_blocks(p, &perturbed);
    ok &= blocks == BTreeSet::from(["L3h"]);
    parts.push(format!("JX+^X+ + eps H^JH: {blocks:?}"));
    Outcome::checked(ok, parts.join(", "))
}

fn main() -> ExitCode {
    let cat = Catalog::load_default().expect("shipped catalog loads");
    let results = [
        criterion_1(&cat),
        criterion_2(&cat),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(&cat),
        criterion_9(&cat),
        criterion_10(&cat),
    ];
    let mut unexpected = false;
    for (i, o) in results.iter().enumerate() {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2}: {verdict} - {}", i + 1, o.detail);
        unexpected |= !o.as_analysed;
    }
    if unexpected {
        eprintln!("acceptance results deviate from the recorded analysis");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
