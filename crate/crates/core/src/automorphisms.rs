//! Automorphism moves used to bring r-matrices to normal form.
//!
//! Every move is stored as the images of the basis vectors of g; the action
//! on Λᵏg is the k-th wedge power. All moves stay in exact arithmetic:
//! semisimple flows use a rational multiplier μ standing for eᵗ, and
//! rotations use the Pythagorean parameterization of the unit circle.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{wedge_basis, MultiVector};
use crate::lie::{action_matrix, bracket, LieAlgebra, LinearMap};
use crate::linalg::{inverse, rational_sqrt, solve, Rat, Subspace};
use crate::poincare::InhomogeneousAlgebra;
use crate::scalar::Scalar;
use crate::schouten::{schouten_bracket, span_decompose};

/// The kinds of moves in use.
#[derive(Clone, Debug, PartialEq)]
pub enum MoveKind {
    Identity,
    /// Ad_{−v} = id − ad v for v ∈ V (coordinates in the V basis).
    Translate(Vec<Scalar>),
    /// exp(t · ad X) for X ∈ h with ad X nilpotent.
    NilpotentFlow { x: MultiVector, t: Scalar },
    /// (v, X) ↦ (λv, X).
    Dilation(Scalar),
    /// exp(t · ad X) with μ = eᵗ, for ad X diagonalizable with integer eigenvalues.
    DiagonalFlow { x: MultiVector, mu: Rat },
    /// e_j ↦ −e_j on V, induced on h.
    Reflection(usize),
    /// exp(θ Ω_{jk}) with cos θ = (1−s²)/(1+s²), sin θ = 2s/(1+s²).
    Rotation { j: usize, k: usize, s: Rat },
}

#[derive(Clone, Debug)]
pub struct AutomorphismMove {
    kind: MoveKind,
    alg: Arc<LieAlgebra>,
    images: Vec<MultiVector>,
}

fn images_of(alg: &Arc<LieAlgebra>, m: &LinearMap) -> Vec<MultiVector> {
    (0..alg.dim())
        .map(|j| {
            let terms = m.column(j).iter().map(|(i, c)| (vec![*i], c.clone()));
            MultiVector::from_terms(alg, 1, terms).expect("valid indices")
        })
        .collect()
}

fn check_in_h(x: &MultiVector) -> Result<()> {
    if x.degree() != 1 || !x.in_block(1) {
        return Err(Error::InvalidMove("flow generator must lie in h".into()));
    }
    Ok(())
}

/// cos θ and sin θ from the Pythagorean parameter s.
pub fn pythagorean(s: &Rat) -> (Rat, Rat) {
    let d = Rat::one() + s * s;
    ((Rat::one() - s * s) / &d, (s + s) / d)
}

impl AutomorphismMove {
    pub fn identity(alg: &Arc<LieAlgebra>) -> AutomorphismMove {
        AutomorphismMove {
            kind: MoveKind::Identity,
            alg: alg.clone(),
            images: (0..alg.dim()).map(|i| MultiVector::basis(alg, i)).collect(),
        }
    }

    /// Ad_{−v}: X ↦ X − [v, X].
    pub fn translate(alg: &Arc<LieAlgebra>, v: &MultiVector) -> Result<AutomorphismMove> {
        let gr = alg.grading().ok_or(Error::NotGraded)?;
        if v.degree() != 1 || !v.in_block(0) {
            return Err(Error::InvalidMove("translation vector must lie in V".into()));
        }
        let images = (0..alg.dim())
            .map(|i| {
                let e = MultiVector::basis(alg, i);
                &e - &v.act(&e)
            })
            .collect();
        let coords = v.coords();
        Ok(AutomorphismMove {
            kind: MoveKind::Translate(gr.v().iter().map(|&i| coords[i].clone()).collect()),
            alg: alg.clone(),
            images,
        })
    }

    /// exp(t ad X) as a finite sum; errors unless ad X is nilpotent.
    pub fn nilpotent_flow(x: &MultiVector, t: Scalar) -> Result<AutomorphismMove> {
        check_in_h(x)?;
        let alg = x.algebra().clone();
        let ad = action_matrix(x, 1)?;
        if !ad.is_nilpotent() {
            return Err(Error::InvalidMove("generator is not nilpotent".into()));
        }
        let n = alg.dim();
        let mut total = LinearMap::identity(n);
        let mut term = LinearMap::identity(n);
        for k in 1..=n {
            term = ad.compose(&term).scale(&t.scale(&Rat::new(1.into(), (k as i64).into())));
            if term.is_zero() {
                break;
            }
            total = total.add(&term);
        }
        Ok(AutomorphismMove {
            kind: MoveKind::NilpotentFlow { x: x.clone(), t },
            images: images_of(&alg, &total),
            alg,
        })
    }

    pub fn dilation(alg: &Arc<LieAlgebra>, lambda: Scalar) -> Result<AutomorphismMove> {
        let gr = alg.grading().ok_or(Error::NotGraded)?;
        if lambda.is_zero() {
            return Err(Error::InvalidMove("dilation by zero".into()));
        }
        let images = (0..alg.dim())
            .map(|i| {
                let e = MultiVector::basis(alg, i);
                if gr.is_h(i) {
                    e
                } else {
                    e.scale(&lambda)
                }
            })
            .collect();
        Ok(AutomorphismMove {
            kind: MoveKind::Dilation(lambda),
            alg: alg.clone(),
            images,
        })
    }

    /// exp(t ad X) with eᵗ = μ; requires ad X diagonalizable over ℚ with
    /// integer eigenvalues.
    pub fn diagonal_flow(x: &MultiVector, mu: Rat) -> Result<AutomorphismMove> {
        check_in_h(x)?;
        if !mu.is_positive() {
            return Err(Error::InvalidMove("multiplier must be positive".into()));
        }
        let alg = x.algebra().clone();
        let n = alg.dim();
        let ad = action_matrix(x, 1)?
            .to_rational_rows()
            .ok_or(Error::Parameterized)?;
        // Gershgorin bound on integer eigenvalues.
        let bound = ad
            .iter()
            .map(|r| r.iter().map(|v| v.abs()).fold(Rat::zero(), |a, b| a + b))
            .fold(Rat::zero(), |a, b| if b > a { b } else { a })
            .floor()
            .to_integer();
        let bound: i64 = bound.try_into().unwrap_or(i64::MAX);
        let mut vecs: Vec<(i64, Vec<Rat>)> = Vec::new();
        for lam in -bound..=bound {
            let rows = (0..n).map(|i| {
                (0..n)
                    .filter_map(|j| {
                        let mut v = ad[i][j].clone();
                        if i == j {
                            v -= Rat::from_integer(lam.into());
                        }
                        (!v.is_zero()).then_some((j, v))
                    })
                    .collect::<Vec<_>>()
            });
            let ns = Subspace::nullspace(n, rows);
            for b in ns.basis() {
                vecs.push((lam, b.clone()));
            }
        }
        if vecs.len() != n {
            return Err(Error::InvalidMove(
                "generator is not diagonalizable over Q with integer eigenvalues".into(),
            ));
        }
        // M = P D P⁻¹ with eigenvectors as the columns of P.
        let p: Vec<Vec<Rat>> = (0..n).map(|i| vecs.iter().map(|(_, v)| v[i].clone()).collect()).collect();
        let pinv = inverse(&p).ok_or_else(|| Error::InvalidMove("degenerate eigenbasis".into()))?;
        let factor: Vec<Rat> = vecs
            .iter()
            .map(|(l, _)| {
                if *l >= 0 {
                    num::pow::pow(mu.clone(), *l as usize)
                } else {
                    num::pow::pow(mu.recip(), (-*l) as usize)
                }
            })
            .collect();
        let m: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| &p[i][k] * &factor[k] * &pinv[k][j])
                            .fold(Rat::zero(), |a, b| a + b)
                    })
                    .collect()
            })
            .collect();
        Ok(AutomorphismMove {
            kind: MoveKind::DiagonalFlow { x: x.clone(), mu },
            images: images_of(&alg, &LinearMap::from_rational_rows(&m)),
            alg,
        })
    }

    /// The automorphism induced by an isometry R of V: v ↦ Rv, Ω_{x,y} ↦ Ω_{Rx,Ry}.
    pub fn from_isometry(
        a: &InhomogeneousAlgebra,
        r: &[Vec<Rat>],
        kind: MoveKind,
    ) -> Result<AutomorphismMove> {
        let n = a.dim_v();
        let g = a.metric();
        for i in 0..n {
            for j in 0..n {
                let mut s = Rat::zero();
                for k in 0..n {
                    s += &r[k][i] * g.g(k, k) * &r[k][j];
                }
                if &s != g.g(i, j) {
                    return Err(Error::InvalidMove("map is not an isometry".into()));
                }
            }
        }
        let alg = a.algebra().clone();
        let image_v: Vec<MultiVector> = (0..n)
            .map(|j| {
                let coords: Vec<Scalar> = (0..alg.dim())
                    .map(|i| {
                        if i < n {
                            Scalar::from_rational(r[i][j].clone())
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect();
                MultiVector::from_vector(&alg, &coords)
            })
            .collect();
        let mut images = image_v.clone();
        images.resize(alg.dim(), MultiVector::zero(&alg, 1));
        for j in 0..n {
            for k in j + 1..n {
                let idx = a
                    .omega_gen(j, k)
                    .terms()
                    .next()
                    .map(|(t, _)| t[0])
                    .expect("nonzero generator");
                images[idx] = a.omega_xy(&image_v[j], &image_v[k])?;
            }
        }
        Ok(AutomorphismMove { kind, alg, images })
    }

    pub fn reflection(a: &InhomogeneousAlgebra, j: usize) -> Result<AutomorphismMove> {
        let n = a.dim_v();
        if j >= n {
            return Err(Error::InvalidMove(format!("no basis vector e{j}")));
        }
        let r: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| match (i == k, i == j) {
                        (true, true) => -Rat::one(),
                        (true, false) => Rat::one(),
                        _ => Rat::zero(),
                    })
                    .collect()
            })
            .collect();
        Self::from_isometry(a, &r, MoveKind::Reflection(j))
    }

    /// exp(θ Ω_{jk}) restricted to a definite plane (g_jj = g_kk).
    pub fn rotation(a: &InhomogeneousAlgebra, j: usize, k: usize, s: Rat) -> Result<AutomorphismMove> {
        let n = a.dim_v();
        if j >= n || k >= n || j == k {
            return Err(Error::InvalidMove(format!("bad rotation plane ({j},{k})")));
        }
        if a.metric().g(j, j) != a.metric().g(k, k) {
            return Err(Error::InvalidMove("rotation plane must be definite".into()));
        }
        let gen = a.action_on_v(&a.omega_gen(j, k))?;
        let (cos, sin) = pythagorean(&s);
        // R = I + sin G + (1 − cos) G², since G² = −1 on the plane.
        let g2 = crate::linalg::mat_mul(&gen, &gen);
        let r: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|l| {
                        let id = if i == l { Rat::one() } else { Rat::zero() };
                        id + &sin * &gen[i][l] + (Rat::one() - &cos) * &g2[i][l]
                    })
                    .collect()
            })
            .collect();
        Self::from_isometry(a, &r, MoveKind::Rotation { j, k, s })
    }

    pub fn kind(&self) -> &MoveKind {
        &self.kind
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn image(&self, i: usize) -> &MultiVector {
        &self.images[i]
    }

    /// Matrix of the degree-1 action.
    pub fn matrix(&self) -> LinearMap {
        self.matrix_on(1).expect("degree 1")
    }

    /// Matrix of the action on Λᵏg over the canonical wedge basis.
    pub fn matrix_on(&self, k: usize) -> Result<LinearMap> {
        let basis = wedge_basis(self.alg.dim(), k);
        let mut m = LinearMap::zero(basis.len(), basis.len());
        for (j, t) in basis.iter().enumerate() {
            let img = self.apply(&MultiVector::basis_tuple(&self.alg, t))?;
            for (tt, c) in img.terms() {
                m.set(img.index_of(tt), j, c.clone());
            }
        }
        Ok(m)
    }

    /// Action on a multivector of any degree ≤ 3 (wedge power of the move).
    pub fn apply(&self, w: &MultiVector) -> Result<MultiVector> {
        w.check_same(&self.images[0])?;
        let mut out = MultiVector::zero(&self.alg, w.degree());
        for (t, c) in w.terms() {
            let mut acc = MultiVector::scalar(&self.alg, c.clone());
            for &i in t {
                acc = acc.wedge(&self.images[i])?;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<AutomorphismMove> {
        match &self.kind {
            MoveKind::Identity => Ok(self.clone()),
            MoveKind::Translate(v) => {
                let gr = self.alg.grading().ok_or(Error::NotGraded)?;
                let mut coords = vec![Scalar::zero(); self.alg.dim()];
                for (&i, c) in gr.v().iter().zip(v) {
                    coords[i] = -c.clone();
                }
                Self::translate(&self.alg, &MultiVector::from_vector(&self.alg, &coords))
            }
            MoveKind::NilpotentFlow { x, t } => Self::nilpotent_flow(x, -t.clone()),
            MoveKind::Dilation(l) => {
                let q = l.to_rational().ok_or_else(|| {
                    Error::InvalidMove("symbolic dilation has no polynomial inverse".into())
                })?;
                Self::dilation(&self.alg, Scalar::from_rational(q.recip()))
            }
            MoveKind::DiagonalFlow { x, mu } => Self::diagonal_flow(x, mu.recip()),
            MoveKind::Reflection(_) | MoveKind::Rotation { .. } => {
                let m = self
                    .matrix()
                    .to_rational_rows()
                    .ok_or(Error::Parameterized)?;
                let inv = inverse(&m).ok_or_else(|| Error::InvalidMove("singular".into()))?;
                let kind = match &self.kind {
                    MoveKind::Rotation { j, k, s } => MoveKind::Rotation {
                        j: *j,
                        k: *k,
                        s: -s.clone(),
                    },
                    other => other.clone(),
                };
                Ok(AutomorphismMove {
                    kind,
                    images: images_of(&self.alg, &LinearMap::from_rational_rows(&inv)),
                    alg: self.alg.clone(),
                })
            }
        }
    }

    /// Residual of the automorphism property over all basis pairs.
    pub fn is_automorphism(&self) -> Result<bool> {
        let n = self.alg.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = bracket(&self.images[i], &self.images[j])?;
                let rhs = self.apply(&bracket(
                    &MultiVector::basis(&self.alg, i),
                    &MultiVector::basis(&self.alg, j),
                )?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `[m·r, m·r] − m₃·[r, r]`; zero for a correct move.
pub fn gcybe_equivariance_check(m: &AutomorphismMove, r: &MultiVector) -> Result<MultiVector> {
    let mr = m.apply(r)?;
    Ok(&schouten_bracket(&mr, &mr)? - &m.apply(&schouten_bracket(r, r)?)?)
}

/// Applies a sequence of moves in order.
pub fn apply_all(moves: &[AutomorphismMove], r: &MultiVector) -> Result<MultiVector> {
    moves.iter().try_fold(r.clone(), |acc, m| m.apply(&acc))
}

/// Solves a system of expressions affine in `vars` (free variables → 0).
pub fn solve_affine(exprs: &[Scalar], vars: &[&str]) -> Option<BTreeMap<String, Rat>> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for e in exprs {
        let (coeffs, rest) = e.affine_in(vars)?;
        let row: Option<Vec<Rat>> = coeffs.iter().map(Scalar::to_rational).collect();
        a.push(row?);
        b.push(-rest.to_rational()?);
    }
    if a.is_empty() {
        return Some(vars.iter().map(|v| (v.to_string(), Rat::zero())).collect());
    }
    let x = solve(&a, &b)?;
    Some(vars.iter().map(|v| v.to_string()).zip(x).collect())
}

fn substitute_rat(w: &MultiVector, vals: &BTreeMap<String, Rat>) -> MultiVector {
    let s: BTreeMap<String, Scalar> = vals
        .iter()
        .map(|(k, v)| (k.clone(), Scalar::from_rational(v.clone())))
        .collect();
    w.substitute_all(&s)
}

fn symbolic_vector(a: &InhomogeneousAlgebra, names: &[&str], support: &[usize]) -> MultiVector {
    let alg = a.algebra();
    let mut coords = vec![Scalar::zero(); alg.dim()];
    for (name, &i) in names.iter().zip(support) {
        coords[i] = Scalar::var(name);
    }
    MultiVector::from_vector(alg, &coords)
}

/// Finds v ∈ V with a + (−v)b = 0, i.e. Ad_{−v}(a + b) = b (for b ∈ V∧h and
/// a ∈ Λ²V). Returns the translation move, or `None` if no such v exists.
pub fn remove_a_by_translation(
    a: &InhomogeneousAlgebra,
    av: &MultiVector,
    b: &MultiVector,
) -> Result<Option<AutomorphismMove>> {
    let names = ["v0", "v1", "v2", "v3", "v4", "v5"];
    let n = a.dim_v();
    let names = &names[..n.min(names.len())];
    let support: Vec<usize> = (0..names.len()).collect();
    let v = symbolic_vector(a, names, &support);
    let t = AutomorphismMove::translate(a.algebra(), &v)?;
    let diff = &t.apply(&(av + b))? - b;
    let exprs: Vec<Scalar> = diff.terms().map(|(_, c)| c.clone()).collect();
    let Some(sol) = solve_affine(&exprs, names) else {
        return Ok(None);
    };
    let vv = substitute_rat(&v, &sol);
    let mv = AutomorphismMove::translate(a.algebra(), &vv)?;
    Ok((mv.apply(&(av + b))? == *b).then_some(mv))
}

/// Light-cone indices used by the normalization.
mod lc {
    pub const EP: usize = 0;
    pub const E1: usize = 2;
    pub const E2: usize = 3;
    pub const JH: usize = 5;
    pub const XP: usize = 6;
    pub const JXP: usize = 7;
}

/// b(X*) in light-cone coordinates (e+, e−, e1, e2), for X a light-cone
/// basis element of h: the vector x with b ∋ X∧x.
pub fn lc_component(a: &InhomogeneousAlgebra, b: &MultiVector, h_index: usize) -> Result<[Scalar; 4]> {
    let terms = a.light_cone_terms(b)?;
    let mut out: [Scalar; 4] = Default::default();
    for (t, c) in terms {
        if t.len() == 2 && t[0] < 4 && t[1] == h_index {
            out[t[0]] = -c;
        }
    }
    Ok(out)
}

/// Terminal states of the normalization pipeline for c = JX+∧X+.
#[derive(Clone, Debug, PartialEq)]
pub enum Row2Outcome {
    /// b = β₁ b_{e+} + β₂ e+∧JH, a = 0.
    Row2 { beta1: Rat, beta2: Rat },
    /// b = β b_{e+}, a = α e+∧e1.
    Row3 { beta: Rat, alpha: Rat },
    /// b = β(e1∧X+ + e2∧JX+), a = e+∧(α₁e1 + α₂e2) − β² e1∧e2.
    Row4 { beta: Rat, alpha1: Rat, alpha2: Rat },
    /// b has the reduced shape (x⁺ = y⁺ = 0, x² = y¹ = 0) but r does not
    /// solve the defining equations, so no table row applies.
    ReducedB2,
    /// A step needs an irrational group parameter.
    Obstructed(String),
}

#[derive(Clone, Debug)]
pub struct Row2Normalization {
    /// The normalized r (after dividing by the scale of c).
    pub r: MultiVector,
    /// Factor 1/κ applied to the input so that c = JX+∧X+.
    pub scale: Rat,
    /// Non-trivial moves, in order of application.
    pub moves: Vec<AutomorphismMove>,
    pub outcome: Row2Outcome,
}

/// Fits q(θ) = A cos mθ + B sin mθ by sampling rational rotations and
/// returns s with q(θ(s)) = 0 when such a rational angle exists.
fn rational_zeroing_angle<F>(q: F, m: u32) -> Result<std::result::Result<Option<Rat>, String>>
where
    F: Fn(&Rat) -> Result<Rat>,
{
    let a = q(&Rat::zero())?;
    if a.is_zero() {
        return Ok(Ok(None));
    }
    let trig = |s: &Rat| -> (Rat, Rat) {
        let (c, sn) = pythagorean(s);
        if m == 1 {
            (c, sn)
        } else {
            (&c * &c - &sn * &sn, Rat::from_integer(2.into()) * &c * &sn)
        }
    };
    let s1 = Rat::new(1.into(), 2.into());
    let (c1, sn1) = trig(&s1);
    let b = (q(&s1)? - &a * &c1) / sn1;
    for probe in [Rat::new(1.into(), 3.into()), Rat::from_integer(2.into())] {
        let (c, sn) = trig(&probe);
        if q(&probe)? != &a * &c + &b * &sn {
            return Ok(Err("parameter does not rotate harmonically".into()));
        }
    }
    let rho2 = &a * &a + &b * &b;
    let Some(rho) = rational_sqrt(&rho2) else {
        return Ok(Err(format!(
            "rotation angle is irrational: need sqrt({rho2}) to be rational"
        )));
    };
    for eps in [Rat::one(), -Rat::one()] {
        let (cphi, sphi) = (&eps * &b / &rho, -&eps * &a / &rho);
        let (cth, sth) = if m == 1 {
            (cphi, sphi)
        } else {
            let half = (Rat::one() + &cphi) / Rat::from_integer(2.into());
            let Some(ct) = rational_sqrt(&half) else { continue };
            if ct.is_zero() {
                (Rat::zero(), Rat::one())
            } else {
                let st = &sphi / (Rat::from_integer(2.into()) * &ct);
                (ct, st)
            }
        };
        let denom = Rat::one() + &cth;
        if denom.is_zero() {
            continue;
        }
        return Ok(Ok(Some(sth / denom)));
    }
    Ok(Err(format!(
        "rotation angle is irrational: half-angle of ({}, {}) is not rational",
        &b / &rho,
        -&a / &rho
    )))
}

/// Equation residuals (cc, bc, bb − tΩ, ab) vanish for some t; returns t.
fn solves_equations(a: &InhomogeneousAlgebra, r: &MultiVector) -> Result<Option<Scalar>> {
    let parts = r.split2()?;
    if !schouten_bracket(&parts.c, &parts.c)?.is_zero()
        || !schouten_bracket(&parts.b, &parts.c)?.is_zero()
        || !schouten_bracket(&parts.a, &parts.b)?.is_zero()
    {
        return Ok(None);
    }
    let bb = &schouten_bracket(&parts.a, &parts.c)?.scale(&Scalar::from_int(2))
        + &schouten_bracket(&parts.b, &parts.b)?;
    let (coords, residual) = span_decompose(&bb, &[a.omega_invariant()])?;
    Ok(residual.is_zero().then(|| coords[0].clone()))
}

/// Normalizes r = a + b + c with c = κ·JX+∧X+ on the Poincaré algebra,
/// following the translation / JH-rotation / nilpotent-flow sequence.
pub fn normalize_row2(p: &InhomogeneousAlgebra, r: &MultiVector) -> Result<Row2Normalization> {
    if !p.is_poincare() {
        return Err(Error::WrongC);
    }
    if !r.is_rational() {
        return Err(Error::Parameterized);
    }
    let alg = p.algebra();
    let c0 = p.named("JX+")?.wedge(&p.named("X+")?)?;
    let parts = r.split2()?;
    let (kappa, rest) = span_decompose(&parts.c, std::slice::from_ref(&c0))?;
    let kappa = kappa[0].to_rational().ok_or(Error::Parameterized)?;
    if !rest.is_zero() || kappa.is_zero() {
        return Err(Error::WrongC);
    }
    let scale = kappa.recip();
    let mut cur = r.scale(&Scalar::from_rational(scale.clone()));
    let mut moves: Vec<AutomorphismMove> = Vec::new();
    let done = |cur: MultiVector, moves, outcome| {
        Ok(Row2Normalization {
            r: cur,
            scale: scale.clone(),
            moves,
            outcome,
        })
    };

    // Step 1: translation killing x⁺, y⁺ and x² + y¹.
    let names = ["v0", "v1", "v2", "v3"];
    let v = symbolic_vector(p, &names, &[0, 1, 2, 3]);
    let t = AutomorphismMove::translate(alg, &v)?;
    let moved = t.apply(&cur)?.split2()?.b;
    let x = lc_component(p, &moved, lc::XP)?;
    let y = lc_component(p, &moved, lc::JXP)?;
    let eqs = [x[lc::EP].clone(), y[lc::EP].clone(), &x[lc::E2] + &y[lc::E1]];
    let Some(sol) = solve_affine(&eqs, &names) else {
        return done(cur, moves, Row2Outcome::Obstructed("translation step has no solution".into()));
    };
    if sol.values().any(|q| !q.is_zero()) {
        let m = AutomorphismMove::translate(alg, &substitute_rat(&v, &sol))?;
        cur = m.apply(&cur)?;
        moves.push(m);
    }

    // Step 2: JH-rotation killing x² − y¹.
    let q_of = |w: &MultiVector| -> Result<Rat> {
        let b = w.split2()?.b;
        let x = lc_component(p, &b, lc::XP)?;
        let y = lc_component(p, &b, lc::JXP)?;
        (&x[lc::E2] - &y[lc::E1]).to_rational().ok_or(Error::Parameterized)
    };
    let rotated = |s: &Rat| -> Result<MultiVector> {
        AutomorphismMove::rotation(p, 2, 1, s.clone())?.apply(&cur)
    };
    match rational_zeroing_angle(|s| q_of(&rotated(s)?), 2)? {
        Ok(None) => {}
        Ok(Some(s)) => {
            let m = AutomorphismMove::rotation(p, 2, 1, s)?;
            cur = m.apply(&cur)?;
            moves.push(m);
        }
        Err(why) => return done(cur, moves, Row2Outcome::Obstructed(why)),
    }
    let parts = cur.split2()?;
    let x = lc_component(p, &parts.b, lc::XP)?;
    let y = lc_component(p, &parts.b, lc::JXP)?;
    for (name, val) in [("x+", &x[lc::EP]), ("y+", &y[lc::EP]), ("x2", &x[lc::E2]), ("y1", &y[lc::E1])] {
        if !val.is_zero() {
            return done(cur, moves, Row2Outcome::Obstructed(format!("{name} did not vanish")));
        }
    }
    if solves_equations(p, &cur)?.is_none_or(|t| !t.is_zero()) {
        return done(cur, moves, Row2Outcome::ReducedB2);
    }

    // Step 3: branch on x¹ + y² and z⁺.
    let parts = cur.split2()?;
    let x1 = x[lc::E1].to_rational().ok_or(Error::Parameterized)?;
    let y2 = y[lc::E2].to_rational().ok_or(Error::Parameterized)?;
    let z = lc_component(p, &parts.b, lc::JH)?;
    let zp = z[lc::EP].to_rational().ok_or(Error::Parameterized)?;
    let e = |l: &str| p.named(l);
    let wedge = |u: &str, w: &str| -> Result<MultiVector> { e(u)?.wedge(&e(w)?) };
    let rat = |s: &Scalar| s.to_rational().ok_or(Error::Parameterized);

    if !(&x1 + &y2).is_zero() {
        let shape = &wedge("e1", "X+")? + &wedge("e2", "JX+")?;
        let (beta, res) = span_decompose(&parts.b, std::slice::from_ref(&shape))?;
        let beta = rat(&beta[0])?;
        let a_rest = &parts.a + &wedge("e1", "e2")?.scale(&Scalar::from_rational(&beta * &beta));
        let (al, res_a) = span_decompose(&a_rest, &[wedge("e+", "e1")?, wedge("e+", "e2")?])?;
        if !res.is_zero() || !res_a.is_zero() {
            return done(cur, moves, Row2Outcome::Obstructed("unexpected shape in the x1+y2 != 0 branch".into()));
        }
        let outcome = Row2Outcome::Row4 {
            beta,
            alpha1: rat(&al[0])?,
            alpha2: rat(&al[1])?,
        };
        return done(cur, moves, outcome);
    }

    let bep = e("b_e+")?;
    if zp.is_zero() {
        // Rotate a = e+∧(α₁e1 + α₂e2) onto e+∧e1; b and c are JH-invariant.
        let alpha2_of = |w: &MultiVector| -> Result<Rat> {
            let (al, _) = span_decompose(&w.split2()?.a, &[wedge("e+", "e1")?, wedge("e+", "e2")?])?;
            rat(&al[1])
        };
        match rational_zeroing_angle(|s| alpha2_of(&rotated_by(p, &cur, s)?), 1)? {
            Ok(None) => {}
            Ok(Some(s)) => {
                let m = AutomorphismMove::rotation(p, 2, 1, s)?;
                cur = m.apply(&cur)?;
                moves.push(m);
            }
            Err(why) => return done(cur, moves, Row2Outcome::Obstructed(why)),
        }
        let parts = cur.split2()?;
        let (beta, res_b) = span_decompose(&parts.b, std::slice::from_ref(&bep))?;
        let (alpha, res_a) = span_decompose(&parts.a, &[wedge("e+", "e1")?])?;
        if !res_b.is_zero() || !res_a.is_zero() {
            return done(cur, moves, Row2Outcome::Obstructed("unexpected shape in the z+ = 0 branch".into()));
        }
        return done(
            cur,
            moves,
            Row2Outcome::Row3 {
                beta: rat(&beta[0])?,
                alpha: rat(&alpha[0])?,
            },
        );
    }

    // z⁺ ≠ 0: translate along e1, e2 to remove a, then X+ / JX+ flows.
    let names = ["v1", "v2"];
    let v = symbolic_vector(p, &names, &[1, 2]);
    let t = AutomorphismMove::translate(alg, &v)?;
    let moved = t.apply(&cur)?.split2()?.a;
    let eqs: Vec<Scalar> = moved.terms().map(|(_, c)| c.clone()).collect();
    let Some(sol) = solve_affine(&eqs, &names) else {
        return done(cur, moves, Row2Outcome::Obstructed("cannot remove a by a translation".into()));
    };
    if sol.values().any(|q| !q.is_zero()) {
        let m = AutomorphismMove::translate(alg, &substitute_rat(&v, &sol))?;
        cur = m.apply(&cur)?;
        moves.push(m);
    }
    let target = [bep.clone(), wedge("e+", "JH")?];
    let f1 = AutomorphismMove::nilpotent_flow(&e("X+")?, Scalar::var("t1"))?;
    let f2 = AutomorphismMove::nilpotent_flow(&e("JX+")?, Scalar::var("t2"))?;
    let flowed = f2.apply(&f1.apply(&cur)?)?.split2()?;
    let (_, residual) = span_decompose(&flowed.b, &target)?;
    let eqs: Vec<Scalar> = residual.terms().map(|(_, c)| c.clone()).collect();
    let Some(sol) = solve_affine(&eqs, &["t1", "t2"]) else {
        return done(cur, moves, Row2Outcome::Obstructed("nilpotent flows cannot reach the normal form".into()));
    };
    for (gen, name) in [("X+", "t1"), ("JX+", "t2")] {
        if !sol[name].is_zero() {
            let m = AutomorphismMove::nilpotent_flow(&e(gen)?, Scalar::from_rational(sol[name].clone()))?;
            cur = m.apply(&cur)?;
            moves.push(m);
        }
    }
    let parts = cur.split2()?;
    let (betas, res) = span_decompose(&parts.b, &target)?;
    if !res.is_zero() || !parts.a.is_zero() {
        return done(cur, moves, Row2Outcome::Obstructed("unexpected shape in the z+ != 0 branch".into()));
    }
    done(
        cur,
        moves,
        Row2Outcome::Row2 {
            beta1: rat(&betas[0])?,
            beta2: rat(&betas[1])?,
        },
    )
}

fn rotated_by(p: &InhomogeneousAlgebra, w: &MultiVector, s: &Rat) -> Result<MultiVector> {
    AutomorphismMove::rotation(p, 2, 1, s.clone())?.apply(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poincare::poincare;

    #[test]
    fn moves_are_automorphisms() {
        let p = poincare();
        let alg = p.algebra();
        let h = p.named("H").unwrap();
        let moves = [
            AutomorphismMove::translate(alg, &(&p.e(0) + &p.e(2).scale(&Scalar::from_int(3)))).unwrap(),
            AutomorphismMove::nilpotent_flow(&p.named("X+").unwrap(), Scalar::from_int(2)).unwrap(),
            AutomorphismMove::dilation(alg, Scalar::from_int(5)).unwrap(),
            AutomorphismMove::diagonal_flow(&h, Rat::from_integer(3.into())).unwrap(),
            AutomorphismMove::reflection(&p, 2).unwrap(),
            AutomorphismMove::rotation(&p, 2, 1, Rat::new(1.into(), 2.into())).unwrap(),
        ];
        for m in &moves {
            assert!(m.is_automorphism().unwrap(), "{:?}", m.kind());
        }
    }

    #[test]
    fn nilpotency_and_diagonalizability_are_checked() {
        let p = poincare();
        assert!(AutomorphismMove::nilpotent_flow(&p.named("H").unwrap(), Scalar::one()).is_err());
        assert!(AutomorphismMove::diagonal_flow(&p.named("JH").unwrap(), Rat::one()).is_err());
    }

    #[test]
    fn diagonal_flow_scales_light_cone_vectors() {
        let p = poincare();
        let m = AutomorphismMove::diagonal_flow(&p.named("H").unwrap(), Rat::from_integer(2.into())).unwrap();
        let ep = p.named("e+").unwrap();
        assert_eq!(m.apply(&ep).unwrap(), ep.scale(&Scalar::from_int(2)));
    }
}
