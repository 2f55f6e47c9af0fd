//! Schouten bracket on Λ²g, coboundaries, the dual bracket `[·,·]_r`, and
//! the generalized classical Yang–Baxter verdict.

use std::sync::Arc;

use num::BigRational;

use crate::error::{Error, Result};
use crate::exterior::{canonical_sign, contract, pairing, Form, MultiVector};
use crate::lie::{LieAlgebra, LinearMap};
use crate::linalg::{Rat, Subspace};
use crate::scalar::Scalar;

/// Global sign of the bracket relative to the four-term decomposable formula.
///
/// Fixed so that `[b_x, b_x] = −g(x,x) Ω` for the canonical invariant `Ω`,
/// which is also the sign for which the contraction identity checked by
/// [`formula_check`] holds.
pub const SCHOUTEN_SIGN: i64 = 1;

fn push_term(
    alg: &Arc<LieAlgebra>,
    out: &mut Vec<(Vec<usize>, Scalar)>,
    coef: &Scalar,
    sign: i64,
    a: usize,
    b: usize,
    rest: [usize; 2],
) {
    for (k, v) in alg.bracket_basis(a, b) {
        let mut t = vec![*k, rest[0], rest[1]];
        if let Some(s) = canonical_sign(&mut t) {
            let f = v * BigRational::from_integer((s * sign * SCHOUTEN_SIGN).into());
            out.push((t, coef * &Scalar::from_rational(f)));
        }
    }
}

/// Schouten bracket of two bivectors:
/// `[x∧y, u∧v] = [x,u]∧y∧v − [x,v]∧y∧u − [y,u]∧x∧v + [y,v]∧x∧u`.
pub fn schouten_bracket(r: &MultiVector, s: &MultiVector) -> Result<MultiVector> {
    r.check_same(s)?;
    if r.degree() != 2 || s.degree() != 2 {
        return Err(Error::UnsupportedDegree(if r.degree() != 2 {
            r.degree()
        } else {
            s.degree()
        }));
    }
    let alg = r.algebra();
    let mut acc = Vec::new();
    for (t1, c1) in r.terms() {
        let (x, y) = (t1[0], t1[1]);
        for (t2, c2) in s.terms() {
            let (u, v) = (t2[0], t2[1]);
            let c = c1 * c2;
            push_term(alg, &mut acc, &c, 1, x, u, [y, v]);
            push_term(alg, &mut acc, &c, -1, x, v, [y, u]);
            push_term(alg, &mut acc, &c, -1, y, u, [x, v]);
            push_term(alg, &mut acc, &c, 1, y, v, [x, u]);
        }
    }
    MultiVector::from_terms(alg, 3, acc)
}

/// A linear map g → Λᵏg stored as a matrix (rows: Λᵏ basis, columns: g basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    alg: Arc<LieAlgebra>,
    degree: usize,
    map: LinearMap,
}

impl Cocycle {
    /// Wraps the images of the basis vectors of g.
    pub fn from_images(alg: &Arc<LieAlgebra>, images: &[MultiVector]) -> Result<Cocycle> {
        if images.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: images.len(),
            });
        }
        let degree = images.first().map_or(2, MultiVector::degree);
        let rows = crate::exterior::wedge_dim(alg.dim(), degree);
        let mut map = LinearMap::zero(rows, alg.dim());
        for (j, img) in images.iter().enumerate() {
            for (t, c) in img.terms() {
                map.set(img.index_of(t), j, c.clone());
            }
        }
        Ok(Cocycle {
            alg: alg.clone(),
            degree,
            map,
        })
    }

    pub fn matrix(&self) -> &LinearMap {
        &self.map
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Image of the `j`-th basis vector.
    pub fn image(&self, j: usize) -> MultiVector {
        let basis = crate::exterior::wedge_basis(self.alg.dim(), self.degree);
        let terms = self
            .map
            .column(j)
            .iter()
            .map(|(i, c)| (basis[*i].clone(), c.clone()));
        MultiVector::from_terms(&self.alg, self.degree, terms).expect("valid basis tuples")
    }

    /// Image of an arbitrary vector.
    pub fn apply(&self, x: &MultiVector) -> MultiVector {
        let mut out = MultiVector::zero(&self.alg, self.degree);
        for (t, c) in x.terms() {
            out = &out + &self.image(t[0]).scale(c);
        }
        out
    }
}

/// The coboundary `∂r : X ↦ X·r`.
pub fn coboundary(r: &MultiVector) -> Cocycle {
    let alg = r.algebra();
    let images: Vec<MultiVector> = (0..alg.dim())
        .map(|i| MultiVector::basis(alg, i).act(r))
        .collect();
    Cocycle::from_images(alg, &images).expect("one image per basis vector")
}

/// Outcome of [`is_cocycle`]: the basis pairs where the identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub failing_pairs: Vec<(usize, usize)>,
}

impl CocycleReport {
    pub fn is_cocycle(&self) -> bool {
        self.failing_pairs.is_empty()
    }
}

/// Residual of `f([X,Y]) = X f(Y) − Y f(X)` at a pair of basis vectors.
pub fn cocycle_residual(f: &Cocycle, i: usize, j: usize) -> MultiVector {
    let alg = &f.alg;
    let xi = MultiVector::basis(alg, i);
    let xj = MultiVector::basis(alg, j);
    let lhs = f.apply(&xi.act(&xj));
    let rhs = &xi.act(&f.image(j)) - &xj.act(&f.image(i));
    &lhs - &rhs
}

pub fn is_cocycle(f: &Cocycle) -> CocycleReport {
    let n = f.alg.dim();
    let mut failing_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !cocycle_residual(f, i, j).is_zero() {
                failing_pairs.push((i, j));
            }
        }
    }
    CocycleReport { failing_pairs }
}

/// `r(α) = α⌟r`.
pub fn r_of(r: &MultiVector, alpha: &Form) -> Result<MultiVector> {
    contract(alpha, r)
}

/// Coadjoint action: `⟨X·β, Y⟩ = −⟨β, [X,Y]⟩`.
pub fn coadjoint(x: &MultiVector, beta: &Form) -> Form {
    let alg = x.algebra();
    let n = alg.dim();
    let b = beta.coords();
    let mut out = vec![Scalar::zero(); n];
    for (tx, cx) in x.terms() {
        let i = tx[0];
        for (k, o) in out.iter_mut().enumerate() {
            for (m, c) in alg.bracket_basis(i, k) {
                if !b[*m].is_zero() {
                    *o -= &(cx * &b[*m] * Scalar::from_rational(c.clone()));
                }
            }
        }
    }
    Form::covector(&out)
}

/// `[α,β]_r = r(α)·β − r(β)·α`.
pub fn dual_bracket(r: &MultiVector, alpha: &Form, beta: &Form) -> Result<Form> {
    let ra = r_of(r, alpha)?;
    let rb = r_of(r, beta)?;
    Ok(coadjoint(&ra, beta).sub(&coadjoint(&rb, alpha)))
}

/// `½⟨[r,r], α∧β∧γ⟩ − ⟨[r(α),r(β)] − r([α,β]_r), γ⟩`; identically zero.
pub fn formula_check(r: &MultiVector, alpha: &Form, beta: &Form, gamma: &Form) -> Result<Scalar> {
    let rr = schouten_bracket(r, r)?;
    let abc = alpha.wedge(beta)?.wedge(gamma)?;
    let lhs = pairing(&rr, &abc)?.scale(&BigRational::new(1.into(), 2.into()));
    let ra = r_of(r, alpha)?;
    let rb = r_of(r, beta)?;
    let inner = &ra.act(&rb) - &r_of(r, &dual_bracket(r, alpha, beta)?)?;
    let rhs = gamma.pair_vector(&inner);
    Ok(lhs - rhs)
}

/// Verdict of the generalized classical Yang–Baxter equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GcybeVerdict {
    /// `[r,r] = Σ coords[i] · basis[i]`.
    InSpan {
        bracket: MultiVector,
        coords: Vec<Scalar>,
    },
    /// `[r,r]` is not in the span; `residual` is its component off the span.
    Fails {
        bracket: MultiVector,
        residual: MultiVector,
    },
}

impl GcybeVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, GcybeVerdict::InSpan { .. })
    }

    pub fn bracket(&self) -> &MultiVector {
        match self {
            GcybeVerdict::InSpan { bracket, .. } | GcybeVerdict::Fails { bracket, .. } => bracket,
        }
    }
}

/// Decides whether `[r,r]` lies in the span of `invariant_basis` (rational,
/// linearly independent trivectors). Coordinates may be polynomials when
/// `r` carries parameters.
pub fn gcybe_check(r: &MultiVector, invariant_basis: &[MultiVector]) -> Result<GcybeVerdict> {
    let rr = schouten_bracket(r, r)?;
    let (coords, residual) = span_decompose(&rr, invariant_basis)?;
    Ok(if residual.is_zero() {
        GcybeVerdict::InSpan {
            bracket: rr,
            coords,
        }
    } else {
        GcybeVerdict::Fails {
            bracket: rr,
            residual,
        }
    })
}

/// Writes `w = Σ d_j basis_j + residual`, with `residual` vanishing exactly
/// when `w` is in the span. The basis must be rational and independent.
pub fn span_decompose(
    w: &MultiVector,
    basis: &[MultiVector],
) -> Result<(Vec<Scalar>, MultiVector)> {
    for b in basis {
        w.check_same(b)?;
        if b.degree() != w.degree() {
            return Err(Error::UnsupportedDegree(b.degree()));
        }
        if !b.is_rational() {
            return Err(Error::Parameterized);
        }
    }
    let alg = w.algebra();
    let dim = crate::exterior::wedge_dim(alg.dim(), w.degree());
    let rows: Vec<Vec<Rat>> = basis
        .iter()
        .map(|b| {
            b.coords()
                .iter()
                .map(|c| c.to_rational().expect("checked rational"))
                .collect()
        })
        .collect();
    let sub = Subspace::span(dim, rows.iter().cloned());
    if sub.dim() != basis.len() {
        return Err(Error::UnsupportedModule(
            "invariant basis is linearly dependent".into(),
        ));
    }
    // Coordinates of w in the echelon basis E, then residual.
    let mut rem = w.coords();
    let mut ech = Vec::with_capacity(sub.dim());
    for (e, &p) in sub.basis().iter().zip(sub.pivots()) {
        let c = rem[p].clone();
        if !c.is_zero() {
            for (ri, ei) in rem.iter_mut().zip(e) {
                if !num::Zero::is_zero(ei) {
                    *ri -= &c.scale(ei);
                }
            }
        }
        ech.push(c);
    }
    let residual = MultiVector::from_coords(alg, w.degree(), &rem);
    // basis_j = Σ_i A[j][i] E_i  ⇒  ech = Aᵀ d.
    let a: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| sub.coordinates(r).expect("basis vector lies in its span"))
        .collect();
    let at: Vec<Vec<Rat>> = (0..a.len())
        .map(|i| (0..a.len()).map(|j| a[j][i].clone()).collect())
        .collect();
    let inv = crate::linalg::inverse(&at).unwrap_or_default();
    let coords = (0..basis.len())
        .map(|j| {
            let mut s = Scalar::zero();
            for (i, e) in ech.iter().enumerate() {
                s += &e.scale(&inv[j][i]);
            }
            s
        })
        .collect();
    Ok((coords, residual))
}
