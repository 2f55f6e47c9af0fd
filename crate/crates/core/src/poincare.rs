//! Inhomogeneous orthogonal algebras `V ⋊ o(p,q)` and their distinguished
//! elements: the generators Ω_{jk}, the invariant Ω, b_x, F₀/F₁, the Hodge
//! star (p+q = 4), the p+q = 3 elements, and the named sl(2,ℂ) basis of the
//! Lorentz algebra.
//!
//! Storage basis: `e0 … e{n-1}` for `V`, followed by `Ojk` (j < k) for the
//! generators Ω_{jk}(e_m) = g_{km} e_j − g_{jm} e_k.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{canonical_sign, contract, Form, MultiVector};
use crate::lie::{action_matrix, semidirect_product, LieAlgebra, LinearMap, Metric};
use crate::linalg::{inverse, Rat};
use crate::scalar::Scalar;

/// `V ⋊ o(p,q)` with its metric and label bookkeeping.
#[derive(Clone, Debug)]
pub struct InhomogeneousAlgebra {
    alg: Arc<LieAlgebra>,
    metric: Metric,
    n: usize,
    omega_index: BTreeMap<(usize, usize), usize>,
}

/// Labels of the light-cone / sl(2,ℂ) basis used for (1,3) reports.
pub const LIGHT_CONE_LABELS: [&str; 10] =
    ["e+", "e-", "e1", "e2", "H", "JH", "X+", "JX+", "X-", "JX-"];

/// Builds `V ⋊ o(p,q)` with `g = diag(+1×p, −1×q)`.
pub fn make_inhomogeneous(p: usize, q: usize) -> Result<InhomogeneousAlgebra> {
    let n = p + q;
    if n < 2 {
        return Err(Error::BadSignature(p, q));
    }
    let metric = Metric::diagonal(p, q);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect();
    let gen = |j: usize, k: usize| -> Vec<Vec<Rat>> {
        let mut m = vec![vec![Rat::zero(); n]; n];
        // Ω_{jk} e_m = g_{km} e_j − g_{jm} e_k (diagonal metric)
        m[j][k] += metric.g(k, k);
        m[k][j] -= metric.g(j, j);
        m
    };
    let mats: Vec<Vec<Vec<Rat>>> = pairs.iter().map(|&(j, k)| gen(j, k)).collect();
    // Decode a matrix in the Ω basis from its (j,k) entries, j < k.
    let decode = |m: &[Vec<Rat>]| -> Vec<(usize, Scalar)> {
        pairs
            .iter()
            .enumerate()
            .filter_map(|(a, &(j, k))| {
                let c = &m[j][k] / metric.g(k, k);
                (!c.is_zero()).then(|| (a, Scalar::from_rational(c)))
            })
            .collect()
    };
    let mut brackets = Vec::new();
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            let ab = crate::linalg::mat_mul(&mats[a], &mats[b]);
            let ba = crate::linalg::mat_mul(&mats[b], &mats[a]);
            let comm: Vec<Vec<Rat>> = ab
                .iter()
                .zip(&ba)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x - y).collect())
                .collect();
            let coeffs = decode(&comm);
            if !coeffs.is_empty() {
                brackets.push((a, b, coeffs));
            }
        }
    }
    let h_labels: Vec<String> = pairs.iter().map(|(j, k)| format!("O{j}{k}")).collect();
    let h = LieAlgebra::from_brackets(h_labels, &brackets, None)?;
    let rep: Vec<LinearMap> = mats.iter().map(|m| LinearMap::from_rational_rows(m)).collect();
    let v_labels = (0..n).map(|j| format!("e{j}")).collect();
    let alg = semidirect_product(&rep, &h, v_labels)?;
    let omega_index = pairs
        .iter()
        .enumerate()
        .map(|(a, &jk)| (jk, n + a))
        .collect();
    Ok(InhomogeneousAlgebra {
        alg: Arc::new(alg),
        metric,
        n,
        omega_index,
    })
}

/// The Poincaré algebra, `V ⋊ o(1,3)`.
pub fn poincare() -> InhomogeneousAlgebra {
    make_inhomogeneous(1, 3).expect("(1,3) is a valid signature")
}

fn sc(n: i64) -> Scalar {
    Scalar::from_int(n)
}

impl InhomogeneousAlgebra {
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn dim_v(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> (usize, usize) {
        self.metric.signature()
    }

    pub fn is_poincare(&self) -> bool {
        self.signature() == (1, 3)
    }

    pub fn e(&self, j: usize) -> MultiVector {
        MultiVector::basis(&self.alg, j)
    }

    /// Ω_{jk} as an element of h (antisymmetric in j,k).
    pub fn omega_gen(&self, j: usize, k: usize) -> MultiVector {
        match j.cmp(&k) {
            std::cmp::Ordering::Equal => MultiVector::zero(&self.alg, 1),
            std::cmp::Ordering::Less => MultiVector::basis(&self.alg, self.omega_index[&(j, k)]),
            std::cmp::Ordering::Greater => {
                -MultiVector::basis(&self.alg, self.omega_index[&(k, j)])
            }
        }
    }

    fn v_coords(&self, x: &MultiVector) -> Result<Vec<Scalar>> {
        if x.degree() != 1 {
            return Err(Error::NotTranslation);
        }
        let c = x.coords();
        if c[self.n..].iter().any(|s| !s.is_zero()) {
            return Err(Error::NotTranslation);
        }
        Ok(c[..self.n].to_vec())
    }

    /// Ω_{x,y} = Σ xʲ yᵏ Ω_{jk}.
    pub fn omega_xy(&self, x: &MultiVector, y: &MultiVector) -> Result<MultiVector> {
        let (xc, yc) = (self.v_coords(x)?, self.v_coords(y)?);
        let mut out = MultiVector::zero(&self.alg, 1);
        for j in 0..self.n {
            for k in 0..self.n {
                let c = &xc[j] * &yc[k];
                if !c.is_zero() {
                    out = &out + &self.omega_gen(j, k).scale(&c);
                }
            }
        }
        Ok(out)
    }

    /// The isomorphism Λ²V → h, e_j∧e_k ↦ Ω_{jk}.
    pub fn omega_of_bivector(&self, w: &MultiVector) -> Result<MultiVector> {
        if w.degree() != 2 || !w.in_block(0) {
            return Err(Error::NotTranslation);
        }
        let mut out = MultiVector::zero(&self.alg, 1);
        for (t, c) in w.terms() {
            out = &out + &self.omega_gen(t[0], t[1]).scale(c);
        }
        Ok(out)
    }

    /// Covector g(x) = g_{jk} xʲ eᵏ (supported on V).
    pub fn lower(&self, x: &MultiVector) -> Result<Form> {
        let xc = self.v_coords(x)?;
        let mut coords = vec![Scalar::zero(); self.alg.dim()];
        for j in 0..self.n {
            coords[j] = xc[j].scale(self.metric.g(j, j));
        }
        Ok(Form::covector(&coords))
    }

    /// The canonical invariant Ω = g^{jl} g^{km} e_j∧e_k∧Ω_{l,m}.
    pub fn omega_invariant(&self) -> MultiVector {
        let mut out = MultiVector::zero(&self.alg, 3);
        for j in 0..self.n {
            for k in 0..self.n {
                if j == k {
                    continue;
                }
                let c = Scalar::from_rational(self.metric.inv(j, j) * self.metric.inv(k, k));
                let w = self
                    .e(j)
                    .wedge(&self.e(k))
                    .and_then(|w| w.wedge(&self.omega_gen(j, k)))
                    .expect("degree 3");
                out = &out + &w.scale(&c);
            }
        }
        out
    }

    /// b_x = g^{jk} e_j ∧ Ω_{x,e_k}.
    pub fn b_x(&self, x: &MultiVector) -> Result<MultiVector> {
        self.v_coords(x)?;
        let mut out = MultiVector::zero(&self.alg, 2);
        for j in 0..self.n {
            let c = Scalar::from_rational(self.metric.inv(j, j).clone());
            let w = self.e(j).wedge(&self.omega_xy(x, &self.e(j))?)?;
            out = &out + &w.scale(&c);
        }
        Ok(out)
    }

    /// ½ g(x)⌟Ω — the second expression for b_x.
    pub fn b_x_by_contraction(&self, x: &MultiVector) -> Result<MultiVector> {
        let gx = self.lower(x)?;
        Ok(contract(&gx, &self.omega_invariant())?.scale(&Scalar::from_ratio(1, 2)))
    }

    /// F₀(x) = b_x, viewed as an element of V⊗h ≅ V∧h.
    pub fn f0(&self, x: &MultiVector) -> Result<MultiVector> {
        self.b_x(x)
    }

    /// `(α₁∧…∧α_m)⌟Vol` for covectors on V, with Vol = e₀∧…∧e_{n−1}.
    pub fn vol_contract(&self, covectors: &[Vec<Scalar>]) -> Result<MultiVector> {
        let m = covectors.len();
        if m == 0 || m > self.n || self.n - m > 3 {
            return Err(Error::UnsupportedDegree(self.n.saturating_sub(m)));
        }
        let mut cur: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        cur.insert((0..self.n).collect(), Scalar::one());
        for a in covectors {
            let mut next: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
            for (t, c) in &cur {
                for p in 0..t.len() {
                    let ac = &a[t[p]];
                    if ac.is_zero() {
                        continue;
                    }
                    let mut rest = t.clone();
                    rest.remove(p);
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    *next.entry(rest).or_default() += &(c * ac * sc(sign));
                }
            }
            next.retain(|_, v| !v.is_zero());
            cur = next;
        }
        MultiVector::from_terms(&self.alg, self.n - m, cur)
    }

    fn lower_coords(&self, x: &MultiVector) -> Result<Vec<Scalar>> {
        Ok(self.lower(x)?.coords()[..self.n].to_vec())
    }

    /// Hodge star on h (p+q = 4): *Ω_{x,z} = Ω((g(x)∧g(z))⌟Vol).
    pub fn hodge_star(&self, x: &MultiVector) -> Result<MultiVector> {
        if self.n != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                got: self.n,
            });
        }
        let c = x.coords();
        if x.degree() != 1 || c[..self.n].iter().any(|s| !s.is_zero()) {
            return Err(Error::UnsupportedModule("hodge_star expects an element of h".into()));
        }
        let mut out = MultiVector::zero(&self.alg, 1);
        for (&(j, k), &idx) in &self.omega_index {
            if c[idx].is_zero() {
                continue;
            }
            let w = self.vol_contract(&[
                self.lower_coords(&self.e(j))?,
                self.lower_coords(&self.e(k))?,
            ])?;
            out = &out + &self.omega_of_bivector(&w)?.scale(&c[idx]);
        }
        Ok(out)
    }

    /// Applies `f: h → h` to the h-factor of an element of V∧h.
    fn map_h_factor<F>(&self, b: &MultiVector, f: F) -> Result<MultiVector>
    where
        F: Fn(&MultiVector) -> Result<MultiVector>,
    {
        if b.degree() != 2 || !b.in_block(1) {
            return Err(Error::NotMixedBlock);
        }
        let mut out = MultiVector::zero(&self.alg, 2);
        for (t, c) in b.terms() {
            // V indices precede h indices, so t = [v, h].
            let img = f(&MultiVector::basis(&self.alg, t[1]))?;
            out = &out + &self.e(t[0]).wedge(&img)?.scale(c);
        }
        Ok(out)
    }

    /// F₁ = (id ⊗ *) ∘ F₀ (p+q = 4).
    pub fn f1(&self, x: &MultiVector) -> Result<MultiVector> {
        let b = self.f0(x)?;
        self.map_h_factor(&b, |y| self.hodge_star(y))
    }

    /// Vector product x×y×z = (g(x)∧g(y)∧g(z))⌟Vol (p+q = 4).
    pub fn triple_product(
        &self,
        x: &MultiVector,
        y: &MultiVector,
        z: &MultiVector,
    ) -> Result<MultiVector> {
        if self.n != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                got: self.n,
            });
        }
        self.vol_contract(&[
            self.lower_coords(x)?,
            self.lower_coords(y)?,
            self.lower_coords(z)?,
        ])
    }

    /// `true` if `f: V → Λᵏg` commutes with the action of every basis element of h.
    pub fn is_h_intertwiner<F>(&self, f: F) -> Result<bool>
    where
        F: Fn(&MultiVector) -> Result<MultiVector>,
    {
        let gr = self.alg.grading().expect("inhomogeneous algebras are graded");
        for &xi in gr.h() {
            let x = MultiVector::basis(&self.alg, xi);
            for j in 0..self.n {
                let v = self.e(j);
                if f(&x.act(&v))? != x.act(&f(&v)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The elements used in the p+q = 3 case.
    pub fn special3(&self) -> Result<Special3> {
        if self.n != 3 {
            return Err(Error::WrongDimension {
                expected: 3,
                got: self.n,
            });
        }
        // s = Σ_j Σ_{k<l} ε^{jkl} e_j ∧ Ω_{kl}
        let mut s = MultiVector::zero(&self.alg, 2);
        for j in 0..3 {
            for k in 0..3 {
                for l in k + 1..3 {
                    let mut t = [j, k, l];
                    if let Some(sign) = canonical_sign(&mut t) {
                        let w = self.e(j).wedge(&self.omega_gen(k, l))?;
                        s = &s + &w.scale(&sc(sign));
                    }
                }
            }
        }
        let t_images: Vec<MultiVector> = (0..3)
            .map(|j| self.vol_contract(&[self.lower_coords(&self.e(j))?]))
            .collect::<Result<_>>()?;
        let third_images: Vec<MultiVector> = t_images
            .iter()
            .map(|tx| {
                let mut out = MultiVector::zero(&self.alg, 2);
                for (tt, c) in tx.terms() {
                    let oa = self.omega_of_bivector(&t_images[tt[0]])?;
                    let ob = self.omega_of_bivector(&t_images[tt[1]])?;
                    out = &out + &oa.wedge(&ob)?.scale(c);
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(Special3 {
            s,
            t_images,
            third_images,
        })
    }

    /// Named elements: basis labels, light-cone and sl(2,ℂ) generators for
    /// (1,3), `Omega`, and `b_<vector>` for any named vector.
    pub fn named(&self, label: &str) -> Result<MultiVector> {
        if let Some(i) = self.alg.index_of(label) {
            return Ok(MultiVector::basis(&self.alg, i));
        }
        if label == "Omega" {
            return Ok(self.omega_invariant());
        }
        if let Some(rest) = label.strip_prefix("b_") {
            return self.b_x(&self.named(rest)?);
        }
        if self.is_poincare() {
            let o = |j, k| self.omega_gen(j, k);
            let v = match label {
                "e+" => &self.e(0) + &self.e(3),
                "e-" => &self.e(0) - &self.e(3),
                "H" | "L3" => o(3, 0),
                "JH" => o(2, 1),
                "X+" => &o(1, 0) + &o(1, 3),
                "JX+" => &o(0, 2) + &o(3, 2),
                "X-" => &o(1, 0) + &o(3, 1),
                "JX-" => &o(2, 0) + &o(3, 2),
                "L1" => o(1, 0),
                "L2" => o(2, 0),
                "M1" => o(2, 3),
                "M2" => o(3, 1),
                "M3" => o(1, 2),
                _ => return Err(Error::UnknownLabel(label.to_string())),
            };
            return Ok(v);
        }
        Err(Error::UnknownLabel(label.to_string()))
    }

    /// Basis (e+, e−, e1, e2, H, JH, X+, JX+, X−, JX−) of the Poincaré algebra.
    pub fn light_cone_basis(&self) -> Result<Vec<MultiVector>> {
        if !self.is_poincare() {
            return Err(Error::WrongDimension {
                expected: 4,
                got: self.n,
            });
        }
        LIGHT_CONE_LABELS.iter().map(|l| self.named(l)).collect()
    }

    /// Coefficients of `w` in the wedge powers of the light-cone basis,
    /// keyed by index tuples into [`LIGHT_CONE_LABELS`].
    pub fn light_cone_terms(&self, w: &MultiVector) -> Result<BTreeMap<Vec<usize>, Scalar>> {
        let basis = self.light_cone_basis()?;
        let dim = self.alg.dim();
        // P has the new basis vectors as columns; Q = P⁻¹ expresses old in new.
        let p: Vec<Vec<Rat>> = (0..dim)
            .map(|i| {
                basis
                    .iter()
                    .map(|b| b.coeff(&[i]).to_rational().expect("rational basis"))
                    .collect()
            })
            .collect();
        let q = inverse(&p).expect("light-cone basis is a basis");
        let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (t, c) in w.terms() {
            let mut partial: Vec<(Vec<usize>, Rat)> = vec![(Vec::new(), Rat::one())];
            for &i in t {
                let mut next = Vec::new();
                for (pt, pc) in &partial {
                    for (a, qrow) in q.iter().enumerate() {
                        let f = &qrow[i];
                        if f.is_zero() {
                            continue;
                        }
                        let mut nt = pt.clone();
                        nt.push(a);
                        next.push((nt, pc * f));
                    }
                }
                partial = next;
            }
            for (mut nt, f) in partial {
                if let Some(sign) = canonical_sign(&mut nt) {
                    let e = out.entry(nt).or_default();
                    *e += &c.scale(&(f * Rat::from_integer(sign.into())));
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Light-cone rendering for (1,3), storage labels otherwise.
    pub fn display(&self, w: &MultiVector) -> String {
        match self.light_cone_terms(w) {
            Ok(terms) => {
                let labels: Vec<String> = LIGHT_CONE_LABELS.iter().map(|s| s.to_string()).collect();
                crate::exterior::format_terms(&terms, &labels)
            }
            Err(_) => w.to_string(),
        }
    }

    /// Action matrix of the named element on V (degree-1 block).
    pub fn action_on_v(&self, x: &MultiVector) -> Result<Vec<Vec<Rat>>> {
        let m = action_matrix(x, 1)?;
        let rows = m
            .to_rational_rows()
            .ok_or(Error::Parameterized)?;
        Ok(rows[..self.n].iter().map(|r| r[..self.n].to_vec()).collect())
    }
}

/// Elements of the p+q = 3 case.
#[derive(Clone, Debug)]
pub struct Special3 {
    /// s = ε^{jkl} e_j ∧ Ω_{kl} (k < l).
    pub s: MultiVector,
    /// T(e_j) = g(e_j)⌟Vol ∈ Λ²V.
    pub t_images: Vec<MultiVector>,
    /// (Ω⊗Ω)(T⊗T)T(e_j) ∈ Λ²h.
    pub third_images: Vec<MultiVector>,
}

impl Special3 {
    pub fn t(&self, x: &MultiVector) -> MultiVector {
        apply_on_v(&self.t_images, x)
    }

    pub fn third(&self, x: &MultiVector) -> MultiVector {
        apply_on_v(&self.third_images, x)
    }
}

fn apply_on_v(images: &[MultiVector], x: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(x.algebra(), images[0].degree());
    for (t, c) in x.terms() {
        if t[0] < images.len() {
            out = &out + &images[t[0]].scale(c);
        }
    }
    out
}

/// Exact 2×2 complex matrices over ℚ(i), for the Hermitian-matrix model of
/// the Lorentz action: X(v) = Xv + vX†.
pub mod hermitian {
    use super::*;

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct C(pub Rat, pub Rat);

    impl C {
        fn r(x: i64) -> C {
            C(Rat::from_integer(x.into()), Rat::zero())
        }
        fn i(x: i64) -> C {
            C(Rat::zero(), Rat::from_integer(x.into()))
        }
        fn add(&self, o: &C) -> C {
            C(&self.0 + &o.0, &self.1 + &o.1)
        }
        fn mul(&self, o: &C) -> C {
            C(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
        }
        fn conj(&self) -> C {
            C(self.0.clone(), -self.1.clone())
        }
    }

    pub type M2 = [[C; 2]; 2];

    fn mm(a: &M2, b: &M2) -> M2 {
        let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    fn adj(a: &M2) -> M2 {
        [
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ]
    }

    fn madd(a: &M2, b: &M2) -> M2 {
        [
            [a[0][0].add(&b[0][0]), a[0][1].add(&b[0][1])],
            [a[1][0].add(&b[1][0]), a[1][1].add(&b[1][1])],
        ]
    }

    fn times_i(a: &M2) -> M2 {
        let i = C::i(1);
        [
            [i.mul(&a[0][0]), i.mul(&a[0][1])],
            [i.mul(&a[1][0]), i.mul(&a[1][1])],
        ]
    }

    /// e₀ = 1, e₁..e₃ = Pauli matrices.
    pub fn pauli(j: usize) -> M2 {
        let z = || C::r(0);
        match j {
            0 => [[C::r(1), z()], [z(), C::r(1)]],
            1 => [[z(), C::r(1)], [C::r(1), z()]],
            2 => [[z(), C::i(-1)], [C::i(1), z()]],
            _ => [[C::r(1), z()], [z(), C::r(-1)]],
        }
    }

    /// Coordinates of a Hermitian matrix in the Pauli basis.
    pub fn decode(m: &M2) -> Option<[Rat; 4]> {
        let half = Rat::new(1.into(), 2.into());
        if !m[0][0].1.is_zero() || !m[1][1].1.is_zero() || m[0][1] != m[1][0].conj() {
            return None;
        }
        Some([
            (&m[0][0].0 + &m[1][1].0) * &half,
            m[0][1].0.clone(),
            -m[0][1].1.clone(),
            (&m[0][0].0 - &m[1][1].0) * &half,
        ])
    }

    /// The sl(2,ℂ) element with the given name as a complex matrix.
    pub fn sl2c(name: &str) -> Option<M2> {
        let z = || C::r(0);
        let half = C(Rat::new(1.into(), 2.into()), Rat::zero());
        let base = |n: &str| -> Option<M2> {
            Some(match n {
                "H" => [[half.clone(), z()], [z(), half.mul(&C::r(-1))]],
                "X+" => [[z(), C::r(1)], [z(), z()]],
                "X-" => [[z(), z()], [C::r(1), z()]],
                _ => return None,
            })
        };
        match name.strip_prefix('J') {
            Some(rest) => base(rest).map(|m| times_i(&m)),
            None => base(name),
        }
    }

    /// Matrix (rows = output coordinates) of v ↦ Xv + vX† on V.
    pub fn action_matrix(x: &M2) -> Option<Vec<Vec<Rat>>> {
        let mut cols = Vec::new();
        for j in 0..4 {
            let v = pauli(j);
            cols.push(decode(&madd(&mm(x, &v), &mm(&v, &adj(x))))?);
        }
        Some(
            (0..4)
                .map(|i| (0..4).map(|j| cols[j][i].clone()).collect())
                .collect(),
        )
    }
}
