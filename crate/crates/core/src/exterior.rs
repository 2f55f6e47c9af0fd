//! Multivectors in Λᵏg (k ≤ 3), dual forms, contraction and graded blocks.
//!
//! Basis elements of Λᵏg are strictly increasing index tuples, ordered
//! lexicographically. Every reordering goes through [`canonical_sign`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::scalar::Scalar;

pub const MAX_DEGREE: usize = 3;

/// Sorts `t` in place; returns the permutation sign, or `None` on a repeat.
pub fn canonical_sign(t: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// All strictly increasing `k`-tuples from `0..n`, in lexicographic order.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binom(n, k));
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Position of a strictly increasing tuple in [`wedge_basis`]`(n, t.len())`.
pub fn wedge_index(n: usize, t: &[usize]) -> usize {
    let k = t.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &c) in t.iter().enumerate() {
        for j in prev..c {
            rank += binom(n - 1 - j, k - 1 - i);
        }
        prev = c + 1;
    }
    rank
}

pub fn wedge_dim(n: usize, k: usize) -> usize {
    binom(n, k)
}

/// Element of Λᵏg with polynomial coefficients.
#[derive(Clone, Debug)]
pub struct MultiVector {
    alg: Arc<LieAlgebra>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl PartialEq for MultiVector {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.terms == other.terms
            && (Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg)
    }
}

impl Eq for MultiVector {}

impl MultiVector {
    pub fn zero(alg: &Arc<LieAlgebra>, degree: usize) -> MultiVector {
        MultiVector {
            alg: alg.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(alg: &Arc<LieAlgebra>, s: Scalar) -> MultiVector {
        let mut m = MultiVector::zero(alg, 0);
        m.add_term(Vec::new(), s);
        m
    }

    pub fn basis(alg: &Arc<LieAlgebra>, i: usize) -> MultiVector {
        MultiVector::basis_tuple(alg, &[i])
    }

    pub fn basis_tuple(alg: &Arc<LieAlgebra>, t: &[usize]) -> MultiVector {
        let mut m = MultiVector::zero(alg, t.len());
        let mut t = t.to_vec();
        if let Some(s) = canonical_sign(&mut t) {
            m.add_term(t, Scalar::from_int(s));
        }
        m
    }

    /// Builds from (possibly unsorted) index tuples; repeats vanish.
    pub fn from_terms<I>(alg: &Arc<LieAlgebra>, degree: usize, terms: I) -> Result<MultiVector>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        if degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        let mut m = MultiVector::zero(alg, degree);
        for (mut t, c) in terms {
            if t.len() != degree {
                return Err(Error::DimensionMismatch {
                    expected: degree,
                    got: t.len(),
                });
            }
            if let Some(&bad) = t.iter().find(|&&i| i >= alg.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: alg.dim(),
                    got: bad + 1,
                });
            }
            if let Some(s) = canonical_sign(&mut t) {
                m.add_term(t, c * Scalar::from_int(s));
            }
        }
        Ok(m)
    }

    /// Vector of degree 1 from its coordinates.
    pub fn from_vector(alg: &Arc<LieAlgebra>, coords: &[Scalar]) -> MultiVector {
        MultiVector::from_coords(alg, 1, coords)
    }

    /// Element from dense coordinates in the canonical basis of Λᵏg.
    pub fn from_coords(alg: &Arc<LieAlgebra>, degree: usize, coords: &[Scalar]) -> MultiVector {
        let basis = wedge_basis(alg.dim(), degree);
        assert_eq!(coords.len(), basis.len(), "coordinate length mismatch");
        let mut m = MultiVector::zero(alg, degree);
        for (t, c) in basis.into_iter().zip(coords) {
            m.add_term(t, c.clone());
        }
        m
    }

    /// Dense coordinates in the canonical basis of Λᵏg.
    pub fn coords(&self) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); wedge_dim(self.alg.dim(), self.degree)];
        for (t, c) in &self.terms {
            out[wedge_index(self.alg.dim(), t)] = c.clone();
        }
        out
    }

    pub fn index_of(&self, t: &[usize]) -> usize {
        wedge_index(self.alg.dim(), t)
    }

    fn add_term(&mut self, t: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, t: &[usize]) -> Scalar {
        let mut t = t.to_vec();
        match canonical_sign(&mut t) {
            Some(s) => self
                .terms
                .get(&t)
                .map(|c| c * Scalar::from_int(s))
                .unwrap_or_default(),
            None => Scalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check_same(&self, other: &MultiVector) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn scale(&self, s: &Scalar) -> MultiVector {
        let mut m = MultiVector::zero(&self.alg, self.degree);
        for (t, c) in &self.terms {
            m.add_term(t.clone(), c * s);
        }
        m
    }

    pub fn map_coeffs<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> MultiVector {
        let mut m = MultiVector::zero(&self.alg, self.degree);
        for (t, c) in &self.terms {
            m.add_term(t.clone(), f(c));
        }
        m
    }

    pub fn substitute_all(&self, values: &BTreeMap<String, Scalar>) -> MultiVector {
        self.map_coeffs(|c| c.substitute_all(values))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.values().flat_map(Scalar::variables).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Scalar::is_rational)
    }

    /// Exterior product `self ∧ other`.
    pub fn wedge(&self, other: &MultiVector) -> Result<MultiVector> {
        self.check_same(other)?;
        let d = self.degree + other.degree;
        if d > MAX_DEGREE {
            return Err(Error::DegreeOverflow(self.degree, other.degree));
        }
        let mut m = MultiVector::zero(&self.alg, d);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                let mut t: Vec<usize> = t1.iter().chain(t2.iter()).copied().collect();
                if let Some(s) = canonical_sign(&mut t) {
                    m.add_term(t, c1 * c2 * Scalar::from_int(s));
                }
            }
        }
        Ok(m)
    }

    /// Adjoint action of the vector `self` on `u`, extended as a derivation.
    pub fn act(&self, u: &MultiVector) -> MultiVector {
        assert_eq!(self.degree, 1, "acting element must be a vector");
        let mut m = MultiVector::zero(&self.alg, u.degree);
        for (tx, cx) in &self.terms {
            let i = tx[0];
            for (t, c) in &u.terms {
                let cc = cx * c;
                for p in 0..t.len() {
                    for (k, v) in self.alg.bracket_basis(i, t[p]) {
                        let mut nt = t.clone();
                        nt[p] = *k;
                        if let Some(s) = canonical_sign(&mut nt) {
                            let f = Scalar::from_rational(v.clone() * num::BigRational::from_integer(s.into()));
                            m.add_term(nt, &cc * &f);
                        }
                    }
                }
            }
        }
        m
    }

    /// Sub-sum of the terms with exactly `h_count` indices in `h`.
    pub fn block(&self, h_count: usize) -> Result<MultiVector> {
        let gr = self.alg.grading().ok_or(Error::NotGraded)?;
        let mut m = MultiVector::zero(&self.alg, self.degree);
        for (t, c) in &self.terms {
            if gr.h_count(t) == h_count {
                m.add_term(t.clone(), c.clone());
            }
        }
        Ok(m)
    }

    /// `true` iff every term has exactly `h_count` indices in `h`.
    pub fn in_block(&self, h_count: usize) -> bool {
        match self.alg.grading() {
            Some(gr) => self.terms.keys().all(|t| gr.h_count(t) == h_count),
            None => false,
        }
    }

    /// Decomposition r = a + b + c into Λ²V, V∧h and Λ²h.
    pub fn split2(&self) -> Result<GradedComponents2> {
        if self.degree != 2 {
            return Err(Error::UnsupportedDegree(self.degree));
        }
        Ok(GradedComponents2 {
            a: self.block(0)?,
            b: self.block(1)?,
            c: self.block(2)?,
        })
    }

    /// Decomposition into Λ³V, Λ²V∧h, V∧Λ²h and Λ³h.
    pub fn split3(&self) -> Result<GradedComponents3> {
        if self.degree != 3 {
            return Err(Error::UnsupportedDegree(self.degree));
        }
        Ok(GradedComponents3 {
            vvv: self.block(0)?,
            vvh: self.block(1)?,
            vhh: self.block(2)?,
            hhh: self.block(3)?,
        })
    }

    /// Human-readable form using the given basis labels.
    pub fn display_with(&self, labels: &[String]) -> String {
        format_terms(&self.terms, labels)
    }
}

/// Renders `Σ coeff · e_{t₁}^…^e_{t_k}` with the given labels.
pub fn format_terms(terms: &BTreeMap<Vec<usize>, Scalar>, labels: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (t, c)) in terms.iter().enumerate() {
        let name = if t.is_empty() {
            "1".to_string()
        } else {
            t.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join("^")
        };
        let cs = c.to_string();
        let (neg, body) = if c.num_terms() == 1 && cs.starts_with('-') {
            (true, cs[1..].to_string())
        } else {
            (false, cs)
        };
        let coef = if body == "1" && !t.is_empty() {
            String::new()
        } else if c.num_terms() > 1 {
            format!("({body})*")
        } else {
            format!("{body}*")
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&coef);
        out.push_str(&name);
    }
    out
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(self.alg.labels()))
    }
}

impl Add<&MultiVector> for &MultiVector {
    type Output = MultiVector;
    fn add(self, rhs: &MultiVector) -> MultiVector {
        assert_eq!(self.degree, rhs.degree, "degree mismatch in addition");
        let mut m = self.clone();
        for (t, c) in &rhs.terms {
            m.add_term(t.clone(), c.clone());
        }
        m
    }
}

impl Sub<&MultiVector> for &MultiVector {
    type Output = MultiVector;
    fn sub(self, rhs: &MultiVector) -> MultiVector {
        self + &(-rhs)
    }
}

impl Neg for &MultiVector {
    type Output = MultiVector;
    fn neg(self) -> MultiVector {
        self.map_coeffs(|c| -c)
    }
}

impl Add for MultiVector {
    type Output = MultiVector;
    fn add(self, rhs: MultiVector) -> MultiVector {
        &self + &rhs
    }
}

impl Sub for MultiVector {
    type Output = MultiVector;
    fn sub(self, rhs: MultiVector) -> MultiVector {
        &self - &rhs
    }
}

impl Neg for MultiVector {
    type Output = MultiVector;
    fn neg(self) -> MultiVector {
        -&self
    }
}

/// Blocks of a bivector: a ∈ Λ²V, b ∈ V∧h, c ∈ Λ²h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComponents2 {
    pub a: MultiVector,
    pub b: MultiVector,
    pub c: MultiVector,
}

impl GradedComponents2 {
    pub fn sum(&self) -> MultiVector {
        &(&self.a + &self.b) + &self.c
    }
}

/// Blocks of a trivector by the number of `h` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComponents3 {
    pub vvv: MultiVector,
    pub vvh: MultiVector,
    pub vhh: MultiVector,
    pub hhh: MultiVector,
}

impl GradedComponents3 {
    pub fn sum(&self) -> MultiVector {
        &(&(&self.vvv + &self.vvh) + &self.vhh) + &self.hhh
    }

    /// Blocks in order Λ³V, Λ²V∧h, V∧Λ²h, Λ³h.
    pub fn blocks(&self) -> [&MultiVector; 4] {
        [&self.vvv, &self.vvh, &self.vhh, &self.hhh]
    }

    pub const NAMES: [&'static str; 4] = ["L3V", "L2V^h", "V^L2h", "L3h"];
}

/// Element of Λᵏg* in the dual basis (eⁱ with ⟨eⁱ, e_j⟩ = δⁱⱼ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Form {
        Form {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn dual_basis(dim: usize, i: usize) -> Form {
        let mut f = Form::zero(dim, 1);
        f.terms.insert(vec![i], Scalar::one());
        f
    }

    pub fn covector(coords: &[Scalar]) -> Form {
        let mut f = Form::zero(coords.len(), 1);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                f.terms.insert(vec![i], c.clone());
            }
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coordinates of a covector.
    pub fn coords(&self) -> Vec<Scalar> {
        assert_eq!(self.degree, 1);
        let mut out = vec![Scalar::zero(); self.dim];
        for (t, c) in &self.terms {
            out[t[0]] = c.clone();
        }
        out
    }

    fn add_term(&mut self, t: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        let d = self.degree + other.degree;
        if d > MAX_DEGREE {
            return Err(Error::DegreeOverflow(self.degree, other.degree));
        }
        let mut f = Form::zero(self.dim, d);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                let mut t: Vec<usize> = t1.iter().chain(t2.iter()).copied().collect();
                if let Some(s) = canonical_sign(&mut t) {
                    f.add_term(t, c1 * c2 * Scalar::from_int(s));
                }
            }
        }
        Ok(f)
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut f = self.clone();
        for (t, c) in &other.terms {
            f.add_term(t.clone(), c.clone());
        }
        f
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut f = Form::zero(self.dim, self.degree);
        for (t, c) in &self.terms {
            f.add_term(t.clone(), c * s);
        }
        f
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Value of a covector on a vector.
    pub fn pair_vector(&self, x: &MultiVector) -> Scalar {
        assert!(self.degree == 1 && x.degree() == 1);
        let mut s = Scalar::zero();
        for (t, c) in &self.terms {
            s += &(c * &x.coeff(t));
        }
        s
    }
}

/// Contraction by a single dual basis element: eⁱ⌟(e_{j₁}∧…∧e_{j_k}).
fn contract_basis(i: usize, alg: &Arc<LieAlgebra>, u: &MultiVector) -> MultiVector {
    let mut m = MultiVector::zero(alg, u.degree - 1);
    for (t, c) in &u.terms {
        if let Some(p) = t.iter().position(|&j| j == i) {
            let mut rest = t.clone();
            rest.remove(p);
            let sign = if p % 2 == 0 { 1 } else { -1 };
            m.add_term(rest, c * &Scalar::from_int(sign));
        }
    }
    m
}

/// Left contraction `ξ⌟u`. For a covector this is the signed derivation
/// `α⌟(x∧y) = ⟨α,x⟩y − ⟨α,y⟩x`; for `ξ = α₁∧…∧α_m` it is
/// `α_m⌟(…(α₁⌟u))`.
pub fn contract(xi: &Form, u: &MultiVector) -> Result<MultiVector> {
    if xi.degree > u.degree {
        return Err(Error::DegreeUnderflow(xi.degree, u.degree));
    }
    if xi.dim != u.alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.alg.dim(),
            got: xi.dim,
        });
    }
    let mut out = MultiVector::zero(&u.alg, u.degree - xi.degree);
    for (t, c) in &xi.terms {
        let mut cur = u.clone();
        for &i in t {
            cur = contract_basis(i, &u.alg, &cur);
        }
        out = &out + &cur.scale(c);
    }
    Ok(out)
}

/// Full pairing ⟨u, ξ⟩ for equal degrees, with the contraction convention above.
pub fn pairing(u: &MultiVector, xi: &Form) -> Result<Scalar> {
    if xi.degree != u.degree {
        return Err(Error::DimensionMismatch {
            expected: u.degree,
            got: xi.degree,
        });
    }
    Ok(contract(xi, u)?.coeff(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::abelian(n))
    }

    #[test]
    fn wedge_basis_ranking() {
        for (n, k) in [(10, 2), (10, 3), (5, 1), (6, 3)] {
            let b = wedge_basis(n, k);
            assert_eq!(b.len(), binom(n, k));
            for (i, t) in b.iter().enumerate() {
                assert_eq!(wedge_index(n, t), i);
            }
        }
        assert_eq!(wedge_dim(10, 2), 45);
        assert_eq!(wedge_dim(10, 3), 120);
    }

    #[test]
    fn wedge_is_graded_antisymmetric() {
        let g = alg(4);
        let e1 = MultiVector::basis(&g, 1);
        let e2 = MultiVector::basis(&g, 2);
        assert_eq!(e1.wedge(&e2).unwrap(), -e2.wedge(&e1).unwrap());
        assert!(e1.wedge(&e1).unwrap().is_zero());
        let e12 = e1.wedge(&e2).unwrap();
        assert!(matches!(
            e12.wedge(&e12),
            Err(Error::DegreeOverflow(2, 2))
        ));
    }

    #[test]
    fn contraction_conventions() {
        let g = alg(4);
        let x = MultiVector::basis(&g, 0);
        let y = MultiVector::basis(&g, 1);
        let xy = x.wedge(&y).unwrap();
        assert_eq!(contract(&Form::dual_basis(4, 0), &xy).unwrap(), y);
        assert_eq!(contract(&Form::dual_basis(4, 1), &xy).unwrap(), -x.clone());
        assert!(contract(&Form::zero(4, 1), &xy).unwrap().is_zero());
        let a01 = Form::dual_basis(4, 0).wedge(&Form::dual_basis(4, 1)).unwrap();
        assert_eq!(pairing(&xy, &a01).unwrap(), Scalar::one());
    }
}
