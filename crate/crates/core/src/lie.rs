//! Lie algebras given by structure constants, metrics, and linear maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{wedge_basis, MultiVector};
use crate::linalg::Rat;
use crate::scalar::Scalar;

/// Split of the basis into an abelian ideal `V` and a complementary subalgebra `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    v: Vec<usize>,
    h: Vec<usize>,
    in_h: Vec<bool>,
}

impl Grading {
    pub fn v(&self) -> &[usize] {
        &self.v
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn is_h(&self, i: usize) -> bool {
        self.in_h[i]
    }

    /// Number of `h` indices in a basis tuple.
    pub fn h_count(&self, tuple: &[usize]) -> usize {
        tuple.iter().filter(|&&i| self.in_h[i]).count()
    }
}

/// `[e_i, e_j] = Σ_k c_k e_k` as `(i, j, [(k, c_k)])`.
pub type Bracket = (usize, usize, Vec<(usize, Scalar)>);

/// A finite-dimensional real Lie algebra with rational structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    /// `table[i][j]` is the sparse expansion of `[e_i, e_j]`.
    table: Vec<Vec<Vec<(usize, Rat)>>>,
    grading: Option<Grading>,
}

impl LieAlgebra {
    /// Validates and builds an algebra from the full tensor `c[i][j][k]`.
    pub fn build(
        labels: Vec<String>,
        constants: &[Vec<Vec<Scalar>>],
        grading: Option<(Vec<usize>, Vec<usize>)>,
    ) -> Result<LieAlgebra> {
        let n = labels.len();
        if constants.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: constants.len(),
            });
        }
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            if constants[i].len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: constants[i].len(),
                });
            }
            for j in 0..n {
                if constants[i][j].len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: constants[i][j].len(),
                    });
                }
                for k in 0..n {
                    let q = constants[i][j][k]
                        .to_rational()
                        .ok_or(Error::ParameterizedConstants(i, j))?;
                    if !q.is_zero() {
                        table[i][j].push((k, q));
                    }
                }
            }
        }
        Self::from_table(labels, table, grading)
    }

    /// Builds from a list of brackets `[e_i, e_j] = Σ coeffs`, filling in
    /// `[e_j, e_i]` by antisymmetry; omitted pairs are zero.
    pub fn from_brackets(
        labels: Vec<String>,
        brackets: &[Bracket],
        grading: Option<(Vec<usize>, Vec<usize>)>,
    ) -> Result<LieAlgebra> {
        let n = labels.len();
        let mut c = vec![vec![vec![Scalar::zero(); n]; n]; n];
        let mut given = vec![vec![false; n]; n];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: i.max(j) + 1,
                });
            }
            for (k, v) in coeffs {
                if *k >= n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: k + 1,
                    });
                }
                c[i][j][*k] += v;
            }
            given[i][j] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if given[i][j] && !given[j][i] {
                    for k in 0..n {
                        c[j][i][k] = -&c[i][j][k];
                    }
                }
            }
        }
        LieAlgebra::build(labels, &c, grading)
    }

    fn from_table(
        labels: Vec<String>,
        table: Vec<Vec<Vec<(usize, Rat)>>>,
        grading: Option<(Vec<usize>, Vec<usize>)>,
    ) -> Result<LieAlgebra> {
        let n = labels.len();
        let coeff = |i: usize, j: usize, k: usize| -> Rat {
            table[i][j]
                .iter()
                .find(|(kk, _)| *kk == k)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rat::zero)
        };
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if coeff(i, j, k) != -coeff(j, i, k) {
                        return Err(Error::AntisymmetryViolation(i, j, k));
                    }
                }
            }
        }
        let alg = LieAlgebra {
            labels,
            table,
            grading: None,
        };
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let res = alg.jacobi_residual(i, j, l);
                    if res.iter().any(|x| !x.is_zero()) {
                        let residual = res
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(", ");
                        return Err(Error::JacobiViolation {
                            i,
                            j,
                            l,
                            residual: format!("[{residual}]"),
                        });
                    }
                }
            }
        }
        let mut alg = alg;
        if let Some((v, h)) = grading {
            alg.grading = Some(alg.check_grading(v, h)?);
        }
        Ok(alg)
    }

    fn check_grading(&self, v: Vec<usize>, h: Vec<usize>) -> Result<Grading> {
        let n = self.dim();
        let mut seen = vec![0u8; n];
        for &i in v.iter().chain(h.iter()) {
            if i >= n {
                return Err(Error::GradingViolation(format!("index {i} out of range")));
            }
            seen[i] += 1;
        }
        if seen.iter().any(|&s| s != 1) {
            return Err(Error::GradingViolation(
                "V and h must partition the basis".into(),
            ));
        }
        let mut in_h = vec![false; n];
        for &i in &h {
            in_h[i] = true;
        }
        for i in 0..n {
            for j in 0..n {
                for (k, _) in &self.table[i][j] {
                    let ok = match (in_h[i], in_h[j]) {
                        (true, true) => in_h[*k],
                        (false, false) => false,
                        _ => !in_h[*k],
                    };
                    if !ok {
                        return Err(Error::GradingViolation(format!(
                            "[{}, {}] has a component along {}",
                            self.labels[i], self.labels[j], self.labels[*k]
                        )));
                    }
                }
            }
        }
        let mut v = v;
        let mut h = h;
        v.sort_unstable();
        h.sort_unstable();
        Ok(Grading { v, h, in_h })
    }

    fn jacobi_residual(&self, i: usize, j: usize, l: usize) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (a, b, c) in [(i, j, l), (j, l, i), (l, i, j)] {
            for (m, x) in &self.table[a][b] {
                for (k, y) in &self.table[*m][c] {
                    out[*k] += x * y;
                }
            }
        }
        out
    }

    /// Abelian algebra of the given dimension, graded with `V` = everything.
    pub fn abelian(n: usize) -> LieAlgebra {
        let labels = (0..n).map(|i| format!("e{i}")).collect();
        LieAlgebra::from_table(
            labels,
            vec![vec![Vec::new(); n]; n],
            Some(((0..n).collect(), Vec::new())),
        )
        .expect("abelian algebra is valid")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    /// Sparse expansion of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.table[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rat {
        self.table[i][j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Restriction to the subalgebra spanned by `indices` (re-indexed), if closed.
    pub fn subalgebra(&self, indices: &[usize]) -> Result<LieAlgebra> {
        let pos: BTreeMap<usize, usize> =
            indices.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let m = indices.len();
        let mut table = vec![vec![Vec::new(); m]; m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                for (k, v) in &self.table[i][j] {
                    let Some(&c) = pos.get(k) else {
                        return Err(Error::GradingViolation(format!(
                            "[{}, {}] leaves the subalgebra",
                            self.labels[i], self.labels[j]
                        )));
                    };
                    table[a][b].push((c, v.clone()));
                }
                table[a][b].sort_by_key(|(c, _)| *c);
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        LieAlgebra::from_table(labels, table, None)
    }
}

/// Bracket of two elements of degree 1.
pub fn bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector> {
    x.check_same(y)?;
    if x.degree() != 1 || y.degree() != 1 {
        return Err(Error::UnsupportedDegree(x.degree().max(y.degree())));
    }
    Ok(x.act(y))
}

/// Matrix of the adjoint action of `x` on Λᵏg (acting as a derivation).
pub fn action_matrix(x: &MultiVector, k: usize) -> Result<LinearMap> {
    if !(1..=3).contains(&k) {
        return Err(Error::UnsupportedDegree(k));
    }
    if x.degree() != 1 {
        return Err(Error::UnsupportedDegree(x.degree()));
    }
    let alg = x.algebra().clone();
    let basis = wedge_basis(alg.dim(), k);
    let mut m = LinearMap::zero(basis.len(), basis.len());
    for (col, t) in basis.iter().enumerate() {
        let u = MultiVector::basis_tuple(&alg, t);
        let img = x.act(&u);
        for (tt, c) in img.terms() {
            m.set(img.index_of(tt), col, c.clone());
        }
    }
    Ok(m)
}

/// Semidirect product `V ⋊ h` with `[X, v] = rep(X) v` and `[V, V] = 0`.
///
/// The resulting basis lists `V` first (labels `v_labels`), then `h`.
pub fn semidirect_product(
    rep: &[LinearMap],
    h: &LieAlgebra,
    v_labels: Vec<String>,
) -> Result<LieAlgebra> {
    let dv = v_labels.len();
    let dh = h.dim();
    if rep.len() != dh {
        return Err(Error::DimensionMismatch {
            expected: dh,
            got: rep.len(),
        });
    }
    for r in rep {
        if r.rows() != dv || r.cols() != dv {
            return Err(Error::DimensionMismatch {
                expected: dv,
                got: r.rows(),
            });
        }
    }
    for i in 0..dh {
        for j in i + 1..dh {
            let mut expected = LinearMap::zero(dv, dv);
            for (k, c) in h.bracket_basis(i, j) {
                expected = expected.add(&rep[*k].scale(&Scalar::from_rational(c.clone())));
            }
            let residual = rep[i].commutator(&rep[j]).sub(&expected);
            if !residual.is_zero() {
                return Err(Error::NotARepresentation(i, j, residual.to_string()));
            }
        }
    }
    let n = dv + dh;
    let mut table = vec![vec![Vec::new(); n]; n];
    for a in 0..dh {
        for b in 0..dh {
            table[dv + a][dv + b] = h
                .bracket_basis(a, b)
                .iter()
                .map(|(k, c)| (dv + k, c.clone()))
                .collect();
        }
        for v in 0..dv {
            let col: Vec<(usize, Rat)> = rep[a]
                .column(v)
                .iter()
                .map(|(k, c)| {
                    let q = c.to_rational().ok_or(Error::ParameterizedConstants(a, v))?;
                    Ok((*k, q))
                })
                .collect::<Result<_>>()?;
            table[v][dv + a] = col.iter().map(|(k, c)| (*k, -c.clone())).collect();
            table[dv + a][v] = col;
        }
    }
    let mut labels = v_labels;
    labels.extend(h.labels().iter().cloned());
    LieAlgebra::from_table(labels, table, Some(((0..dv).collect(), (dv..n).collect())))
}

/// A symmetric nondegenerate bilinear form on `V` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    p: usize,
    q: usize,
    g: Vec<Vec<Rat>>,
    inv: Vec<Vec<Rat>>,
}

impl Metric {
    /// `diag(+1 × p, −1 × q)`.
    pub fn diagonal(p: usize, q: usize) -> Metric {
        let n = p + q;
        let g: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i == j, i < p) {
                        (false, _) => Rat::zero(),
                        (true, true) => Rat::one(),
                        (true, false) => -Rat::one(),
                    })
                    .collect()
            })
            .collect();
        Metric {
            p,
            q,
            inv: g.clone(),
            g,
        }
    }

    pub fn from_matrix(g: Vec<Vec<Rat>>) -> Result<Metric> {
        let n = g.len();
        for row in &g {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if g[i][j] != g[j][i] {
                    return Err(Error::GradingViolation("metric is not symmetric".into()));
                }
            }
        }
        let inv = crate::linalg::inverse(&g)
            .ok_or_else(|| Error::GradingViolation("metric is degenerate".into()))?;
        let (p, q) = signature(&g);
        Ok(Metric { p, q, g, inv })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Covariant components `g_{jk}`.
    pub fn g(&self, j: usize, k: usize) -> &Rat {
        &self.g[j][k]
    }

    /// Contravariant components `g^{jk}`.
    pub fn inv(&self, j: usize, k: usize) -> &Rat {
        &self.inv[j][k]
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.g
    }

    pub fn inverse_matrix(&self) -> &[Vec<Rat>] {
        &self.inv
    }
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
fn signature(g: &[Vec<Rat>]) -> (usize, usize) {
    let n = g.len();
    let mut a: Vec<Vec<Rat>> = g.to_vec();
    let (mut p, mut q) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Replace e_k by e_k + e_j; a_kk becomes 2 a_kj.
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[k][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][k] += t;
                }
            } else {
                continue;
            }
        }
        let d = a[k][k].clone();
        for i in k + 1..n {
            let f = &a[i][k] / &d;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let t = &f * &a[k][c];
                a[i][c] -= t;
            }
            for r in 0..n {
                let t = &f * &a[r][k];
                a[r][i] -= t;
            }
        }
        if d.is_positive() {
            p += 1;
        } else {
            q += 1;
        }
    }
    (p, q)
}

/// Matrix of a linear map between based spaces, stored by sparse columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    rows: usize,
    columns: Vec<BTreeMap<usize, Scalar>>,
}

impl LinearMap {
    pub fn zero(rows: usize, cols: usize) -> LinearMap {
        LinearMap {
            rows,
            columns: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(n: usize) -> LinearMap {
        let mut m = LinearMap::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rational_rows(rows: &[Vec<Rat>]) -> LinearMap {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = LinearMap::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, Scalar::from_rational(v.clone()));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows, "row index out of range");
        if v.is_zero() {
            self.columns[j].remove(&i);
        } else {
            self.columns[j].insert(i, v);
        }
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, Scalar> {
        &self.columns[j]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols());
        let mut out = vec![Scalar::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, c) in col {
                out[*i] += &(c * &v[j]);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(self.cols(), other.rows());
        let mut out = LinearMap::zero(self.rows, other.cols());
        for (j, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, c) in col {
                for (i, d) in &self.columns[*k] {
                    *acc.entry(*i).or_default() += &(d * c);
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.columns[j] = acc;
        }
        out
    }

    fn zip_with(&self, other: &LinearMap, sign: i64) -> LinearMap {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols(), other.cols());
        let s = Scalar::from_int(sign);
        let mut out = self.clone();
        for (j, col) in other.columns.iter().enumerate() {
            for (i, c) in col {
                let v = out.get(*i, j) + &s * c;
                out.set(*i, j, v);
            }
        }
        out
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        self.zip_with(other, 1)
    }

    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        self.zip_with(other, -1)
    }

    pub fn scale(&self, s: &Scalar) -> LinearMap {
        let mut out = LinearMap::zero(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                out.set(*i, j, c * s);
            }
        }
        out
    }

    pub fn commutator(&self, other: &LinearMap) -> LinearMap {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn is_rational(&self) -> bool {
        self.columns
            .iter()
            .all(|c| c.values().all(Scalar::is_rational))
    }

    /// Dense rational matrix (row-major), if every entry is a constant.
    pub fn to_rational_rows(&self) -> Option<Vec<Vec<Rat>>> {
        let mut out = vec![vec![Rat::zero(); self.cols()]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                out[*i][j] = c.to_rational()?;
            }
        }
        Some(out)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols());
        let mut p = self.clone();
        for _ in 0..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.compose(self);
        }
        p.is_zero()
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "{{")?;
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "({i},{j}): {c}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Convenience: shared handle to an algebra.
pub type AlgebraRef = Arc<LieAlgebra>;

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> LieAlgebra {
        // [H,X+] = X+, [H,X-] = -X-, [X+,X-] = 2H
        LieAlgebra::from_brackets(
            vec!["H".into(), "X+".into(), "X-".into()],
            &[
                (0, 1, vec![(1, Scalar::one())]),
                (0, 2, vec![(2, Scalar::from_int(-1))]),
                (1, 2, vec![(0, Scalar::from_int(2))]),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn sl2_is_valid() {
        let g = sl2();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.structure_constant(1, 0, 1), -Rat::one());
    }

    #[test]
    fn antisymmetry_violation_detected() {
        let n = 4;
        let mut c = vec![vec![vec![Scalar::zero(); n]; n]; n];
        c[1][2][3] = Scalar::one();
        c[2][1][3] = Scalar::one();
        let labels = (0..n).map(|i| format!("x{i}")).collect();
        assert_eq!(
            LieAlgebra::build(labels, &c, None),
            Err(Error::AntisymmetryViolation(1, 2, 3))
        );
    }

    #[test]
    fn jacobi_violation_detected() {
        // [x0,x1] = x1, [x1,x2] = x0, [x0,x2] = 0 violates Jacobi.
        let r = LieAlgebra::from_brackets(
            vec!["x0".into(), "x1".into(), "x2".into()],
            &[
                (0, 1, vec![(1, Scalar::one())]),
                (1, 2, vec![(0, Scalar::one())]),
            ],
            None,
        );
        assert!(matches!(r, Err(Error::JacobiViolation { .. })));
    }

    #[test]
    fn parameterized_constants_rejected() {
        let r = LieAlgebra::from_brackets(
            vec!["x".into(), "y".into()],
            &[(0, 1, vec![(1, Scalar::var("a"))])],
            None,
        );
        assert_eq!(r, Err(Error::ParameterizedConstants(0, 1)));
    }

    #[test]
    fn abelian_is_graded_with_empty_h() {
        let a = LieAlgebra::abelian(4);
        let gr = a.grading().unwrap();
        assert_eq!(gr.v(), &[0, 1, 2, 3]);
        assert!(gr.h().is_empty());
    }

    #[test]
    fn metric_signature() {
        let m = Metric::diagonal(1, 3);
        assert_eq!(m.signature(), (1, 3));
        let off = Metric::from_matrix(vec![
            vec![Rat::zero(), Rat::one()],
            vec![Rat::one(), Rat::zero()],
        ])
        .unwrap();
        assert_eq!(off.signature(), (1, 1));
        assert_eq!(off.inv(0, 1), &Rat::one());
    }
}
