//! Exact linear algebra over the rationals.
//!
//! Elimination is fraction-free: rows are kept as primitive integer vectors
//! while pivoting, and only the final reduced row echelon form is converted
//! back to rationals (pivot entries 1). The reduced form of a row space is
//! unique, so subspaces compare by plain equality.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Rat = BigRational;
/// Sparse integer row: strictly increasing column indices, nonzero entries.
pub type IntRow = Vec<(usize, BigInt)>;
/// Sparse rational row.
pub type RatRow = Vec<(usize, Rat)>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if let Some((_, lead)) = row.first() {
        if lead.is_negative() {
            g = -g;
        }
    }
    if !g.is_one() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `x*u + y*v` for sparse rows.
fn combine(x: &BigInt, u: &IntRow, y: &BigInt, v: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(u.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < v.len() {
        let take_u = j >= v.len() || (i < u.len() && u[i].0 < v[j].0);
        let take_v = i >= u.len() || (j < v.len() && v[j].0 < u[i].0);
        if take_u {
            out.push((u[i].0, x * &u[i].1));
            i += 1;
        } else if take_v {
            out.push((v[j].0, y * &v[j].1));
            j += 1;
        } else {
            let s = x * &u[i].1 + y * &v[j].1;
            if !s.is_zero() {
                out.push((u[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Converts a sparse rational row into a primitive integer row.
pub fn to_int_row(row: &[(usize, Rat)]) -> IntRow {
    let mut l = BigInt::one();
    for (_, v) in row {
        if !v.is_zero() {
            l = l.lcm(v.denom());
        }
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, (v * Rat::from_integer(l.clone())).to_integer()))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    make_primitive(&mut out);
    out
}

pub fn dense_to_sparse(v: &[Rat]) -> RatRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(n: usize, v: &[(usize, Rat)]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Incrementally built row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots; returns the remainder.
    fn reduce(&self, mut row: IntRow) -> IntRow {
        let mut k = 0;
        while k < row.len() {
            let (c, a) = row[k].clone();
            match self.rows.get(&c) {
                Some(p) => {
                    let b = &p[0].1;
                    row = combine(b, &row, &(-a), p);
                    make_primitive(&mut row);
                    k = row.iter().position(|(cc, _)| *cc > c).unwrap_or(row.len());
                }
                None => k += 1,
            }
        }
        row
    }

    /// Inserts a row; returns `true` if the rank grew.
    pub fn insert_int(&mut self, row: IntRow) -> bool {
        let mut row = row;
        // Reduce only the leading entry until it lands on a fresh pivot.
        loop {
            let Some((c, a)) = row.first().cloned() else {
                return false;
            };
            match self.rows.get(&c) {
                Some(p) => {
                    let b = &p[0].1;
                    row = combine(b, &row, &(-a), p);
                    make_primitive(&mut row);
                }
                None => {
                    make_primitive(&mut row);
                    self.rows.insert(c, row);
                    return true;
                }
            }
        }
    }

    pub fn insert(&mut self, row: &[(usize, Rat)]) -> bool {
        self.insert_int(to_int_row(row))
    }

    pub fn contains(&self, row: &[(usize, Rat)]) -> bool {
        self.reduce(to_int_row(row)).is_empty()
    }

    /// Canonical reduced row echelon form, pivots ascending, pivot entries 1.
    pub fn rref(&self) -> Vec<RatRow> {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut done: BTreeMap<usize, IntRow> = BTreeMap::new();
        for &p in pivots.iter().rev() {
            let mut row = self.rows[&p].clone();
            loop {
                let hit = row
                    .iter()
                    .skip(1)
                    .find(|(c, _)| done.contains_key(c))
                    .cloned();
                let Some((c, a)) = hit else { break };
                let r = &done[&c];
                let b = &r[0].1;
                row = combine(b, &row, &(-a), r);
                make_primitive(&mut row);
            }
            done.insert(p, row);
        }
        done.into_values()
            .map(|row| {
                let lead = Rat::from_integer(row[0].1.clone());
                row.into_iter()
                    .map(|(c, v)| (c, Rat::from_integer(v) / &lead))
                    .collect()
            })
            .collect()
    }
}

/// A linear subspace of ℚⁿ stored by its canonical reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(
            ambient,
            (0..ambient).map(|i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            }),
        )
    }

    fn from_echelon(e: &Echelon) -> Self {
        let rows = e.rref();
        let pivots = rows.iter().map(|r| r[0].0).collect();
        let basis = rows
            .iter()
            .map(|r| sparse_to_dense(e.ncols(), r))
            .collect();
        Subspace {
            ambient: e.ncols(),
            basis,
            pivots,
        }
    }

    pub fn span<I: IntoIterator<Item = Vec<Rat>>>(ambient: usize, vectors: I) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length must match ambient dimension");
            e.insert(&dense_to_sparse(&v));
        }
        Subspace::from_echelon(&e)
    }

    pub fn span_sparse<I: IntoIterator<Item = RatRow>>(ambient: usize, vectors: I) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.insert(&v);
        }
        Subspace::from_echelon(&e)
    }

    /// Solution space of the homogeneous system given by sparse `rows`.
    pub fn nullspace<I: IntoIterator<Item = RatRow>>(ncols: usize, rows: I) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(&r);
            if e.rank() == ncols {
                break;
            }
        }
        nullspace_of_echelon(&e)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p].clone();
            if !c.is_zero() {
                for (wi, bi) in w.iter_mut().zip(b) {
                    if !bi.is_zero() {
                        *wi -= &c * bi;
                    }
                }
            }
            coords.push(c);
        }
        w.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.ambient,
            self.basis.iter().chain(other.basis.iter()).cloned(),
        )
    }

    /// The annihilator {w : ⟨w,u⟩ = 0 for all u in self}.
    pub fn annihilator(&self) -> Subspace {
        Subspace::nullspace(self.ambient, self.basis.iter().map(|b| dense_to_sparse(b)))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let a = self.annihilator();
        let b = other.annihilator();
        Subspace::nullspace(
            self.ambient,
            a.basis.iter().chain(b.basis.iter()).map(|v| dense_to_sparse(v)),
        )
    }
}

fn nullspace_of_echelon(e: &Echelon) -> Subspace {
    let n = e.ncols();
    let rows = e.rref();
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    // Column view of the non-pivot entries of the reduced rows.
    let mut by_free: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
    for (r, &p) in rows.iter().zip(&pivots) {
        for (c, v) in r.iter().skip(1) {
            by_free.entry(*c).or_default().push((p, v.clone()));
        }
    }
    let vectors = (0..n).filter(|&f| !is_pivot[f]).map(|f| {
        let mut v: RatRow = vec![(f, Rat::one())];
        if let Some(entries) = by_free.get(&f) {
            for (p, x) in entries {
                v.push((*p, -x.clone()));
            }
        }
        v.sort_by_key(|(c, _)| *c);
        v
    });
    Subspace::span_sparse(n, vectors)
}

pub fn rank<I: IntoIterator<Item = RatRow>>(ncols: usize, rows: I) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(&r);
    }
    e.rank()
}

/// One solution of `A x = b` (free variables set to zero), or `None`.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.first().map_or(0, Vec::len);
    let mut e = Echelon::new(n + 1);
    for (row, rhs) in a.iter().zip(b) {
        let mut r = dense_to_sparse(row);
        if !rhs.is_zero() {
            r.push((n, rhs.clone()));
        }
        e.insert(&r);
    }
    let rows = e.rref();
    let mut x = vec![Rat::zero(); n];
    for r in rows {
        let p = r[0].0;
        if p == n {
            return None;
        }
        if let Some((_, v)) = r.iter().find(|(c, _)| *c == n) {
            x[p] = v.clone();
        }
    }
    Some(x)
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut cols = vec![vec![Rat::zero(); n]; n];
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        let x = solve(a, &e)?;
        for i in 0..n {
            cols[i][j] = x[i].clone();
        }
    }
    // `solve` may succeed on singular systems with consistent right-hand side.
    let prod = mat_mul(a, &cols);
    (0..n)
        .all(|i| (0..n).all(|j| prod[i][j] == if i == j { Rat::one() } else { Rat::zero() }))
        .then_some(cols)
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .map(|(x, brow)| x * &brow[j])
                        .fold(Rat::zero(), |acc, t| acc + t)
                })
                .collect()
        })
        .collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// Square root of a rational that is the square of a rational.
pub fn rational_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

/// Distinct rational roots of Σ coeffs[k] xᵏ (rational root theorem).
pub fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    let mut c: Vec<Rat> = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let shift = c.iter().position(|x| !x.is_zero()).unwrap();
    if shift > 0 {
        roots.push(Rat::zero());
        c.drain(..shift);
    }
    if c.len() > 1 {
        let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c
            .iter()
            .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let eval = |x: &Rat| {
            ints.iter()
                .rev()
                .fold(Rat::zero(), |acc, k| acc * x + Rat::from_integer(k.clone()))
        };
        for p in divisors(&ints[0]) {
            for q in divisors(ints.last().unwrap()) {
                for cand in [Rat::new(p.clone(), q.clone()), -Rat::new(p.clone(), q.clone())] {
                    if eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}
