//! Invariants, cocycles, coboundaries and intertwiners over exact rationals.
//!
//! Modules are drawn from a closed list: the trivial module ℝ and the
//! graded blocks of Λᵏg (k ≤ 3). Linear maps `f: S → E` are flattened
//! column-major: the entry `f_{i,a}` (row `i` of `E`, column `a` of the
//! source) sits at index `a * dim E + i`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{wedge_basis, Form, MultiVector};
use crate::lie::LieAlgebra;
use crate::linalg::{Rat, RatRow, Subspace};
use crate::scalar::Scalar;
use crate::schouten::{dual_bracket, r_of, schouten_bracket};

/// Which graded block of Λᵏg a module consists of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    /// All of Λᵏg.
    All,
    /// ΛᵏV.
    V,
    /// Λᵏh.
    H,
    /// Λ^{k−m}V ∧ Λ^m h with the given number `m` of h-factors.
    Mixed(usize),
}

/// A module in the closed enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleSpec {
    Trivial,
    Wedge { degree: usize, block: Block },
}

impl ModuleSpec {
    pub fn wedge(degree: usize, block: Block) -> ModuleSpec {
        ModuleSpec::Wedge { degree, block }
    }
}

impl FromStr for ModuleSpec {
    type Err = Error;

    /// Accepted forms: `R`, `g`, `V`, `h`, `L2g`, `L3g`, `L2V`, `L3V`,
    /// `L2h`, `L3h`, `V^h`, `V*h` (V⊗h ≅ V∧h), `L2V^h`, `V^L2h`.
    fn from_str(s: &str) -> Result<ModuleSpec> {
        use Block::*;
        let w = ModuleSpec::wedge;
        Ok(match s.trim() {
            "R" | "trivial" => ModuleSpec::Trivial,
            "g" | "L1g" => w(1, All),
            "V" | "L1V" => w(1, V),
            "h" | "L1h" => w(1, H),
            "L2g" => w(2, All),
            "L3g" => w(3, All),
            "L2V" => w(2, V),
            "L3V" => w(3, V),
            "L2h" => w(2, H),
            "L3h" => w(3, H),
            "V^h" | "V*h" | "Vxh" => w(2, Mixed(1)),
            "L2V^h" => w(3, Mixed(1)),
            "V^L2h" => w(3, Mixed(2)),
            other => return Err(Error::UnsupportedModule(other.to_string())),
        })
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModuleSpec::Trivial => write!(f, "R"),
            ModuleSpec::Wedge { degree, block } => match (degree, block) {
                (1, Block::All) => write!(f, "g"),
                (1, Block::V) => write!(f, "V"),
                (1, Block::H) => write!(f, "h"),
                (k, Block::All) => write!(f, "L{k}g"),
                (k, Block::V) => write!(f, "L{k}V"),
                (k, Block::H) => write!(f, "L{k}h"),
                (2, Block::Mixed(1)) => write!(f, "V^h"),
                (3, Block::Mixed(1)) => write!(f, "L2V^h"),
                (3, Block::Mixed(2)) => write!(f, "V^L2h"),
                (k, Block::Mixed(m)) => write!(f, "L{}V^L{m}h", k - m),
            },
        }
    }
}

/// Which subalgebra acts (or is the source of cochains).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Acting {
    G,
    H,
    V,
}

impl FromStr for Acting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Acting> {
        match s {
            "g" => Ok(Acting::G),
            "h" => Ok(Acting::H),
            "V" | "v" => Ok(Acting::V),
            other => Err(Error::UnsupportedModule(format!("acting subalgebra '{other}'"))),
        }
    }
}

/// Basis indices of the acting subalgebra.
pub fn acting_indices(alg: &LieAlgebra, acting: Acting) -> Result<Vec<usize>> {
    match acting {
        Acting::G => Ok((0..alg.dim()).collect()),
        Acting::H => Ok(alg.grading().ok_or(Error::NotGraded)?.h().to_vec()),
        Acting::V => Ok(alg.grading().ok_or(Error::NotGraded)?.v().to_vec()),
    }
}

/// A realized module: basis tuples and the action of basis elements of g.
#[derive(Clone, Debug)]
pub struct Module {
    alg: Arc<LieAlgebra>,
    spec: ModuleSpec,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Module {
    pub fn new(alg: &Arc<LieAlgebra>, spec: ModuleSpec) -> Result<Module> {
        let basis: Vec<Vec<usize>> = match spec {
            ModuleSpec::Trivial => vec![Vec::new()],
            ModuleSpec::Wedge { degree, block } => {
                if !(1..=3).contains(&degree) {
                    return Err(Error::UnsupportedModule(format!("degree {degree}")));
                }
                let all = wedge_basis(alg.dim(), degree);
                let want = match block {
                    Block::All => None,
                    Block::V => Some(0),
                    Block::H => Some(degree),
                    Block::Mixed(m) if m <= degree => Some(m),
                    Block::Mixed(m) => {
                        return Err(Error::UnsupportedModule(format!(
                            "{m} h-factors in degree {degree}"
                        )))
                    }
                };
                match want {
                    None => all,
                    Some(m) => {
                        let gr = alg.grading().ok_or(Error::NotGraded)?;
                        all.into_iter().filter(|t| gr.h_count(t) == m).collect()
                    }
                }
            }
        };
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Module {
            alg: alg.clone(),
            spec,
            basis,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn spec(&self) -> ModuleSpec {
        self.spec
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    fn degree(&self) -> usize {
        match self.spec {
            ModuleSpec::Trivial => 0,
            ModuleSpec::Wedge { degree, .. } => degree,
        }
    }

    /// Columns of the action matrix of basis element `x`; errors if the
    /// module is not stable under `x`.
    pub fn action_columns(&self, x: usize) -> Result<Vec<RatRow>> {
        if self.spec == ModuleSpec::Trivial {
            return Ok(vec![Vec::new()]);
        }
        let xv = MultiVector::basis(&self.alg, x);
        self.basis
            .iter()
            .map(|t| {
                let img = xv.act(&MultiVector::basis_tuple(&self.alg, t));
                let mut col: RatRow = Vec::with_capacity(img.num_terms());
                for (tt, c) in img.terms() {
                    let i = *self.index.get(tt).ok_or_else(|| {
                        Error::UnsupportedModule(format!(
                            "{} is not stable under {}",
                            self.spec,
                            self.alg.labels()[x]
                        ))
                    })?;
                    col.push((i, c.to_rational().expect("rational structure constants")));
                }
                col.sort_by_key(|(i, _)| *i);
                Ok(col)
            })
            .collect()
    }

    /// Rows of the action matrix of basis element `x`.
    pub fn action_rows(&self, x: usize) -> Result<Vec<RatRow>> {
        let cols = self.action_columns(x)?;
        let mut rows: Vec<RatRow> = vec![Vec::new(); self.dim()];
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col {
                rows[i].push((j, v));
            }
        }
        Ok(rows)
    }

    /// Coordinates of a multivector lying in this module.
    pub fn coords_of(&self, w: &MultiVector) -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (t, c) in w.terms() {
            let i = *self
                .index
                .get(t)
                .ok_or_else(|| Error::UnsupportedModule(format!("element is not in {}", self.spec)))?;
            out[i] = c.to_rational().ok_or(Error::Parameterized)?;
        }
        Ok(out)
    }

    /// The multivector with the given module coordinates.
    pub fn element(&self, coords: &[Rat]) -> MultiVector {
        let terms = self
            .basis
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (t.clone(), Scalar::from_rational(c.clone())));
        MultiVector::from_terms(&self.alg, self.degree(), terms).expect("module tuples are valid")
    }
}

/// E_s = {u ∈ E : Xu = 0 for X in the acting subalgebra}.
pub fn invariants(alg: &Arc<LieAlgebra>, spec: ModuleSpec, acting: Acting) -> Result<Subspace> {
    let module = Module::new(alg, spec)?;
    let xs = acting_indices(alg, acting)?;
    let blocks: Vec<Vec<RatRow>> = xs
        .par_iter()
        .map(|&x| module.action_rows(x))
        .collect::<Result<_>>()?;
    Ok(Subspace::nullspace(
        module.dim(),
        blocks.into_iter().flatten().filter(|r| !r.is_empty()),
    ))
}

/// Invariant elements as multivectors.
pub fn invariant_elements(
    alg: &Arc<LieAlgebra>,
    spec: ModuleSpec,
    acting: Acting,
) -> Result<Vec<MultiVector>> {
    let module = Module::new(alg, spec)?;
    let sub = invariants(alg, spec, acting)?;
    Ok(sub.basis().iter().map(|b| module.element(b)).collect())
}

fn source_structure(alg: &LieAlgebra, src: &[usize]) -> Result<Vec<Vec<RatRow>>> {
    let pos: HashMap<usize, usize> = src.iter().enumerate().map(|(a, &i)| (i, a)).collect();
    src.iter()
        .map(|&i| {
            src.iter()
                .map(|&j| {
                    alg.bracket_basis(i, j)
                        .iter()
                        .map(|(k, c)| {
                            pos.get(k).map(|&kk| (kk, c.clone())).ok_or_else(|| {
                                Error::UnsupportedModule("source is not a subalgebra".into())
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Z(S, E): linear maps f: S → E with f([X,Y]) = X f(Y) − Y f(X).
pub fn cocycle_space(alg: &Arc<LieAlgebra>, spec: ModuleSpec, source: Acting) -> Result<Subspace> {
    let module = Module::new(alg, spec)?;
    let src = acting_indices(alg, source)?;
    let consts = source_structure(alg, &src)?;
    let rows: Vec<Vec<RatRow>> = src
        .par_iter()
        .map(|&x| module.action_rows(x))
        .collect::<Result<_>>()?;
    let de = module.dim();
    let ns = src.len();
    let pairs: Vec<(usize, usize)> = (0..ns)
        .flat_map(|a| (a + 1..ns).map(move |b| (a, b)))
        .collect();
    let eqs: Vec<RatRow> = pairs
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let mut out = Vec::with_capacity(de);
            for i in 0..de {
                let mut row: Vec<(usize, Rat)> = Vec::new();
                for (k, c) in &consts[a][b] {
                    row.push((k * de + i, c.clone()));
                }
                for (j, m) in &rows[a][i] {
                    row.push((b * de + j, -m.clone()));
                }
                for (j, m) in &rows[b][i] {
                    row.push((a * de + j, m.clone()));
                }
                let row = merge_row(row);
                if !row.is_empty() {
                    out.push(row);
                }
            }
            out
        })
        .collect();
    Ok(Subspace::nullspace(de * ns, eqs))
}

fn merge_row(mut row: Vec<(usize, Rat)>) -> RatRow {
    row.sort_by_key(|(c, _)| *c);
    let mut out: RatRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// B(S, E): the maps X ↦ X·u for u ∈ E.
pub fn coboundary_space(
    alg: &Arc<LieAlgebra>,
    spec: ModuleSpec,
    source: Acting,
) -> Result<Subspace> {
    let module = Module::new(alg, spec)?;
    let src = acting_indices(alg, source)?;
    let de = module.dim();
    let cols: Vec<Vec<RatRow>> = src
        .par_iter()
        .map(|&x| module.action_columns(x))
        .collect::<Result<_>>()?;
    let vectors = (0..de).map(|u| {
        let mut v: RatRow = Vec::new();
        for (a, c) in cols.iter().enumerate() {
            for (i, m) in &c[u] {
                v.push((a * de + i, m.clone()));
            }
        }
        v
    });
    Ok(Subspace::span_sparse(de * src.len(), vectors))
}

/// Dimensions of a cohomology computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyDims {
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

/// dim Z − dim B, after asserting B ⊆ Z.
pub fn cohomology_dim(
    alg: &Arc<LieAlgebra>,
    spec: ModuleSpec,
    source: Acting,
) -> Result<CohomologyDims> {
    let z = cocycle_space(alg, spec, source)?;
    let b = coboundary_space(alg, spec, source)?;
    assert!(b.is_subspace_of(&z), "coboundaries must be cocycles");
    Ok(CohomologyDims {
        cocycles: z.dim(),
        coboundaries: b.dim(),
        cohomology: z.dim() - b.dim(),
    })
}

/// Mor_s(E₁, E₂): maps T with T(Xu) = X T(u) for X in the acting subalgebra.
/// Flattened as `col * dim E₂ + row`.
pub fn intertwiner_space(
    alg: &Arc<LieAlgebra>,
    e1: ModuleSpec,
    e2: ModuleSpec,
    acting: Acting,
) -> Result<Subspace> {
    let m1 = Module::new(alg, e1)?;
    let m2 = Module::new(alg, e2)?;
    let xs = acting_indices(alg, acting)?;
    let (d1, d2) = (m1.dim(), m2.dim());
    let eqs: Vec<Vec<RatRow>> = xs
        .par_iter()
        .map(|&x| {
            let a1 = m1.action_rows(x)?; // (M1)_{kj} by rows k
            let a2 = m2.action_rows(x)?; // (M2)_{ik} by rows i
            let mut a1_cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); d1];
            for (k, row) in a1.iter().enumerate() {
                for (j, v) in row {
                    a1_cols[*j].push((k, v.clone()));
                }
            }
            let mut out = Vec::new();
            for i in 0..d2 {
                for (j, col) in a1_cols.iter().enumerate() {
                    // Σ_k T_{ik} (M1)_{kj} − Σ_k (M2)_{ik} T_{kj}
                    let mut row: Vec<(usize, Rat)> = col
                        .iter()
                        .map(|(k, v)| (k * d2 + i, v.clone()))
                        .collect();
                    for (k, v) in &a2[i] {
                        row.push((j * d2 + k, -v.clone()));
                    }
                    let row = merge_row(row);
                    if !row.is_empty() {
                        out.push(row);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(Subspace::nullspace(d1 * d2, eqs.into_iter().flatten()))
}

fn require_rational(w: &MultiVector) -> Result<()> {
    if w.is_rational() {
        Ok(())
    } else {
        Err(Error::Parameterized)
    }
}

/// Solutions b ∈ V∧h of b([α,β]_c) = c(α)·b(β) − c(β)·b(α) over pairs of
/// dual basis elements of h*. Coordinates refer to the `V^h` module basis.
pub fn solve_b_cocycle(c: &MultiVector) -> Result<Subspace> {
    require_rational(c)?;
    let alg = c.algebra();
    if c.degree() != 2 || !c.in_block(2) {
        return Err(Error::UnsupportedModule("c must lie in L2h".into()));
    }
    if !schouten_bracket(c, c)?.is_zero() {
        return Err(Error::NotTriangular);
    }
    let module = Module::new(alg, ModuleSpec::wedge(2, Block::Mixed(1)))?;
    let hs = alg.grading().ok_or(Error::NotGraded)?.h().to_vec();
    let n = alg.dim();
    let unknowns: Vec<MultiVector> = module
        .basis()
        .iter()
        .map(|t| MultiVector::basis_tuple(alg, t))
        .collect();
    let pairs: Vec<(usize, usize)> = hs
        .iter()
        .enumerate()
        .flat_map(|(a, &x)| hs[a + 1..].iter().map(move |&y| (x, y)))
        .collect();
    let blocks: Vec<Vec<RatRow>> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let alpha = Form::dual_basis(n, x);
            let beta = Form::dual_basis(n, y);
            let ab = dual_bracket(c, &alpha, &beta)?;
            let ca = r_of(c, &alpha)?;
            let cb = r_of(c, &beta)?;
            // Residual of each unknown basis bivector, as columns.
            let mut rows: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); n];
            for (u, bu) in unknowns.iter().enumerate() {
                let res = &(&r_of(bu, &ab)? - &ca.act(&r_of(bu, &beta)?)) + &cb.act(&r_of(bu, &alpha)?);
                for (t, v) in res.terms() {
                    rows[t[0]].push((u, v.to_rational().expect("rational input")));
                }
            }
            Ok(rows.into_iter().filter(|r| !r.is_empty()).map(merge_row).collect())
        })
        .collect::<Result<_>>()?;
    Ok(Subspace::nullspace(module.dim(), blocks.into_iter().flatten()))
}

/// Solutions b ∈ V∧h of [b, c] = 0 (the full bracket condition).
pub fn solve_bc_bracket(c: &MultiVector) -> Result<Subspace> {
    require_rational(c)?;
    let alg = c.algebra();
    let module = Module::new(alg, ModuleSpec::wedge(2, Block::Mixed(1)))?;
    let mut cols: Vec<MultiVector> = Vec::with_capacity(module.dim());
    for t in module.basis() {
        cols.push(schouten_bracket(&MultiVector::basis_tuple(alg, t), c)?);
    }
    let mut rows: HashMap<Vec<usize>, Vec<(usize, Rat)>> = HashMap::new();
    for (u, w) in cols.iter().enumerate() {
        for (t, v) in w.terms() {
            rows.entry(t.clone())
                .or_default()
                .push((u, v.to_rational().expect("rational input")));
        }
    }
    let mut keys: Vec<_> = rows.keys().cloned().collect();
    keys.sort();
    Ok(Subspace::nullspace(
        module.dim(),
        keys.into_iter().map(|k| merge_row(rows.remove(&k).unwrap())),
    ))
}

/// The bivectors spanning a solution subspace of [`solve_b_cocycle`].
pub fn b_elements(alg: &Arc<LieAlgebra>, sub: &Subspace) -> Result<Vec<MultiVector>> {
    let module = Module::new(alg, ModuleSpec::wedge(2, Block::Mixed(1)))?;
    Ok(sub.basis().iter().map(|b| module.element(b)).collect())
}

/// Span of the given bivectors inside the `V^h` module coordinates.
pub fn span_in_mixed(alg: &Arc<LieAlgebra>, elems: &[MultiVector]) -> Result<Subspace> {
    let module = Module::new(alg, ModuleSpec::wedge(2, Block::Mixed(1)))?;
    let vs: Vec<Vec<Rat>> = elems
        .iter()
        .map(|e| module.coords_of(e))
        .collect::<Result<_>>()?;
    Ok(Subspace::span(module.dim(), vs))
}
