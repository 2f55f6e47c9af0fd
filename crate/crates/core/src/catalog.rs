//! The catalog of r-matrices on the Poincaré algebra and its verifier.
//!
//! Entries are JSON documents shipped in `catalog/` next to this crate (the
//! directory can be overridden with `BIALG_CATALOG_DIR`). Each entry gives
//! its components a ∈ Λ²V, b ∈ V∧h, c ∈ Λ²h as term lists with polynomial
//! coefficients, plus the expected value of t in 2[a,c] + [b,b] = tΩ.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorphisms::AutomorphismMove;
use crate::error::{Error, Result};
use crate::exterior::{GradedComponents3, MultiVector};
use crate::format::{json_error, terms_from_docs, TermDoc};
use crate::linalg::{Rat, Subspace};
use crate::poincare::{poincare, InhomogeneousAlgebra};
use crate::scalar::Scalar;
use crate::schouten::{schouten_bracket, span_decompose};

/// Catalog shipped with the crate.
pub const DEFAULT_CATALOG_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/catalog");
/// Environment variable overriding [`DEFAULT_CATALOG_DIR`].
pub const CATALOG_ENV: &str = "BIALG_CATALOG_DIR";

/// On-disk form of an entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub id: String,
    /// Table row number, absent for the κ-family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    /// Continuous parameters, kept symbolic in symbolic verification.
    #[serde(default)]
    pub params: Vec<String>,
    /// Discrete parameters and their admissible values; every combination is
    /// verified separately.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub discrete: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub a: Vec<TermDoc>,
    #[serde(default)]
    pub b: Vec<TermDoc>,
    #[serde(default)]
    pub c: Vec<TermDoc>,
    /// Polynomial in the discrete parameters (usually a constant).
    pub expected_t: String,
    /// The documented number of essential parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub essential: Option<usize>,
    /// Expected dim b(h*) for the c = 0, t = 0 rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0_dim: Option<usize>,
    /// The formula cell the entry encodes.
    pub source: String,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    doc: EntryDoc,
    path: Option<PathBuf>,
}

fn parse_rat(s: &str) -> Result<Rat> {
    Scalar::parse_with(s, Some(&[]))?
        .to_rational()
        .ok_or_else(|| Error::Document(format!("'{s}' is not a rational number")))
}

impl CatalogEntry {
    pub fn from_doc(doc: EntryDoc) -> Result<CatalogEntry> {
        let entry = CatalogEntry { doc, path: None };
        for (k, vals) in &entry.doc.discrete {
            if entry.doc.params.contains(k) {
                return Err(Error::Document(format!("{}: '{k}' is both discrete and continuous", entry.doc.id)));
            }
            for v in vals {
                parse_rat(v)?;
            }
        }
        // Validate every term list and block membership once.
        let p = poincare();
        let bindings = Bindings::symbolic();
        for variant in entry.variants()? {
            entry.build(&p, &bindings.clone().with_all(&variant))?;
        }
        Ok(entry)
    }

    pub fn parse(text: &str) -> Result<CatalogEntry> {
        let doc: EntryDoc = serde_json::from_str(text).map_err(|e| json_error("catalog entry", &e))?;
        Self::from_doc(doc)
    }

    pub fn load(path: &Path) -> Result<CatalogEntry> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let doc: EntryDoc = serde_json::from_str(&text)
            .map_err(|e| json_error(&path.display().to_string(), &e))?;
        let mut entry = Self::from_doc(doc).map_err(|e| match e {
            Error::Document(m) => Error::Document(format!("{}: {m}", path.display())),
            Error::Parse { position, message } => Error::Document(format!(
                "{}: coefficient parse error at {position}: {message}",
                path.display()
            )),
            other => other,
        })?;
        entry.path = Some(path.to_path_buf());
        Ok(entry)
    }

    pub fn doc(&self) -> &EntryDoc {
        &self.doc
    }

    pub fn id(&self) -> &str {
        &self.doc.id
    }

    pub fn params(&self) -> &[String] {
        &self.doc.params
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// All assignments of the discrete parameters (one empty assignment if
    /// there are none).
    pub fn variants(&self) -> Result<Vec<BTreeMap<String, Rat>>> {
        let mut out = vec![BTreeMap::new()];
        for (name, vals) in &self.doc.discrete {
            let mut next = Vec::with_capacity(out.len() * vals.len());
            for partial in &out {
                for v in vals {
                    let mut m: BTreeMap<String, Rat> = partial.clone();
                    m.insert(name.clone(), parse_rat(v)?);
                    next.push(m);
                }
            }
            out = next;
        }
        Ok(out)
    }

    fn all_names(&self) -> Vec<String> {
        self.doc
            .params
            .iter()
            .chain(self.doc.discrete.keys())
            .cloned()
            .collect()
    }

    pub fn expected_t(&self, bindings: &Bindings) -> Result<Scalar> {
        let t = Scalar::parse_with(&self.doc.expected_t, Some(&self.all_names()))?;
        Ok(bindings.substitute(&t))
    }

    /// Builds (a, b, c); see [`build_entry`].
    pub fn build(&self, p: &InhomogeneousAlgebra, bindings: &Bindings) -> Result<Triple> {
        for name in self.doc.discrete.keys() {
            let v = bindings
                .values
                .get(name)
                .ok_or_else(|| Error::MissingParameter(name.clone()))?;
            if !self.doc.discrete[name].iter().any(|s| parse_rat(s).ok().as_ref() == Some(v)) {
                return Err(Error::Document(format!("{name} = {v} is not an admissible value")));
            }
        }
        if !bindings.symbolic {
            if let Some(missing) = self.doc.params.iter().find(|n| !bindings.values.contains_key(*n)) {
                return Err(Error::MissingParameter(missing.clone()));
            }
        }
        let names = self.all_names();
        let part = |terms: &[TermDoc], h_count: usize, what: &str| -> Result<MultiVector> {
            let w = terms_from_docs(terms, 2, &names, p)?;
            if !w.in_block(h_count) && !w.is_zero() {
                return Err(Error::Document(format!("{}: component {what} is outside its block", self.id())));
            }
            Ok(bindings.apply(&w))
        };
        Ok(Triple {
            a: part(&self.doc.a, 0, "a")?,
            b: part(&self.doc.b, 1, "b")?,
            c: part(&self.doc.c, 2, "c")?,
        })
    }
}

/// Values for entry parameters. In symbolic mode unbound continuous
/// parameters stay polynomial variables; discrete ones must always be bound.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub values: BTreeMap<String, Rat>,
    pub symbolic: bool,
}

impl Bindings {
    pub fn symbolic() -> Bindings {
        Bindings {
            values: BTreeMap::new(),
            symbolic: true,
        }
    }

    pub fn rational(values: BTreeMap<String, Rat>) -> Bindings {
        Bindings {
            values,
            symbolic: false,
        }
    }

    pub fn with(mut self, name: &str, value: Rat) -> Bindings {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn with_all(mut self, values: &BTreeMap<String, Rat>) -> Bindings {
        self.values.extend(values.iter().map(|(k, v)| (k.clone(), v.clone())));
        self
    }

    fn scalars(&self) -> BTreeMap<String, Scalar> {
        self.values
            .iter()
            .map(|(k, v)| (k.clone(), Scalar::from_rational(v.clone())))
            .collect()
    }

    pub fn substitute(&self, s: &Scalar) -> Scalar {
        s.substitute_all(&self.scalars())
    }

    pub fn apply(&self, w: &MultiVector) -> MultiVector {
        w.substitute_all(&self.scalars())
    }
}

/// The graded components of r = a + b + c.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub a: MultiVector,
    pub b: MultiVector,
    pub c: MultiVector,
}

impl Triple {
    pub fn r(&self) -> MultiVector {
        &(&self.a + &self.b) + &self.c
    }
}

/// The loaded catalog, ordered naturally by id (`row2` before `row10`).
#[derive(Clone, Debug)]
pub struct Catalog {
    algebra: InhomogeneousAlgebra,
    entries: Vec<CatalogEntry>,
}

/// Natural ordering of ids: digit runs compare numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, String)> {
        let mut out: Vec<(bool, String)> = Vec::new();
        for ch in s.chars() {
            let d = ch.is_ascii_digit();
            match out.last_mut() {
                Some((ld, buf)) if *ld == d => buf.push(ch),
                _ => out.push((d, ch.to_string())),
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x.0, y.0) {
            (true, true) => {
                let (nx, ny) = (x.1.trim_start_matches('0'), y.1.trim_start_matches('0'));
                nx.len().cmp(&ny.len()).then_with(|| nx.cmp(ny))
            }
            _ => x.1.cmp(&y.1),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len())
}

impl Catalog {
    pub fn empty() -> Catalog {
        Catalog {
            algebra: poincare(),
            entries: Vec::new(),
        }
    }

    pub fn from_entries(mut entries: Vec<CatalogEntry>) -> Result<Catalog> {
        entries.sort_by(|x, y| natural_cmp(x.id(), y.id()));
        for w in entries.windows(2) {
            if w[0].id() == w[1].id() {
                return Err(Error::Document(format!("duplicate entry id '{}'", w[0].id())));
            }
        }
        Ok(Catalog {
            algebra: poincare(),
            entries,
        })
    }

    /// Loads every `*.json` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Catalog> {
        let rd = fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let mut paths = Vec::new();
        for item in rd {
            let path = item.map_err(|e| Error::Io(e.to_string()))?.path();
            if path.extension().is_some_and(|x| x == "json") {
                paths.push(path);
            }
        }
        paths.sort();
        let entries = paths
            .par_iter()
            .map(|p| CatalogEntry::load(p))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(entries)
    }

    /// The directory named by `BIALG_CATALOG_DIR`, else the shipped catalog.
    pub fn default_dir() -> PathBuf {
        std::env::var_os(CATALOG_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CATALOG_DIR))
    }

    pub fn load_default() -> Result<Catalog> {
        Self::load_dir(&Self::default_dir())
    }

    pub fn algebra(&self) -> &InhomogeneousAlgebra {
        &self.algebra
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.id() == id)
            .ok_or(Error::UnknownEntry(id.to_string()))
    }

    /// Restricts to the given ids (all must exist).
    pub fn select(&self, ids: &[String]) -> Result<Catalog> {
        let entries = ids
            .iter()
            .map(|id| self.get(id).cloned())
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(entries)
    }
}

/// `build_entry(id, bindings)`: the exact components of a catalog entry.
pub fn build_entry(catalog: &Catalog, id: &str, bindings: &Bindings) -> Result<Triple> {
    catalog.get(id)?.build(catalog.algebra(), bindings)
}

/// Residuals of the four defining equations for one instantiation.
#[derive(Clone, Debug, PartialEq)]
pub struct VariantReport {
    /// Values of the discrete parameters.
    pub discrete: BTreeMap<String, Rat>,
    /// Rational values of the continuous parameters; `None` when symbolic.
    pub sample: Option<BTreeMap<String, Rat>>,
    /// [c, c]
    pub cc: MultiVector,
    /// [b, c]
    pub bc: MultiVector,
    /// 2[a, c] + [b, b] − tΩ
    pub bb: MultiVector,
    /// [a, b]
    pub ab: MultiVector,
    /// t solved from the Ω-coordinate of 2[a, c] + [b, b].
    pub t: Scalar,
    pub expected_t: Scalar,
    pub pass: bool,
}

impl VariantReport {
    pub fn residuals(&self) -> [(&'static str, &MultiVector); 4] {
        [("cc", &self.cc), ("bc", &self.bc), ("bb", &self.bb), ("ab", &self.ab)]
    }

    /// (equation, block of split3, number of terms) for every nonzero block.
    pub fn failing_blocks(&self) -> Vec<(&'static str, &'static str, usize)> {
        let mut out = Vec::new();
        for (eq, w) in self.residuals() {
            if w.is_zero() {
                continue;
            }
            let parts = w.split3().expect("graded algebra");
            for (name, block) in GradedComponents3::NAMES.iter().zip(parts.blocks()) {
                if !block.is_zero() {
                    out.push((eq, *name, block.num_terms()));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryReport {
    pub id: String,
    pub variants: Vec<VariantReport>,
    pub pass: bool,
}

/// Residuals for a triple; `t` is solved rather than assumed.
pub fn check_triple(
    p: &InhomogeneousAlgebra,
    triple: &Triple,
    expected_t: &Scalar,
) -> Result<VariantReport> {
    let Triple { a, b, c } = triple;
    let cc = schouten_bracket(c, c)?;
    let bc = schouten_bracket(b, c)?;
    let ab = schouten_bracket(a, b)?;
    let raw = &schouten_bracket(a, c)?.scale(&Scalar::from_int(2)) + &schouten_bracket(b, b)?;
    let omega = p.omega_invariant();
    let (coords, _) = span_decompose(&raw, std::slice::from_ref(&omega))?;
    let t = coords[0].clone();
    let bb = &raw - &omega.scale(&t);
    let pass = cc.is_zero() && bc.is_zero() && bb.is_zero() && ab.is_zero() && &t == expected_t;
    Ok(VariantReport {
        discrete: BTreeMap::new(),
        sample: None,
        cc,
        bc,
        bb,
        ab,
        t,
        expected_t: expected_t.clone(),
        pass,
    })
}

/// Verifies every discrete variant of an entry under the given bindings.
pub fn verify_entry(
    p: &InhomogeneousAlgebra,
    entry: &CatalogEntry,
    bindings: &Bindings,
) -> Result<EntryReport> {
    let mut variants = Vec::new();
    for variant in entry.variants()? {
        if variant.iter().any(|(k, v)| bindings.values.get(k).is_some_and(|b| b != v)) {
            continue;
        }
        let b = bindings.clone().with_all(&variant);
        let triple = entry.build(p, &b)?;
        let mut report = check_triple(p, &triple, &entry.expected_t(&b)?)?;
        report.discrete = variant;
        if !bindings.symbolic {
            report.sample = Some(
                bindings
                    .values
                    .iter()
                    .filter(|(k, _)| entry.params().contains(k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            );
        }
        variants.push(report);
    }
    if variants.is_empty() {
        return Err(Error::Document(format!("{}: no admissible discrete variant", entry.id())));
    }
    Ok(EntryReport {
        id: entry.id().to_string(),
        pass: variants.iter().all(|v| v.pass),
        variants,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Symbolic,
    /// `samples` random rational instantiations per entry, seeded.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub reports: Vec<EntryReport>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn passed(&self) -> usize {
        self.reports.iter().filter(|r| r.pass).count()
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.reports
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.id.as_str())
            .collect()
    }

    pub fn pass_set(&self) -> Vec<(&str, bool)> {
        self.reports.iter().map(|r| (r.id.as_str(), r.pass)).collect()
    }
}

/// FNV-1a, used to derive a per-entry seed that does not depend on order.
fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Random rational with numerator in [−9, 9] and denominator in [1, 5].
fn random_rational(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
}

/// The rational instantiations used for an entry in sampled mode.
pub fn sample_bindings(entry: &CatalogEntry, samples: usize, seed: u64) -> Vec<Bindings> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stable_hash(entry.id()));
    (0..samples)
        .map(|_| {
            Bindings::rational(
                entry
                    .params()
                    .iter()
                    .map(|n| (n.clone(), random_rational(&mut rng)))
                    .collect(),
            )
        })
        .collect()
}

/// Verifies one entry in the given mode.
pub fn verify_entry_in_mode(
    p: &InhomogeneousAlgebra,
    entry: &CatalogEntry,
    mode: VerifyMode,
) -> Result<EntryReport> {
    match mode {
        VerifyMode::Symbolic => verify_entry(p, entry, &Bindings::symbolic()),
        VerifyMode::Sampled { samples, seed } => {
            let mut variants = Vec::new();
            for b in sample_bindings(entry, samples, seed) {
                variants.extend(verify_entry(p, entry, &b)?.variants);
            }
            Ok(EntryReport {
                id: entry.id().to_string(),
                pass: variants.iter().all(|v| v.pass),
                variants,
            })
        }
    }
}

/// Runs the verifier over the whole catalog; reports are ordered by id.
pub fn verify_all(catalog: &Catalog, mode: VerifyMode) -> Result<Summary> {
    let p = catalog.algebra();
    let reports = catalog
        .entries()
        .par_iter()
        .map(|e| verify_entry_in_mode(p, e, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(Summary { reports })
}

/// b(g*) = V₀ ⋊ h₀ for b ∈ V∧h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularDecomposition {
    /// V₀ = b(h*), in coordinates over the V part of the basis.
    pub v0: Subspace,
    /// h₀ = b(V*), in coordinates over the h part of the basis.
    pub h0: Subspace,
    /// [h₀, h₀] ⊆ h₀.
    pub h0_closed: bool,
    /// [h₀, V₀] ⊆ V₀.
    pub normalizes_v0: bool,
}

impl TriangularDecomposition {
    pub fn is_subalgebra(&self) -> bool {
        self.h0_closed && self.normalizes_v0
    }
}

fn embed(alg: &std::sync::Arc<crate::lie::LieAlgebra>, idx: &[usize], v: &[Rat]) -> MultiVector {
    let mut coords = vec![Scalar::zero(); alg.dim()];
    for (&i, c) in idx.iter().zip(v) {
        coords[i] = Scalar::from_rational(c.clone());
    }
    MultiVector::from_vector(alg, &coords)
}

fn restrict(w: &MultiVector, idx: &[usize]) -> Vec<Rat> {
    let c = w.coords();
    idx.iter()
        .map(|&i| c[i].to_rational().expect("rational"))
        .collect()
}

pub fn triangular_decomposition(b: &MultiVector) -> Result<TriangularDecomposition> {
    if b.degree() != 2 || (!b.in_block(1) && !b.is_zero()) {
        return Err(Error::NotMixedBlock);
    }
    if !b.is_rational() {
        return Err(Error::Parameterized);
    }
    let alg = b.algebra();
    let gr = alg.grading().ok_or(Error::NotGraded)?;
    let (vi, hi) = (gr.v().to_vec(), gr.h().to_vec());
    let n = alg.dim();
    let image = |idx: &[usize], onto: &[usize]| -> Result<Subspace> {
        let vecs = idx
            .iter()
            .map(|&i| Ok(restrict(&crate::exterior::contract(&crate::exterior::Form::dual_basis(n, i), b)?, onto)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(onto.len(), vecs))
    };
    let v0 = image(&hi, &vi)?;
    let h0 = image(&vi, &hi)?;
    let v0_el: Vec<MultiVector> = v0.basis().iter().map(|v| embed(alg, &vi, v)).collect();
    let h0_el: Vec<MultiVector> = h0.basis().iter().map(|v| embed(alg, &hi, v)).collect();
    let mut h0_closed = true;
    for (i, x) in h0_el.iter().enumerate() {
        for y in &h0_el[i + 1..] {
            h0_closed &= h0.contains(&restrict(&x.act(y), &hi));
        }
    }
    let normalizes_v0 = h0_el
        .iter()
        .all(|x| v0_el.iter().all(|v| v0.contains(&restrict(&x.act(v), &vi))));
    Ok(TriangularDecomposition {
        v0,
        h0,
        h0_closed,
        normalizes_v0,
    })
}

/// How many parameters the dilation and H-flow torus removes from an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialReport {
    pub id: String,
    /// Continuous parameters in the entry.
    pub params: usize,
    /// Dimension of the orbit directions of the torus in parameter space.
    pub removable: usize,
    /// params − removable: the count reached by explicit moves.
    pub achieved: usize,
    /// The documented count, if any.
    pub documented: Option<usize>,
    /// Every torus direction was re-checked by applying the actual moves.
    pub moves_verified: bool,
}

impl EssentialReport {
    /// The documented count is reached (or beaten) by explicit moves.
    pub fn bound_realized(&self) -> bool {
        self.documented.is_none_or(|d| self.achieved <= d)
    }

    /// Explicit moves reach fewer parameters than documented.
    pub fn fewer_than_documented(&self) -> bool {
        self.documented.is_some_and(|d| self.achieved < d)
    }
}

/// Analyses the essential-parameter count of an entry under the torus
/// generated by the dilations (v, X) ↦ (λv, X) and the flow of H.
///
/// A torus element with logarithmic coordinates τ = (τ_D, τ_H) multiplies
/// each light-cone term by exp(w·τ); it maps the family to itself with
/// parameters rescaled by exp(u_p) exactly when every monomial satisfies
/// Σ e_p u_p = w·τ. The directions u reachable this way are removable.
pub fn essential_parameters(p: &InhomogeneousAlgebra, entry: &CatalogEntry) -> Result<EssentialReport> {
    let params = entry.params().to_vec();
    let n = params.len();
    let variant = entry.variants()?.into_iter().next().unwrap_or_default();
    let triple = entry.build(p, &Bindings::symbolic().with_all(&variant))?;
    let r = triple.r();
    let basis = p.light_cone_basis()?;
    let h = p.named("H")?;
    let gr = p.algebra().grading().ok_or(Error::NotGraded)?;
    let weights: Vec<(i64, Rat)> = basis
        .iter()
        .map(|u| {
            let dil = if u.terms().all(|(t, _)| !gr.is_h(t[0])) { 1 } else { 0 };
            let (lam, res) = span_decompose(&h.act(u), std::slice::from_ref(u))?;
            if !res.is_zero() {
                return Err(Error::Document("light-cone basis is not H-diagonal".into()));
            }
            Ok((dil, lam[0].to_rational().ok_or(Error::Parameterized)?))
        })
        .collect::<Result<_>>()?;
    // Unknowns: (τ_D, τ_H, u_1, …, u_n).
    let mut rows: Vec<Vec<(usize, Rat)>> = Vec::new();
    for (t, c) in p.light_cone_terms(&r)? {
        let wd: i64 = t.iter().map(|&i| weights[i].0).sum();
        let wh: Rat = t.iter().map(|&i| weights[i].1.clone()).fold(Rat::zero(), |a, b| a + b);
        for (mono, _) in c.terms() {
            let mut row: Vec<(usize, Rat)> = Vec::new();
            if wd != 0 {
                row.push((0, Rat::from_integer((-wd).into())));
            }
            if !wh.is_zero() {
                row.push((1, -wh.clone()));
            }
            for (k, name) in params.iter().enumerate() {
                let e = mono.exponent(name);
                if e != 0 {
                    row.push((2 + k, Rat::from_integer(e.into())));
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    let sol = Subspace::nullspace(2 + n, rows.clone());
    let mut fixed_rows = rows;
    fixed_rows.extend((0..n).map(|k| vec![(2 + k, Rat::one())]));
    let trivial = Subspace::nullspace(2 + n, fixed_rows);
    let removable = sol.dim() - trivial.dim();

    // Re-check each direction with the actual moves at multiplier 2^τ.
    let two = Rat::from_integer(2.into());
    let pow2 = |e: &Rat| -> Rat {
        let k: i64 = e.to_integer().try_into().unwrap_or(0);
        if k >= 0 {
            num::pow::pow(two.clone(), k as usize)
        } else {
            num::pow::pow(two.recip(), (-k) as usize)
        }
    };
    let mut moves_verified = true;
    for dir in sol.basis() {
        let lcm = dir
            .iter()
            .fold(num::BigInt::one(), |acc, q| num::integer::lcm(acc, q.denom().clone()));
        let dir: Vec<Rat> = dir.iter().map(|q| q * Rat::from_integer(lcm.clone())).collect();
        let dil = AutomorphismMove::dilation(p.algebra(), Scalar::from_rational(pow2(&dir[0])))?;
        let flow = AutomorphismMove::diagonal_flow(&h, pow2(&dir[1]))?;
        let moved = flow.apply(&dil.apply(&r)?)?;
        let subst: BTreeMap<String, Scalar> = params
            .iter()
            .enumerate()
            .map(|(k, name)| (name.clone(), Scalar::var(name).scale(&pow2(&dir[2 + k]))))
            .collect();
        moves_verified &= moved == r.substitute_all(&subst);
    }
    Ok(EssentialReport {
        id: entry.id().to_string(),
        params: n,
        removable,
        achieved: n - removable,
        documented: entry.doc.essential,
        moves_verified,
    })
}
