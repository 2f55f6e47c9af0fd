//! JSON-compatible text documents for algebras and multivectors.
//!
//! Rationals and polynomial coefficients are written as strings
//! (`"3/2"`, `"3/2*a1 - b^2"`). A multivector term names its basis element in
//! one of three ways: raw `indices`, a list of `labels` that are wedged
//! together, or a single named `element` (e.g. `"b_e+"` or `"Omega"`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::MultiVector;
use crate::lie::LieAlgebra;
use crate::poincare::InhomogeneousAlgebra;
use crate::scalar::Scalar;

/// One nonzero bracket `[e_i, e_j] = Σ_k coeffs[k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingDoc {
    #[serde(rename = "V")]
    pub v: Vec<usize>,
    pub h: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub dim: usize,
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub coeff: String,
}

impl TermDoc {
    pub fn indices(indices: Vec<usize>, coeff: impl Into<String>) -> TermDoc {
        TermDoc {
            indices: Some(indices),
            labels: None,
            element: None,
            coeff: coeff.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiVectorDoc {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    pub terms: Vec<TermDoc>,
}

/// Turns labels into elements of a fixed algebra.
pub trait LabelResolver {
    fn algebra(&self) -> &Arc<LieAlgebra>;
    fn resolve(&self, label: &str) -> Result<MultiVector>;
}

impl LabelResolver for Arc<LieAlgebra> {
    fn algebra(&self) -> &Arc<LieAlgebra> {
        self
    }

    fn resolve(&self, label: &str) -> Result<MultiVector> {
        self.index_of(label)
            .map(|i| MultiVector::basis(self, i))
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

impl LabelResolver for InhomogeneousAlgebra {
    fn algebra(&self) -> &Arc<LieAlgebra> {
        InhomogeneousAlgebra::algebra(self)
    }

    fn resolve(&self, label: &str) -> Result<MultiVector> {
        self.named(label)
    }
}

/// Wraps a JSON error with its line and column.
pub fn json_error(context: &str, e: &serde_json::Error) -> Error {
    Error::Document(format!(
        "{context}: line {}, column {}: {e}",
        e.line(),
        e.column()
    ))
}

fn parse_rational_string(s: &str) -> Result<Scalar> {
    let v = Scalar::parse_with(s, Some(&[]))?;
    if v.is_rational() {
        Ok(v)
    } else {
        Err(Error::ParameterizedConstants(0, 0))
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<LieAlgebra> {
    if doc.labels.len() != doc.dim {
        return Err(Error::DimensionMismatch {
            expected: doc.dim,
            got: doc.labels.len(),
        });
    }
    let mut brackets = Vec::with_capacity(doc.brackets.len());
    for br in &doc.brackets {
        if br.i >= doc.dim || br.j >= doc.dim {
            return Err(Error::Document(format!("bracket index out of range: ({}, {})", br.i, br.j)));
        }
        let mut coeffs = Vec::with_capacity(br.coeffs.len());
        for (k, v) in &br.coeffs {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Document(format!("bad basis index '{k}'")))?;
            if k >= doc.dim {
                return Err(Error::Document(format!("basis index {k} out of range")));
            }
            let c = parse_rational_string(v).map_err(|e| match e {
                Error::ParameterizedConstants(..) => Error::ParameterizedConstants(br.i, br.j),
                other => other,
            })?;
            coeffs.push((k, c));
        }
        brackets.push((br.i, br.j, coeffs));
    }
    let grading = doc.grading.as_ref().map(|g| (g.v.clone(), g.h.clone()));
    LieAlgebra::from_brackets(doc.labels.clone(), &brackets, grading)
}

pub fn algebra_to_doc(alg: &LieAlgebra) -> AlgebraDoc {
    let n = alg.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let br = alg.bracket_basis(i, j);
            if br.is_empty() {
                continue;
            }
            let coeffs = br
                .iter()
                .map(|(k, c)| (k.to_string(), Scalar::from_rational(c.clone()).to_string()))
                .collect();
            brackets.push(BracketDoc { i, j, coeffs });
        }
    }
    AlgebraDoc {
        dim: n,
        labels: alg.labels().to_vec(),
        brackets,
        grading: alg.grading().map(|g| GradingDoc {
            v: g.v().to_vec(),
            h: g.h().to_vec(),
        }),
    }
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    let doc: AlgebraDoc = serde_json::from_str(text).map_err(|e| json_error("algebra", &e))?;
    algebra_from_doc(&doc)
}

/// Builds the term list of a degree-`degree` multivector. `params` are the
/// identifiers allowed inside coefficient strings.
pub fn terms_from_docs<R: LabelResolver + ?Sized>(
    terms: &[TermDoc],
    degree: usize,
    params: &[String],
    resolver: &R,
) -> Result<MultiVector> {
    let alg = resolver.algebra();
    let mut out = MultiVector::zero(alg, degree);
    for (n, term) in terms.iter().enumerate() {
        let coeff = Scalar::parse_with(&term.coeff, Some(params))?;
        let given = [term.indices.is_some(), term.labels.is_some(), term.element.is_some()];
        if given.iter().filter(|b| **b).count() != 1 {
            return Err(Error::Document(format!(
                "term {n}: exactly one of 'indices', 'labels', 'element' is required"
            )));
        }
        let base = if let Some(ix) = &term.indices {
            if let Some(&bad) = ix.iter().find(|&&i| i >= alg.dim()) {
                return Err(Error::Document(format!("term {n}: index {bad} out of range")));
            }
            MultiVector::from_terms(alg, ix.len(), [(ix.clone(), Scalar::one())])?
        } else if let Some(labels) = &term.labels {
            let mut acc = MultiVector::scalar(alg, Scalar::one());
            for l in labels {
                acc = acc.wedge(&resolver.resolve(l)?)?;
            }
            acc
        } else {
            resolver.resolve(term.element.as_deref().unwrap_or_default())?
        };
        if base.degree() != degree {
            return Err(Error::Document(format!(
                "term {n}: degree {} where {degree} is expected",
                base.degree()
            )));
        }
        out = &out + &base.scale(&coeff);
    }
    Ok(out)
}

pub fn multivector_from_doc<R: LabelResolver + ?Sized>(
    doc: &MultiVectorDoc,
    resolver: &R,
) -> Result<MultiVector> {
    terms_from_docs(&doc.terms, doc.degree, &doc.params, resolver)
}

/// Canonical document: storage indices, coefficients as polynomial strings.
pub fn multivector_to_doc(w: &MultiVector) -> MultiVectorDoc {
    MultiVectorDoc {
        degree: w.degree(),
        params: w.variables().into_iter().collect(),
        terms: w
            .terms()
            .map(|(t, c)| TermDoc::indices(t.clone(), c.to_string()))
            .collect(),
    }
}

pub fn parse_multivector<R: LabelResolver + ?Sized>(text: &str, resolver: &R) -> Result<MultiVector> {
    let doc: MultiVectorDoc =
        serde_json::from_str(text).map_err(|e| json_error("multivector", &e))?;
    multivector_from_doc(&doc, resolver)
}
