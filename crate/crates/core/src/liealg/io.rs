//! JSON file formats for algebras and setups.
//!
//! Algebra file (indices are 0-based):
//!
//! ```json
//! { "dim": 3, "basis": ["e", "h", "f"],
//!   "brackets": [[0, 2, [[1, "1"]]], [1, 0, [[0, "2"]]]],
//!   "form": [["0","0","1"], ["0","2","0"], ["1","0","0"]] }
//! ```
//!
//! A setup file carries the same keys plus `triple`, `grading`,
//! `isotropic`, `a` and optionally `slice_basis` / `transverse_basis` / `image_basis`.
//! Omitted bracket pairs are zero; the antisymmetric partner of every given
//! pair is filled in on load.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rational::{fmt_q, parse_q, Q};

use super::{derive_subspaces, GradedSetup, Grading, LieAlgebra, SL2Triple, SetupInputs};

/// `(i, j, [(k, c)])`: `[x_i, x_j] = Σ c x_k`.
pub type BracketLine = (usize, usize, Vec<(usize, String)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketLine>,
    pub form: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleFile {
    pub e: Vec<String>,
    pub h: Vec<String>,
    pub f: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetupFile {
    #[serde(flatten)]
    pub algebra: AlgebraFile,
    pub triple: TripleFile,
    pub grading: Vec<i64>,
    #[serde(default)]
    pub isotropic: Vec<Vec<String>>,
    pub a: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice_basis: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transverse_basis: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_basis: Option<Vec<Vec<String>>>,
}

fn parse_vec(v: &[String], n: usize, what: &str) -> Result<Vector> {
    if v.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{what} has {} entries, expected {n}",
            v.len()
        )));
    }
    v.iter().map(|s| parse_q(s)).collect()
}

fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

impl AlgebraFile {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let n = g.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms = g.bracket_basis(i, j);
                if !terms.is_empty() {
                    brackets.push((i, j, terms.iter().map(|(k, c)| (*k, fmt_q(c))).collect()));
                }
            }
        }
        let fm = g.form_matrix();
        AlgebraFile {
            dim: n,
            basis: g.labels().to_vec(),
            brackets,
            form: (0..n).map(|i| fmt_vec(&fm.row(i))).collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        if self.basis.len() != self.dim {
            return Err(Error::InvalidDimension(format!(
                "dim = {} but {} basis labels",
                self.dim,
                self.basis.len()
            )));
        }
        let rows: Vec<Vector> = self
            .form
            .iter()
            .map(|r| parse_vec(r, self.dim, "form row"))
            .collect::<Result<_>>()?;
        if rows.len() != self.dim {
            return Err(Error::ShapeMismatch("form has wrong number of rows".into()));
        }
        let entries = self
            .brackets
            .iter()
            .map(|(i, j, terms)| {
                let terms = terms
                    .iter()
                    .map(|(k, c)| Ok((*k, parse_q(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((*i, *j, terms))
            })
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::from_brackets(self.basis.clone(), &entries, Matrix::from_rows(&rows))
    }
}

impl SetupFile {
    pub fn from_inputs(inputs: &SetupInputs) -> Self {
        let g = &inputs.algebra;
        SetupFile {
            algebra: AlgebraFile::from_algebra(g),
            triple: TripleFile {
                e: fmt_vec(&inputs.triple.e),
                h: fmt_vec(&inputs.triple.h),
                f: fmt_vec(&inputs.triple.f),
            },
            grading: inputs.grading.deg.clone(),
            isotropic: inputs.isotropic.iter().map(|v| fmt_vec(v)).collect(),
            a: fmt_vec(&inputs.a),
            slice_basis: inputs
                .slice_basis
                .as_ref()
                .map(|b| b.iter().map(|v| fmt_vec(v)).collect()),
            transverse_basis: inputs
                .transverse_basis
                .as_ref()
                .map(|b| b.iter().map(|v| fmt_vec(v)).collect()),
            image_basis: inputs
                .image_basis
                .as_ref()
                .map(|b| b.iter().map(|v| fmt_vec(v)).collect()),
        }
    }

    pub fn to_inputs(&self) -> Result<SetupInputs> {
        let g = self.algebra.to_algebra()?;
        let n = g.dim();
        let triple = SL2Triple {
            e: parse_vec(&self.triple.e, n, "triple.e")?,
            h: parse_vec(&self.triple.h, n, "triple.h")?,
            f: parse_vec(&self.triple.f, n, "triple.f")?,
        };
        let vecs = |vs: &[Vec<String>], what: &str| -> Result<Vec<Vector>> {
            vs.iter().map(|v| parse_vec(v, n, what)).collect()
        };
        let isotropic = vecs(&self.isotropic, "isotropic vector")?;
        let a = parse_vec(&self.a, n, "a")?;
        let slice_basis = self
            .slice_basis
            .as_ref()
            .map(|b| vecs(b, "slice basis vector"))
            .transpose()?;
        let transverse_basis = self
            .transverse_basis
            .as_ref()
            .map(|b| vecs(b, "transverse basis vector"))
            .transpose()?;
        let image_basis = self
            .image_basis
            .as_ref()
            .map(|b| vecs(b, "image basis vector"))
            .transpose()?;
        Ok(SetupInputs {
            algebra: g,
            triple,
            grading: Grading::new(self.grading.clone()),
            isotropic,
            a,
            slice_basis,
            transverse_basis,
            image_basis,
        })
    }

    pub fn to_setup(&self) -> Result<GradedSetup> {
        derive_subspaces(self.to_inputs()?)
    }
}

pub fn parse_algebra_json(text: &str) -> Result<LieAlgebra> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra JSON: {e}")))?;
    file.to_algebra()
}

pub fn parse_setup_json(text: &str) -> Result<SetupInputs> {
    let file: SetupFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("setup JSON: {e}")))?;
    file.to_inputs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_sl_n;

    #[test]
    fn algebra_roundtrip() {
        let g = build_sl_n(3).unwrap();
        let text = serde_json::to_string(&AlgebraFile::from_algebra(&g)).unwrap();
        let back = parse_algebra_json(&text).unwrap();
        assert_eq!(back.labels(), g.labels());
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                assert_eq!(back.bracket_basis(i, j), g.bracket_basis(i, j));
            }
        }
        assert_eq!(back.form_matrix(), g.form_matrix());
    }

    #[test]
    fn hand_written_sl2() {
        let text = r#"{ "dim": 3, "basis": ["e", "h", "f"],
            "brackets": [[0, 2, [[1, "1"]]], [1, 0, [[0, "2"]]], [1, 2, [[2, "-2"]]]],
            "form": [["0","0","1"], ["0","2","0"], ["1","0","0"]] }"#;
        let g = parse_algebra_json(text).unwrap();
        assert!(g.validate().is_ok());
        let e = g.basis_vector(0);
        let h = g.basis_vector(1);
        assert_eq!(g.bracket(&e, &h), crate::linalg::scale(&crate::rational::q(-2), &e));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(parse_algebra_json("{ not json"), Err(Error::Parse(_))));
        let floats = r#"{ "dim": 1, "basis": ["x"], "brackets": [], "form": [["0.5"]] }"#;
        assert!(matches!(parse_algebra_json(floats), Err(Error::Parse(_))));
    }
}
