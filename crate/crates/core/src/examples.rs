//! Built-in setups: KdV on sl2 and the fractional KdV family on sl3 with
//! its admissible gradings, isotropic subspaces and choices of `a`, plus
//! reference tables to compare reductions against.
//!
//! Reference tables are stored at `ε = 1` in the text format of
//! [`BracketTable`]. The sl3 variants share one slice frame
//! `[e31, e32, e21, h1-h2]`, so reductions of different variants are
//! comparable as operators.

use crate::diffalg::{parse_poly, DiffPoly};
use crate::error::{Error, Result};
use crate::liealg::{
    build_sl_n, dynkin_grading, sl2_from_partition, Grading, LieAlgebra, SetupInputs,
};
use crate::lpb::BracketTable;
use crate::rational::{frac, q, Q};

pub const REFERENCE_KDV: &str = include_str!("../golden/reference_kdv.txt");
pub const REFERENCE_FKDV_P2: &str = include_str!("../golden/reference_fkdv_p2.txt");
pub const REFERENCE_FKDV_P1_A_PLUS: &str = include_str!("../golden/reference_fkdv_p1_a_plus.txt");
pub const REFERENCE_GENERATORS_A_PLUS: &str = include_str!("../golden/reference_generators_a_plus.txt");
pub const REFERENCE_GENERATORS_A_E21: &str = include_str!("../golden/reference_generators_a_e21.txt");

const NAMES: [&str; 2] = ["kdv", "fkdv"];

pub fn available() -> &'static [&'static str] {
    &NAMES
}

/// sl2, principal triple, Dynkin grading, `a = f`. Points are written
/// `q_f f + q_h h/2 + q_e e`, coordinates ordered `(q_f, q_h, q_e)`.
pub fn kdv() -> SetupInputs {
    let g = build_sl_n(2).expect("sl2");
    let t = sl2_from_partition(&g, 2, &[2]).expect("regular triple");
    let gr = dynkin_grading(&g, &t.h).expect("dynkin grading");
    let a = t.f.clone();
    let image = vec![t.h.iter().map(|c| c * frac(1, 2)).collect(), t.e.clone()];
    SetupInputs::new(g, t, gr, a).with_image_basis(image)
}

fn el(g: &LieAlgebra, s: &str) -> Vec<Q> {
    g.parse_element(s).expect("builtin element")
}

/// Grading named `G1`, `G2` or `G3` on sl3, with the minimal triple.
pub fn sl3_grading(g: &LieAlgebra, name: &str) -> Result<Grading> {
    match name {
        "G1" => {
            let t = sl2_from_partition(g, 3, &[2, 1])?;
            dynkin_grading(g, &t.h)
        }
        "G2" => Grading::from_sl_matrix(g, &[vec![0, 0, 2], vec![0, 0, 2], vec![-2, -2, 0]]),
        "G3" => Grading::from_sl_matrix(g, &[vec![0, 2, 2], vec![-2, 0, 0], vec![-2, 0, 0]]),
        _ => Err(Error::InvalidGrading(format!(
            "unknown sl3 grading {name:?} (expected G1, G2 or G3)"
        ))),
    }
}

fn fkdv_variant(grading: &str, isotropic: &[&str], a: &str, transverse: &[&str]) -> SetupInputs {
    let g = build_sl_n(3).expect("sl3");
    let t = sl2_from_partition(&g, 3, &[2, 1]).expect("minimal triple");
    let gr = sl3_grading(&g, grading).expect("builtin grading");
    let iso = isotropic.iter().map(|s| el(&g, s)).collect();
    let slice = ["e31", "e32", "e21", "h1-h2"].iter().map(|s| el(&g, s)).collect();
    let trans = transverse.iter().map(|s| el(&g, s)).collect();
    let a = el(&g, a);
    SetupInputs::new(g, t, gr, a)
        .with_isotropic(iso)
        .with_slice_basis(slice)
        .with_transverse_basis(trans)
}

/// Every admissible sl3 minimal setup, named
/// `<grading>_<isotropic>_a_<a>`.
pub fn fkdv_variants() -> Vec<(&'static str, SetupInputs)> {
    vec![
        (
            "g1_lplus_a_plus",
            fkdv_variant("G1", &["e21+e32"], "e21+e32", &["h1+h2", "e12-e23"]),
        ),
        (
            "g1_lplus_a_e31",
            fkdv_variant("G1", &["e21+e32"], "e31", &["h1+h2", "e12-e23"]),
        ),
        (
            "g1_lminus_a_minus",
            fkdv_variant("G1", &["e21-e32"], "e21-e32", &["h1+h2", "e12+e23"]),
        ),
        (
            "g1_lminus_a_e31",
            fkdv_variant("G1", &["e21-e32"], "e31", &["h1+h2", "e12+e23"]),
        ),
        ("g1_l0_a_e31", fkdv_variant("G1", &[], "e31", &["h1+h2"])),
        ("g2_a_e32", fkdv_variant("G2", &[], "e32", &["h1+h2", "e12"])),
        ("g2_a_e31", fkdv_variant("G2", &[], "e31", &["h1+h2", "e12"])),
        ("g3_a_e21", fkdv_variant("G3", &[], "e21", &["h1+h2", "e23"])),
        ("g3_a_e31", fkdv_variant("G3", &[], "e31", &["h1+h2", "e23"])),
    ]
}

/// The default sl3 setup: Dynkin grading, `ℓ = span(e21+e32)`,
/// `a = e21+e32`.
pub fn fkdv() -> SetupInputs {
    fkdv_variants().swap_remove(0).1
}

/// Setups for a named example.
pub fn example(name: &str) -> Result<Vec<(&'static str, SetupInputs)>> {
    match name {
        "kdv" => Ok(vec![("kdv", kdv())]),
        "fkdv" => Ok(fkdv_variants()),
        _ => Err(Error::UnknownExample {
            name: name.to_string(),
            available: NAMES.join(", "),
        }),
    }
}

/// Reference tables shipped for a named example, as `(file name, text)`.
pub fn golden_tables(name: &str) -> Result<Vec<(&'static str, &'static str)>> {
    match name {
        "kdv" => Ok(vec![("reference_kdv.txt", REFERENCE_KDV)]),
        "fkdv" => Ok(vec![
            ("reference_fkdv_p2.txt", REFERENCE_FKDV_P2),
            ("reference_fkdv_p1_a_plus.txt", REFERENCE_FKDV_P1_A_PLUS),
            ("reference_generators_a_plus.txt", REFERENCE_GENERATORS_A_PLUS),
            ("reference_generators_a_e21.txt", REFERENCE_GENERATORS_A_E21),
        ]),
        _ => Err(Error::UnknownExample {
            name: name.to_string(),
            available: NAMES.join(", "),
        }),
    }
}

pub fn parse_table(text: &str) -> Result<BracketTable> {
    BracketTable::parse_text(text, "q")
}

/// `qN = <poly>` lines; `#` starts a comment.
pub fn parse_generators(text: &str, prefix: &str) -> Result<Vec<DiffPoly>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected `qN = ...`, got {line:?}")))?;
        let idx: usize = lhs
            .trim()
            .strip_prefix('q')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad generator name {:?}", lhs.trim())))?;
        if idx != out.len() + 1 {
            return Err(Error::Parse(format!(
                "generator q{idx} out of order (expected q{})",
                out.len() + 1
            )));
        }
        out.push(parse_poly(rhs, prefix)?);
    }
    Ok(out)
}

/// Sets `ε = 1`.
pub fn at_eps_one(p: &DiffPoly) -> DiffPoly {
    p.eval_params(None, Some(&q(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::derive_subspaces;

    #[test]
    fn all_variants_derive() {
        for (name, inp) in fkdv_variants() {
            let s = derive_subspaces(inp).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.slice_dim(), 4, "{name}");
        }
        assert_eq!(derive_subspaces(kdv()).unwrap().slice_dim(), 1);
    }

    #[test]
    fn unknown_name_lists_available() {
        let err = example("boussinesq").unwrap_err();
        assert_eq!(err.to_string(), "unknown example \"boussinesq\"; available: kdv, fkdv");
        assert!(golden_tables("x").is_err());
    }

    #[test]
    fn shipped_tables_parse() {
        assert_eq!(parse_table(REFERENCE_KDV).unwrap().fields, 1);
        assert_eq!(parse_table(REFERENCE_FKDV_P2).unwrap().entries.len(), 7);
        assert_eq!(parse_table(REFERENCE_FKDV_P1_A_PLUS).unwrap().entries.len(), 4);
        assert_eq!(parse_generators(REFERENCE_GENERATORS_A_PLUS, "s").unwrap().len(), 4);
        assert_eq!(parse_generators(REFERENCE_GENERATORS_A_E21, "s").unwrap().len(), 4);
    }

    #[test]
    fn generator_lines_in_order() {
        assert!(parse_generators("q2 = s1", "s").is_err());
        assert!(parse_generators("q1 s1", "s").is_err());
    }
}
