use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Q;

use super::{LieAlgebra, SL2Triple};

/// Integer grading of a Lie algebra, one degree per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub deg: Vec<i64>,
}

impl Grading {
    pub fn new(deg: Vec<i64>) -> Self {
        Grading { deg }
    }

    /// For `sl_n`: `degrees[i][j]` is the degree of `e_ij`; Cartan elements
    /// get degree 0.
    pub fn from_sl_matrix(g: &LieAlgebra, degrees: &[Vec<i64>]) -> Result<Self> {
        let n = g
            .matrix_size()
            .ok_or_else(|| Error::InvalidGrading("degree matrix needs an sl_n algebra".into()))?;
        if degrees.len() != n || degrees.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGrading(format!("degree matrix must be {n}x{n}")));
        }
        let mut deg = Vec::with_capacity(g.dim());
        for (i, row) in degrees.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if i != j {
                    deg.push(d);
                }
            }
        }
        deg.extend(std::iter::repeat_n(0, n - 1));
        Ok(Grading { deg })
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.deg.iter().copied().collect()
    }

    pub fn min_degree(&self) -> i64 {
        self.deg.iter().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.deg.iter().copied().max().unwrap_or(0)
    }

    /// Basis indices spanning `g_j`.
    pub fn piece(&self, j: i64) -> Vec<usize> {
        (0..self.deg.len()).filter(|&i| self.deg[i] == j).collect()
    }

    /// Whether `v` lies in `g_j`.
    pub fn in_piece(&self, v: &[Q], j: i64) -> bool {
        v.iter()
            .zip(&self.deg)
            .all(|(c, &d)| c.is_zero() || d == j)
    }

    /// Whether `v` lies in `⊕_{i <= j} g_i`.
    pub fn at_most(&self, v: &[Q], j: i64) -> bool {
        v.iter()
            .zip(&self.deg)
            .all(|(c, &d)| c.is_zero() || d <= j)
    }

    /// `[g_i, g_j] ⊆ g_{i+j}` on basis pairs.
    pub fn respects_bracket(&self, g: &LieAlgebra) -> bool {
        let n = g.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                g.bracket_basis(i, j)
                    .iter()
                    .all(|(k, _)| self.deg[*k] == self.deg[i] + self.deg[j])
            })
        })
    }
}

/// Grading by `ad h` eigenvalues. Fails unless every basis element is an
/// eigenvector of `ad h` with an integer eigenvalue.
pub fn dynkin_grading(g: &LieAlgebra, h: &[Q]) -> Result<Grading> {
    let mut deg = Vec::with_capacity(g.dim());
    for j in 0..g.dim() {
        let img = g.bracket(h, &g.basis_vector(j));
        if img.iter().enumerate().any(|(k, c)| k != j && !c.is_zero()) {
            return Err(Error::InvalidGrading(format!(
                "ad h is not diagonal on basis element {}",
                g.labels()[j]
            )));
        }
        let ev = &img[j];
        if !ev.is_integer() {
            return Err(Error::InvalidGrading(format!(
                "ad h eigenvalue on {} is not an integer",
                g.labels()[j]
            )));
        }
        deg.push(
            ev.to_integer()
                .try_into()
                .map_err(|_| Error::InvalidGrading("eigenvalue out of range".into()))?,
        );
    }
    Ok(Grading { deg })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: i64,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub needs_injective: bool,
    pub needs_surjective: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingReport {
    pub respects_bracket: bool,
    pub f_in_minus_two: bool,
    pub h_in_zero: bool,
    pub e_in_two: bool,
    pub per_degree: Vec<DegreeCheck>,
}

impl GradingReport {
    pub fn passed(&self) -> bool {
        self.respects_bracket
            && self.f_in_minus_two
            && self.h_in_zero
            && self.e_in_two
            && self.per_degree.iter().all(|d| d.ok)
    }

    /// First failing condition, for diagnostics.
    pub fn first_failure(&self) -> Option<String> {
        if !self.respects_bracket {
            return Some("grading does not respect the bracket".into());
        }
        if !self.f_in_minus_two {
            return Some("f is not in g_-2".into());
        }
        if !self.h_in_zero {
            return Some("h is not in g_0".into());
        }
        if !self.e_in_two {
            return Some("e is not in g_2".into());
        }
        self.per_degree.iter().find(|d| !d.ok).map(|d| {
            let what = if d.needs_injective && d.dim_source != d.rank {
                "injective"
            } else {
                "surjective"
            };
            format!("ad f: g_{} -> g_{} is not {what}", d.degree, d.degree - 2)
        })
    }
}

/// Checks the good-grading axioms for `f`: `ad f: g_j -> g_{j-2}` is
/// injective for `j >= 1` and surjective for `j <= 1`, plus compatibility of
/// the triple with the grading.
pub fn verify_good_grading(g: &LieAlgebra, triple: &SL2Triple, grading: &Grading) -> GradingReport {
    let ad_f = g.ad(&triple.f);
    let lo = grading.min_degree() - 2;
    let hi = grading.max_degree() + 2;
    let mut per_degree = Vec::new();
    for j in lo..=hi {
        let src = grading.piece(j);
        let tgt = grading.piece(j - 2);
        if src.is_empty() && tgt.is_empty() {
            continue;
        }
        let mut sub = Matrix::zeros(tgt.len(), src.len());
        for (r, &t) in tgt.iter().enumerate() {
            for (c, &s) in src.iter().enumerate() {
                sub[(r, c)] = ad_f[(t, s)].clone();
            }
        }
        let rank = if src.is_empty() || tgt.is_empty() { 0 } else { sub.rank() };
        let needs_injective = j >= 1;
        let needs_surjective = j <= 1;
        let ok = (!needs_injective || rank == src.len()) && (!needs_surjective || rank == tgt.len());
        per_degree.push(DegreeCheck {
            degree: j,
            dim_source: src.len(),
            dim_target: tgt.len(),
            rank,
            needs_injective,
            needs_surjective,
            ok,
        });
    }
    GradingReport {
        respects_bracket: grading.respects_bracket(g),
        f_in_minus_two: grading.in_piece(&triple.f, -2),
        h_in_zero: grading.in_piece(&triple.h, 0),
        e_in_two: grading.in_piece(&triple.e, 2),
        per_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_sl_n, sl2_from_partition};
    use crate::rational::q;

    #[test]
    fn sl2_dynkin_degrees() {
        let g = build_sl_n(2).unwrap();
        let t = sl2_from_partition(&g, 2, &[2]).unwrap();
        let gr = dynkin_grading(&g, &t.h).unwrap();
        let at = |l: &str| gr.deg[g.index_of(l).unwrap()];
        assert_eq!((at("e12"), at("h1"), at("e21")), (2, 0, -2));
    }

    #[test]
    fn sl3_minimal_dynkin_matches_first_matrix() {
        let g = build_sl_n(3).unwrap();
        let h = g.parse_element("h1+h2").unwrap();
        let gr = dynkin_grading(&g, &h).unwrap();
        let expected =
            Grading::from_sl_matrix(&g, &[vec![0, 1, 2], vec![-1, 0, 1], vec![-2, -1, 0]]).unwrap();
        assert_eq!(gr, expected);
    }

    #[test]
    fn sl3_regular_degree_four() {
        let g = build_sl_n(3).unwrap();
        let h = g
            .from_matrix(&[
                vec![q(2), q(0), q(0)],
                vec![q(0), q(0), q(0)],
                vec![q(0), q(0), q(-2)],
            ])
            .unwrap();
        let gr = dynkin_grading(&g, &h).unwrap();
        assert_eq!(gr.deg[g.index_of("e13").unwrap()], 4);
    }

    #[test]
    fn non_diagonal_h_rejected() {
        let g = build_sl_n(2).unwrap();
        let h = g.parse_element("e12").unwrap();
        assert!(matches!(dynkin_grading(&g, &h), Err(Error::InvalidGrading(_))));
    }

    #[test]
    fn minimal_sl3_gradings() {
        let g = build_sl_n(3).unwrap();
        let t = sl2_from_partition(&g, 3, &[2, 1]).unwrap();
        for m in [
            vec![vec![0, 0, 2], vec![0, 0, 2], vec![-2, -2, 0]],
            vec![vec![0, 2, 2], vec![-2, 0, 0], vec![-2, 0, 0]],
            vec![vec![0, 1, 2], vec![-1, 0, 1], vec![-2, -1, 0]],
        ] {
            let gr = Grading::from_sl_matrix(&g, &m).unwrap();
            let report = verify_good_grading(&g, &t, &gr);
            assert!(report.passed(), "{:?}", report.first_failure());
        }
        let zero = Grading::new(vec![0; g.dim()]);
        let report = verify_good_grading(&g, &t, &zero);
        assert!(!report.passed());
        assert!(!report.f_in_minus_two);
    }

    #[test]
    fn grading_of_another_orbit_rejected() {
        // regular f sits in degree -1 here
        let g = build_sl_n(3).unwrap();
        let t = sl2_from_partition(&g, 3, &[3]).unwrap();
        let gr = Grading::from_sl_matrix(&g, &[vec![0, 1, 2], vec![-1, 0, 1], vec![-2, -1, 0]]).unwrap();
        let report = verify_good_grading(&g, &t, &gr);
        assert!(!report.passed());
    }
}
