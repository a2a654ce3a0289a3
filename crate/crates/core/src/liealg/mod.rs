//! Finite-dimensional Lie algebras with exact structure constants, together
//! with sl2-triples, gradings and the subspace lattice used by the
//! reductions.

mod grading;
pub mod io;
mod setup;
mod sl2;

pub use grading::{dynkin_grading, verify_good_grading, DegreeCheck, Grading, GradingReport};
pub use setup::{derive_subspaces, GradedSetup, SetupInputs};
pub use sl2::{sl2_from_partition, SL2Triple};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{parse_q, q, zero, Q};

/// `(i, j, [(k, c)])`: `[x_i, x_j] = Σ c x_k`.
pub type BracketEntry = (usize, usize, Vec<(usize, Q)>);

/// A Lie algebra given by structure constants `[b_i, b_j] = Σ_k c_ij^k b_k`
/// in a fixed basis, plus a symmetric invariant bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    brackets: Vec<Vec<Vec<(usize, Q)>>>,
    form: Matrix,
    matrix_size: Option<usize>,
}

impl LieAlgebra {
    /// Builds an algebra from a list of brackets `[i, j] = Σ c_k b_k` for
    /// some pairs; missing pairs are zero and `[j, i]` is filled in by
    /// antisymmetry. A pair given in both orders must agree.
    pub fn from_brackets(
        labels: Vec<String>,
        entries: &[BracketEntry],
        form: Matrix,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidDimension("empty basis".into()));
        }
        if form.rows() != n || form.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "form is {}x{}, basis has {n} elements",
                form.rows(),
                form.cols()
            )));
        }
        let mut dense = vec![vec![vec![zero(); n]; n]; n];
        let mut given = vec![vec![false; n]; n];
        for (i, j, terms) in entries {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || terms.iter().any(|(k, _)| *k >= n) {
                return Err(Error::InvalidAlgebra(format!("bracket index out of range in [{i},{j}]")));
            }
            let mut v = vec![zero(); n];
            for (k, c) in terms {
                v[*k] += c;
            }
            let neg: Vector = v.iter().map(|x| -x.clone()).collect();
            for (a, b, val) in [(i, j, v), (j, i, neg)] {
                if given[a][b] && dense[a][b] != val {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket [{a},{b}] given inconsistently (antisymmetry)"
                    )));
                }
                dense[a][b] = val;
                given[a][b] = true;
            }
        }
        let brackets = dense
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        v.into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(LieAlgebra {
            labels,
            brackets,
            form,
            matrix_size: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn form_matrix(&self) -> &Matrix {
        &self.form
    }

    /// `Some(n)` for algebras built by [`build_sl_n`].
    pub fn matrix_size(&self) -> Option<usize> {
        self.matrix_size
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![zero(); self.dim()];
        v[i] = q(1);
        v
    }

    pub fn zero_vector(&self) -> Vector {
        vec![zero(); self.dim()]
    }

    /// Structure constants of `[b_i, b_j]` as sparse `(k, c)` pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.brackets[i][j]
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vector {
        let mut out = self.zero_vector();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in &self.brackets[i][j] {
                    out[*k] += xi * yj * c;
                }
            }
        }
        out
    }

    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        linalg::dot(x, &self.form.mul_vec(y))
    }

    /// Matrix of `ad x` acting on column vectors.
    pub fn ad(&self, x: &[Q]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.bracket(x, &self.basis_vector(j))).collect();
        Matrix::from_cols(n, &cols)
    }

    pub fn kernel_of_ad(&self, x: &[Q]) -> Vec<Vector> {
        self.ad(x).nullspace()
    }

    pub fn check_antisymmetry(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let a = self.bracket(&self.basis_vector(i), &self.basis_vector(j));
                let b = self.bracket(&self.basis_vector(j), &self.basis_vector(i));
                linalg::is_zero_vec(&linalg::add(&a, &b))
            })
        })
    }

    /// Exhaustive Jacobi check over all basis triples.
    pub fn check_jacobi(&self) -> bool {
        let n = self.dim();
        let basis: Vec<Vector> = (0..n).map(|i| self.basis_vector(i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let ij = self.bracket(&basis[i], &basis[j]);
                for k in j + 1..n {
                    let t1 = self.bracket(&ij, &basis[k]);
                    let t2 = self.bracket(&self.bracket(&basis[j], &basis[k]), &basis[i]);
                    let t3 = self.bracket(&self.bracket(&basis[k], &basis[i]), &basis[j]);
                    if !linalg::is_zero_vec(&linalg::add(&linalg::add(&t1, &t2), &t3)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `<[x,y]|z> + <y|[x,z]> = 0` on basis triples, plus symmetry of the form.
    pub fn check_invariance(&self) -> bool {
        let n = self.dim();
        if self.form != self.form.transpose() {
            return false;
        }
        let basis: Vec<Vector> = (0..n).map(|i| self.basis_vector(i)).collect();
        for x in &basis {
            for y in &basis {
                let xy = self.bracket(x, y);
                for z in &basis {
                    let xz = self.bracket(x, z);
                    if !(self.form(&xy, z) + self.form(y, &xz)).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn form_nondegenerate(&self) -> bool {
        !self.form.det().is_zero()
    }

    /// Runs every structural check, reporting the first failure.
    pub fn validate(&self) -> Result<()> {
        if !self.check_antisymmetry() {
            return Err(Error::InvalidAlgebra("structure constants are not antisymmetric".into()));
        }
        if !self.check_jacobi() {
            return Err(Error::InvalidAlgebra("Jacobi identity fails".into()));
        }
        if !self.check_invariance() {
            return Err(Error::InvalidAlgebra("bilinear form is not symmetric and invariant".into()));
        }
        if !self.form_nondegenerate() {
            return Err(Error::DegenerateForm("invariant form has zero determinant".into()));
        }
        Ok(())
    }

    /// Parses a linear combination of basis labels such as `e21+e32`,
    /// `e21-e32`, `2*e31` or `1/2*h1`.
    pub fn parse_element(&self, expr: &str) -> Result<Vector> {
        let mut v = self.zero_vector();
        let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "0" {
            return Ok(v);
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (q(-1), b),
                None => (q(1), t.strip_prefix('+').unwrap_or(t)),
            };
            let (coef, label) = match body.split_once('*') {
                Some((c, l)) => (parse_q(c)?, l),
                None => (q(1), body),
            };
            let idx = self
                .index_of(label)
                .ok_or_else(|| Error::Parse(format!("unknown basis label {label:?} in {expr:?}")))?;
            v[idx] += sign * coef;
        }
        Ok(v)
    }

    /// Human-readable form of an element, e.g. `e21 + e32`.
    pub fn format_element(&self, v: &[Q]) -> String {
        let mut parts = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let label = &self.labels[i];
            let part = if *c == q(1) {
                label.clone()
            } else if *c == q(-1) {
                format!("-{label}")
            } else {
                format!("{}*{label}", crate::rational::fmt_q(c))
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }

    /// Converts an `n x n` traceless matrix (row-major) into basis
    /// coordinates. Only for algebras from [`build_sl_n`].
    pub fn from_matrix(&self, m: &[Vec<Q>]) -> Result<Vector> {
        let n = self
            .matrix_size
            .ok_or_else(|| Error::InvalidAlgebra("algebra has no matrix realization".into()))?;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("expected {n}x{n} matrix")));
        }
        let trace = (0..n).fold(zero(), |acc, i| acc + &m[i][i]);
        if !trace.is_zero() {
            return Err(Error::InvalidAlgebra("matrix is not traceless".into()));
        }
        let mut v = self.zero_vector();
        let mut idx = 0;
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    v[idx] = x.clone();
                    idx += 1;
                }
            }
        }
        let mut partial = zero();
        for i in 0..n - 1 {
            partial += &m[i][i];
            v[idx + i] = partial.clone();
        }
        Ok(v)
    }

    /// Inverse of [`LieAlgebra::from_matrix`].
    pub fn to_matrix(&self, v: &[Q]) -> Result<Vec<Vec<Q>>> {
        let n = self
            .matrix_size
            .ok_or_else(|| Error::InvalidAlgebra("algebra has no matrix realization".into()))?;
        let mut m = vec![vec![zero(); n]; n];
        let mut idx = 0;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if i != j {
                    *x = v[idx].clone();
                    idx += 1;
                }
            }
        }
        for k in 0..n - 1 {
            m[k][k] += &v[idx + k];
            m[k + 1][k + 1] -= &v[idx + k];
        }
        Ok(m)
    }
}

fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// `sl_n` with basis `e_ij` (`i != j`, row-major) followed by
/// `h_k = e_kk - e_{k+1,k+1}`, and the trace form.
pub fn build_sl_n(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("sl_n needs n >= 2, got {n}")));
    }
    let sep = if n >= 10 { "_" } else { "" };
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                labels.push(format!("e{}{sep}{}", i + 1, j + 1));
                let mut m = vec![vec![zero(); n]; n];
                m[i][j] = q(1);
                mats.push(m);
            }
        }
    }
    for k in 0..n - 1 {
        labels.push(format!("h{}", k + 1));
        let mut m = vec![vec![zero(); n]; n];
        m[k][k] = q(1);
        m[k + 1][k + 1] = q(-1);
        mats.push(m);
    }
    let dim = labels.len();
    let shell = LieAlgebra {
        labels: labels.clone(),
        brackets: vec![vec![Vec::new(); dim]; dim],
        form: Matrix::zeros(dim, dim),
        matrix_size: Some(n),
    };
    let mut entries = Vec::new();
    let mut form = Matrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let ab = mat_mul(&mats[a], &mats[b]);
            form[(a, b)] = (0..n).fold(zero(), |acc, i| acc + &ab[i][i]);
            if a < b {
                let ba = mat_mul(&mats[b], &mats[a]);
                let comm: Vec<Vec<Q>> = (0..n)
                    .map(|i| (0..n).map(|j| &ab[i][j] - &ba[i][j]).collect())
                    .collect();
                let v = shell.from_matrix(&comm)?;
                let terms: Vec<(usize, Q)> = v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                if !terms.is_empty() {
                    entries.push((a, b, terms));
                }
            }
        }
    }
    let mut alg = LieAlgebra::from_brackets(labels, &entries, form)?;
    alg.matrix_size = Some(n);
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_form_values() {
        let g = build_sl_n(2).unwrap();
        assert_eq!(g.dim(), 3);
        let e = g.parse_element("e12").unwrap();
        let f = g.parse_element("e21").unwrap();
        let h = g.parse_element("h1").unwrap();
        assert_eq!(g.form(&h, &h), q(2));
        assert_eq!(g.form(&e, &f), q(1));
        assert_eq!(g.bracket(&e, &f), h);
    }

    #[test]
    fn sl3_commutator() {
        let g = build_sl_n(3).unwrap();
        assert_eq!(g.dim(), 8);
        let x = g.parse_element("e13").unwrap();
        let y = g.parse_element("e31").unwrap();
        let diag = g
            .from_matrix(&[
                vec![q(1), q(0), q(0)],
                vec![q(0), q(0), q(0)],
                vec![q(0), q(0), q(-1)],
            ])
            .unwrap();
        assert_eq!(g.bracket(&x, &y), diag);
    }

    #[test]
    fn sl3_structure_checks() {
        let g = build_sl_n(3).unwrap();
        assert!(g.check_antisymmetry());
        assert!(g.check_jacobi());
        assert!(g.check_invariance());
        assert!(g.validate().is_ok());
    }

    #[test]
    fn sl_n_rejects_small() {
        assert!(matches!(build_sl_n(1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn matrix_roundtrip() {
        let g = build_sl_n(4).unwrap();
        let v: Vector = (0..g.dim()).map(|i| q(i as i64 - 3)).collect();
        let m = g.to_matrix(&v).unwrap();
        assert_eq!(g.from_matrix(&m).unwrap(), v);
    }

    #[test]
    fn element_parsing() {
        let g = build_sl_n(3).unwrap();
        let v = g.parse_element("e21 - e32 + 1/2*h1").unwrap();
        assert_eq!(g.format_element(&v), "e21 - e32 + 1/2*h1");
        assert!(g.parse_element("e99").is_err());
    }

    #[test]
    fn bad_antisymmetric_input_rejected() {
        let labels = vec!["x".to_string(), "y".to_string()];
        let entries = vec![
            (0, 1, vec![(0, q(1))]),
            (1, 0, vec![(0, q(1))]),
        ];
        let r = LieAlgebra::from_brackets(labels, &entries, Matrix::identity(2));
        assert!(matches!(r, Err(Error::InvalidAlgebra(_))));
    }
}
