use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{q, Q};

use super::poly::{leibniz, DiffPoly, Jet};

/// Scalar differential operator `Σ_k c_k ∂^k` with differential-polynomial
/// coefficients. Trailing zero coefficients are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LinDiffOp {
    coeffs: Vec<DiffPoly>,
}

impl LinDiffOp {
    pub fn zero() -> Self {
        LinDiffOp::default()
    }

    pub fn from_coeffs(coeffs: Vec<DiffPoly>) -> Self {
        let mut op = LinDiffOp { coeffs };
        op.trim();
        op
    }

    /// Multiplication by `p`.
    pub fn mul_by(p: DiffPoly) -> Self {
        Self::from_coeffs(vec![p])
    }

    pub fn constant(c: Q) -> Self {
        Self::mul_by(DiffPoly::constant(c))
    }

    /// `∂^k`.
    pub fn d(k: usize) -> Self {
        let mut coeffs = vec![DiffPoly::zero(); k + 1];
        coeffs[k] = DiffPoly::one();
        LinDiffOp { coeffs }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power of `∂`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[DiffPoly] {
        &self.coeffs
    }

    /// Coefficient of `∂^k` (zero past the order).
    pub fn coeff(&self, k: usize) -> DiffPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Left multiplication by a polynomial: `p · A`.
    pub fn premul(&self, p: &DiffPoly) -> Self {
        self.map_coeffs(|c| p * c)
    }

    /// `A ∘ B` via `∂^k b = Σ_j C(k,j) b^{(j)} ∂^{k-j}`.
    pub fn compose(&self, other: &LinDiffOp) -> LinDiffOp {
        if self.is_zero() || other.is_zero() {
            return LinDiffOp::zero();
        }
        let top = self.coeffs.len() - 1;
        let mut out = vec![DiffPoly::zero(); top + other.coeffs.len()];
        for (l, b) in other.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut derivs = Vec::with_capacity(top + 1);
            derivs.push(b.clone());
            for j in 1..=top {
                let next = derivs[j - 1].total_derivative();
                derivs.push(next);
            }
            for (k, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, bj) in derivs.iter().enumerate().take(k + 1) {
                    if bj.is_zero() {
                        continue;
                    }
                    let term = (a * bj).scale(&leibniz(k, j));
                    out[k - j + l] += term;
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// Formal adjoint `Σ_k (-∂)^k ∘ c_k`.
    pub fn adjoint(&self) -> LinDiffOp {
        let mut out = vec![DiffPoly::zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            let mut d = c.clone();
            // (-1)^k Σ_j C(k,j) c^{(k-j)} ∂^j
            let mut derivs = vec![c.clone()];
            for _ in 0..k {
                d = d.total_derivative();
                derivs.push(d.clone());
            }
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                let cd = &derivs[k - j];
                if !cd.is_zero() {
                    *slot += cd.scale(&(&sign * leibniz(k, j)));
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// `A(v) = Σ_k c_k ∂_x^k v`.
    pub fn apply(&self, v: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        let mut dv = v.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                dv = dv.total_derivative();
            }
            if !c.is_zero() && !dv.is_zero() {
                out += c * &dv;
            }
        }
        out
    }

    /// Whether every coefficient is a rational number.
    pub fn is_constant_coeff(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_constant().is_some())
    }
}

impl Add<&LinDiffOp> for &LinDiffOp {
    type Output = LinDiffOp;
    fn add(self, rhs: &LinDiffOp) -> LinDiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        LinDiffOp::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&LinDiffOp> for &LinDiffOp {
    type Output = LinDiffOp;
    fn sub(self, rhs: &LinDiffOp) -> LinDiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        LinDiffOp::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Neg for &LinDiffOp {
    type Output = LinDiffOp;
    fn neg(self) -> LinDiffOp {
        self.map_coeffs(|c| -c)
    }
}

impl Mul<&LinDiffOp> for &LinDiffOp {
    type Output = LinDiffOp;
    fn mul(self, rhs: &LinDiffOp) -> LinDiffOp {
        self.compose(rhs)
    }
}

/// Rectangular matrix of scalar differential operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatDiffOp {
    rows: usize,
    cols: usize,
    entries: Vec<LinDiffOp>,
}

impl MatDiffOp {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatDiffOp {
            rows,
            cols,
            entries: vec![LinDiffOp::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LinDiffOp::constant(q(1)));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> LinDiffOp) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        MatDiffOp { rows, cols, entries }
    }

    /// Constant-coefficient order-zero matrix.
    pub fn from_matrix(m: &crate::linalg::Matrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| LinDiffOp::constant(m[(i, j)].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LinDiffOp {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, op: LinDiffOp) {
        self.entries[i * self.cols + j] = op;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LinDiffOp::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map_entries(&self, f: impl Fn(&LinDiffOp) -> LinDiffOp + Sync + Send) -> Self {
        MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.par_iter().map(f).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly + Sync + Send) -> Self {
        self.map_entries(|e| e.map_coeffs(&f))
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map_entries(|e| e.scale(c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Formal adjoint: transpose with every entry replaced by its adjoint.
    pub fn adjoint(&self) -> Self {
        let t = self.transpose();
        t.map_entries(LinDiffOp::adjoint)
    }

    /// Skew-adjointness `A* = -A`.
    pub fn is_skew_adjoint(&self) -> bool {
        self.is_square() && self.adjoint() == self.scale(&q(-1))
    }

    pub fn max_order(&self) -> Option<usize> {
        self.entries.iter().filter_map(LinDiffOp::order).max()
    }

    pub fn check_compose(&self, other: &MatDiffOp) -> Result<()> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn compose(&self, other: &MatDiffOp) -> Result<MatDiffOp> {
        self.check_compose(other)?;
        let (r, c, inner) = (self.rows, other.cols, self.cols);
        let entries: Vec<LinDiffOp> = (0..r * c)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / c, idx % c);
                let mut acc = LinDiffOp::zero();
                for k in 0..inner {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.compose(b);
                }
                acc
            })
            .collect();
        Ok(MatDiffOp { rows: r, cols: c, entries })
    }

    pub fn try_add(&self, other: &MatDiffOp) -> Result<MatDiffOp> {
        self.same_shape(other)?;
        Ok(MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &MatDiffOp) -> Result<MatDiffOp> {
        self.same_shape(other)?;
        Ok(MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn same_shape(&self, other: &MatDiffOp) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn apply(&self, v: &[DiffPoly]) -> Result<Vec<DiffPoly>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = DiffPoly::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc += self.get(i, j).apply(vj);
                }
                acc
            })
            .collect())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> MatDiffOp {
        MatDiffOp::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

/// Fréchet derivative of `Q`: entry `(i, j)` is `Σ_k ∂Q^i/∂u^{j,(k)} ∂^k`.
pub fn frechet_derivative(qs: &[DiffPoly], fields: usize) -> MatDiffOp {
    MatDiffOp::from_fn(qs.len(), fields, |i, j| {
        let top = qs[i].max_order(j);
        match top {
            None => LinDiffOp::zero(),
            Some(top) => LinDiffOp::from_coeffs(
                (0..=top).map(|k| qs[i].partial(Jet::new(j, k))).collect(),
            ),
        }
    })
}

/// Whether every coefficient is a rational number.
pub fn is_numeric(op: &MatDiffOp) -> bool {
    op.entries.iter().all(LinDiffOp::is_constant_coeff)
}

/// Constant part of every coefficient (drops jets, keeps `λ`, `ε`).
pub fn constant_part(p: &DiffPoly) -> DiffPoly {
    p.filter(|m| m.degree() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: usize) -> DiffPoly {
        DiffPoly::var(0, k)
    }

    #[test]
    fn compose_d_with_multiplication() {
        // ∂ ∘ u = u ∂ + u'
        let got = LinDiffOp::d(1).compose(&LinDiffOp::mul_by(u(0)));
        assert_eq!(got, LinDiffOp::from_coeffs(vec![u(1), u(0)]));
    }

    #[test]
    fn adjoint_of_first_order() {
        // (u ∂)* = -∂ ∘ u = -u ∂ - u'
        let op = LinDiffOp::from_coeffs(vec![DiffPoly::zero(), u(0)]);
        assert_eq!(op.adjoint(), LinDiffOp::from_coeffs(vec![-u(1), -u(0)]));
        assert_eq!(op.adjoint().adjoint(), op);
    }

    #[test]
    fn kdv_operator_is_skew() {
        // ∂^3 + 2u∂ + u'
        let op = LinDiffOp::from_coeffs(vec![
            u(1),
            u(0).scale(&q(2)),
            DiffPoly::zero(),
            DiffPoly::one(),
        ]);
        assert_eq!(op.adjoint(), -&op);
    }

    #[test]
    fn apply_matches_compose() {
        let a = LinDiffOp::from_coeffs(vec![u(0), u(1)]);
        let b = LinDiffOp::from_coeffs(vec![DiffPoly::var(1, 0), DiffPoly::one()]);
        let v = &u(0) * &u(0);
        assert_eq!(a.compose(&b).apply(&v), a.apply(&b.apply(&v)));
    }

    #[test]
    fn frechet_of_square() {
        let f = frechet_derivative(&[&u(0) * &u(1)], 1);
        assert_eq!(*f.get(0, 0), LinDiffOp::from_coeffs(vec![u(1), u(0)]));
    }

    #[test]
    fn matrix_shapes_checked() {
        let a = MatDiffOp::zeros(2, 3);
        let b = MatDiffOp::zeros(2, 3);
        assert!(matches!(a.compose(&b), Err(Error::ShapeMismatch(_))));
        assert!(a.compose(&b.transpose()).unwrap().is_zero());
        assert!(matches!(a.try_add(&b.transpose()), Err(Error::ShapeMismatch(_))));
    }
}
