//! Loop-algebra elements: vectors of differential polynomials in the
//! algebra's own basis.

use num_traits::Zero;

use crate::diffalg::{DiffPoly, LinDiffOp, MatDiffOp};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::rational::Q;

pub type PolyVec = Vec<DiffPoly>;

pub fn zero(n: usize) -> PolyVec {
    vec![DiffPoly::zero(); n]
}

pub fn is_zero(v: &[DiffPoly]) -> bool {
    v.iter().all(DiffPoly::is_zero)
}

pub fn constant(v: &[Q]) -> PolyVec {
    v.iter().map(|c| DiffPoly::constant(c.clone())).collect()
}

/// `Σ_k coeffs[k] · basis[k]`.
pub fn combine(coeffs: &[DiffPoly], basis: &[Vec<Q>], n: usize) -> PolyVec {
    let mut out = zero(n);
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            if !x.is_zero() {
                *o += c.scale(x);
            }
        }
    }
    out
}

pub fn add(a: &[DiffPoly], b: &[DiffPoly]) -> PolyVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[DiffPoly], b: &[DiffPoly]) -> PolyVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[DiffPoly]) -> PolyVec {
    a.iter().map(|x| x.scale(c)).collect()
}

pub fn derivative(a: &[DiffPoly]) -> PolyVec {
    a.iter().map(DiffPoly::total_derivative).collect()
}

/// Pointwise bracket.
pub fn bracket(g: &LieAlgebra, x: &[DiffPoly], y: &[DiffPoly]) -> PolyVec {
    let n = g.dim();
    let mut out = zero(n);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let terms = g.bracket_basis(i, j);
            if terms.is_empty() {
                continue;
            }
            let prod = xi * yj;
            for (k, c) in terms {
                out[*k] += prod.scale(c);
            }
        }
    }
    out
}

/// Pairing `<x|c>` with a constant element.
pub fn pair(g: &LieAlgebra, x: &[DiffPoly], c: &[Q]) -> DiffPoly {
    let bc = g.form_matrix().mul_vec(c);
    let mut out = DiffPoly::zero();
    for (xi, w) in x.iter().zip(&bc) {
        if !w.is_zero() && !xi.is_zero() {
            out += xi.scale(w);
        }
    }
    out
}

/// `ad x` as an order-zero operator matrix on the algebra's coordinates.
pub fn ad_op(g: &LieAlgebra, x: &[DiffPoly]) -> MatDiffOp {
    let n = g.dim();
    let mut m = MatDiffOp::zeros(n, n);
    let mut cols: Vec<PolyVec> = Vec::with_capacity(n);
    for j in 0..n {
        let mut ej = zero(n);
        ej[j] = DiffPoly::one();
        cols.push(bracket(g, x, &ej));
    }
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, LinDiffOp::mul_by(c.clone()));
            }
        }
    }
    m
}

/// Applies a constant matrix to a loop-algebra element.
pub fn mat_apply(m: &Matrix, v: &[DiffPoly]) -> PolyVec {
    (0..m.rows())
        .map(|i| {
            let mut acc = DiffPoly::zero();
            for (j, x) in v.iter().enumerate() {
                let c = &m[(i, j)];
                if !c.is_zero() && !x.is_zero() {
                    acc += x.scale(c);
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_sl_n;

    #[test]
    fn bracket_matches_constant_bracket() {
        let g = build_sl_n(3).unwrap();
        let x = g.parse_element("e12+2*h1").unwrap();
        let y = g.parse_element("e21-e23").unwrap();
        assert_eq!(bracket(&g, &constant(&x), &constant(&y)), constant(&g.bracket(&x, &y)));
    }

    #[test]
    fn ad_op_applies_as_bracket() {
        let g = build_sl_n(2).unwrap();
        let x: PolyVec = (0..3).map(|i| DiffPoly::var(i, 0)).collect();
        let y: PolyVec = (0..3).map(|i| DiffPoly::var(i + 3, 1)).collect();
        assert_eq!(ad_op(&g, &x).apply(&y).unwrap(), bracket(&g, &x, &y));
    }

    #[test]
    fn pair_is_the_form() {
        let g = build_sl_n(3).unwrap();
        let x = g.parse_element("e13+h2").unwrap();
        let c = g.parse_element("e31+h1").unwrap();
        assert_eq!(pair(&g, &constant(&x), &c), DiffPoly::constant(g.form(&x, &c)));
    }
}
