use num_traits::Zero;

use crate::diffalg::{DiffPoly, LinDiffOp, MatDiffOp};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lpb::PoissonPencil;
use crate::rational::{q, Q};

use super::ReducedPencil;

/// Environment variable overriding the default order cap of
/// [`invert_minor`].
pub const ORDER_CAP_ENV: &str = "W_REDUCE_ORDER_CAP";

/// `2 · dim g` unless overridden by `W_REDUCE_ORDER_CAP`.
pub fn order_cap(dim: usize) -> usize {
    std::env::var(ORDER_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(2 * dim)
}

/// Part of `a` of differential weight `w`: `∂^k` terms whose coefficient
/// monomials carry `w - k` derivatives.
fn weight_part(a: &MatDiffOp, w: u32) -> MatDiffOp {
    a.map_entries(|e| {
        LinDiffOp::from_coeffs(
            e.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if k as u32 > w {
                        DiffPoly::zero()
                    } else {
                        c.filter(|m| m.weight() == w - k as u32)
                    }
                })
                .collect(),
        )
    })
}

fn max_weight(a: &MatDiffOp) -> u32 {
    let mut w = 0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            for (k, c) in a.get(i, j).coeffs().iter().enumerate() {
                if let Some(cw) = c.max_weight() {
                    w = w.max(cw + k as u32);
                }
            }
        }
    }
    w
}

/// Inverse of an order-zero, derivative-free matrix `C + P` with `C`
/// numeric invertible and `C^{-1} P` nilpotent.
fn invert_weight_zero(a0: &MatDiffOp) -> Result<MatDiffOp> {
    let n = a0.rows();
    let mut c = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let p = a0.get(i, j).coeff(0);
            c[(i, j)] = p
                .terms()
                .find(|(m, _)| m.degree() == 0 && m.lam() == 0 && m.eps() == 0)
                .map(|(_, x)| x.clone())
                .unwrap_or_else(Q::zero);
        }
    }
    let cinv = c.inverse().map_err(|_| {
        Error::NoFiniteOrderInverse("leading coefficient matrix of the minor is singular".into())
    })?;
    let cinv_op = MatDiffOp::from_matrix(&cinv);
    let p = a0.try_sub(&MatDiffOp::from_matrix(&c))?;
    let nil = cinv_op.compose(&p)?.scale(&q(-1));
    let mut acc = cinv_op.clone();
    let mut power = nil.clone();
    let mut k = 1;
    while !power.is_zero() {
        if k > n {
            return Err(Error::NoFiniteOrderInverse(
                "leading coefficient matrix is not unimodular".into(),
            ));
        }
        acc = acc.try_add(&power.compose(&cinv_op)?)?;
        power = power.compose(&nil)?;
        k += 1;
    }
    Ok(acc)
}

/// Two-sided inverse of a square matrix differential operator, found
/// weight by weight: `S_0 = A_0^{-1}`, `S_r = -A_0^{-1} Σ_{w>=1} A_w S_{r-w}`,
/// where the weight of `c ∂^k` is `k` plus the number of derivatives in
/// `c`. Weights are escalated up to `cap`.
pub fn invert_minor(a: &MatDiffOp, cap: usize) -> Result<MatDiffOp> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("minor must be square".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(MatDiffOp::zeros(0, 0));
    }
    let top = max_weight(a).max(1);
    let parts: Vec<MatDiffOp> = (0..=top).map(|w| weight_part(a, w)).collect();
    let a0inv = invert_weight_zero(&parts[0])?;
    let mut layers = vec![a0inv.clone()];
    let mut zero_run = 0;
    for r in 1..=cap {
        let mut acc = MatDiffOp::zeros(n, n);
        for w in 1..=(top as usize).min(r) {
            let aw = &parts[w];
            if aw.is_zero() || layers[r - w].is_zero() {
                continue;
            }
            acc = acc.try_add(&aw.compose(&layers[r - w])?)?;
        }
        let layer = a0inv.compose(&acc)?.scale(&q(-1));
        zero_run = if layer.is_zero() { zero_run + 1 } else { 0 };
        layers.push(layer);
        if zero_run >= top as usize {
            let mut s = MatDiffOp::zeros(n, n);
            for l in &layers {
                s = s.try_add(l)?;
            }
            let id = MatDiffOp::identity(n);
            if a.compose(&s)? != id || s.compose(a)? != id {
                return Err(Error::NoFiniteOrderInverse(
                    "weight series terminated without a two-sided inverse".into(),
                ));
            }
            return Ok(s);
        }
    }
    Err(Error::NoFiniteOrderInverse(format!(
        "no inverse of weight <= {cap}"
    )))
}

/// Sets the constraint coordinates `q^α`, `α >= m`, to zero.
pub fn restrict_to_slice(op: &MatDiffOp, m: usize) -> MatDiffOp {
    op.map_coeffs(move |c| c.map_fields(|f| (f < m).then_some(f)))
}

/// Dirac reduction `F_ss - F_sc S F_cs` onto the first `m` coordinates,
/// also returning the minor inverse `S`.
pub fn dirac_reduce_with_inverse(
    pencil: &PoissonPencil,
    m: usize,
    cap: usize,
) -> Result<(ReducedPencil, MatDiffOp)> {
    let n = pencil.dim();
    if m > n {
        return Err(Error::ShapeMismatch(format!("{m} slice coordinates of {n}")));
    }
    let f = restrict_to_slice(pencil.op(), m);
    let s_idx: Vec<usize> = (0..m).collect();
    let c_idx: Vec<usize> = (m..n).collect();
    let minor = f.submatrix(&c_idx, &c_idx);
    let s = invert_minor(&minor, cap)?;
    let corr = f
        .submatrix(&s_idx, &c_idx)
        .compose(&s)?
        .compose(&f.submatrix(&c_idx, &s_idx))?;
    let out = f.submatrix(&s_idx, &s_idx).try_sub(&corr)?;
    Ok((ReducedPencil::new(out), s))
}

pub fn dirac_reduce(pencil: &PoissonPencil, m: usize, cap: usize) -> Result<ReducedPencil> {
    Ok(dirac_reduce_with_inverse(pencil, m, cap)?.0)
}
