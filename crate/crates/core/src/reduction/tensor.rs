use num_traits::Zero;

use crate::diffalg::{DiffPoly, LinDiffOp, MatDiffOp};
use crate::error::{Error, Result};
use crate::liealg::GradedSetup;
use crate::linalg::{self, Matrix, Vector};

use super::polyvec;
use super::ReducedPencil;

/// `M · A` for a constant matrix `M`.
pub(crate) fn const_left(m: &Matrix, a: &MatDiffOp) -> MatDiffOp {
    MatDiffOp::from_fn(m.rows(), a.cols(), |i, j| {
        let mut acc = LinDiffOp::zero();
        for k in 0..m.cols() {
            let c = &m[(i, k)];
            if c.is_zero() {
                continue;
            }
            let e = a.get(k, j);
            if !e.is_zero() {
                acc = &acc + &e.scale(c);
            }
        }
        acc
    })
}

/// Coordinate functionals `x -> <x|ξ^I>` as rows of a matrix.
pub(crate) fn dual_rows(setup: &GradedSetup, range: std::ops::Range<usize>) -> Matrix {
    let b = setup.algebra().form_matrix();
    let rows: Vec<Vector> = range.map(|i| b.mul_vec(&setup.xi_dual()[i])).collect();
    Matrix::from_rows(&rows)
}

/// `(ad e)^{-1} ∘ π` with `π` the projection onto `[e, g]` along `g_f`,
/// the preimage taken in `[f, g]`.
pub(crate) fn inverse_ad_e(setup: &GradedSetup) -> Result<Matrix> {
    let g = setup.algebra();
    let n = g.dim();
    let m = setup.slice_dim();
    let t = setup.triple();
    let im_f = linalg::independent_subset(
        n,
        &(0..n).map(|j| g.bracket(&t.f, &g.basis_vector(j))).collect::<Vec<_>>(),
    );
    let fmat = Matrix::from_cols(n, &im_f);
    let ad_e = g.ad(&t.e).mul(&fmat);
    let mut ys = Vec::with_capacity(n - m);
    for x in &setup.xi()[m..] {
        let c = ad_e
            .solve(x)
            .ok_or_else(|| Error::Singular("[e, g] element without preimage in [f, g]".into()))?;
        ys.push(fmat.mul_vec(&c));
    }
    let y = Matrix::from_cols(n, &ys);
    Ok(y.mul(&dual_rows(setup, m..n)))
}

/// `ε∂ + ad(q + λa)` on `L(g)` at the slice point `e + q`, `q` in `g_f`.
pub(crate) fn slice_operator(setup: &GradedSetup) -> MatDiffOp {
    let g = setup.algebra();
    let n = g.dim();
    let m = setup.slice_dim();
    let coeffs: Vec<DiffPoly> = (0..m).map(|i| DiffPoly::var(i, 0)).collect();
    let mut z = polyvec::combine(&coeffs, &setup.xi()[..m], n);
    for (zi, ai) in z.iter_mut().zip(setup.a()) {
        if !ai.is_zero() {
            *zi += DiffPoly::lam().scale(ai);
        }
    }
    let ad = polyvec::ad_op(g, &z);
    MatDiffOp::from_fn(n, n, |i, j| {
        let d = if i == j {
            LinDiffOp::from_coeffs(vec![DiffPoly::zero(), DiffPoly::eps()])
        } else {
            LinDiffOp::zero()
        };
        &d + ad.get(i, j)
    })
}

/// Reduced pencil by lifting slice covectors: `v = W w + u` with `u` in
/// `span ξ^α` fixed by `[ε∂ + e + q + λa, v] ∈ g_f`. The lift is the
/// series `u = Σ_k N^k K w`, `K = -M R W`, `N = -M R`, finite because
/// `M R` strictly lowers the grading.
pub fn tensor_procedure(setup: &GradedSetup) -> Result<ReducedPencil> {
    let g = setup.algebra();
    let n = g.dim();
    let m = setup.slice_dim();
    let me = inverse_ad_e(setup)?;
    let r = slice_operator(setup);
    let w0 = MatDiffOp::from_matrix(&Matrix::from_cols(n, &setup.xi_dual()[..m]));
    let rw = r.compose(&w0)?;
    let mut term = const_left(&me, &rw).scale(&crate::rational::q(-1));
    let mut lift = w0.clone();
    let gr = setup.grading();
    let cap = (gr.max_degree() - gr.min_degree()) as usize + 2;
    let mut steps = 0;
    while !term.is_zero() {
        if steps > cap {
            return Err(Error::CapExceeded(format!(
                "tensor lift did not terminate within {cap} steps"
            )));
        }
        lift = lift.try_add(&term)?;
        term = const_left(&me, &r.compose(&term)?).scale(&crate::rational::q(-1));
        steps += 1;
    }
    let ad_e = MatDiffOp::from_matrix(&g.ad(&setup.triple().e));
    let full = r.try_add(&ad_e)?;
    let x = full.compose(&lift)?;
    if !const_left(&dual_rows(setup, m..n), &x).is_zero() {
        return Err(Error::SetupInvariant(
            "lifted covector does not map into the slice tangent space".into(),
        ));
    }
    let out = const_left(&dual_rows(setup, 0..m), &x);
    Ok(ReducedPencil::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::liealg::derive_subspaces;

    #[test]
    fn inverse_ad_e_inverts_on_the_image() {
        for (name, inp) in examples::fkdv_variants().into_iter().take(2) {
            let s = derive_subspaces(inp).unwrap();
            let g = s.algebra();
            let me = inverse_ad_e(&s).unwrap();
            let ad_e = g.ad(&s.triple().e);
            let m = s.slice_dim();
            for x in &s.xi()[m..] {
                assert_eq!(ad_e.mul(&me).mul_vec(x), *x, "{name}");
            }
            for x in &s.xi()[..m] {
                assert!(linalg::is_zero_vec(&me.mul_vec(x)), "{name}");
            }
        }
    }

    #[test]
    fn dual_rows_pick_coordinates() {
        let s = derive_subspaces(examples::fkdv()).unwrap();
        let n = s.algebra().dim();
        let d = dual_rows(&s, 0..n);
        for (i, x) in s.xi().iter().enumerate() {
            let c = d.mul_vec(x);
            for (j, cj) in c.iter().enumerate() {
                assert_eq!(cj.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn kdv_by_tensor() {
        let s = derive_subspaces(examples::kdv()).unwrap();
        let r = tensor_procedure(&s).unwrap();
        let e = r.op().get(0, 0);
        assert_eq!(e.order(), Some(3));
        assert_eq!(e.coeff(3), DiffPoly::eps().scale(&crate::rational::frac(-1, 2)) * DiffPoly::eps() * DiffPoly::eps());
    }

    #[test]
    fn slice_operator_has_eps_diagonal() {
        let s = derive_subspaces(examples::kdv()).unwrap();
        let r = slice_operator(&s);
        for i in 0..3 {
            assert_eq!(r.get(i, i).coeff(1), DiffPoly::eps());
        }
    }
}
