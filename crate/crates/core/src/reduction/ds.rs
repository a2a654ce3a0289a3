use num_traits::Zero;
use serde::Serialize;

use crate::diffalg::{frechet_derivative, DiffPoly, LinDiffOp, MatDiffOp};
use crate::error::{Error, Result};
use crate::liealg::GradedSetup;
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{factorial, q, Q};

use super::polyvec::{self, PolyVec};
use super::ReducedPencil;

/// Slice coordinates as differential polynomials in the S-coordinates
/// `s^k` (field `k` is the coefficient of the `k`-th vector of the `b_-`
/// basis), together with the gauge parameter `m ∈ L(g_-)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeFixMap {
    pub q: Vec<DiffPoly>,
    pub m: Vec<DiffPoly>,
    pub s_dim: usize,
}

/// `exp(-ad m)(ε∂ + s + e) - ε∂`.
fn gauge_transform(setup: &GradedSetup, m: &[DiffPoly], y: &[DiffPoly]) -> PolyVec {
    let g = setup.algebra();
    let n = g.dim();
    let mut out = y.to_vec();
    // Σ_{k>=1} (-1)^k/k! ad_m^k(y)
    let mut term = y.to_vec();
    let mut k = 1;
    loop {
        term = polyvec::bracket(g, m, &term);
        if polyvec::is_zero(&term) {
            break;
        }
        let c = sign(k) / factorial(k);
        out = polyvec::add(&out, &polyvec::scale(&c, &term));
        k += 1;
    }
    // ε Σ_{k>=1} (-1)^{k+1}/k! ad_m^{k-1}(m')
    let mut term = polyvec::derivative(m);
    let eps = DiffPoly::eps();
    let mut k = 1;
    while !polyvec::is_zero(&term) {
        let c = -sign(k) / factorial(k);
        let scaled: PolyVec = term.iter().map(|t| (&eps * t).scale(&c)).collect();
        out = polyvec::add(&out, &scaled);
        term = polyvec::bracket(g, m, &term);
        k += 1;
    }
    debug_assert_eq!(out.len(), n);
    out
}

fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

/// Preimages `y_k ∈ g_-` with `[e, y_k] = t_k` for the `[g_-, e]` basis.
fn transverse_preimages(setup: &GradedSetup) -> Result<Vec<Vector>> {
    let g = setup.algebra();
    let n = g.dim();
    let gm = setup.g_minus();
    let e = &setup.triple().e;
    let cols: Vec<Vector> = gm.iter().map(|y| g.bracket(e, y)).collect();
    let a = Matrix::from_cols(n, &cols);
    let basis = Matrix::from_cols(n, gm);
    setup
        .ge()
        .iter()
        .map(|t| {
            a.solve(t)
                .map(|c| basis.mul_vec(&c))
                .ok_or_else(|| Error::SetupInvariant("[g_-, e] vector without preimage".into()))
        })
        .collect()
}

/// Solves `q + e = exp(-ad m)(ε∂ + s + e) - ε∂` for `m ∈ L(g_-)` and
/// `q ∈ L(g_f)`, with `s = Σ s^k b_k` generic. The equation is solved by
/// the fixed-point iteration `[e, m] = -(s + H(m))_{[g_-,e]}`, `H` the
/// nonlinear part, which stabilises because `ad m` lowers the grading.
pub fn ds_gauge_fix(setup: &GradedSetup) -> Result<GaugeFixMap> {
    let g = setup.algebra();
    let n = g.dim();
    let mdim = setup.slice_dim();
    let sb = setup.s_basis();
    let sdim = sb.len();
    let beta = setup.s_dual();
    let e = polyvec::constant(&setup.triple().e);
    let s_coeffs: Vec<DiffPoly> = (0..sdim).map(|k| DiffPoly::var(k, 0)).collect();
    let s = polyvec::combine(&s_coeffs, sb, n);
    let y = polyvec::add(&s, &e);
    let pre = transverse_preimages(setup)?;
    let gr = setup.grading();
    let cap = 4 * ((gr.max_degree() - gr.min_degree()) as usize + 2);
    let mut m = polyvec::zero(n);
    let mut steps = 0;
    loop {
        let gm = gauge_transform(setup, &m, &y);
        // [e,m] is linear in m; the rest is s + H(m)
        let rest = polyvec::sub(&polyvec::sub(&gm, &e), &polyvec::bracket(g, &e, &m));
        let coeffs: Vec<DiffPoly> = (mdim..sdim)
            .map(|k| -polyvec::pair(g, &rest, &beta[k]))
            .collect();
        let next = polyvec::combine(&coeffs, &pre, n);
        if next == m {
            break;
        }
        m = next;
        steps += 1;
        if steps > cap {
            return Err(Error::CapExceeded(format!(
                "gauge fixing did not stabilise within {cap} steps"
            )));
        }
    }
    let gq = polyvec::sub(&gauge_transform(setup, &m, &y), &e);
    let duals = setup.xi_dual();
    for d in &duals[mdim..] {
        if !polyvec::pair(g, &gq, d).is_zero() {
            return Err(Error::SetupInvariant(
                "gauge-fixed point does not lie on the slice".into(),
            ));
        }
    }
    let q = duals[..mdim].iter().map(|d| polyvec::pair(g, &gq, d)).collect();
    Ok(GaugeFixMap { q, m, s_dim: sdim })
}

/// The pencil restricted to `S = e + L(b_-)` in the coordinates
/// `s^k = <z - e|β^k>`: `F^{kl} = ε<β^k|β^l>∂ - <e + s + λa|[β^k, β^l]>`.
///
/// When `l' ≠ l` the coordinates `<z|u>`, `u` in a complement `l''` of
/// `l` in `l'`, are second-class constraints with the constant minor
/// `-<e|[u, u']>`; they are removed by the Dirac formula so that
/// Hamiltonian fields of invariant functionals stay tangent to `S`.
pub fn restrict_to_s(setup: &GradedSetup) -> Result<MatDiffOp> {
    let g = setup.algebra();
    let n = g.dim();
    let sb = setup.s_basis();
    let beta = setup.s_dual();
    let k = sb.len();
    let s_coeffs: Vec<DiffPoly> = (0..k).map(|i| DiffPoly::var(i, 0)).collect();
    let mut z = polyvec::combine(&s_coeffs, sb, n);
    for (zi, (ei, ai)) in z.iter_mut().zip(setup.triple().e.iter().zip(setup.a())) {
        if !ei.is_zero() {
            *zi += DiffPoly::constant(ei.clone());
        }
        if !ai.is_zero() {
            *zi += DiffPoly::lam().scale(ai);
        }
    }
    let entry = |x: &[Q], y: &[Q]| {
        let c0 = -polyvec::pair(g, &z, &g.bracket(x, y));
        let c1 = DiffPoly::eps().scale(&g.form(x, y));
        LinDiffOp::from_coeffs(vec![c0, c1])
    };
    let fs = MatDiffOp::from_fn(k, k, |i, j| entry(&beta[i], &beta[j]));
    let extra = second_class(setup);
    if extra.is_empty() {
        return Ok(fs);
    }
    let r = extra.len();
    let mut minor = Matrix::zeros(r, r);
    for (a, u) in extra.iter().enumerate() {
        for (b, v) in extra.iter().enumerate() {
            minor[(a, b)] = -g.form(&setup.triple().e, &g.bracket(u, v));
        }
    }
    let inv = minor
        .inverse()
        .map_err(|_| Error::SetupInvariant("<e|[., .]> is degenerate on l'/l".into()))?;
    let f_su = MatDiffOp::from_fn(k, r, |i, a| entry(&beta[i], &extra[a]));
    let f_us = MatDiffOp::from_fn(r, k, |a, j| entry(&extra[a], &beta[j]));
    let corr = f_su
        .compose(&MatDiffOp::from_matrix(&inv))?
        .compose(&f_us)?;
    fs.try_sub(&corr)
}

/// A complement of `l` in `l'`.
fn second_class(setup: &GradedSetup) -> Vec<Vector> {
    let n = setup.algebra().dim();
    let mut span = setup.isotropic().to_vec();
    let mut out = Vec::new();
    for v in setup.ell_prime() {
        let mut trial = span.clone();
        trial.push(v.clone());
        if linalg::rank_of(n, &trial) == trial.len() {
            span = trial;
            out.push(v.clone());
        }
    }
    out
}

/// `DQ ∘ F_S ∘ DQ*` on the gauge section `s = (q, 0)`.
pub fn leibnitz_transform(map: &GaugeFixMap, fs: &MatDiffOp) -> Result<ReducedPencil> {
    if fs.rows() != map.s_dim || fs.cols() != map.s_dim {
        return Err(Error::ShapeMismatch(format!(
            "S-operator is {}x{}, map has {} S-coordinates",
            fs.rows(),
            fs.cols(),
            map.s_dim
        )));
    }
    let mdim = map.q.len();
    let section = move |c: &DiffPoly| c.map_fields(|f| (f < mdim).then_some(f));
    let dq = frechet_derivative(&map.q, map.s_dim);
    let dq_star = dq.adjoint().map_coeffs(section);
    let dq = dq.map_coeffs(section);
    let fs = fs.map_coeffs(section);
    Ok(ReducedPencil::new(dq.compose(&fs)?.compose(&dq_star)?))
}

/// Gauge fixing followed by the Leibniz rule.
pub fn ds_reduce(setup: &GradedSetup) -> Result<ReducedPencil> {
    let map = ds_gauge_fix(setup)?;
    leibnitz_transform(&map, &restrict_to_s(setup)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::liealg::derive_subspaces;

    #[test]
    fn zero_gauge_is_identity() {
        let s = derive_subspaces(examples::kdv()).unwrap();
        let y: PolyVec = (0..3).map(|i| DiffPoly::var(i, 0)).collect();
        assert_eq!(gauge_transform(&s, &polyvec::zero(3), &y), y);
    }

    #[test]
    fn generators_restrict_to_coordinates_on_section() {
        // on s = (q, 0) the gauge parameter vanishes and q_k = s_k
        for (name, inp) in examples::fkdv_variants() {
            let s = derive_subspaces(inp).unwrap();
            let map = ds_gauge_fix(&s).unwrap();
            let m = map.q.len();
            for (k, qk) in map.q.iter().enumerate() {
                let on_section = qk.map_fields(|f| (f < m).then_some(f));
                assert_eq!(on_section, DiffPoly::var(k, 0), "{name} q{}", k + 1);
            }
        }
    }

    #[test]
    fn kdv_generator() {
        // s = s1 f - s2 h gauges to q = s1 + s2^2 + ε s2'
        let s = derive_subspaces(examples::kdv()).unwrap();
        let map = ds_gauge_fix(&s).unwrap();
        assert_eq!(map.s_dim, 2);
        let want = crate::diffalg::parse_poly("s1 + s2^2 + eps*s2'", "s").unwrap();
        assert_eq!(map.q, vec![want]);
    }

    #[test]
    fn restricted_operator_is_skew() {
        for (name, inp) in examples::fkdv_variants() {
            let s = derive_subspaces(inp).unwrap();
            assert!(restrict_to_s(&s).unwrap().is_skew_adjoint(), "{name}");
        }
    }

    #[test]
    fn second_class_only_when_l_differs_from_l_prime() {
        let v = examples::fkdv_variants();
        let get = |n: &str| derive_subspaces(v.iter().find(|x| x.0 == n).unwrap().1.clone()).unwrap();
        assert!(second_class(&get("g1_lplus_a_plus")).is_empty());
        assert_eq!(second_class(&get("g1_l0_a_e31")).len(), 2);
        assert!(second_class(&get("g2_a_e32")).is_empty());
    }

    #[test]
    fn leibnitz_rejects_wrong_shape() {
        let s = derive_subspaces(examples::kdv()).unwrap();
        let map = ds_gauge_fix(&s).unwrap();
        assert!(matches!(
            leibnitz_transform(&map, &MatDiffOp::zeros(3, 3)),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
