//! Local Poisson operators on loop spaces: the Lie–Poisson pencil of a
//! reduction setup, brackets of local functionals, and the skew / Jacobi /
//! Casimir checks.
//!
//! Operators are stored multiplied by `ε`: the bracket of coordinate
//! fields is `{q^I(x), q^J(y)} = (1/ε) F^{IJ}(x) δ(x-y)` with `∂` acting on
//! `x`. The `1/ε` never appears in any computation.

mod table;

pub use table::{BracketTable, TableEntry};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::diffalg::{DiffPoly, LinDiffOp, LocalFunctional, MatDiffOp};
use crate::error::{Error, Result};
use crate::liealg::GradedSetup;
use crate::linalg::{self, Vector};
use crate::rational::{q, Q};

/// Skew matrix differential operator, bracket convention as in the module
/// docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPoissonOp {
    op: MatDiffOp,
}

impl LocalPoissonOp {
    pub fn new(op: MatDiffOp) -> Result<Self> {
        if !op.is_square() {
            return Err(Error::ShapeMismatch("Poisson operator must be square".into()));
        }
        Ok(LocalPoissonOp { op })
    }

    pub fn op(&self) -> &MatDiffOp {
        &self.op
    }

    pub fn is_skew(&self) -> bool {
        self.op.is_skew_adjoint()
    }
}

/// `F_λ = F_2 + λ F_1` held as one operator polynomial in `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonPencil {
    op: MatDiffOp,
}

impl PoissonPencil {
    /// Rejects non-square operators and any `λ^2` term.
    pub fn new(op: MatDiffOp) -> Result<Self> {
        if !op.is_square() {
            return Err(Error::ShapeMismatch("pencil must be square".into()));
        }
        let p = PoissonPencil { op };
        if p.lambda_degree() > 1 {
            return Err(Error::SetupInvariant(format!(
                "pencil has λ-degree {}",
                p.lambda_degree()
            )));
        }
        Ok(p)
    }

    pub fn op(&self) -> &MatDiffOp {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn lambda_degree(&self) -> u32 {
        lambda_degree(&self.op)
    }

    /// `λ^0` part.
    pub fn p2(&self) -> MatDiffOp {
        self.op.map_coeffs(|c| c.lam_coeff(0))
    }

    /// `λ^1` part.
    pub fn p1(&self) -> MatDiffOp {
        self.op.map_coeffs(|c| c.lam_coeff(1))
    }

    pub fn at_lambda(&self, lam: &Q) -> MatDiffOp {
        let l = lam.clone();
        self.op.map_coeffs(move |c| c.eval_params(Some(&l), None))
    }

    pub fn is_skew(&self) -> bool {
        self.op.is_skew_adjoint()
    }
}

/// Largest power of `λ` in any coefficient.
pub fn lambda_degree(op: &MatDiffOp) -> u32 {
    let mut d = 0;
    for i in 0..op.rows() {
        for j in 0..op.cols() {
            for c in op.get(i, j).coeffs() {
                d = d.max(c.lam_degree().unwrap_or(0));
            }
        }
    }
    d
}

/// The pencil `F^{IJ} = ε g^{IJ} ∂ - <e + Σ q^K ξ_K + λ a | [ξ^I, ξ^J]>`
/// in the coordinates `q^I(z) = <z - e|ξ^I>`, field `I` being the
/// coefficient of `ξ_I`.
pub fn lie_poisson_pencil(setup: &GradedSetup) -> PoissonPencil {
    let g = setup.algebra();
    let xi = setup.xi();
    let du = setup.xi_dual();
    let n = g.dim();
    let e = &setup.triple().e;
    let a = setup.a();
    let brackets: Vec<Vec<Vector>> = (0..n)
        .map(|i| (0..n).map(|j| g.bracket(&du[i], &du[j])).collect())
        .collect();
    let op = MatDiffOp::from_fn(n, n, |i, j| {
        let br = &brackets[i][j];
        let mut c0 = DiffPoly::constant(-g.form(e, br));
        for (k, x) in xi.iter().enumerate() {
            let c = g.form(x, br);
            if !c.is_zero() {
                c0 -= &DiffPoly::var(k, 0).scale(&c);
            }
        }
        let ca = g.form(a, br);
        if !ca.is_zero() {
            c0 -= &DiffPoly::lam().scale(&ca);
        }
        let gij = g.form(&du[i], &du[j]);
        let c1 = DiffPoly::eps().scale(&gij);
        LinDiffOp::from_coeffs(vec![c0, c1])
    });
    PoissonPencil { op }
}

fn check_fields(p: &MatDiffOp, fs: &[&LocalFunctional]) -> Result<()> {
    for f in fs {
        if f.density.field_bound() > p.rows() {
            return Err(Error::FieldMismatch(format!(
                "functional uses {} fields, operator has {}",
                f.density.field_bound(),
                p.rows()
            )));
        }
    }
    Ok(())
}

/// Density `Σ_I δF/δq^I (P δG)^I` of `{F, G}` (times `ε`).
pub fn bracket(p: &MatDiffOp, f: &LocalFunctional, g: &LocalFunctional) -> Result<LocalFunctional> {
    check_fields(p, &[f, g])?;
    let n = p.rows();
    let df = f.gradient(n);
    let dg = g.gradient(n);
    let pg = p.apply(&dg)?;
    let mut density = DiffPoly::zero();
    for (a, b) in df.iter().zip(&pg) {
        if !a.is_zero() && !b.is_zero() {
            density += a * b;
        }
    }
    Ok(LocalFunctional::new(density))
}

/// `{{F,G},H} + {{G,H},F} + {{H,F},G}`.
pub fn jacobi_defect(
    p: &MatDiffOp,
    f: &LocalFunctional,
    g: &LocalFunctional,
    h: &LocalFunctional,
) -> Result<LocalFunctional> {
    let fg = bracket(p, f, g)?;
    let gh = bracket(p, g, h)?;
    let hf = bracket(p, h, f)?;
    let mut d = bracket(p, &fg, h)?.density;
    d += bracket(p, &gh, f)?.density;
    d += bracket(p, &hf, g)?.density;
    Ok(LocalFunctional::new(d))
}

/// Monomial densities of polynomial degree `1..=max_degree` with at most
/// `max_weight` derivatives in total, reduced to a set whose Euler
/// gradients are linearly independent (so no two differ by a total
/// derivative).
pub fn monomial_family(fields: usize, max_degree: usize, max_weight: usize) -> Vec<LocalFunctional> {
    family_where(fields, max_degree, max_weight, |_, _| true)
}

/// Monomial densities of differential degree at most `d`, where `u^{(k)}`
/// counts `1 + k`; reduced as in [`monomial_family`].
pub fn differential_degree_family(fields: usize, d: usize) -> Vec<LocalFunctional> {
    family_where(fields, d, d.saturating_sub(1), |deg, w| deg + w <= d)
}

fn family_where(
    fields: usize,
    max_degree: usize,
    max_weight: usize,
    keep_mono: impl Fn(usize, usize) -> bool,
) -> Vec<LocalFunctional> {
    let jets: Vec<(usize, usize)> = (0..fields)
        .flat_map(|f| (0..=max_weight).map(move |k| (f, k)))
        .collect();
    let mut candidates: Vec<DiffPoly> = Vec::new();
    fn grow(
        jets: &[(usize, usize)],
        start: usize,
        left: usize,
        weight: usize,
        acc: DiffPoly,
        out: &mut Vec<DiffPoly>,
    ) {
        if left == 0 {
            return;
        }
        for idx in start..jets.len() {
            let (f, k) = jets[idx];
            if k > weight {
                continue;
            }
            let next = &acc * &DiffPoly::var(f, k);
            out.push(next.clone());
            grow(jets, idx, left - 1, weight - k, next, out);
        }
    }
    grow(&jets, 0, max_degree, max_weight, DiffPoly::one(), &mut candidates);
    candidates.retain(|c| {
        c.terms()
            .all(|(m, _)| keep_mono(m.degree() as usize, m.weight() as usize))
    });
    candidates.sort();
    let grads: Vec<Vec<DiffPoly>> = candidates
        .iter()
        .map(|c| LocalFunctional::new(c.clone()).gradient(fields))
        .collect();
    let keep = independent_poly_vectors(&grads);
    keep.into_iter()
        .map(|i| LocalFunctional::new(candidates[i].clone()))
        .collect()
}

/// Indices of a maximal linearly independent prefix-greedy subset.
fn independent_poly_vectors(vs: &[Vec<DiffPoly>]) -> Vec<usize> {
    use std::collections::BTreeMap;
    let mut keys = BTreeMap::new();
    for v in vs {
        for (i, p) in v.iter().enumerate() {
            for (m, _) in p.terms() {
                let len = keys.len();
                keys.entry((i, m.clone())).or_insert(len);
            }
        }
    }
    let dense: Vec<Vector> = vs
        .iter()
        .map(|v| {
            let mut row = vec![Q::zero(); keys.len()];
            for (i, p) in v.iter().enumerate() {
                for (m, c) in p.terms() {
                    row[keys[&(i, m.clone())]] = c.clone();
                }
            }
            row
        })
        .collect();
    let mut kept: Vec<usize> = Vec::new();
    let mut basis: Vec<Vector> = Vec::new();
    for (i, row) in dense.iter().enumerate() {
        if linalg::is_zero_vec(row) {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(row.clone());
        if linalg::rank_of(keys.len(), &trial) == trial.len() {
            basis = trial;
            kept.push(i);
        }
    }
    kept
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobiReport {
    pub family_size: usize,
    pub triples: usize,
    /// Indices into the family of the first triple with nonzero defect.
    pub first_failure: Option<(usize, usize, usize)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Jacobi defect on every triple (with repetition) drawn from `family`.
pub fn jacobi_check(p: &MatDiffOp, family: &[LocalFunctional]) -> Result<JacobiReport> {
    let n = family.len();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                triples.push((i, j, k));
            }
        }
    }
    let results: Vec<Result<bool>> = triples
        .par_iter()
        .map(|&(i, j, k)| Ok(jacobi_defect(p, &family[i], &family[j], &family[k])?.is_trivial()))
        .collect();
    let mut first_failure = None;
    for (t, r) in triples.iter().zip(results) {
        if !r? {
            first_failure = Some(*t);
            break;
        }
    }
    Ok(JacobiReport {
        family_size: n,
        triples: triples.len(),
        first_failure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CasimirReport {
    /// `F_1` kills the gradient of `∫<b|q>` for every `b` in `n_-`.
    pub p1_annihilates: bool,
    /// `[b, c] ∈ n_-` for basis pairs.
    pub bracket_in_n_minus: bool,
    /// `{F_b, F_c}_2 = -∫<q|[b,c]>` modulo constants.
    pub p2_density_matches: bool,
    pub failures: Vec<String>,
}

impl CasimirReport {
    pub fn passed(&self) -> bool {
        self.p1_annihilates && self.bracket_in_n_minus && self.p2_density_matches
    }
}

/// Gradient `w_J = <b|ξ_J>` of `∫<b|q> dx`.
pub fn linear_gradient(setup: &GradedSetup, b: &[Q]) -> Vec<DiffPoly> {
    let g = setup.algebra();
    setup
        .xi()
        .iter()
        .map(|x| DiffPoly::constant(g.form(b, x)))
        .collect()
}

/// Density `<q|x>` in the field coordinates, with `q = Σ q^K ξ_K`.
pub fn linear_density(setup: &GradedSetup, x: &[Q]) -> DiffPoly {
    let g = setup.algebra();
    let mut d = DiffPoly::zero();
    for (k, xi) in setup.xi().iter().enumerate() {
        let c = g.form(x, xi);
        if !c.is_zero() {
            d += DiffPoly::var(k, 0).scale(&c);
        }
    }
    d
}

/// Whether `∫<b|q>` is a Casimir of `F_1`.
pub fn is_p1_casimir(setup: &GradedSetup, pencil: &PoissonPencil, b: &[Q]) -> Result<bool> {
    let w = linear_gradient(setup, b);
    Ok(pencil.p1().apply(&w)?.iter().all(DiffPoly::is_zero))
}

/// The Casimirs of `F_1` with gradient in `n_-` and their closure under
/// `F_2`.
pub fn casimir_set_check(setup: &GradedSetup, pencil: &PoissonPencil) -> Result<CasimirReport> {
    let g = setup.algebra();
    let nm = setup.n_minus();
    let mut failures = Vec::new();
    let mut p1_ok = true;
    for b in nm {
        if !is_p1_casimir(setup, pencil, b)? {
            p1_ok = false;
            failures.push(format!("F_1 does not annihilate {}", g.format_element(b)));
        }
    }
    let p2 = pencil.p2();
    let mut closed = true;
    let mut dens_ok = true;
    for b in nm {
        for c in nm {
            let bc = g.bracket(b, c);
            if !linalg::in_span(g.dim(), nm, &bc) {
                closed = false;
                failures.push(format!(
                    "[{}, {}] not in n_-",
                    g.format_element(b),
                    g.format_element(c)
                ));
            }
            let fb = LocalFunctional::new(linear_density(setup, b));
            let fc = LocalFunctional::new(linear_density(setup, c));
            let br = bracket(&p2, &fb, &fc)?;
            let expected = -linear_density(setup, &bc);
            if !br.functional_eq(&LocalFunctional::new(expected)) {
                dens_ok = false;
                failures.push(format!(
                    "{{F_b, F_c}}_2 mismatch for b = {}, c = {}",
                    g.format_element(b),
                    g.format_element(c)
                ));
            }
        }
    }
    Ok(CasimirReport {
        p1_annihilates: p1_ok,
        bracket_in_n_minus: closed,
        p2_density_matches: dens_ok,
        failures,
    })
}

/// Three sample values of `λ` used by the Jacobi suite.
pub fn sample_lambdas() -> [Q; 3] {
    [q(1), crate::rational::frac(-1, 2), q(3)]
}
