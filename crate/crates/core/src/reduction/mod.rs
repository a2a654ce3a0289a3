//! Reduction of the Lie–Poisson pencil to the slice `e + L(g_f)`: the
//! Poisson tensor procedure, Dirac reduction, and Drinfeld–Sokolov gauge
//! fixing with the Leibniz rule. All three return a [`ReducedPencil`] in
//! the slice coordinates `q^i = <z - e|ξ^i>`, `i < dim g_f`.

mod dirac;
mod ds;
pub mod polyvec;
mod tensor;

pub use dirac::{
    dirac_reduce, dirac_reduce_with_inverse, invert_minor, order_cap, restrict_to_slice,
    ORDER_CAP_ENV,
};
pub use ds::{ds_gauge_fix, ds_reduce, leibnitz_transform, restrict_to_s, GaugeFixMap};
pub use tensor::tensor_procedure;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::diffalg::{DiffPoly, LinDiffOp, MatDiffOp};
use crate::error::{Error, Result};
use crate::liealg::GradedSetup;
use crate::lpb::{lambda_degree, lie_poisson_pencil, BracketTable, PoissonPencil};

/// Reduced pencil on the slice, stored with the same `ε` convention as
/// [`crate::lpb`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPencil {
    op: MatDiffOp,
}

impl ReducedPencil {
    pub fn new(op: MatDiffOp) -> Self {
        ReducedPencil { op }
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

    pub fn is_skew(&self) -> bool {
        self.op.is_skew_adjoint()
    }

    /// `P_2^Q`.
    pub fn p2(&self) -> MatDiffOp {
        self.op.map_coeffs(|c| c.lam_coeff(0))
    }

    /// `P_1^Q`.
    pub fn p1(&self) -> MatDiffOp {
        self.op.map_coeffs(|c| c.lam_coeff(1))
    }

    pub fn pencil(&self) -> Result<PoissonPencil> {
        PoissonPencil::new(self.op.clone())
    }

    pub fn table(&self, prefix: &str) -> BracketTable {
        BracketTable::from_op(&self.op, prefix)
    }

    /// `(P_2^Q, P_1^Q, P_λ^Q)` tables.
    pub fn tables(&self, prefix: &str) -> (BracketTable, BracketTable, BracketTable) {
        (
            BracketTable::from_op(&self.p2(), prefix),
            BracketTable::from_op(&self.p1(), prefix),
            self.table(prefix),
        )
    }
}

/// `δ(x-y)` coefficient at `ε = 0`: the finite Poisson matrix on the slice.
pub fn leading_term(op: &MatDiffOp) -> Vec<Vec<DiffPoly>> {
    (0..op.rows())
        .map(|i| {
            (0..op.cols())
                .map(|j| op.get(i, j).coeff(0).filter(|m| m.eps() == 0))
                .collect()
        })
        .collect()
}

/// Finite-dimensional Dirac reduction of the Lie–Poisson matrix
/// `-<z|[ξ^I, ξ^J]>` onto the Slodowy slice, as a matrix of polynomials in
/// the slice coordinates.
pub fn transversal_poisson(setup: &GradedSetup) -> Result<Vec<Vec<DiffPoly>>> {
    let full = lie_poisson_pencil(setup);
    let finite = MatDiffOp::from_fn(full.dim(), full.dim(), |i, j| {
        LinDiffOp::mul_by(
            full.op()
                .get(i, j)
                .coeff(0)
                .filter(|m| m.eps() == 0 && m.lam() == 0),
        )
    });
    let pencil = PoissonPencil::new(finite)?;
    let reduced = dirac_reduce(&pencil, setup.slice_dim(), order_cap(setup.algebra().dim()))?;
    Ok(leading_term(reduced.op()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    Tensor,
    Dirac,
    Ds,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Tensor, Method::Dirac, Method::Ds];

    pub fn name(self) -> &'static str {
        match self {
            Method::Tensor => "tensor",
            Method::Dirac => "dirac",
            Method::Ds => "ds",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(Method::Tensor),
            "dirac" => Ok(Method::Dirac),
            "ds" => Ok(Method::Ds),
            _ => Err(Error::Parse(format!(
                "unknown method {s:?} (expected tensor, dirac or ds)"
            ))),
        }
    }
}

/// Runs one method.
pub fn reduce(setup: &GradedSetup, method: Method) -> Result<ReducedPencil> {
    match method {
        Method::Tensor => tensor_procedure(setup),
        Method::Dirac => dirac_reduce(
            &lie_poisson_pencil(setup),
            setup.slice_dim(),
            order_cap(setup.algebra().dim()),
        ),
        Method::Ds => ds_reduce(setup),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodRun {
    pub setup: usize,
    pub method: Method,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub runs: Vec<MethodRun>,
    /// Every successful run equals the first successful one.
    pub all_equal: bool,
    pub first_mismatch: Option<String>,
    #[serde(skip)]
    pub reference: Option<ReducedPencil>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.all_equal && self.runs.iter().all(|r| r.error.is_none())
    }
}

/// Every method on every setup, compared operator-exactly. Runs are
/// independent and executed in parallel; the report order is fixed.
pub fn compare_methods(setups: &[GradedSetup], methods: &[Method]) -> CompareReport {
    let jobs: Vec<(usize, Method)> = (0..setups.len())
        .flat_map(|s| methods.iter().map(move |&m| (s, m)))
        .collect();
    let results: Vec<Result<ReducedPencil>> = jobs
        .par_iter()
        .map(|&(s, m)| reduce(&setups[s], m))
        .collect();
    let mut reference: Option<(usize, Method, ReducedPencil)> = None;
    let mut first_mismatch = None;
    let mut runs = Vec::new();
    for (&(s, m), r) in jobs.iter().zip(results) {
        let error = match r {
            Ok(p) => {
                match &reference {
                    None => reference = Some((s, m, p)),
                    Some((rs, rm, rp)) => {
                        if first_mismatch.is_none() && *rp != p {
                            let a = rp.table("q");
                            let b = p.table("q");
                            let diff = a.first_difference(&b).unwrap_or_default();
                            first_mismatch =
                                Some(format!("setup {s} {m} differs from setup {rs} {rm}: {diff}"));
                        }
                    }
                }
                None
            }
            Err(e) => Some(e.to_string()),
        };
        runs.push(MethodRun { setup: s, method: m, error });
    }
    CompareReport {
        runs,
        all_equal: first_mismatch.is_none(),
        first_mismatch,
        reference: reference.map(|(_, _, p)| p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::liealg::derive_subspaces;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("gauss".parse::<Method>().is_err());
    }

    #[test]
    fn leading_term_of_kdv_is_zero() {
        // the sl2 slice is one-dimensional, so its finite structure vanishes
        let s = derive_subspaces(examples::kdv()).unwrap();
        let r = reduce(&s, Method::Dirac).unwrap();
        assert!(leading_term(&r.p2())[0][0].is_zero());
        assert!(transversal_poisson(&s).unwrap()[0][0].is_zero());
    }

    #[test]
    fn pencil_split() {
        let s = derive_subspaces(examples::fkdv()).unwrap();
        let r = reduce(&s, Method::Tensor).unwrap();
        assert_eq!(r.lambda_degree(), 1);
        let (p2, p1, pl) = r.tables("q");
        assert_eq!(pl.fields, 4);
        assert!(p1.entries.len() < p2.entries.len());
        assert!(r.pencil().is_ok());
    }

    #[test]
    fn compare_reports_every_run() {
        let setups: Vec<_> = examples::fkdv_variants()
            .into_iter()
            .take(3)
            .map(|(_, i)| derive_subspaces(i).unwrap())
            .collect();
        let rep = compare_methods(&setups, &[Method::Tensor, Method::Ds]);
        assert_eq!(rep.runs.len(), 6);
        // P1 depends on a, so the full pencils of different a disagree
        assert!(!rep.all_equal);
        assert!(rep.first_mismatch.unwrap().contains("setup 1"));
    }
}
