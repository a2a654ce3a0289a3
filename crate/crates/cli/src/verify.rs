use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use walg_core::diffalg::{render_op, render_poly, LinDiffOp, MatDiffOp};
use walg_core::examples::at_eps_one;
use walg_core::liealg::GradedSetup;
use walg_core::lpb::{
    casimir_set_check, differential_degree_family, jacobi_check, lie_poisson_pencil,
    sample_lambdas, BracketTable,
};
use walg_core::rational::{parse_q, Q};
use walg_core::reduction::{
    compare_methods, leading_term, transversal_poisson, Method, ReducedPencil,
};
use walg_core::Result;

use crate::spec::{read, SpecArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Part {
    P2,
    P1,
    Pencil,
}

#[derive(Args, Clone, Debug)]
pub struct SuiteArgs {
    /// Gradings to compare for independence, e.g. `G1,G2,G3`.
    #[arg(long, value_delimiter = ',')]
    pub gradings: Vec<String>,
    /// Bracket table to compare against.
    #[arg(long)]
    pub golden: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pencil")]
    pub golden_part: Part,
    /// The golden table is written at `ε = 1` and may list only some
    /// pairs; only the listed pairs are compared.
    #[arg(long)]
    pub golden_eps_one: bool,
    /// Rational `λ` samples for the Jacobi check (default `1,-1/2,3`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// Differential degree bound of the Jacobi test functionals.
    #[arg(long, default_value_t = 3)]
    pub jacobi_degree: usize,
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn lambdas(suite: &SuiteArgs) -> Result<Vec<Q>> {
    if suite.lambda.is_empty() {
        Ok(sample_lambdas().to_vec())
    } else {
        suite.lambda.iter().map(|s| parse_q(s)).collect()
    }
}

fn jacobi(p: &ReducedPencil, suite: &SuiteArgs) -> Result<(bool, String)> {
    let family = differential_degree_family(p.dim(), suite.jacobi_degree);
    let pencil = p.pencil()?;
    let mut ops = vec![("P2".to_string(), p.p2()), ("P1".to_string(), p.p1())];
    for l in lambdas(suite)? {
        ops.push((format!("P2 + ({l})P1"), pencil.at_lambda(&l)));
    }
    let mut triples = 0;
    for (label, op) in &ops {
        let rep = jacobi_check(op, &family)?;
        triples += rep.triples;
        if let Some((i, j, k)) = rep.first_failure {
            let names: Vec<String> = [i, j, k]
                .iter()
                .map(|&x| render_poly(&family[x].density, "q"))
                .collect();
            return Ok((false, format!("{label}: nonzero defect on {}", names.join(", "))));
        }
    }
    Ok((
        true,
        format!("{} operators, {} functionals, {triples} triples", ops.len(), family.len()),
    ))
}

fn independence(spec: &SpecArgs, gradings: &[String]) -> Result<(bool, String)> {
    let setups = gradings
        .iter()
        .map(|g| spec.resolve_with_grading(g))
        .collect::<Result<Vec<GradedSetup>>>()?;
    let report = compare_methods(&setups, &Method::ALL);
    if let Some(r) = report.runs.iter().find(|r| r.error.is_some()) {
        return Ok((
            false,
            format!(
                "{} {}: {}",
                gradings[r.setup],
                r.method,
                r.error.as_deref().unwrap_or_default()
            ),
        ));
    }
    Ok(match report.first_mismatch {
        Some(m) => (false, m),
        None => (true, format!("identical pencil for {}", gradings.join(", "))),
    })
}

fn leading(setup: &GradedSetup, p: &ReducedPencil) -> Result<(bool, String)> {
    let lt = leading_term(&p.p2());
    let tps = transversal_poisson(setup)?;
    let n = lt.len();
    for i in 0..n {
        for j in 0..n {
            if lt[i][j] != tps[i][j] {
                return Ok((
                    false,
                    format!(
                        "entry ({}, {}): {} vs finite {}",
                        i + 1,
                        j + 1,
                        render_poly(&lt[i][j], "q"),
                        render_poly(&tps[i][j], "q")
                    ),
                ));
            }
        }
    }
    Ok((true, format!("{n}x{n} transversal structure")))
}

fn golden(p: &ReducedPencil, suite: &SuiteArgs, path: &PathBuf) -> Result<(bool, String)> {
    let want = BracketTable::parse_text(&read(path)?, "q")?;
    let op: MatDiffOp = match suite.golden_part {
        Part::P2 => p.p2(),
        Part::P1 => p.p1(),
        Part::Pencil => p.op().clone(),
    };
    let op = if suite.golden_eps_one {
        op.map_coeffs(at_eps_one)
    } else {
        op
    };
    if suite.golden_eps_one {
        for e in &want.entries {
            if e.i == 0 || e.j == 0 || e.i > op.rows() || e.j > op.cols() {
                return Ok((false, format!("golden pair ({}, {}) out of range", e.i, e.j)));
            }
            let got = op.get(e.i - 1, e.j - 1);
            let w = LinDiffOp::from_coeffs(e.coeffs.clone());
            if *got != w {
                return Ok((
                    false,
                    format!(
                        "{{q{}, q{}}}: computed {} vs golden {}",
                        e.i,
                        e.j,
                        render_op(got, "q"),
                        render_op(&w, "q")
                    ),
                ));
            }
        }
        return Ok((true, format!("{} listed pairs match", want.entries.len())));
    }
    let got = BracketTable::from_op(&op, "q");
    Ok(match got.first_difference(&want) {
        Some(d) => (false, d),
        None => (true, format!("{} pairs match", want.entries.len())),
    })
}

pub fn cmd_verify(spec: &SpecArgs, suite: &SuiteArgs, json: bool) -> Result<bool> {
    let setup = spec.resolve()?;
    let report = compare_methods(std::slice::from_ref(&setup), &Method::ALL);
    let mut checks = Vec::new();
    let methods_ok = report.passed();
    let detail = match (&report.first_mismatch, report.runs.iter().find_map(|r| r.error.clone())) {
        (_, Some(e)) => e,
        (Some(m), None) => m.clone(),
        (None, None) => "tensor = dirac = ds".into(),
    };
    checks.push(Check {
        name: "methods",
        passed: methods_ok,
        detail,
    });
    if let Some(p) = &report.reference {
        checks.push(Check {
            name: "skew",
            passed: p.is_skew(),
            detail: String::new(),
        });
        let relinked = p
            .p2()
            .try_add(&p.p1().map_coeffs(|c| c * &walg_core::diffalg::DiffPoly::lam()));
        let linear = p.lambda_degree() <= 1 && relinked.as_ref().map(|r| r == p.op()).unwrap_or(false);
        checks.push(Check {
            name: "lambda_linear",
            passed: linear,
            detail: format!("λ-degree {}", p.lambda_degree()),
        });
        checks.push(check("jacobi", jacobi(p, suite)));
        checks.push(check(
            "casimir",
            casimir_set_check(&setup, &lie_poisson_pencil(&setup))
                .map(|r| (r.passed(), r.failures.join("; "))),
        ));
        checks.push(check("leading_term", leading(&setup, p)));
        if let Some(path) = &suite.golden {
            checks.push(check("golden", golden(p, suite, path)));
        }
    }
    if !suite.gradings.is_empty() {
        checks.push(check("gradings", independence(spec, &suite.gradings)));
    }
    let passed = checks.iter().all(|c| c.passed);
    if json {
        let doc = serde_json::json!({ "passed": passed, "checks": checks });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        for c in &checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                println!("{tag} {}", c.name);
            } else {
                println!("{tag} {}: {}", c.name, c.detail);
            }
        }
    }
    Ok(passed)
}
