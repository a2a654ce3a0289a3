//! Turning command-line flags into a validated setup.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use walg_core::examples::sl3_grading;
use walg_core::liealg::io::{parse_algebra_json, parse_setup_json};
use walg_core::liealg::{
    build_sl_n, derive_subspaces, dynkin_grading, sl2_from_partition, GradedSetup, Grading,
    LieAlgebra, SL2Triple, SetupInputs,
};
use walg_core::linalg::Vector;
use walg_core::{Error, Result};

#[derive(Args, Clone, Debug)]
pub struct SpecArgs {
    /// Builtin algebra `slN`, e.g. `sl3`.
    #[arg(long, conflicts_with_all = ["setup", "algebra"])]
    pub builtin: Option<String>,
    /// Jordan type of `f` for a builtin algebra, e.g. `2,1`.
    #[arg(long, value_delimiter = ',', requires = "builtin")]
    pub partition: Vec<usize>,
    /// Complete setup JSON file.
    #[arg(long, conflicts_with = "algebra")]
    pub setup: Option<PathBuf>,
    /// Structure-constant JSON file; needs `--e`, `--h`, `--f`.
    #[arg(long, requires_all = ["e", "h", "f"])]
    pub algebra: Option<PathBuf>,
    #[arg(long)]
    pub e: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    /// `dynkin`, `G1`/`G2`/`G3` (sl3 minimal), or an sl_n degree matrix
    /// `0,1,2;-1,0,1;-2,-1,0`.
    #[arg(long)]
    pub grading: Option<String>,
    /// Vectors spanning the isotropic subspace, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub isotropic: Vec<String>,
    /// The element `a`; `e`, `h`, `f` name the triple.
    #[arg(long)]
    pub a: Option<String>,
    /// Basis of `g_f` fixing the slice coordinates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub slice_basis: Vec<String>,
}

pub fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn element(g: &LieAlgebra, t: Option<&SL2Triple>, s: &str) -> Result<Vector> {
    match (s.trim(), t) {
        ("e", Some(t)) => Ok(t.e.clone()),
        ("h", Some(t)) => Ok(t.h.clone()),
        ("f", Some(t)) => Ok(t.f.clone()),
        (s, _) => g.parse_element(s),
    }
}

fn parse_grading(g: &LieAlgebra, t: &SL2Triple, s: &str) -> Result<Grading> {
    match s {
        "dynkin" => dynkin_grading(g, &t.h),
        "G1" | "G2" | "G3" => {
            if g.matrix_size() != Some(3) {
                return Err(Error::InvalidGrading(format!("{s} is defined for sl3 only")));
            }
            sl3_grading(g, s)
        }
        m => {
            let rows = m
                .split(';')
                .map(|r| {
                    r.split(',')
                        .map(|x| {
                            x.trim().parse::<i64>().map_err(|_| {
                                Error::Parse(format!("bad grading degree {x:?} in {m:?}"))
                            })
                        })
                        .collect::<Result<Vec<i64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Grading::from_sl_matrix(g, &rows)
        }
    }
}

impl SpecArgs {
    /// Setup inputs with the grading replaced by `grading` when given.
    pub fn inputs_with_grading(&self, grading: Option<&str>) -> Result<SetupInputs> {
        let grading = grading.or(self.grading.as_deref());
        let (g, t, base) = if let Some(path) = &self.setup {
            let inp = parse_setup_json(&read(path)?)?;
            (inp.algebra.clone(), inp.triple.clone(), Some(inp))
        } else if let Some(name) = &self.builtin {
            let n: usize = name
                .strip_prefix("sl")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown builtin {name:?} (expected slN)")))?;
            if self.partition.is_empty() {
                return Err(Error::Parse("--builtin needs --partition".into()));
            }
            let g = build_sl_n(n)?;
            let t = sl2_from_partition(&g, n, &self.partition)?;
            (g, t, None)
        } else if let Some(path) = &self.algebra {
            let g = parse_algebra_json(&read(path)?)?;
            let el = |s: &Option<String>| element(&g, None, s.as_deref().unwrap_or_default());
            let t = SL2Triple {
                e: el(&self.e)?,
                h: el(&self.h)?,
                f: el(&self.f)?,
            };
            (g, t, None)
        } else {
            return Err(Error::Parse(
                "no algebra given (use --builtin, --setup or --algebra)".into(),
            ));
        };
        let mut inp = match base {
            Some(b) => b,
            None => {
                let gr = parse_grading(&g, &t, grading.unwrap_or("dynkin"))?;
                let a = match &self.a {
                    Some(a) => element(&g, Some(&t), a)?,
                    None => return Err(Error::Parse("missing --a".into())),
                };
                SetupInputs::new(g.clone(), t.clone(), gr, a)
            }
        };
        if self.setup.is_some() {
            if let Some(gs) = grading {
                inp.grading = parse_grading(&g, &t, gs)?;
            }
            if let Some(a) = &self.a {
                inp.a = element(&g, Some(&t), a)?;
            }
        }
        if !self.isotropic.is_empty() {
            inp.isotropic = self
                .isotropic
                .iter()
                .map(|s| element(&g, Some(&t), s))
                .collect::<Result<_>>()?;
        }
        if !self.slice_basis.is_empty() {
            inp.slice_basis = Some(
                self.slice_basis
                    .iter()
                    .map(|s| element(&g, Some(&t), s))
                    .collect::<Result<_>>()?,
            );
        }
        Ok(inp)
    }

    pub fn resolve(&self) -> Result<GradedSetup> {
        derive_subspaces(self.inputs_with_grading(None)?)
    }

    pub fn resolve_with_grading(&self, grading: &str) -> Result<GradedSetup> {
        derive_subspaces(self.inputs_with_grading(Some(grading))?)
    }
}
