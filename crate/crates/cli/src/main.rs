//! `walg`: reduce Lie–Poisson pencils to Slodowy slices, verify them, and
//! emit the builtin examples.

mod spec;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use walg_core::examples;
use walg_core::liealg::derive_subspaces;
use walg_core::liealg::io::SetupFile;
use walg_core::reduction::{compare_methods, reduce, Method, ReducedPencil};
use walg_core::{Error, Result};

use spec::SpecArgs;

#[derive(Parser)]
#[command(name = "walg", version, about = "Exact classical W-algebra pencils")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Tensor,
    Dirac,
    Ds,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Tensor => vec![Method::Tensor],
            MethodArg::Dirac => vec![Method::Dirac],
            MethodArg::Ds => vec![Method::Ds],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduce the pencil and write the P2, P1 and pencil tables.
    Reduce {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Directory for `p2`, `p1` and `pencil` files; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant checks; exits nonzero iff a check fails.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        suite: verify::SuiteArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Write the setup files and reference tables of a builtin example.
    Examples {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Reduce {
            spec,
            method,
            format,
            out,
        } => cmd_reduce(&spec, method, format, out.as_deref()),
        Command::Verify {
            spec,
            suite,
            format,
        } => verify::cmd_verify(&spec, &suite, format == Format::Json),
        Command::Examples { name, out } => cmd_examples(&name, out.as_deref()),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(dir.join(name), text))
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", dir.join(name).display())))
}

fn pencil_outputs(p: &ReducedPencil, format: Format) -> Result<Vec<(String, String)>> {
    let (p2, p1, pl) = p.tables("q");
    let parts = [("p2", p2), ("p1", p1), ("pencil", pl)];
    parts
        .into_iter()
        .map(|(name, t)| match format {
            Format::Text => Ok((format!("{name}.txt"), t.to_text())),
            Format::Json => serde_json::to_string_pretty(&t)
                .map(|s| (format!("{name}.json"), s + "\n"))
                .map_err(|e| Error::Parse(e.to_string())),
        })
        .collect()
}

fn cmd_reduce(spec: &SpecArgs, method: MethodArg, format: Format, out: Option<&Path>) -> Result<bool> {
    let setup = spec.resolve()?;
    let methods = method.methods();
    let pencil = if methods.len() == 1 {
        reduce(&setup, methods[0])?
    } else {
        let report = compare_methods(std::slice::from_ref(&setup), &methods);
        if let Some(err) = report.runs.iter().find_map(|r| {
            r.error.as_ref().map(|e| format!("{}: {e}", r.method))
        }) {
            return Err(Error::SetupInvariant(err));
        }
        if let Some(m) = report.first_mismatch {
            return Err(Error::SetupInvariant(format!("methods disagree: {m}")));
        }
        report
            .reference
            .ok_or_else(|| Error::SetupInvariant("no method ran".into()))?
    };
    let files = pencil_outputs(&pencil, format)?;
    match out {
        Some(dir) => {
            for (name, text) in &files {
                write_file(dir, name, text)?;
            }
        }
        None => match format {
            Format::Text => {
                for (name, text) in &files {
                    println!("## {}", name.trim_end_matches(".txt"));
                    print!("{text}");
                }
            }
            Format::Json => {
                let (p2, p1, pl) = pencil.tables("q");
                let methods: Vec<&str> = methods.iter().map(|m| m.name()).collect();
                let doc = json!({ "methods": methods, "p2": p2, "p1": p1, "pencil": pl });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
        },
    }
    Ok(true)
}

fn cmd_examples(name: &str, out: Option<&Path>) -> Result<bool> {
    let setups = examples::example(name)?;
    let mut files: Vec<(String, String)> = Vec::new();
    for (variant, inp) in setups {
        let json = serde_json::to_string_pretty(&SetupFile::from_inputs(&inp))
            .map_err(|e| Error::Parse(e.to_string()))?;
        files.push((format!("{variant}.setup.json"), json + "\n"));
        let pencil = reduce(&derive_subspaces(inp)?, Method::Tensor)?;
        files.push((format!("{variant}.pencil.txt"), pencil.table("q").to_text()));
    }
    for (file, text) in examples::golden_tables(name)? {
        files.push((file.to_string(), text.to_string()));
    }
    match out {
        Some(dir) => {
            for (file, text) in &files {
                write_file(dir, file, text)?;
            }
        }
        None => {
            for (file, text) in &files {
                println!("## {file}");
                print!("{text}");
            }
        }
    }
    Ok(true)
}
