//! The `tml` command-line front end.
//!
//! Every command reads a theory file and prints its result to standard output.
//! Exit code 0 means success, 1 a failed verdict or type error, 2 a usage,
//! file or parse error. Terms are given inline or as `@path`.

use std::ffi::OsString;
use std::fs;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::graph::{self, GraphError};
use crate::harness::{self, Gen};
use crate::kernel::{Kernel, KernelError, DEFAULT_FUEL};
use crate::model::{self, ModelError};
use crate::parser::{self, ParseError};
use crate::realizability::{self, Realizer, RealizeError, Rz};
use crate::retract::{self, Report, RetractError};
use crate::syntax::{Context, Term};
use crate::Theory;

/// Environment variable overriding the default normalization fuel.
pub const FUEL_VAR: &str = "TML_FUEL";
/// Default sample count for `retract`.
pub const DEFAULT_SAMPLES_FUEL: usize = 200;
/// Default number of generated terms for `pi0`.
pub const DEFAULT_PI0_SAMPLES: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "tml", version, about = "Type checker and model evaluator for a 1-truncated type theory over a graph")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Keep wall-clock timings in JSON output (zeroed otherwise).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infer the type of a closed term, or check it against --type.
    Check {
        theory: String,
        term: String,
        #[arg(long = "type")]
        ty: Option<String>,
        /// Normalization fuel (overrides TML_FUEL).
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Print the normal form of a closed term.
    Normalize {
        theory: String,
        term: String,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Evaluate a closed term in the free-groupoid model.
    Eval {
        theory: String,
        term: String,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Compute and verify the realizer of a closed term.
    Realize {
        theory: String,
        term: String,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// The canonical numeral of a closed natural-number term, with proof.
    Canon { theory: String, term: String },
    /// Check that evaluation preserves connected components.
    Pi0 {
        theory: String,
        /// Closed terms of the base type; generated when absent.
        terms: Vec<String>,
        /// Number of generated terms added to the vertex literals.
        #[arg(long, default_value_t = DEFAULT_PI0_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sampled density and naturality of the retract, or the equivalence report.
    Retract {
        theory: String,
        /// Number of samples per check.
        #[arg(long, default_value_t = DEFAULT_SAMPLES_FUEL)]
        fuel: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run the equivalence report instead.
        #[arg(long)]
        equivalence: bool,
    },
    /// Reduce a word expression such as `f . g^ . 1@a`.
    Word { theory: String, expr: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid {FUEL_VAR}: {0}")]
    FuelVar(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Retract(#[from] RetractError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
    #[error("realizer rejected: {0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::FuelVar(_) => 2,
            CliError::Graph(GraphError::BadWordExpr(_)) => 2,
            _ => 1,
        }
    }
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli, std::env::var(FUEL_VAR).ok().as_deref()),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

/// Runs a parsed invocation; `fuel_var` is the value of `TML_FUEL`, if set.
pub fn dispatch(cli: &Cli, fuel_var: Option<&str>) -> Outcome {
    match execute(cli, fuel_var) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                let body = json!({ "error": e.to_string(), "exit": code });
                Outcome { code, stdout: pretty(&body), stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
            }
        }
    }
}

fn pretty(v: &Json) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Reads `arg` itself, or the file it names when it starts with `@`.
fn read_arg(arg: &str) -> Result<(String, String), CliError> {
    match arg.strip_prefix('@') {
        Some(path) => Ok((read_file(path)?, path.to_string())),
        None => Ok((arg.to_string(), "<term>".to_string())),
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })
}

fn load_theory(path: &str) -> Result<Theory, CliError> {
    Ok(parser::parse_theory_file(&read_file(path)?, path)?)
}

fn load_term(th: &Theory, arg: &str) -> Result<Term, CliError> {
    let (text, file) = read_arg(arg)?;
    Ok(parser::parse_term_in(&text, th, &[], &file)?)
}

fn resolve_fuel(flag: Option<u64>, var: Option<&str>) -> Result<u64, CliError> {
    match (flag, var) {
        (Some(f), _) => Ok(f),
        (None, Some(v)) => v.trim().parse().map_err(|_| CliError::FuelVar(v.to_string())),
        (None, None) => Ok(DEFAULT_FUEL),
    }
}

fn execute(cli: &Cli, fuel_var: Option<&str>) -> Result<(i32, String), CliError> {
    let json = cli.json;
    let report_out = |report: Report| {
        let report = if json && !cli.timings { report.without_timing() } else { report };
        let code = if report.passed() { 0 } else { 1 };
        let text = if json { format!("{}\n", report.to_json()) } else { report.to_text() };
        (code, text)
    };
    match &cli.command {
        Command::Check { theory, term, ty, fuel } => {
            let th = load_theory(theory)?;
            let t = load_term(&th, term)?;
            let k = Kernel::with_fuel(&th, resolve_fuel(*fuel, fuel_var)?);
            let ctx = Context::new();
            let ty = match ty {
                Some(arg) => {
                    let ty = load_term(&th, arg)?;
                    k.check_type_wf(&ctx, &ty)?;
                    k.check(&ctx, &t, &ty)?;
                    ty
                }
                None => k.infer(&ctx, &t)?,
            };
            let ty = parser::print_term(&ty);
            Ok(if json {
                (0, pretty(&json!({ "command": "check", "term": parser::print_term(&t), "type": ty, "verdict": "pass" })))
            } else {
                (0, format!("{} : {ty}\n", parser::print_term(&t)))
            })
        }
        Command::Normalize { theory, term, fuel } => {
            let th = load_theory(theory)?;
            let t = load_term(&th, term)?;
            let k = Kernel::with_fuel(&th, resolve_fuel(*fuel, fuel_var)?);
            k.infer(&Context::new(), &t)?;
            let nf = parser::print_term(&k.normalize(&t)?);
            Ok(if json {
                (0, pretty(&json!({ "command": "normalize", "term": parser::print_term(&t), "normal_form": nf })))
            } else {
                (0, format!("{nf}\n"))
            })
        }
        Command::Eval { theory, term, fuel } => {
            let th = load_theory(theory)?;
            let t = load_term(&th, term)?;
            let k = Kernel::with_fuel(&th, resolve_fuel(*fuel, fuel_var)?);
            let ty = k.infer(&Context::new(), &t)?;
            let v = model::eval_closed(&th, &t)?;
            Ok(if json {
                (0, pretty(&json!({
                    "command": "eval",
                    "term": parser::print_term(&t),
                    "type": parser::print_term(&ty),
                    "value": v.to_string(),
                })))
            } else {
                (0, format!("{v}\n"))
            })
        }
        Command::Realize { theory, term, fuel } => {
            let th = load_theory(theory)?;
            let t = load_term(&th, term)?;
            let k = Kernel::with_fuel(&th, resolve_fuel(*fuel, fuel_var)?);
            let ty = k.infer(&Context::new(), &t)?;
            let r = realizability::realize_closed(&th, &t)?;
            Rz::new(&th).check(&r, &t, &ty).map_err(CliError::Rejected)?;
            let mut fields = vec![("type".to_string(), parser::print_term(&ty))];
            fields.extend(describe_realizer(&th, &r)?);
            Ok(if json {
                let mut obj = serde_json::Map::new();
                obj.insert("command".into(), "realize".into());
                obj.insert("term".into(), parser::print_term(&t).into());
                for (k, v) in fields {
                    obj.insert(k, v.into());
                }
                obj.insert("verdict".into(), "pass".into());
                (0, pretty(&Json::Object(obj)))
            } else {
                let mut out = String::new();
                for (k, v) in fields {
                    out.push_str(&format!("{k}: {v}\n"));
                }
                (0, out)
            })
        }
        Command::Canon { theory, term } => {
            let th = load_theory(theory)?;
            let t = load_term(&th, term)?;
            Ok(report_out(retract::canon_report(&th, &t)))
        }
        Command::Pi0 { theory, terms, samples, seed } => {
            let th = load_theory(theory)?;
            let mut sample_terms: Vec<Term> = Vec::new();
            if terms.is_empty() {
                sample_terms.extend(th.vertices.iter().map(|v| Term::BaseVertex(v.clone())));
                for i in 0..*samples {
                    let mut gen = Gen::new(&th, harness::stream(*seed, i as u64));
                    sample_terms.push(gen.base(&Context::new(), retract::SAMPLE_DEPTH));
                }
            } else {
                for arg in terms {
                    sample_terms.push(load_term(&th, arg)?);
                }
            }
            Ok(report_out(retract::pi0_report(&th, &sample_terms)))
        }
        Command::Retract { theory, fuel, seed, equivalence } => {
            let th = load_theory(theory)?;
            let report = if *equivalence {
                retract::equivalence_report(&th, *fuel, *seed)
            } else {
                retract::retract_report(&th, *fuel, *seed)
            };
            Ok(report_out(report))
        }
        Command::Word { theory, expr } => {
            let th = load_theory(theory)?;
            let (text, _) = read_arg(expr)?;
            let w = graph::parse_word_expr(&th, text.trim())?;
            Ok(if json {
                (0, pretty(&json!({
                    "command": "word",
                    "word": w.to_string(),
                    "source": w.source.to_string(),
                    "target": w.target.to_string(),
                    "length": w.len(),
                })))
            } else {
                (0, format!("{w} : {} -> {}\n", w.source, w.target))
            })
        }
    }
}

/// Printable fields of a realizer: the dense path and its target at the base
/// type, the numeral and proof at naturals, the outer shape otherwise.
fn describe_realizer(th: &Theory, r: &Realizer) -> Result<Vec<(String, String)>, CliError> {
    Ok(match r {
        Realizer::Base(p) => {
            let target = match crate::kernel::normalize(th, &crate::kernel::infer_type(th, &Context::new(), p)?)? {
                Term::Id(_, _, b) => parser::print_term(&b),
                other => parser::print_term(&other),
            };
            vec![
                ("realizer".to_string(), "dense path".to_string()),
                ("path".to_string(), parser::print_term(p)),
                ("target".to_string(), target),
            ]
        }
        Realizer::Nat(k, p) => vec![
            ("realizer".to_string(), "numeral".to_string()),
            ("numeral".to_string(), k.to_string()),
            ("proof".to_string(), parser::print_term(p)),
        ],
        Realizer::Pair(..) => vec![("realizer".to_string(), "pair".to_string())],
        Realizer::Fun(_) => vec![("realizer".to_string(), "function".to_string())],
        Realizer::Star => vec![("realizer".to_string(), "unit".to_string())],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuel_precedence() {
        assert_eq!(resolve_fuel(Some(5), Some("7")).unwrap(), 5);
        assert_eq!(resolve_fuel(None, Some("7")).unwrap(), 7);
        assert_eq!(resolve_fuel(None, None).unwrap(), DEFAULT_FUEL);
        assert_eq!(resolve_fuel(None, Some("many")).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["tml"]).code, 2);
        assert_eq!(run(["tml", "frobnicate", "x.mlg"]).code, 2);
        assert_eq!(run(["tml", "check", "/nonexistent.mlg", "'a"]).code, 2);
    }
}
