//! Command-line front end: loads a dataset, runs one analysis, and prints a
//! self-describing JSON report (CSV for the frontier table on request).
//!
//! Exit codes: 0 success (and privacy checks that pass), 1 a privacy check
//! that fails, 2 parse or validation problems, 3 unknown variable names,
//! 4 infeasible privacy budgets.

mod query_spec;
mod render;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use nspfe_core::common::{common_variable, common_variable_multi};
use nspfe_core::dataset::parse_dataset;
use nspfe_core::measures;
use nspfe_core::partitions::{maximin_information, taxicab_partition};
use nspfe_core::privacy::{approximate_perfect_private, check_gamma_privacy, Norm};
use nspfe_core::quantizer::{synthesize_mechanism, tradeoff_frontier, LevelMode};
use nspfe_core::{Error, LogBase, Result, SampleSpace};

use query_spec::{is_builtin, parse_cli_rational, parse_query};

#[derive(Parser)]
#[command(
    name = "nspfe",
    version,
    about = "Exact privacy analysis of functions evaluated over finite uncertain data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Logarithm base for reported measures.
    #[arg(long, value_enum, default_value = "bits", global = true)]
    base: BaseArg,

    /// Report format; csv is only available for the frontier table.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: FormatArg,

    /// Seed for the randomized center solver; results do not depend on it.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy, conditional entropy, information, and leakage of one variable.
    Measures {
        /// Dataset file.
        dataset: PathBuf,
        /// Variable to measure.
        #[arg(long)]
        var: String,
        /// Observed variables; enables the conditional measures.
        #[arg(long, value_delimiter = ',')]
        given: Vec<String>,
        /// Side information assumed already known; adds conditional leakage.
        #[arg(long, value_delimiter = ',')]
        cond: Vec<String>,
    },
    /// Largest variable determined by every one of the listed variables.
    Common {
        /// Dataset file.
        dataset: PathBuf,
        /// Two or more variable names.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        vars: Vec<String>,
    },
    /// Certify that a query keeps every party's leakage within a budget.
    Check {
        /// Dataset file.
        dataset: PathBuf,
        /// sum | mean | max | weighted:w1,... | {json table} | @file | variable name.
        #[arg(long)]
        query: String,
        /// Party input variables, in order.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        parties: Vec<String>,
        /// Privacy budget; 0 demands perfect privacy.
        #[arg(long, default_value = "0")]
        gamma: String,
    },
    /// Closest function of the two parties' common variable.
    Approximate {
        /// Dataset file.
        dataset: PathBuf,
        /// sum | mean | max | weighted:w1,... | {json table} | @file | variable name.
        #[arg(long)]
        query: String,
        /// Exactly two party input variables.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        parties: Vec<String>,
        /// Norm minimized by each cell center.
        #[arg(long, value_enum, default_value = "euclidean")]
        norm: NormArg,
    },
    /// Quantized release of a scalar query within a privacy budget.
    Quantize {
        /// Dataset file.
        dataset: PathBuf,
        /// sum | mean | max | weighted:w1,... | {json table} | @file | variable name.
        #[arg(long)]
        query: String,
        /// Party input variables, in order.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        parties: Vec<String>,
        /// Privacy budget.
        #[arg(long)]
        gamma: String,
        /// How the budget converts to quantizer levels.
        #[arg(long, value_enum, default_value = "bits")]
        mode: ModeArg,
        /// Lipschitz constant of the query; required unless it is a built-in.
        #[arg(long)]
        lipschitz: Option<String>,
    },
    /// Accuracy against budget across an ascending list of budgets.
    Frontier {
        /// Dataset file.
        dataset: PathBuf,
        /// sum | mean | max | weighted:w1,... | {json table} | @file | variable name.
        #[arg(long)]
        query: String,
        /// Party input variables, in order.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        parties: Vec<String>,
        /// Ascending privacy budgets.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        gammas: Vec<String>,
        /// How each budget converts to quantizer levels.
        #[arg(long, value_enum, default_value = "bits")]
        mode: ModeArg,
        /// Lipschitz constant of the query; required unless it is a built-in.
        #[arg(long)]
        lipschitz: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaseArg {
    Bits,
    Nat,
}

impl BaseArg {
    fn to_base(self) -> LogBase {
        match self {
            BaseArg::Bits => LogBase::Bits,
            BaseArg::Nat => LogBase::Nat,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Euclidean,
    Max,
}

impl NormArg {
    fn to_norm(self) -> Norm {
        match self {
            NormArg::Euclidean => Norm::Euclidean,
            NormArg::Max => Norm::Max,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Bits,
    Exp,
}

impl ModeArg {
    fn to_mode(self) -> LevelMode {
        match self {
            ModeArg::Bits => LevelMode::Bits,
            ModeArg::Exp => LevelMode::Exp,
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::UnknownVariable(_) => 3,
        Error::BudgetTooSmall { .. } => 4,
        _ => 2,
    }
}

/// NSPFE_THREADS caps the rayon pool; unset or invalid values keep the
/// default. Thread count never changes any reported value.
fn configure_threads() {
    if let Some(n) = std::env::var("NSPFE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn load(path: &Path) -> Result<(SampleSpace, String)> {
    let bytes = fs::read(path)
        .map_err(|e| Error::Dataset(format!("cannot read dataset `{}`: {e}", path.display())))?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Dataset("dataset file is not valid UTF-8".into()))?;
    Ok((parse_dataset(&text)?, digest))
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, bytes).map_err(|e| {
            Error::InvalidArgument(format!("cannot write report to `{}`: {e}", path.display()))
        }),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::InvalidArgument(format!("cannot write report: {e}"))),
    }
}

fn emit_report(
    cli: &Cli,
    command: &str,
    digest: &str,
    parameters: Json,
    result: Json,
) -> Result<()> {
    let report = render::envelope(command, digest, parameters, result);
    emit(cli, &render::to_output_bytes(&report))
}

fn as_strs(names: &[String]) -> Vec<&str> {
    names.iter().map(String::as_str).collect()
}

/// Picks a released-variable name no dataset variable collides with.
fn release_name(space: &SampleSpace) -> String {
    if !space.has_variable("released") {
        return "released".into();
    }
    (2..)
        .map(|i| format!("released_{i}"))
        .find(|n| !space.has_variable(n))
        .expect("some suffix is free")
}

/// Attaches a Lipschitz constant when given; demands one for queries whose
/// constant cannot be derived.
fn resolve_lipschitz(
    query: nspfe_core::QueryFunction,
    spec: &str,
    lipschitz: &Option<String>,
) -> Result<(nspfe_core::QueryFunction, Option<BigRational>)> {
    match lipschitz {
        Some(raw) => {
            let l = parse_cli_rational(raw)?;
            Ok((query.with_lipschitz(l.clone())?, Some(l)))
        }
        None if is_builtin(spec) => Ok((query, None)),
        None => Err(Error::InvalidArgument(
            "tabulated and variable queries need an explicit --lipschitz constant".into(),
        )),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if cli.format == FormatArg::Csv && !matches!(cli.command, Command::Frontier { .. }) {
        return Err(Error::InvalidArgument(
            "csv output is only available for the frontier table".into(),
        ));
    }
    let base = cli.base.to_base();
    match &cli.command {
        Command::Measures {
            dataset,
            var,
            given,
            cond,
        } => {
            if !cond.is_empty() && given.is_empty() {
                return Err(Error::InvalidArgument(
                    "--cond only refines conditional leakage; it needs --given".into(),
                ));
            }
            let (space, digest) = load(dataset)?;
            let mut result = json!({
                "variable": var,
                "entropy": render::measure(&measures::hartley_entropy(&space, var, base)?),
            });
            if !given.is_empty() {
                let g = as_strs(given);
                let fields = result.as_object_mut().expect("object literal");
                fields.insert(
                    "conditional_entropy".into(),
                    render::measure(&measures::conditional_entropy(&space, var, &g, base)?),
                );
                fields.insert(
                    "information".into(),
                    render::measure(&measures::information(&space, var, &g, base)?),
                );
                fields.insert(
                    "leakage".into(),
                    render::measure(&measures::leakage(&space, var, &g, base)?),
                );
                if !cond.is_empty() {
                    let c = as_strs(cond);
                    fields.insert(
                        "conditional_leakage".into(),
                        render::measure(&measures::conditional_leakage(&space, var, &g, &c, base)?),
                    );
                }
            }
            let parameters = json!({
                "var": var,
                "given": given,
                "cond": cond,
                "base": base.label(),
            });
            emit_report(cli, "measures", &digest, parameters, result)?;
            Ok(0)
        }
        Command::Common { dataset, vars } => {
            if vars.len() < 2 {
                return Err(Error::InvalidArgument(
                    "a common variable needs at least two variables".into(),
                ));
            }
            let (space, digest) = load(dataset)?;
            let names = as_strs(vars);
            let c = if names.len() == 2 {
                common_variable(&space, names[0], names[1])?
            } else {
                common_variable_multi(&space, &names)?
            };
            let entropy = c.entropy(base);
            let mut result = json!({
                "common": render::common(&space, &c, &entropy),
            });
            let fields = result.as_object_mut().expect("object literal");
            if let [a, b] = names[..] {
                let maximin = maximin_information(&space, a, b, base)?;
                fields.insert(
                    "entropy_matches_maximin".into(),
                    Json::Bool(maximin.value == entropy),
                );
                fields.insert("maximin_information".into(), render::measure(&maximin));
                fields.insert(
                    "partition".into(),
                    render::partition_family(&taxicab_partition(&space, a, b)?),
                );
            } else {
                fields.insert("fold_order".into(), json!(vars));
            }
            let parameters = json!({"vars": vars, "base": base.label()});
            emit_report(cli, "common", &digest, parameters, result)?;
            Ok(0)
        }
        Command::Check {
            dataset,
            query,
            parties,
            gamma,
        } => {
            let (space, digest) = load(dataset)?;
            let f = parse_query(query, &space, parties)?;
            let budget = parse_cli_rational(gamma)?;
            let released = release_name(&space);
            let extended = space.push_forward(&f, &released)?;
            let verdict =
                check_gamma_privacy(&extended, &released, &as_strs(parties), &budget, base)?;
            let code = if verdict.pass { 0 } else { 1 };
            let parameters = json!({
                "query": query,
                "parties": parties,
                "gamma": render::rational(&budget),
                "base": base.label(),
            });
            emit_report(cli, "check", &digest, parameters, render::verdict(&verdict))?;
            Ok(code)
        }
        Command::Approximate {
            dataset,
            query,
            parties,
            norm,
        } => {
            if parties.len() != 2 {
                return Err(Error::InvalidArgument(format!(
                    "approximation is defined for exactly two parties, got {}",
                    parties.len()
                )));
            }
            let (space, digest) = load(dataset)?;
            let f = parse_query(query, &space, parties)?;
            let result = approximate_perfect_private(
                &space,
                &f,
                (&parties[0], &parties[1]),
                norm.to_norm(),
                cli.seed,
            )?;
            let parameters = json!({
                "query": query,
                "parties": parties,
                "norm": norm.to_norm().label(),
                "seed": cli.seed,
            });
            emit_report(
                cli,
                "approximate",
                &digest,
                parameters,
                render::approximation(&result),
            )?;
            Ok(0)
        }
        Command::Quantize {
            dataset,
            query,
            parties,
            gamma,
            mode,
            lipschitz,
        } => {
            let (space, digest) = load(dataset)?;
            let f = parse_query(query, &space, parties)?;
            let (f, declared) = resolve_lipschitz(f, query, lipschitz)?;
            let budget = parse_cli_rational(gamma)?;
            let mechanism =
                synthesize_mechanism(&space, &f, &as_strs(parties), &budget, mode.to_mode())?;
            let mut parameters = json!({
                "query": query,
                "parties": parties,
                "gamma": render::rational(&budget),
                "mode": mode.to_mode().label(),
            });
            if let Some(l) = &declared {
                parameters
                    .as_object_mut()
                    .expect("object literal")
                    .insert("lipschitz".into(), render::rational(l));
            }
            emit_report(
                cli,
                "quantize",
                &digest,
                parameters,
                render::mechanism(&mechanism),
            )?;
            Ok(0)
        }
        Command::Frontier {
            dataset,
            query,
            parties,
            gammas,
            mode,
            lipschitz,
        } => {
            let (space, digest) = load(dataset)?;
            let f = parse_query(query, &space, parties)?;
            let (f, declared) = resolve_lipschitz(f, query, lipschitz)?;
            let budgets = gammas
                .iter()
                .map(|g| parse_cli_rational(g))
                .collect::<Result<Vec<_>>>()?;
            let rows = tradeoff_frontier(&space, &f, &as_strs(parties), &budgets, mode.to_mode())?;
            let all_failed = rows.iter().all(|r| r.outcome.is_err());
            if cli.format == FormatArg::Csv {
                emit(cli, render::frontier_csv(&rows).as_bytes())?;
            } else {
                let mut parameters = json!({
                    "query": query,
                    "parties": parties,
                    "gammas": budgets.iter().map(render::rational).collect::<Vec<_>>(),
                    "mode": mode.to_mode().label(),
                });
                if let Some(l) = &declared {
                    parameters
                        .as_object_mut()
                        .expect("object literal")
                        .insert("lipschitz".into(), render::rational(l));
                }
                emit_report(
                    cli,
                    "frontier",
                    &digest,
                    parameters,
                    render::frontier(&rows),
                )?;
            }
            Ok(if all_failed { 4 } else { 0 })
        }
    }
}
