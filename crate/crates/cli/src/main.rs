//! `randcirc`: experiment runner for random two-qubit circuits.
//!
//! Exit status is 0 on success, 1 when a `verify` check fails and 2 on any
//! configuration or I/O error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use randcirc_core::experiment::{
    parse_schedule, reference_steps, run_bound_verification, run_cutoff_experiment,
    run_entropy_experiment, run_purity_experiment, CutoffConfig, ExperimentConfig, VerifyConfig,
};
use randcirc_core::spectral::gap_record;
use randcirc_core::{Engine, Reference, Suite};

use output::{write_records, EntropyRow, Format};

#[derive(Parser, Debug)]
#[command(
    name = "randcirc",
    version,
    about = "Entanglement and mixing of random two-qubit circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mean reduced purity per step.
    Purity(SeriesArgs),
    /// Mean entanglement entropy per step.
    Entropy(SeriesArgs),
    /// Total-variation curve of the entropy distribution.
    Cutoff(CutoffArgs),
    /// Exact spectral gaps of the support chain and the comparison walk.
    Gap(CommonArgs),
    /// Check the convergence bounds; exits 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Register size: `N`, an inclusive range `A..B`, or a list `A,B,C`.
    #[arg(long)]
    n_qubits: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Size of subsystem A (the first `na` qubits); defaults to `N/2`.
    #[arg(long)]
    na: Option<usize>,
    /// Step schedule: `0,5,25`, `geo:MAX` or `lin:MAX[:POINTS]`.
    #[arg(long, default_value = "geo:1024")]
    steps: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Statevector)]
    engine: EngineArg,
}

#[derive(Args, Debug)]
struct CutoffArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    na: Option<usize>,
    /// Explicit schedule; defaults to about 200 evenly spaced steps.
    #[arg(long)]
    steps: Option<String>,
    #[arg(long, default_value_t = 5000)]
    trials: usize,
    /// Last step of the default schedule; defaults to `3⌈N log₂ N⌉`.
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReferenceArg::AsymptoticEmpirical)]
    reference: ReferenceArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Monte Carlo trials for the theorem1 suite.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Accuracy parameter for the theorem1 suite.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Step horizon for the lemma1 suite; defaults to `90N(N−1)`.
    #[arg(long)]
    max_steps: Option<u64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum EngineArg {
    Statevector,
    SubsetMc,
    SubsetExact,
    Stabilizer,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Statevector => Engine::Statevector,
            EngineArg::SubsetMc => Engine::SubsetMc,
            EngineArg::SubsetExact => Engine::SubsetExact,
            EngineArg::Stabilizer => Engine::Stabilizer,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ReferenceArg {
    AsymptoticEmpirical,
    HaarSampled,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
#[value(rename_all = "lower")]
enum SuiteArg {
    Lemma1,
    Theorem1,
    Comparison,
}

/// Parses `N`, `A..B` (inclusive) or `A,B,C`.
fn parse_qubit_spec(spec: &str) -> anyhow::Result<Vec<usize>> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("bad qubit count '{s}' in '{spec}'"))
    };
    let values = if let Some((a, b)) = spec.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            bail!("empty qubit range '{spec}'");
        }
        (a..=b).collect()
    } else {
        spec.split(',')
            .map(num)
            .collect::<anyhow::Result<Vec<_>>>()?
    };
    Ok(values)
}

fn single_n(spec: &str) -> anyhow::Result<usize> {
    match parse_qubit_spec(spec)?.as_slice() {
        [n] => Ok(*n),
        _ => bail!("this subcommand takes a single --n-qubits value, got '{spec}'"),
    }
}

fn series_config(args: &SeriesArgs) -> anyhow::Result<ExperimentConfig> {
    let n = single_n(&args.common.n_qubits)?;
    Ok(ExperimentConfig {
        engine: args.engine.into(),
        n_qubits: n,
        n_a: args.na.unwrap_or(n / 2),
        steps: parse_schedule(&args.steps)?,
        trials: args.trials,
        seed: args.common.seed,
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Purity(args) => {
            let points = run_purity_experiment(&series_config(&args)?)?;
            write_records(&args.common.out, args.common.format, &points, &points)?;
        }
        Command::Entropy(args) => {
            let points = run_entropy_experiment(&series_config(&args)?)?;
            let rows: Vec<EntropyRow> = points.iter().map(EntropyRow::from).collect();
            write_records(&args.common.out, args.common.format, &rows, &points)?;
        }
        Command::Cutoff(args) => {
            let n = single_n(&args.common.n_qubits)?;
            let steps = args.steps.as_deref().map(parse_schedule).transpose()?;
            let max_steps = match (&steps, args.max_steps) {
                (_, Some(m)) => m,
                (Some(s), None) => *s.last().expect("nonempty schedule"),
                (None, None) => 3 * reference_steps(n) / 20,
            };
            let outcome = run_cutoff_experiment(&CutoffConfig {
                n_qubits: n,
                n_a: args.na.unwrap_or(n / 2),
                trials: args.trials,
                max_steps,
                reference: match args.reference {
                    ReferenceArg::AsymptoticEmpirical => Reference::AsymptoticEmpirical,
                    ReferenceArg::HaarSampled => Reference::HaarSampled,
                },
                seed: args.common.seed,
                steps,
            })?;
            if let Some(r) = &outcome.report {
                eprintln!(
                    "N={} engine={} location={:.2} window={:.2} ratio={:.4}",
                    r.n_qubits, outcome.engine, r.location, r.window, r.ratio
                );
            } else {
                eprintln!("N={n}: TV did not cross 0.9, 0.5 and 0.1 within the schedule");
            }
            write_records(
                &args.common.out,
                args.common.format,
                &outcome.curve.points,
                &outcome,
            )?;
        }
        Command::Gap(args) => {
            let records = parse_qubit_spec(&args.n_qubits)?
                .into_iter()
                .map(gap_record)
                .collect::<Result<Vec<_>, _>>()?;
            write_records(&args.out, args.format, &records, &records)?;
        }
        Command::Verify(args) => {
            let suite = match args.suite {
                SuiteArg::Lemma1 => Suite::Lemma1,
                SuiteArg::Theorem1 => Suite::Theorem1,
                SuiteArg::Comparison => Suite::Comparison,
            };
            let cfg = VerifyConfig {
                suite,
                n_values: parse_qubit_spec(&args.common.n_qubits)?,
                seed: args.common.seed,
                trials: args.trials,
                epsilon: args.epsilon,
                max_steps: args.max_steps,
            };
            let records = run_bound_verification(&cfg)?;
            write_records(&args.common.out, args.common.format, &records, &records)?;
            let failed: Vec<_> = records.iter().filter(|r| !r.pass).collect();
            for r in &failed {
                eprintln!(
                    "FAIL {} N={} step={}: lhs={} rhs={}",
                    r.check, r.n_qubits, r.step, r.lhs, r.rhs
                );
            }
            return Ok(failed.is_empty());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_specs() {
        assert_eq!(parse_qubit_spec("6").unwrap(), vec![6]);
        assert_eq!(parse_qubit_spec("3..5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_qubit_spec("3..=5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_qubit_spec("2,4").unwrap(), vec![2, 4]);
        assert!(parse_qubit_spec("5..3").is_err());
        assert!(parse_qubit_spec("x").is_err());
        assert!(single_n("3..4").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
