//! `eoq-subst`: solve, sweep, verify and validate two-product substitution
//! inventory models from a JSON config.
//!
//! Exit codes: 0 success, 2 configuration or validation error, 3 infeasible
//! or non-converging solve, 4 oracle verification failure, 5 sweep larger
//! than its cap.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eoq_subst::oracle::verify_with_ceiling;
use eoq_subst::sensitivity::SweepError;
use eoq_subst::{
    qualitative_checks, run_sweep, solve, Formulas, OracleError, Regime, SolveError, SolveReport, SweepSpec, Violation,
};
use sha2::{Digest, Sha256};
use thiserror::Error;

use config::{Format, RegionOverride, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("invalid parameters:\n  {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Solve(SolveError),
    #[error(transparent)]
    Verify(OracleError),
    #[error(transparent)]
    Sweep(SweepError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Invalid(_) => 2,
            CliError::Solve(SolveError::Invalid(_) | SolveError::Settings(_)) => 2,
            CliError::Solve(_) => 3,
            CliError::Verify(OracleError::Region(_)) => 2,
            CliError::Verify(_) => 4,
            CliError::Sweep(SweepError::TooLarge { .. }) => 5,
            CliError::Sweep(_) => 2,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Invalid(v) => CliError::Invalid(v),
            other => CliError::Solve(other),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "eoq-subst",
    version,
    about = "Optimal order policies for two products under one-way substitution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and print the report.
    Solve(Common),
    /// Run the sweep section of the configuration.
    Sweep(Common),
    /// Solve, then check the optimum against the numerical oracle.
    Verify(Common),
    /// List violated parameter assumptions.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Cost model (basic or eoqiss).
    #[arg(long)]
    model: Option<String>,
    /// Substitution regime (partial, full, none or auto).
    #[arg(long)]
    regime: Option<Regime>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Cross-check solves against the oracle.
    #[arg(long)]
    verify: bool,
    /// Use the formulas as originally published where they differ from the
    /// derivation.
    #[arg(long)]
    paper_verbatim: bool,
    /// Oracle search box as TAU_MIN,TAU_MAX,T_MIN,T_MAX.
    #[arg(long, value_name = "BOX")]
    seed_region: Option<String>,
    /// Largest accepted relative gap to the oracle optimum.
    #[arg(long)]
    ceiling: Option<f64>,
    /// Override a parameter, e.g. `--set ch2=3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

struct Run {
    config: RunConfig,
    formulas: Formulas,
    digest: String,
}

impl Common {
    fn load(&self) -> Result<Run, CliError> {
        let bytes = std::fs::read(&self.config)
            .map_err(|e| CliError::Config(vec![format!("cannot read {}: {e}", self.config.display())]))?;
        let text =
            String::from_utf8(bytes.clone()).map_err(|_| CliError::Config(vec!["config is not UTF-8".into()]))?;
        let mut config = RunConfig::parse(&text)?;
        if let Some(m) = &self.model {
            config.model = serde_json::from_value(serde_json::Value::String(m.clone()))
                .map_err(|_| CliError::Config(vec![format!("unknown model `{m}` (expected basic or eoqiss)")]))?;
        }
        if let Some(r) = self.regime {
            config.regime = r;
        }
        if let Some(f) = self.format {
            config.format = f;
        }
        config.verify |= self.verify;
        if let Some(c) = self.ceiling {
            config.ceiling = c;
        }
        if let Some(b) = &self.seed_region {
            let v: Vec<f64> = b
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Config(vec![format!("--seed-region expects four numbers, got `{b}`")]))?;
            let [tau_min, tau_max, cycle_min, cycle_max] = v[..] else {
                return Err(CliError::Config(vec![format!(
                    "--seed-region expects four numbers, got `{b}`"
                )]));
            };
            let previous = config.region.take();
            config.region = Some(RegionOverride {
                tau_min: Some(tau_min),
                tau_max: Some(tau_max),
                cycle_min: Some(cycle_min),
                cycle_max: Some(cycle_max),
                resolution: previous.as_ref().and_then(|r| r.resolution),
                refine_tolerance: previous.as_ref().and_then(|r| r.refine_tolerance),
            });
        }
        for s in &self.sets {
            config.set(s)?;
        }
        if !(config.ceiling.is_finite() && config.ceiling > 0.0) {
            return Err(CliError::Config(vec![format!(
                "ceiling must be positive, got {}",
                config.ceiling
            )]));
        }
        Ok(Run {
            config,
            formulas: if self.paper_verbatim {
                Formulas::Printed
            } else {
                Formulas::Derived
            },
            digest: hex::encode(Sha256::digest(&bytes)),
        })
    }
}

fn solve_config(run: &Run) -> Result<SolveReport, CliError> {
    let c = &run.config;
    Ok(solve(&c.params, c.model, c.regime, &c.settings, run.formulas)?)
}

fn cmd_solve(run: &Run) -> Result<String, CliError> {
    let c = &run.config;
    let mut report = solve_config(run)?;
    if c.verify {
        let v = verify_with_ceiling(&report, &c.params, &c.search_region(), c.ceiling).map_err(CliError::Verify)?;
        report = v.report;
    }
    Ok(match c.format {
        Format::Json => output::json(&report),
        Format::Csv => output::report_csv(&report),
    })
}

fn cmd_verify(run: &Run) -> Result<String, CliError> {
    let c = &run.config;
    let report = solve_config(run)?;
    let v = verify_with_ceiling(&report, &c.params, &c.search_region(), c.ceiling).map_err(CliError::Verify)?;
    Ok(match c.format {
        Format::Json => output::json(&v),
        Format::Csv => output::verification_csv(&v),
    })
}

fn cmd_sweep(run: &Run) -> Result<String, CliError> {
    let c = &run.config;
    let section = c
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config(vec!["config has no `sweep` section".into()]))?;
    let spec = SweepSpec {
        base: c.params,
        axes: section.axes.clone(),
        regimes: section.regimes.clone(),
        model: c.model,
        cap: section.cap,
        settings: c.settings,
        formulas: run.formulas,
    };
    let rows = run_sweep(&spec, section.verify_each || c.verify).map_err(CliError::Sweep)?;
    let header = output::SweepHeader {
        tool: env!("CARGO_BIN_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: run.digest.clone(),
        model: c.model.to_string(),
        axes: &spec.axes,
    };
    Ok(match c.format {
        Format::Json => output::json(&output::SweepDocument {
            header,
            rows: &rows,
            findings: qualitative_checks(&rows).ok(),
        }),
        Format::Csv => output::sweep_csv(&header, &rows),
    })
}

fn cmd_validate(run: &Run) -> Result<String, CliError> {
    let c = &run.config;
    let violations = c.model.validate(&c.params);
    let text = match c.format {
        Format::Json => output::json(&serde_json::json!({
            "model": c.model,
            "valid": violations.is_empty(),
            "violations": violations,
        })),
        Format::Csv => {
            let mut s = String::from("rule,field,message\n");
            for v in &violations {
                s.push_str(&format!(
                    "{},{},\"{}\"\n",
                    v.rule.code(),
                    v.field,
                    v.message.replace('"', "\"\"")
                ));
            }
            s
        }
    };
    if violations.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Invalid(violations))
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("EOQ_SUBST_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(vec![format!(
            "EOQ_SUBST_THREADS must be a positive integer, got `{value}`"
        )])
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(vec![format!("cannot size the thread pool: {e}")]))
}

fn run(cli: Cli) -> Result<String, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Solve(a) => cmd_solve(&a.load()?),
        Command::Sweep(a) => cmd_sweep(&a.load()?),
        Command::Verify(a) => cmd_verify(&a.load()?),
        Command::Validate(a) => cmd_validate(&a.load()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        use eoq_subst::Policy;
        let p = Policy::new(0.1, 1.0).unwrap();
        assert_eq!(CliError::Config(vec![]).exit_code(), 2);
        assert_eq!(CliError::from(SolveError::Invalid(vec![])).exit_code(), 2);
        assert_eq!(CliError::from(SolveError::Infeasible(String::new())).exit_code(), 3);
        assert_eq!(
            CliError::from(SolveError::NoConvergence { iterations: 1, last: p }).exit_code(),
            3
        );
        assert_eq!(
            CliError::Verify(OracleError::Inconsistent {
                reported: 1.0,
                simulated: 2.0,
                gap: 1.0
            })
            .exit_code(),
            4
        );
        assert_eq!(CliError::Sweep(SweepError::TooLarge { size: 2, cap: 1 }).exit_code(), 5);
    }

    #[test]
    fn model_names() {
        let m: eoq_subst::Model = serde_json::from_str("\"eoqiss\"").unwrap();
        assert_eq!(m, eoq_subst::Model::Eoqiss);
    }
}
