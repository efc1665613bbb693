//! Command-line front end: experiment subcommands over one validated
//! config, writing CSV artifacts plus a run manifest per invocation.
//!
//! Exit codes: 0 success, 1 bad input (config, flags, files), 2 numerical
//! failure (non-convergence, no admissible optimum, unidentifiable fit).

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form also rejects NaN, which must never pass a bound check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod manifest;

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

use commands::{
    run_cases, run_fit, run_optimize, run_reliability, run_selftest, run_sensitivity, run_sweep,
    ModelChoice, OutputFile, SweepParam,
};
use config::Experiment;
use failsim_core::{Error, Result};
use manifest::{sha256_hex, Manifest, MANIFEST_FILE};

#[derive(Debug, Parser)]
#[command(
    name = "failsim",
    version,
    about = "Reliability curves and inspection planning for degrading, shock-loaded systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Experiment config (TOML); the built-in servo-valve example when
    /// omitted.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Override the master seed from the config.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Override the replication count from the config.
    #[arg(long)]
    pub replications: Option<usize>,

    /// Directory for output CSVs and the run manifest.
    #[arg(long, value_name = "DIR", default_value = "failsim-out")]
    pub out: PathBuf,

    /// Which shock model(s) to run: 1 (memoryless), 2 (facilitated), both.
    #[arg(long, value_enum, default_value = "both")]
    pub model: ModelChoice,

    /// Renormalize truncated count-weight rows to sum to one at each time.
    #[arg(long)]
    pub renormalize_pmf: bool,

    /// Worker thread count; FAILSIM_THREADS is honored when omitted.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reliability curves R(t) for the selected models.
    Reliability {
        #[command(flatten)]
        common: Common,
    },
    /// Reliability curves under the facilitated model with gamma or eta
    /// swept over several values on shared random numbers.
    Sensitivity {
        #[command(flatten)]
        common: Common,
        /// Which shock parameter to sweep.
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma-separated parameter values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Reliability curves for the four shock/degradation dependence cases.
    Cases {
        #[command(flatten)]
        common: Common,
    },
    /// Optimal inspection interval for the configured ages and costs.
    Optimize {
        #[command(flatten)]
        common: Common,
    },
    /// Optimal inspection intervals across an initial-age scenarios file
    /// (CSV header `label,u_1,...,u_n`).
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        scenarios: PathBuf,
    },
    /// Gamma-process maximum likelihood fit from increment data (CSV
    /// header `dt,dx`).
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
    },
    /// Built-in numerical health checks; writes no files.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Reliability { common }
            | Command::Sensitivity { common, .. }
            | Command::Cases { common }
            | Command::Optimize { common }
            | Command::Sweep { common, .. }
            | Command::Fit { common, .. }
            | Command::Selftest { common } => common,
        }
    }
}

/// Maps every error to the documented process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain { .. } | Error::Validation(_) | Error::Parse { .. } | Error::Io(_) => 1,
        Error::Unidentifiable(_)
        | Error::NoConvergence { .. }
        | Error::UnsupportedMode(_)
        | Error::NoOptimum(_) => 2,
    }
}

fn effective_threads(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("FAILSIM_THREADS") {
        Ok(s) => {
            let n: usize = s.trim().parse().map_err(|_| {
                Error::parse(
                    "FAILSIM_THREADS",
                    format!("expected a positive integer, got '{s}'"),
                )
            })?;
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

/// Caps the global worker pool. Must run before any parallel work.
pub fn init_threads(flag: Option<usize>) -> Result<()> {
    if let Some(n) = effective_threads(flag)? {
        if n == 0 {
            return Err(Error::domain("threads", "thread count must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::domain("threads", e.to_string()))?;
    }
    Ok(())
}

/// Writes all output files plus the manifest, removing anything already
/// written if any write fails.
pub fn write_outputs(
    dir: &Path,
    files: &[OutputFile],
    manifest: &Manifest,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written: Vec<PathBuf> = Vec::with_capacity(files.len() + 1);
    let result = (|| -> std::io::Result<()> {
        for (name, contents) in files {
            let path = dir.join(name);
            std::fs::write(&path, contents)?;
            written.push(path);
        }
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, manifest.render())?;
        written.push(path);
        Ok(())
    })();
    if let Err(e) = result {
        for p in &written {
            let _ = std::fs::remove_file(p);
        }
        return Err(e.into());
    }
    Ok(written)
}

/// Loads the experiment, applies flag overrides, runs the subcommand, and
/// writes its artifacts.
pub fn run(cli: Cli) -> Result<()> {
    let common = cli.command.common().clone();
    init_threads(common.threads)?;
    let mut exp = match &common.config {
        Some(path) => Experiment::from_path(path)?,
        None => Experiment::built_in(),
    };
    if let Some(seed) = common.seed {
        exp.sim.seed = seed;
    }
    if let Some(n) = common.replications {
        exp.sim.replications = n;
    }
    exp.sim.validate(&exp.system)?;

    let command_line: String = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let renorm = common.renormalize_pmf;
    let (files, extras): (Vec<OutputFile>, Vec<(String, String)>) = match &cli.command {
        Command::Reliability { .. } => (run_reliability(&exp, common.model, renorm)?, vec![]),
        Command::Sensitivity { param, values, .. } => {
            (run_sensitivity(&exp, *param, values, renorm)?, vec![])
        }
        Command::Cases { .. } => (run_cases(&exp, renorm)?, vec![]),
        Command::Optimize { .. } => (run_optimize(&exp, common.model, renorm)?, vec![]),
        Command::Sweep { scenarios, .. } => {
            let text = std::fs::read_to_string(scenarios)?;
            (
                run_sweep(&exp, &text, renorm)?,
                vec![("scenarios_sha256".to_string(), sha256_hex(&text))],
            )
        }
        Command::Fit { data, .. } => {
            let text = std::fs::read_to_string(data)?;
            (
                run_fit(&text)?,
                vec![("data_sha256".to_string(), sha256_hex(&text))],
            )
        }
        Command::Selftest { .. } => {
            run_selftest(&exp)?;
            (vec![], vec![])
        }
    };
    if files.is_empty() {
        return Ok(());
    }

    let mut manifest = Manifest::new(
        &exp.source_text,
        exp.sim.seed,
        exp.sim.replications,
        command_line,
    );
    for (k, v) in extras {
        manifest = manifest.with_extra(&k, v);
    }
    for path in write_outputs(&common.out, &files, &manifest)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes_partition_the_error_space() {
        assert_eq!(exit_code(&Error::domain("x", "y")), 1);
        assert_eq!(exit_code(&Error::parse("x", "y")), 1);
        assert_eq!(exit_code(&Error::Validation(vec![])), 1);
        assert_eq!(
            exit_code(&Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "gone"
            ))),
            1
        );
        assert_eq!(exit_code(&Error::Unidentifiable("flat".into())), 2);
        assert_eq!(
            exit_code(&Error::NoConvergence {
                iterations: 3,
                residual: 0.1
            }),
            2
        );
        assert_eq!(exit_code(&Error::UnsupportedMode("no".into())), 2);
        assert_eq!(exit_code(&Error::NoOptimum("none".into())), 2);
    }

    #[test]
    fn model_flag_accepts_1_2_and_both() {
        let cli = Cli::try_parse_from(["failsim", "reliability", "--model", "1"]).unwrap();
        assert_eq!(cli.command.common().model, ModelChoice::Poisson);
        let cli = Cli::try_parse_from(["failsim", "reliability", "--model", "both"]).unwrap();
        assert_eq!(cli.command.common().model, ModelChoice::Both);
        assert!(Cli::try_parse_from(["failsim", "reliability", "--model", "3"]).is_err());
    }

    #[test]
    fn sensitivity_values_split_on_commas() {
        let cli = Cli::try_parse_from([
            "failsim",
            "sensitivity",
            "--param",
            "gamma",
            "--values",
            "0,0.001,0.005",
        ])
        .unwrap();
        match cli.command {
            Command::Sensitivity { values, param, .. } => {
                assert_eq!(values, vec![0.0, 0.001, 0.005]);
                assert_eq!(param, SweepParam::Gamma);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn write_outputs_cleans_up_when_a_write_fails() {
        let dir = std::env::temp_dir().join(format!("failsim-wo-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let manifest = Manifest::new("cfg", 1, 2, "cmd".into());
        // A file name that is a directory forces the second write to fail.
        std::fs::create_dir_all(dir.join("bad.csv")).unwrap();
        let files = vec![
            ("good.csv".to_string(), "a,b\n".to_string()),
            ("bad.csv".to_string(), "c,d\n".to_string()),
        ];
        let err = write_outputs(&dir, &files, &manifest).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
        assert!(
            !dir.join("good.csv").exists(),
            "partial output must be removed"
        );
        assert!(!dir.join(MANIFEST_FILE).exists());
        let _ = std::fs::remove_dir_all(&dir);
    }
}
