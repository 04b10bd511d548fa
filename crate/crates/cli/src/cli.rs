use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use projmln_core::projectivity::DEFAULT_TOLERANCE;
use projmln_core::{
    check_projective, fit_projective_mln, fit_rbm, fomc, mln_to_rbm, normalize, partition_function,
    partition_function_oracle, rbm_to_mln, sample, subsample_consistency_experiment,
    verify_marginal_consistency, FitOptions, DEFAULT_ATOM_CAP,
};
use serde::Deserialize;

use crate::format::{self, FormatError, FreeWeights};
use crate::report;

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] projmln_core::Error),
}

#[derive(Parser, Debug)]
#[command(
    name = "projmln",
    version,
    about = "Projectivity tools for two-variable Markov logic networks"
)]
struct Cli {
    /// Write the result to this file instead of standard output.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the s, t and f tables of an MLN.
    Normalize { mln: PathBuf },
    /// Log partition function at domain size N.
    Partition {
        mln: PathBuf,
        #[arg(long)]
        n: usize,
        /// Sum over every world instead of using the lifted formula.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ATOM_CAP)]
        max_atoms: usize,
    },
    /// Count the models of a universally quantified formula.
    Fomc {
        formula: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Decide projectivity from the normal form.
    CheckProjective {
        mln: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Largest gap between the size-N marginal on M elements and the size-M model.
    VerifyMarginals {
        mln: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_ATOM_CAP)]
        max_atoms: usize,
    },
    /// Convert a projective MLN to RBM parameters.
    ToRbm { mln: PathBuf },
    /// Convert RBM parameters to an MLN.
    RbmToMln { rbm: PathBuf },
    /// Draw a world from an RBM.
    Sample {
        rbm: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Maximum-likelihood RBM parameters of a world.
    FitRbm {
        world: PathBuf,
        /// File whose `predicate` lines declare the world's language.
        #[arg(long, value_name = "FILE")]
        lang: PathBuf,
    },
    /// Fit the weights of a structure as a projective MLN.
    FitProjective {
        world: PathBuf,
        /// MLN file; `?` marks a free weight.
        #[arg(long, value_name = "FILE")]
        structure: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        gtol: f64,
        #[arg(long, default_value_t = 1e-6)]
        ctol: f64,
    },
    /// Subsample-consistency experiment described by a TOML file.
    Consistency {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
}

/// Experiment configuration. Paths are relative to the config file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    /// RBM parameter file with the true parameters.
    params: PathBuf,
    /// Optional declaration text; must match the parameter file's language.
    language: Option<String>,
    n: usize,
    m: Vec<usize>,
    /// Number of seeds; seeds `first_seed .. first_seed + seeds` are used.
    seeds: u64,
    #[serde(default)]
    first_seed: u64,
    /// Where to write the estimates CSV.
    output: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// What a command produced: its main result plus an optional note for
/// standard error.
struct Produced {
    result: String,
    note: String,
}

impl From<String> for Produced {
    fn from(result: String) -> Self {
        Self {
            result,
            note: String::new(),
        }
    }
}

fn execute(command: Command, output: Option<&Path>) -> Result<Produced, CliError> {
    let mln = |p: &Path| load(p, |t| format::parse_mln(t, FreeWeights::Forbidden));
    Ok(match command {
        Command::Normalize { mln: path } => report::normal_form(&normalize(&mln(&path)?)).into(),
        Command::Partition {
            mln: path,
            n,
            oracle,
            max_atoms,
        } => {
            let model = mln(&path)?;
            positive("--n", n)?;
            let log_z = if oracle {
                partition_function_oracle(&model, n, max_atoms)?
            } else {
                partition_function(&normalize(&model), n)
            };
            format!("{}\n", report::log_partition(log_z)).into()
        }
        Command::Fomc { formula, n } => {
            let (lang, f) = load(&formula, format::parse_fol)?;
            positive("--n", n)?;
            format!("{}\n", fomc(&lang, &f, n)?).into()
        }
        Command::CheckProjective { mln: path, tol } => {
            report::verdict(&check_projective(&normalize(&mln(&path)?), tol)?).into()
        }
        Command::VerifyMarginals {
            mln: path,
            n,
            m,
            max_atoms,
        } => {
            let dev = verify_marginal_consistency(&mln(&path)?, n, m, max_atoms)?;
            format!("max deviation = {}\n", report::num(dev)).into()
        }
        Command::ToRbm { mln: path } => {
            format::write_rbm(&mln_to_rbm(&normalize(&mln(&path)?))?).into()
        }
        Command::RbmToMln { rbm } => {
            format::write_mln(&rbm_to_mln(&load(&rbm, format::parse_rbm)?)).into()
        }
        Command::Sample { rbm, n, seed } => {
            let params = load(&rbm, format::parse_rbm)?;
            positive("--n", n)?;
            format::write_world(params.language(), &sample(&params, n, seed)).into()
        }
        Command::FitRbm { world, lang } => {
            let lang = load(&lang, format::parse_declarations)?;
            let world = load(&world, |t| format::parse_world(t, &lang))?;
            format::write_rbm(&fit_rbm(&lang, &world)).into()
        }
        Command::FitProjective {
            world,
            structure,
            gtol,
            ctol,
        } => {
            let s = load(&structure, |t| format::parse_mln(t, FreeWeights::Allowed))?;
            let world = load(&world, |t| format::parse_world(t, s.language()))?;
            let opts = FitOptions {
                gtol,
                ctol,
                ..FitOptions::default()
            };
            report::fit(&s, &fit_projective_mln(&s, &world, &opts)?).into()
        }
        Command::Consistency { config } => consistency(&config, output)?,
    })
}

fn positive(flag: &str, value: usize) -> Result<(), CliError> {
    if value == 0 {
        return Err(
            projmln_core::Error::InvalidArgument(format!("{flag} must be at least 1")).into(),
        );
    }
    Ok(())
}

fn consistency(path: &Path, output: Option<&Path>) -> Result<Produced, CliError> {
    let config_err = |message: String| CliError::Config {
        path: path.to_path_buf(),
        message,
    };
    let cfg: ExperimentConfig =
        toml::from_str(&read(path)?).map_err(|e| config_err(e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let truth = load(&base.join(&cfg.params), format::parse_rbm)?;
    if let Some(decl) = &cfg.language {
        let lang = projmln_core::parse_language(decl).map_err(|e| config_err(e.to_string()))?;
        if &lang != truth.language() {
            return Err(config_err(
                "language differs from the parameter file".into(),
            ));
        }
    }
    let seeds: Vec<u64> = (cfg.first_seed..cfg.first_seed + cfg.seeds).collect();
    let report = subsample_consistency_experiment(&truth, cfg.n, &cfg.m, &seeds)?;
    let csv = report::estimates_csv(&report);
    let summary = report::consistency_summary(&report);
    // `-o` wins over the config file and is written by the caller. Without
    // either the estimates go to standard output and the summary to standard
    // error.
    match cfg.output {
        Some(target) if output.is_none() => {
            write(&base.join(target), &csv)?;
            Ok(summary.into())
        }
        _ => Ok(Produced {
            result: csv,
            note: summary,
        }),
    }
}

/// Parses `args` (program name first) and runs the command.
///
/// Exit codes: 0 on success, 1 when a file or the model is at fault, 2 for
/// usage errors.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let output = cli.output.clone();
    match execute(cli.command, output.as_deref()) {
        Ok(produced) => match &output {
            Some(path) => match write(path, &produced.result) {
                Ok(()) => Outcome {
                    code: 0,
                    stdout: String::new(),
                    stderr: produced.note,
                },
                Err(e) => failure(e),
            },
            None => Outcome {
                code: 0,
                stdout: produced.result,
                stderr: produced.note,
            },
        },
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome {
        code: 1,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}
