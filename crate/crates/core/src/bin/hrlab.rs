use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hrlab::harness::{
    check_fibration, random_hyperplane, restrict_instance, run_checks, run_search, run_sweep,
    CheckOptions, Constraint, FibrationModel, SearchConfig, SearchMode, SweepConfig,
};
use hrlab::hodge_riemann::homotopy_sweep;
use hrlab::restriction::Hyperplane;
use hrlab::{Error, Instance, Tolerance};

/// Checks the linear mixed Hodge-Riemann relations on explicit and random
/// instances.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on bad
/// input or usage.
#[derive(Parser)]
#[command(name = "hrlab", version)]
struct Cli {
    /// Relative rank/sign threshold (overrides HRLAB_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one instance file.
    Check {
        instance: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        no_validate: bool,
    },
    /// Seeded sweep over random valid instances.
    Random {
        /// JSON sweep configuration; flags below are ignored when given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ConstraintArg::All)]
        constraint: ConstraintArg,
        /// Instances per (n, m, p, q) tuple.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Homotopy grid points per instance (0 skips the homotopy).
        #[arg(long, default_value_t = 0)]
        steps: usize,
        /// Local-estimate samples per instance (0 skips the sampling).
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Verify a fibration model.
    Fibration {
        model: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Look for failures outside the theorem's hypotheses.
    Search {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative size of the signed perturbation (arbitrary-omega).
        #[arg(long, default_value_t = 1.0)]
        perturbation: f64,
    },
    /// Restrict an instance's polarizations to a hyperplane.
    Restrict {
        instance: PathBuf,
        /// Hyperplane JSON `{"v": [[re, im], ...]}`; sampled from --seed if absent.
        #[arg(long)]
        hyperplane: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_validate: bool,
    },
    /// Track the signature of Q along the deformation to the classical case.
    Deform {
        instance: PathBuf,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        #[arg(long)]
        no_validate: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Homotopy grid points (0 skips the homotopy).
    #[arg(long, default_value_t = 32)]
    steps: usize,
    /// Local-estimate samples (0 skips the sampling).
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            steps: self.steps,
            samples: self.count,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstraintArg {
    All,
    Classical,
    Degenerate,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ArbitraryOmega,
    BasisIntersection,
}

/// Input and usage problems map to exit code 2.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| InputError(format!("{}: {}", path.display(), Error::from(e))))
}

fn load_instance(path: &Path, validate: bool) -> Result<Instance, InputError> {
    let inst: Instance = parse(path)?;
    inst.validate_shape()?;
    if validate {
        inst.validate_hypotheses()?;
    }
    Ok(inst)
}

fn emit<T: Serialize>(value: &T, report: Option<&Path>) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    match report {
        Some(p) => {
            fs::write(p, text + "\n").map_err(|e| InputError(format!("{}: {e}", p.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verdict(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    let tol = match cli.tol {
        Some(t) => Tolerance::with_rank(t)?,
        None => Tolerance::from_env()?,
    };
    let report = cli.report.as_deref();
    match cli.command {
        Command::Check {
            instance,
            run,
            no_validate,
        } => {
            let inst = load_instance(&instance, !no_validate)?;
            let r = run_checks(&inst, &run.options(), &tol);
            emit(&r, report)?;
            if !r.all_pass {
                eprintln!("failed checks: {}", r.failed_checks().join(", "));
            }
            Ok(verdict(r.all_pass))
        }
        Command::Random {
            config,
            n_min,
            n_max,
            constraint,
            count,
            seed,
            steps,
            samples,
        } => {
            let mut cfg = match config {
                Some(p) => parse::<SweepConfig>(&p)?,
                None => SweepConfig {
                    n_min,
                    n_max,
                    constraint: match constraint {
                        ConstraintArg::All => Constraint::All,
                        ConstraintArg::Classical => Constraint::Classical,
                        ConstraintArg::Degenerate => Constraint::Degenerate,
                    },
                    tuples: None,
                    count,
                    seed,
                    tol: None,
                    options: CheckOptions {
                        steps,
                        samples,
                        seed,
                    },
                },
            };
            if cli.tol.is_some() || cfg.tol.is_none() {
                cfg.tol = Some(tol.rank);
            }
            let agg = run_sweep(&cfg)?;
            emit(&agg, report)?;
            eprintln!(
                "checked {}, failed {}",
                agg.counters.checked, agg.counters.failed
            );
            Ok(verdict(agg.all_pass))
        }
        Command::Fibration { model, run } => {
            let model: FibrationModel = parse(&model)?;
            let r = check_fibration(&model, &run.options(), &tol)?;
            emit(&r, report)?;
            Ok(verdict(r.all_pass))
        }
        Command::Search {
            mode,
            budget,
            seed,
            perturbation,
        } => {
            let mode = match mode {
                ModeArg::ArbitraryOmega => SearchMode::ArbitraryOmega,
                ModeArg::BasisIntersection => SearchMode::BasisIntersection,
            };
            let cfg = SearchConfig {
                perturbation,
                ..SearchConfig::new(mode, budget, seed)
            };
            let r = run_search(&cfg, &tol)?;
            emit(&r, report)?;
            eprintln!("{} samples, {} findings", r.samples, r.findings.len());
            // findings are observations, not failures
            Ok(ExitCode::SUCCESS)
        }
        Command::Restrict {
            instance,
            hyperplane,
            seed,
            no_validate,
        } => {
            let inst = load_instance(&instance, !no_validate)?;
            let h = match hyperplane {
                Some(p) => parse::<Hyperplane>(&p)?,
                None => random_hyperplane(inst.n, &mut ChaCha8Rng::seed_from_u64(seed)),
            };
            let r = restrict_instance(&inst, &h)?;
            emit(&r, report)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            if inst.m >= inst.n {
                return Err(InputError(format!(
                    "m = n = {}: the degeneracy locus needs m ≤ n - 1",
                    inst.n
                )));
            }
            Ok(verdict(r.all_pass))
        }
        Command::Deform {
            instance,
            steps,
            no_validate,
        } => {
            let inst = load_instance(&instance, !no_validate)?;
            let r = homotopy_sweep(&inst, steps, &tol)?;
            emit(&r, report)?;
            Ok(verdict(r.verdict))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
