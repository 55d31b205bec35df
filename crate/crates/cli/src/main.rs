//! `subrad`: runs one experiment from a TOML config and writes CSV tables
//! with JSON sidecars, or runs the acceptance criteria with `check`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;
use subrad_core::experiments::{self, check, ExperimentConfig, ExperimentKind};
use subrad_core::Error;

#[derive(Parser, Debug)]
#[command(name = "subrad", version, about = "Subradiant waveguide-array sensing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Run the acceptance criteria and print a pass/fail table.
    #[arg(long, global = true)]
    check: bool,

    /// Experiment config (TOML). Defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Base seed for disorder realizations; overrides `disorder.base_seed`.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads. Output does not depend on this.
    #[arg(long, global = true, value_name = "K", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
enum Command {
    /// Most-subradiant decay rate against N, with closed forms.
    DecayScaling,
    /// Transmission, reflection and loss on a detuning grid.
    Spectrum,
    /// Feature shift under a spacing change, with paired spectra.
    Shift,
    /// Figure of merit against N.
    FomSweep,
    /// Classical and quantum Fisher information against N.
    FisherSweep,
    /// Figure of merit over positional-disorder realizations.
    Disorder,
    /// Cramér–Rao spacing resolution.
    ResolveDd,
    /// Run the acceptance criteria.
    Check {
        /// Run only these criteria (1-8). Repeatable.
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u8).range(1..=8))]
        only: Vec<u8>,
    },
}

impl Command {
    fn kind(&self) -> Option<ExperimentKind> {
        Some(match self {
            Self::DecayScaling => ExperimentKind::DecayScaling,
            Self::Spectrum => ExperimentKind::Spectrum,
            Self::Shift => ExperimentKind::Shift,
            Self::FomSweep => ExperimentKind::FomSweep,
            Self::FisherSweep => ExperimentKind::FisherSweep,
            Self::Disorder => ExperimentKind::DisorderEnsemble,
            Self::ResolveDd => ExperimentKind::ResolveDd,
            Self::Check { .. } => return None,
        })
    }
}

/// Exit status plus a report that goes to stderr as one JSON object.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "usage", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) => Self { code: 3, kind: "config", message: e.to_string() },
            _ => Self { code: 4, kind: "numerical", message: e.to_string() },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // --help and --version land here too and are not failures
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SUBRAD_LOG", "warn"))
        .format_timestamp(None)
        .init();

    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let report = json!({ "error": { "kind": f.kind, "message": f.message, "exit_code": f.code } });
            eprintln!("{report}");
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    if let Some(k) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k as usize)
            .build_global()
            .map_err(|e| Failure::usage(format!("--jobs: {e}")))?;
    }
    match (&cli.command, cli.check) {
        (Some(Command::Check { only }), _) => Ok(run_check(only)),
        (None, true) => Ok(run_check(&[])),
        (Some(cmd), false) => run_experiment(cmd.kind().expect("check handled above"), &cli),
        (Some(_), true) => Err(Failure::usage("--check cannot be combined with an experiment subcommand")),
        (None, false) => Err(Failure::usage("no subcommand given; see `subrad --help`")),
    }
}

fn run_experiment(kind: ExperimentKind, cli: &Cli) -> Result<u8, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.disorder.base_seed = seed;
    }
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));

    let start = Instant::now();
    let tables = experiments::run(kind, &cfg)?;
    let written = experiments::write_tables(&dir, &tables, &cfg, kind.name()).map_err(|e| Failure {
        code: 1,
        kind: "io",
        message: format!("writing to {}: {e}", dir.display()),
    })?;
    log::info!("{} finished in {:.1} s", kind.name(), start.elapsed().as_secs_f64());
    for path in written {
        println!("{}", path.display());
    }
    Ok(0)
}

fn run_check(only: &[u8]) -> u8 {
    let ids: Vec<u8> = if only.is_empty() { (1..=8).collect() } else { only.to_vec() };
    let mut passed = 0;
    for &id in &ids {
        let report = check::criterion(id).expect("id range enforced by clap");
        print!("{}", report.render());
        if report.passed() {
            passed += 1;
        }
    }
    println!("\n{passed}/{} criteria passed", ids.len());
    if passed == ids.len() {
        0
    } else {
        1
    }
}
