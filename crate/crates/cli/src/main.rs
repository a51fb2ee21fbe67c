use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ngca_cli::commands;
use ngca_cli::config::RunConfig;
use ngca_cli::suites::Suite;
use ngca_cli::{exit_code, CliError, Report};

/// Centrally extended N-Galilean conformal algebras: exact checks,
/// coadjoint orbits, dynamics and symmetries.
#[derive(Parser)]
#[command(name = "ngca", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure-constant tables.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Coadjoint orbits.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Casimir invariants.
    #[command(subcommand)]
    Casimir(CasimirCmd),
    /// Integrate a configured orbit and export the trajectory.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Trajectory CSV; overrides the config `csv` key.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Summary JSON; overrides the config `json` key.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Symmetry checks.
    #[command(subcommand)]
    Symmetry(SymmetryCmd),
    /// Randomized property suites.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// JSON file of tolerance overrides.
        #[arg(long)]
        tolerances: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Negate one stored structure constant, `N:X:Y`.
        #[arg(long, hide = true)]
        flip: Option<String>,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    dim: u8,
    #[arg(long)]
    central: bool,
    /// Adjoin the internal dilation `D_s`.
    #[arg(long)]
    ds: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Exact Jacobi, antisymmetry and specialization checks.
    Check(AlgebraArgs),
    /// Print the structure constants as JSON.
    Dump(AlgebraArgs),
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// SL(2,R) orbit of an internal vector `chi`.
    Classify {
        /// Three comma-separated components, e.g. `1,0,0.5`.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long, default_value_t = ngca_core::coadjoint::DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Orbit point of a configured label and external coordinates.
    Parametrize {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum CasimirCmd {
    /// Casimir values at the configured point against the label.
    Eval {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum SymmetryCmd {
    /// Integrals of motion and finite transforms along the configured flow.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}

fn emit(result: Result<Report, CliError>, json: Option<PathBuf>) -> i32 {
    let result = result.and_then(|report| {
        let text = report.to_json();
        if let Some(path) = &json {
            commands::write_text(path, &text)?;
        }
        println!("{text}");
        for case in report.failures() {
            eprintln!("FAIL {}: {} > {}", case.name, case.measured, case.allowed);
        }
        Ok(report)
    });
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    exit_code(&result)
}

fn with_config(path: &Path, f: fn(&RunConfig) -> Result<Report, CliError>) -> i32 {
    emit(RunConfig::from_file(path).and_then(|cfg| f(&cfg)), None)
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Algebra(AlgebraCmd::Check(a)) => {
            emit(commands::algebra_check(a.n, a.dim, a.central, a.ds), a.json)
        }
        Command::Algebra(AlgebraCmd::Dump(a)) => {
            match commands::algebra_dump(a.n, a.dim, a.central, a.ds).and_then(|text| {
                a.json
                    .as_deref()
                    .map_or(Ok(()), |p| commands::write_text(p, &text))
                    .map(|_| text)
            }) {
                Ok(text) => {
                    println!("{text}");
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Orbit(OrbitCmd::Classify { chi, tol }) => emit(
            commands::parse_chi(&chi).and_then(|chi| commands::orbit_classify(chi, tol)),
            None,
        ),
        Command::Orbit(OrbitCmd::Parametrize { config }) => {
            with_config(&config, commands::orbit_parametrize)
        }
        Command::Casimir(CasimirCmd::Eval { config }) => {
            with_config(&config, commands::casimir_eval)
        }
        Command::Simulate { config, csv, json } => {
            let result = RunConfig::from_file(&config);
            let json = json.or_else(|| result.as_ref().ok().and_then(|c| c.json.clone()));
            emit(
                result.and_then(|cfg| commands::simulate(&cfg, csv.as_deref())),
                json,
            )
        }
        Command::Symmetry(SymmetryCmd::Verify { config }) => {
            with_config(&config, commands::symmetry_verify)
        }
        Command::Verify {
            suite,
            seed,
            tolerances,
            json,
            flip,
        } => emit(
            commands::verify(suite, seed, tolerances.as_deref(), flip.as_deref()),
            json,
        ),
    }
}

fn main() -> ExitCode {
    let code = run(Cli::parse());
    ExitCode::from(code as u8)
}
