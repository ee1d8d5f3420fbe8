//! Command-line runner around the library: tau sweeps, headline numbers, and
//! the cross-validation suite.
//!
//! Exit codes: 0 success, 1 validation problem, 2 invariant breach.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use ion_cavity::sweep::{
    figure_recipes, headline_numbers, run_sweep, verify, OutputKind, SweepRequest, VerifyOptions,
    ORACLE_TOL,
};
use ion_cavity::{Preparation, SimulationConfig};

#[derive(Parser)]
#[command(name = "ion-cavity", version, about = "Three trapped ions in a red-sideband cavity: dynamics and entanglement datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the interaction parameter and emit a CSV/JSON dataset.
    Sweep(SweepArgs),
    /// Print the headline quantities of the scheme.
    Headline,
    /// Run the cross-validation suite and report per-check deviations.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Initial internal state of the ions: "ground" or "excited".
    #[arg(long, default_value = "ground")]
    prep: String,
    /// Initial phonon occupation.
    #[arg(long, default_value_t = 3)]
    phonons: u32,
    /// Initial photon occupation.
    #[arg(long, default_value_t = 3)]
    photons: u32,
    /// Ion-cavity coupling, angular, in 1/s.
    #[arg(long, default_value_t = 8.95e6)]
    g: f64,
    /// Lamb-Dicke parameter.
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    /// Upper end of the tau grid (the grid starts at 0).
    #[arg(long = "tau-max", default_value_t = 3.0 * std::f64::consts::PI)]
    tau_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 600)]
    steps: usize,
    /// Use the fixed recipe for reference figure N (1..=7), overriding the
    /// scenario flags above.
    #[arg(long)]
    figure: Option<u8>,
    /// Output path; figure 7 writes one file per preparation. Stdout when
    /// omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// "csv" or "json".
    #[arg(long, default_value = "csv")]
    format: String,
    /// Cross-check every grid point against the brute-force propagator;
    /// deviations beyond tolerance exit with code 2.
    #[arg(long = "with-oracle")]
    with_oracle: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Chain labels run over (m, n) in [0, max-mn]^2.
    #[arg(long = "max-mn", default_value_t = 2)]
    max_mn: i64,
    /// Tau samples per scenario.
    #[arg(long = "tau-samples", default_value_t = 40)]
    tau_samples: usize,
    /// Seeded random pure states for the identity checks.
    #[arg(long = "random-states", default_value_t = 20)]
    random_states: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Sweep(args) => run_sweep_command(&args),
        Command::Headline => emit(&headline_numbers().to_string()).map(|()| 0),
        Command::Verify(args) => run_verify_command(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        // a consumer like `head` closing the pipe early is not an error
        Err(ion_cavity::Error::Io(err)) if err.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::from(0)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn emit(text: &str) -> ion_cavity::Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    Ok(())
}

fn run_sweep_command(args: &SweepArgs) -> ion_cavity::Result<u8> {
    enum Format {
        Csv,
        Json,
    }
    let format = match args.format.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => {
            return Err(ion_cavity::Error::InvalidConfig(format!(
                "unknown format {other:?}, expected \"csv\" or \"json\""
            )))
        }
    };

    let mut recipes = match args.figure {
        Some(figure) => figure_recipes(figure)?,
        None => {
            let preparation = match args.prep.as_str() {
                "ground" => Preparation::AllGround,
                "excited" => Preparation::AllExcited,
                other => {
                    return Err(ion_cavity::Error::InvalidConfig(format!(
                        "unknown preparation {other:?}, expected \"ground\" or \"excited\""
                    )))
                }
            };
            let mut config = SimulationConfig::new(preparation, args.phonons, args.photons);
            config.g = args.g;
            config.eta = args.eta;
            let mut request = SweepRequest::standard(config);
            request.tau_max = args.tau_max;
            request.steps = args.steps;
            vec![ion_cavity::FigureRecipe { figure: 0, label: None, request }]
        }
    };
    if args.with_oracle {
        for recipe in &mut recipes {
            recipe.request.outputs.insert(OutputKind::OracleCheck);
        }
    }

    let mut exit = 0u8;
    for recipe in &recipes {
        let config = &recipe.request.config;
        if !config.eta_in_lamb_dicke_regime() {
            eprintln!(
                "warning: eta = {} is outside the Lamb-Dicke regime the interaction was derived in",
                config.eta
            );
        }
        let data = run_sweep(&recipe.request)?;
        if let Some(deviation) = data.oracle_max_deviation {
            if deviation > ORACLE_TOL {
                eprintln!(
                    "invariant breach: oracle deviation {deviation:.3e} exceeds {ORACLE_TOL:.1e}"
                );
                exit = 2;
            } else {
                eprintln!("oracle check passed: max amplitude deviation {deviation:.3e}");
            }
        }
        let rendered = match format {
            Format::Csv => data.to_csv(),
            Format::Json => data.to_json(),
        };
        match &args.out {
            Some(path) => {
                let target = labeled_path(path, recipe.label);
                std::fs::write(&target, rendered)?;
                eprintln!("wrote {}", target.display());
            }
            None => emit(&rendered)?,
        }
    }
    Ok(exit)
}

/// `data.csv` + label "ground" -> `data_ground.csv`.
fn labeled_path(path: &Path, label: Option<&str>) -> PathBuf {
    let Some(label) = label else {
        return path.to_path_buf();
    };
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let mut name = format!("{stem}_{label}");
    if let Some(ext) = path.extension() {
        name.push('.');
        name.push_str(&ext.to_string_lossy());
    }
    path.with_file_name(name)
}

fn run_verify_command(args: &VerifyArgs) -> ion_cavity::Result<u8> {
    let options = VerifyOptions {
        max_mn: args.max_mn,
        tau_samples: args.tau_samples,
        random_states: args.random_states,
        seed: args.seed,
        ..VerifyOptions::default()
    };
    let summary = verify(&options)?;
    emit(&summary.to_string())?;
    Ok(if summary.passed() { 0 } else { 2 })
}
