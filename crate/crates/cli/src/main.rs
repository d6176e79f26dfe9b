//! Command-line driver: BER sweeps to CSV, per-symbol traces to text tables.
//!
//! Exit codes: 0 success, 2 unreadable/unparsable scenario input,
//! 3 unwritable output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morphdet_core::{run_symbol_traced, sweep, BerPoint, Scenario};

mod scenario;

use scenario::{Overrides, ScenarioSpec};

#[derive(Parser)]
#[command(
    name = "morphdet",
    version,
    about = "Monte-Carlo BER simulation for morphological, MAP, and matched-filter symbol detectors in impulsive mixture noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a BER sweep over the scenario's sigma2 grid and write a CSV.
    Sweep {
        /// Scenario file (key = value lines).
        #[arg(long)]
        scenario: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        output: PathBuf,
        /// Override the scenario's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the per-detector error target.
        #[arg(long)]
        min_errors: Option<u64>,
        /// Override the symbol cap per grid point.
        #[arg(long)]
        max_symbols: Option<u64>,
    },
    /// Write the per-sample detection trace of one symbol realization.
    ///
    /// The scenario must have exactly one sigma2 grid value.
    Trace {
        /// Scenario file (key = value lines).
        #[arg(long)]
        scenario: PathBuf,
        /// Which symbol realization to trace.
        #[arg(long, default_value_t = 0)]
        symbol_index: u64,
        /// Output table path.
        #[arg(long)]
        output: PathBuf,
    },
}

enum CliError {
    /// Problem on the input side: missing file, parse failure, bad values.
    Input(String),
    /// Problem writing results.
    Output(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep {
            scenario,
            output,
            seed,
            min_errors,
            max_symbols,
        } => run_sweep(
            &scenario,
            &output,
            Overrides {
                seed,
                min_errors,
                max_symbols,
            },
        ),
        Command::Trace {
            scenario,
            symbol_index,
            output,
        } => run_trace(&scenario, symbol_index, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Output(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_scenario(path: &Path, overrides: Overrides) -> Result<(Scenario, Vec<f64>), CliError> {
    let mut spec = ScenarioSpec::load(path).map_err(CliError::Input)?;
    spec.apply(&overrides);
    let base_dir = path.parent().unwrap_or(Path::new("."));
    spec.build(base_dir).map_err(CliError::Input)
}

fn run_sweep(scenario_path: &Path, output: &Path, overrides: Overrides) -> Result<(), CliError> {
    let (scenario, grid) = load_scenario(scenario_path, overrides)?;
    let points = sweep(&scenario, &grid).map_err(|e| CliError::Input(e.to_string()))?;
    let csv = render_csv(&scenario, &points);
    std::fs::write(output, csv)
        .map_err(|e| CliError::Output(format!("cannot write {}: {e}", output.display())))?;
    println!("wrote {} rows to {}", points.len(), output.display());
    Ok(())
}

fn render_csv(scenario: &Scenario, points: &[BerPoint]) -> String {
    let mut out = String::new();
    out.push_str(
        "detector,epsilon,sigma1,sigma2,total_std,symbols,errors,ber,ci_low,ci_high,capped,seed\n",
    );
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            p.detector.name(),
            scenario.noise.epsilon(),
            scenario.noise.sigma1(),
            p.sigma2,
            p.total_std,
            p.symbols,
            p.errors,
            p.ber,
            p.ci_low,
            p.ci_high,
            p.capped,
            scenario.master_seed,
        )
        .expect("string write cannot fail");
    }
    out
}

fn run_trace(scenario_path: &Path, symbol_index: u64, output: &Path) -> Result<(), CliError> {
    let (scenario, grid) = load_scenario(scenario_path, Overrides::default())?;
    if grid.len() != 1 {
        return Err(CliError::Input(format!(
            "trace needs a single sigma2 grid value, got {}",
            grid.len()
        )));
    }
    let trace =
        run_symbol_traced(&scenario, symbol_index).map_err(|e| CliError::Input(e.to_string()))?;

    let mut out = String::new();
    out.push_str("index,r_raw,r_filtered,q,s1,s2,s_r,decision\n");
    for i in 0..scenario.symbol_len {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            i,
            trace.raw[i],
            trace.filtered[i],
            trace.morph.quantized[i],
            trace.morph.first_pass[i],
            trace.morph.second_pass[i],
            trace.morph.averaged[i],
            trace.morph_decision.sign(),
        )
        .expect("string write cannot fail");
    }
    std::fs::write(output, out)
        .map_err(|e| CliError::Output(format!("cannot write {}: {e}", output.display())))?;
    println!(
        "wrote symbol {} trace ({} samples) to {}",
        symbol_index,
        scenario.symbol_len,
        output.display()
    );
    Ok(())
}
