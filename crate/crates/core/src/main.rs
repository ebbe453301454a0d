use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use nc_spectra::checks::run_builtin_checks;
use nc_spectra::config::OUT_DIR_ENV;
use nc_spectra::emit::emit_all;
use nc_spectra::{run_sweep, ATermMode, ClosedFormMode, EnergySource, ExperimentConfig};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(name = "nc-spectra", version, about = "Quasi-exact spectra and noncommutative level shifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file and write the requested outputs.
    Run {
        config: PathBuf,
        #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
        out_dir: PathBuf,
        /// Solve the finite-difference oracle for every (n, m).
        #[arg(long)]
        validate: bool,
        /// Override the formula switches of the config.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Run the built-in fixture and property checks.
    Check,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Literal a-term, literal closed forms, oscillator energy formula.
    Paper,
    /// Expanded a-term, completed-square moments, termination energy.
    Exact,
    /// Expanded a-term, quadrature, termination energy.
    Quadrature,
}

impl Mode {
    fn apply(self, cfg: &mut ExperimentConfig) {
        let (a, c, e) = match self {
            Mode::Paper => (ATermMode::PaperLiteral, ClosedFormMode::PaperLiteral, EnergySource::PaperFormula),
            Mode::Exact => (ATermMode::ExpandedExact, ClosedFormMode::CompletedSquare, EnergySource::Termination),
            Mode::Quadrature => (ATermMode::ExpandedExact, ClosedFormMode::QuadratureOnly, EnergySource::Termination),
        };
        cfg.nc.a_term_mode = a;
        cfg.nc.closed_form_mode = c;
        cfg.nc.energy_source = e;
    }
}

fn run(config: PathBuf, out_dir: PathBuf, validate: bool, mode: Option<Mode>) -> anyhow::Result<u8> {
    let mut cfg = match ExperimentConfig::from_path(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_CONFIG);
        }
    };
    if let Some(mode) = mode {
        mode.apply(&mut cfg);
    }
    cfg.validate |= validate;
    let sweep = run_sweep(&cfg);
    let written = emit_all(&sweep, &out_dir).with_context(|| format!("writing outputs to {}", out_dir.display()))?;
    for path in written {
        println!("{}", path.display());
    }
    let failed = sweep.rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} rows have no value (see flags)", sweep.rows.len());
    }
    if sweep.oracle_failed() {
        eprintln!("error: finite-difference oracle did not converge for at least one (n, m)");
        return Ok(EXIT_ORACLE);
    }
    Ok(0)
}

fn check() -> u8 {
    let outcomes = run_builtin_checks();
    let mut all = true;
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        all &= o.passed;
    }
    if all {
        0
    } else {
        EXIT_FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            config,
            out_dir,
            validate,
            mode,
        } => run(config, out_dir, validate, mode).unwrap_or_else(|e| {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }),
        Command::Check => check(),
    };
    ExitCode::from(code)
}
