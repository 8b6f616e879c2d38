//! `sqbath` command line interface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sqbath_cli::config::{ExperimentConfig, Regime};
use sqbath_cli::presets::{self, PresetRun};
use sqbath_cli::{runner, sweep, verify};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;
const EXIT_NUMERICAL_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sqbath",
    about = "Entanglement dynamics of two qubits in a common squeezed thermal reservoir"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigSource {
    /// Named preset (see `list-presets`).
    #[arg(long)]
    preset: Option<String>,
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Restrict to one regime: markov or nonmarkov.
    #[arg(long)]
    regime: Option<String>,
    /// Override the integration horizon t_max.
    #[arg(long)]
    tmax: Option<f64>,
    /// Override the bath temperature KT.
    #[arg(long)]
    kt: Option<f64>,
    /// Override the initial-state amplitude ε.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override the squeeze magnitude r.
    #[arg(long)]
    r: Option<f64>,
    /// Override the squeeze phase θ.
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration or preset; emit CSV and SVG artifacts.
    Run(ConfigSource),
    /// Run a parameter sweep and aggregate a summary CSV.
    Sweep {
        #[command(flatten)]
        source: ConfigSource,
        /// Parameter path, e.g. bath.kt or initial_state.epsilon.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
    },
    /// Run the acceptance checks of one preset; print a JSON report.
    Verify {
        /// Preset name.
        preset: String,
    },
    /// List the available preset names.
    ListPresets,
}

fn apply_overrides(cfg: &mut ExperimentConfig, source: &ConfigSource) -> Result<(), String> {
    if let Some(regime) = &source.regime {
        cfg.regimes = match regime.as_str() {
            "markov" => vec![Regime::Markov],
            "nonmarkov" => vec![Regime::Nonmarkov],
            "both" => vec![Regime::Markov, Regime::Nonmarkov],
            other => return Err(format!("unknown regime '{other}'")),
        };
    }
    if let Some(t) = source.tmax {
        cfg.integrator.t_max = t;
    }
    if let Some(kt) = source.kt {
        cfg.bath.kt = kt;
    }
    if let Some(eps) = source.epsilon {
        cfg.initial_state.epsilon = Some(eps);
    }
    if let Some(r) = source.r {
        cfg.bath.r = r;
    }
    if let Some(theta) = source.theta {
        cfg.bath.theta = theta;
    }
    Ok(())
}

/// Resolve `--preset` / `--config` into labeled runs with CLI overrides
/// applied to each.
fn resolve_runs(source: &ConfigSource) -> Result<Vec<PresetRun>, String> {
    let mut runs = match (&source.preset, &source.config) {
        (Some(name), None) => {
            presets::preset(name).ok_or_else(|| format!("unknown preset '{name}'"))?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let cfg = ExperimentConfig::from_json(&text)
                .map_err(|e| format!("config parse error: {e}"))?;
            vec![PresetRun {
                label: "base".into(),
                config: cfg,
            }]
        }
        (Some(_), Some(_)) => return Err("--preset and --config are mutually exclusive".into()),
        (None, None) => return Err("one of --preset or --config is required".into()),
    };
    for run in &mut runs {
        apply_overrides(&mut run.config, source)?;
        run.config.validate().map_err(|e| e.to_string())?;
    }
    Ok(runs)
}

fn out_dir(source: &ConfigSource, runs: &[PresetRun]) -> PathBuf {
    source
        .out
        .clone()
        .or_else(|| runs.first().and_then(|r| r.config.output.clone()))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn cmd_run(source: &ConfigSource) -> u8 {
    let runs = match resolve_runs(source) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    let base = out_dir(source, &runs);
    let single = runs.len() == 1;
    for run in &runs {
        let dir = if single {
            base.clone()
        } else {
            base.join(&run.label)
        };
        let result = match runner::run_config(&run.config) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: numerical failure in run '{}': {e}", run.label);
                return EXIT_NUMERICAL_ERROR;
            }
        };
        if let Err(e) = runner::write_outputs(&dir, &result) {
            eprintln!("error: cannot write outputs to {}: {e}", dir.display());
            return EXIT_CONFIG_ERROR;
        }
        println!("run '{}' written to {}", run.label, dir.display());
    }
    EXIT_OK
}

fn cmd_sweep(source: &ConfigSource, param: &str, values: &[f64]) -> u8 {
    let runs = match resolve_runs(source) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    if runs.len() != 1 {
        eprintln!("error: sweep requires a single-run base (got {} runs)", runs.len());
        return EXIT_CONFIG_ERROR;
    }
    let dir = out_dir(source, &runs);
    match sweep::write_sweep(&runs[0].config, param, values, &dir) {
        Ok(points) => {
            println!(
                "sweep over {param} ({} values) written to {}",
                points.len(),
                dir.display()
            );
            EXIT_OK
        }
        Err(e) => {
            let text = e.to_string();
            if text.contains("unknown sweep parameter") || text.contains("at least one value") {
                eprintln!("error: {text}");
                EXIT_CONFIG_ERROR
            } else {
                eprintln!("error: numerical failure: {text}");
                EXIT_NUMERICAL_ERROR
            }
        }
    }
}

fn cmd_verify(preset: &str) -> u8 {
    match verify::verify(preset) {
        None => {
            eprintln!("error: unknown preset '{preset}'");
            EXIT_CONFIG_ERROR
        }
        Some(Err(e)) => {
            eprintln!("error: numerical failure: {e}");
            EXIT_NUMERICAL_ERROR
        }
        Some(Ok(report)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serialization")
            );
            if report.pass {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Run(source) => cmd_run(source),
        Command::Sweep {
            source,
            param,
            values,
        } => cmd_sweep(source, param, values),
        Command::Verify { preset } => cmd_verify(preset),
        Command::ListPresets => {
            for name in presets::PRESET_NAMES {
                println!("{name}");
            }
            EXIT_OK
        }
    };
    ExitCode::from(code)
}
