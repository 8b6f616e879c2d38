//! Parameter sweeps: run one trajectory per value of a scalar field,
//! concurrently, then aggregate a summary CSV.

use std::fs;
use std::io;
use std::path::Path;
use std::thread;

use sqbath::error::{Result, SimError};

use crate::config::ExperimentConfig;
use crate::runner::{self, fmt_f64, RunResult};

/// Scalar fields addressable by a sweep path.
pub const SWEEP_PATHS: &[&str] = &[
    "bath.kt",
    "bath.r",
    "bath.theta",
    "bath.coupling_strength",
    "markov_gamma",
    "initial_state.epsilon",
    "integrator.t_max",
];

/// Set the addressed field to `value`.
pub fn apply_parameter(cfg: &mut ExperimentConfig, path: &str, value: f64) -> Result<()> {
    match path {
        "bath.kt" => cfg.bath.kt = value,
        "bath.r" => cfg.bath.r = value,
        "bath.theta" => cfg.bath.theta = value,
        "bath.coupling_strength" => cfg.bath.coupling_strength = value,
        "markov_gamma" => cfg.markov_gamma = value,
        "initial_state.epsilon" => cfg.initial_state.epsilon = Some(value),
        "integrator.t_max" => cfg.integrator.t_max = value,
        other => {
            return Err(SimError::InvalidParameter(format!(
                "unknown sweep parameter path '{other}'; known paths: {SWEEP_PATHS:?}"
            )))
        }
    }
    Ok(())
}

pub struct SweepPoint {
    pub value: f64,
    pub result: RunResult,
}

/// Run the base config once per value; trajectories execute concurrently.
pub fn run_sweep(
    base: &ExperimentConfig,
    path: &str,
    values: &[f64],
) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(SimError::InvalidParameter(
            "sweep needs at least one value".into(),
        ));
    }
    let mut configs = Vec::with_capacity(values.len());
    for &v in values {
        let mut cfg = base.clone();
        apply_parameter(&mut cfg, path, v)?;
        cfg.validate()?;
        configs.push((v, cfg));
    }

    let results: Vec<Result<SweepPoint>> = thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|(v, cfg)| {
                scope.spawn(move || {
                    runner::run_config(cfg).map(|result| SweepPoint {
                        value: *v,
                        result,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

/// `sweep_summary.csv`: one row per (value, regime) with asymptotic
/// concurrence, first death time (nan when no death occurs), cycle count.
pub fn summary_csv(points: &[SweepPoint]) -> String {
    let mut out =
        String::from("value,regime,asymptotic_concurrence,first_death_time,cycle_count\n");
    for point in points {
        for regime_result in &point.result.regimes {
            let first_death = regime_result
                .esd
                .death_times
                .first()
                .copied()
                .unwrap_or(f64::NAN);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(point.value),
                regime_result.regime.label(),
                fmt_f64(regime_result.esd.asymptotic_concurrence),
                fmt_f64(first_death),
                regime_result.esd.cycle_count
            ));
        }
    }
    out
}

/// Run the sweep and write per-value trajectory directories plus the
/// aggregated summary (written last, after all trajectories complete).
pub fn write_sweep(
    base: &ExperimentConfig,
    path: &str,
    values: &[f64],
    out_dir: &Path,
) -> Result<Vec<SweepPoint>> {
    let points = run_sweep(base, path, values)?;
    let io_err = |e: io::Error| SimError::InvalidParameter(format!("output write failed: {e}"));
    fs::create_dir_all(out_dir).map_err(io_err)?;
    for point in &points {
        let sub = out_dir.join(format!("value_{}", point.value));
        runner::write_outputs(&sub, &point.result).map_err(io_err)?;
    }
    fs::write(out_dir.join("sweep_summary.csv"), summary_csv(&points)).map_err(io_err)?;
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{InitialStateConfig, Regime};

    #[test]
    fn apply_parameter_hits_every_documented_path() {
        let mut cfg = ExperimentConfig::default();
        for (path, probe) in [
            ("bath.kt", 2.0),
            ("bath.r", 0.05),
            ("bath.theta", 1.0),
            ("bath.coupling_strength", 0.5),
            ("markov_gamma", 2.0),
            ("initial_state.epsilon", 0.5),
            ("integrator.t_max", 7.0),
        ] {
            apply_parameter(&mut cfg, path, probe).unwrap();
        }
        assert_eq!(cfg.bath.kt, 2.0);
        assert_eq!(cfg.bath.r, 0.05);
        assert_eq!(cfg.integrator.t_max, 7.0);
        assert!(apply_parameter(&mut cfg, "bath.bogus", 1.0).is_err());
    }

    #[test]
    fn sweep_over_gamma_runs_concurrently_and_summarizes() {
        let mut base = ExperimentConfig::default();
        base.initial_state = InitialStateConfig::psi2(1.0);
        base.regimes = vec![Regime::Markov]; // no table builds: fast
        base.integrator.t_max = 0.5;
        let points = run_sweep(&base, "markov_gamma", &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(points.len(), 3);
        let csv = summary_csv(&points);
        assert!(csv.starts_with(
            "value,regime,asymptotic_concurrence,first_death_time,cycle_count\n"
        ));
        assert_eq!(csv.lines().count(), 4);
        // singlet stays maximally entangled: no deaths at any γ
        for line in csv.lines().skip(1) {
            assert!(line.ends_with(",0"), "unexpected death in {line}");
        }
    }

    #[test]
    fn sweep_rejects_empty_values_and_bad_paths() {
        let base = ExperimentConfig::default();
        assert!(run_sweep(&base, "markov_gamma", &[]).is_err());
        assert!(run_sweep(&base, "nope", &[1.0]).is_err());
    }
}
