//! Named figure presets. A preset expands to one or more labeled runs
//! sharing an output directory; multi-run presets (parameter families and
//! temperature variants) write each run into a subdirectory named after
//! its label.

use std::f64::consts::PI;

use crate::config::{BathConfig, ExperimentConfig, InitialStateConfig, StateKind};

/// One labeled run belonging to a preset.
#[derive(Debug, Clone)]
pub struct PresetRun {
    pub label: String,
    pub config: ExperimentConfig,
}

pub const PRESET_NAMES: &[&str] = &[
    "fig1a",
    "fig1b",
    "fig1c",
    "fig1d",
    "fig2a",
    "fig2b",
    "fig2c",
    "fig2d",
    "fig2_singlet",
    "fig3a",
    "fig3b",
    "fig4a",
    "fig4b",
    "fig4c",
    "fig4d",
];

fn base_config() -> ExperimentConfig {
    // r = 0.31, θ = 0, γ = 1, ω_c = ω₀ = 1, KT = 0
    ExperimentConfig::default()
}

fn psi1_run(epsilon: f64) -> Vec<PresetRun> {
    let mut cfg = base_config();
    cfg.initial_state = InitialStateConfig::psi1(epsilon);
    vec![PresetRun {
        label: "base".into(),
        config: cfg,
    }]
}

fn psi2_run(epsilon: f64) -> Vec<PresetRun> {
    let mut cfg = base_config();
    cfg.initial_state = InitialStateConfig::psi2(epsilon);
    vec![PresetRun {
        label: "base".into(),
        config: cfg,
    }]
}

fn phi1_run(label: &str, r: f64, theta: f64) -> PresetRun {
    let mut cfg = base_config();
    cfg.bath = BathConfig {
        r,
        theta,
        ..BathConfig::default()
    };
    cfg.initial_state = InitialStateConfig::named(StateKind::Phi1);
    PresetRun {
        label: label.into(),
        config: cfg,
    }
}

/// Temperature variants KT ∈ {0, 2, 5} of a base run. For φ1-family
/// initial states the finite-temperature variants are emitted twice: once
/// with the vacuum construction (N, M from r) and once with the thermal
/// one (N(ω₀), |M(ω₀)|), since no exact pure dark state exists at KT > 0.
fn temperature_family(base: &ExperimentConfig) -> Vec<PresetRun> {
    let mut runs = Vec::new();
    for kt in [0.0, 2.0, 5.0] {
        let mut cfg = base.clone();
        cfg.bath.kt = kt;
        let kt_label = format!("kt{}", kt as u32);
        let phi1_family = matches!(cfg.initial_state.kind, StateKind::Phi1)
            || (cfg.initial_state.kind == StateKind::Psi1
                && cfg.initial_state.epsilon == Some(1.0));
        if kt > 0.0 && phi1_family {
            let mut vacuum = cfg.clone();
            vacuum.initial_state = InitialStateConfig::named(StateKind::Phi1);
            runs.push(PresetRun {
                label: format!("{kt_label}_phi1_vacuum"),
                config: vacuum,
            });
            let mut thermal = cfg;
            thermal.initial_state = InitialStateConfig::named(StateKind::Phi1Thermal);
            runs.push(PresetRun {
                label: format!("{kt_label}_phi1_thermal"),
                config: thermal,
            });
        } else {
            runs.push(PresetRun {
                label: kt_label,
                config: cfg,
            });
        }
    }
    runs
}

/// Expand a preset name into its labeled runs; `None` for unknown names.
pub fn preset(name: &str) -> Option<Vec<PresetRun>> {
    let runs = match name {
        "fig1a" => psi1_run(0.0),
        "fig1b" => psi1_run(0.5),
        "fig1c" => psi1_run(0.9),
        "fig1d" => psi1_run(1.0),
        "fig2a" => psi2_run(0.1),
        "fig2b" => psi2_run(0.4),
        "fig2c" => psi2_run(0.54),
        "fig2d" => psi2_run(std::f64::consts::FRAC_1_SQRT_2),
        "fig2_singlet" => psi2_run(1.0),
        "fig3a" => vec![
            phi1_run("r0.05", 0.05, 0.0),
            phi1_run("r0.09", 0.09, 0.0),
        ],
        "fig3b" => vec![
            phi1_run("theta_pi_over_6", 0.3, PI / 6.0),
            phi1_run("theta_pi", 0.3, PI),
        ],
        "fig4a" => temperature_family(&psi1_run(0.0)[0].config),
        "fig4b" => temperature_family(&psi1_run(1.0)[0].config),
        "fig4c" => temperature_family(&psi2_run(0.1)[0].config),
        "fig4d" => temperature_family(&psi2_run(0.54)[0].config),
        _ => return None,
    };
    Some(runs)
}
