//! Experiment configuration: a JSON-serializable mirror of the core
//! parameter types plus the initial-state selection.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sqbath::bath::{self, BathSpec, QuadratureConfig};
use sqbath::dynamics::{IntegratorConfig, MarkovParams, Method};
use sqbath::entanglement::EsdConfig;
use sqbath::error::{Result, SimError};
use sqbath::qubits::{self, PureState};
use sqbath::linalg::CVec4;
use num_complex::Complex64;

/// Reservoir parameters in natural units (ω₀ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathConfig {
    /// Non-Markovian coupling strength Γ.
    pub coupling_strength: f64,
    pub omega0: f64,
    pub omega_c: f64,
    pub r: f64,
    pub theta: f64,
    pub kt: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            coupling_strength: 1.0 / PI,
            omega0: 1.0,
            omega_c: 1.0,
            r: 0.31,
            theta: 0.0,
            kt: 0.0,
        }
    }
}

impl BathConfig {
    pub fn to_spec(&self) -> Result<BathSpec> {
        BathSpec::new(
            self.coupling_strength,
            self.omega0,
            self.omega_c,
            self.r,
            self.theta,
            self.kt,
        )
    }
}

/// Evolution regime selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Markov,
    Nonmarkov,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Markov => "markov",
            Regime::Nonmarkov => "nonmarkov",
        }
    }
}

/// Which named state (or custom amplitude vector) the run starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    /// Ψ1(ε) = ε φ1 + √(1−ε²) φ4 (requires `epsilon`).
    Psi1,
    /// Ψ2(ε) = ε φ2 + √(1−ε²) φ3 (requires `epsilon`).
    Psi2,
    /// φ1 from the vacuum construction N = sinh²r, M = sinh r cosh r.
    Phi1,
    /// φ1 from the thermal construction N(ω₀), |M(ω₀)|.
    Phi1Thermal,
    Phi2,
    Phi3,
    Phi4,
    /// Explicit amplitudes as [re, im] pairs in basis order
    /// (|00⟩, |01⟩, |10⟩, |11⟩).
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialStateConfig {
    pub kind: StateKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<[[f64; 2]; 4]>,
}

impl Default for InitialStateConfig {
    fn default() -> Self {
        Self {
            kind: StateKind::Psi1,
            epsilon: Some(0.0),
            amplitudes: None,
        }
    }
}

impl InitialStateConfig {
    pub fn psi1(epsilon: f64) -> Self {
        Self {
            kind: StateKind::Psi1,
            epsilon: Some(epsilon),
            amplitudes: None,
        }
    }

    pub fn psi2(epsilon: f64) -> Self {
        Self {
            kind: StateKind::Psi2,
            epsilon: Some(epsilon),
            amplitudes: None,
        }
    }

    pub fn named(kind: StateKind) -> Self {
        Self {
            kind,
            epsilon: None,
            amplitudes: None,
        }
    }

    fn epsilon_or_err(&self) -> Result<f64> {
        self.epsilon.ok_or_else(|| {
            SimError::InvalidParameter(format!(
                "initial state {:?} requires an epsilon value",
                self.kind
            ))
        })
    }

    /// Construct the concrete state for the given bath parameters.
    pub fn build(&self, bath: &BathSpec) -> Result<PureState> {
        let (r, theta) = (bath.squeeze_magnitude, bath.squeeze_phase);
        match self.kind {
            StateKind::Psi1 => qubits::initial_psi1(self.epsilon_or_err()?, r, theta),
            StateKind::Psi2 => qubits::initial_psi2(self.epsilon_or_err()?),
            StateKind::Phi1 => qubits::dfs_state_phi1(r, theta),
            StateKind::Phi1Thermal => {
                let n = bath::occupancy_n(bath.omega0, bath)?;
                let m = bath::correlation_m(bath.omega0, bath)?.norm();
                qubits::dfs_state_phi1_from_nm(n, m, theta)
            }
            StateKind::Phi2 => Ok(qubits::dfs_state_phi2()),
            StateKind::Phi3 => Ok(qubits::dfs_state_phi3()),
            StateKind::Phi4 => qubits::dfs_state_phi4(r, theta),
            StateKind::Custom => {
                let a = self.amplitudes.ok_or_else(|| {
                    SimError::InvalidParameter(
                        "custom initial state requires an amplitudes array".into(),
                    )
                })?;
                let v = CVec4::from_fn(|i, _| Complex64::new(a[i][0], a[i][1]));
                PureState::normalized(v)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Rk4,
    Rk45,
}

/// Integrator settings plus the coefficient-table step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSettings {
    pub method: MethodKind,
    /// Fixed step for rk4.
    pub dt: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub t_max: f64,
    pub sample_stride: usize,
    /// Coefficient-table grid step for non-Markov runs.
    pub h_coeff: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            method: MethodKind::Rk45,
            dt: 0.01,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            dt_min: 1e-12,
            dt_max: 0.01,
            t_max: 20.0,
            sample_stride: 1,
            h_coeff: 0.01,
        }
    }
}

impl IntegratorSettings {
    pub fn to_core(&self) -> IntegratorConfig {
        let method = match self.method {
            MethodKind::Rk4 => Method::Rk4Fixed { dt: self.dt },
            MethodKind::Rk45 => Method::Rk45Adaptive {
                rel_tol: self.rel_tol,
                abs_tol: self.abs_tol,
                dt_min: self.dt_min,
                dt_max: self.dt_max,
            },
        };
        IntegratorConfig {
            method,
            t_max: self.t_max,
            sample_stride: self.sample_stride,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    pub tol: f64,
    pub max_subdivisions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self {
            tol: q.tol,
            max_subdivisions: q.max_subdivisions,
            omega_max: None,
        }
    }
}

impl QuadratureSettings {
    pub fn to_core(&self) -> QuadratureConfig {
        QuadratureConfig {
            tol: self.tol,
            max_subdivisions: self.max_subdivisions,
            omega_max: self.omega_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EsdSettings {
    pub threshold: f64,
    pub min_width: usize,
}

impl Default for EsdSettings {
    fn default() -> Self {
        let e = EsdConfig::default();
        Self {
            threshold: e.threshold,
            min_width: e.min_width,
        }
    }
}

impl EsdSettings {
    pub fn to_core(&self) -> EsdConfig {
        EsdConfig {
            threshold: self.threshold,
            min_width: self.min_width,
        }
    }
}

/// Full experiment description; JSON field names match the struct fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub bath: BathConfig,
    /// Markovian decay rate γ (independent of Γ; see README).
    pub markov_gamma: f64,
    pub initial_state: InitialStateConfig,
    pub regimes: Vec<Regime>,
    pub integrator: IntegratorSettings,
    pub quadrature: QuadratureSettings,
    pub esd: EsdSettings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            bath: BathConfig::default(),
            markov_gamma: 1.0,
            initial_state: InitialStateConfig::default(),
            regimes: vec![Regime::Markov, Regime::Nonmarkov],
            integrator: IntegratorSettings::default(),
            quadrature: QuadratureSettings::default(),
            esd: EsdSettings::default(),
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.regimes.is_empty() {
            return Err(SimError::InvalidParameter(
                "at least one regime must be selected".into(),
            ));
        }
        if !(self.markov_gamma > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "markov_gamma must be > 0, got {}",
                self.markov_gamma
            )));
        }
        if !(self.integrator.h_coeff > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "h_coeff must be > 0, got {}",
                self.integrator.h_coeff
            )));
        }
        let bath = self.bath.to_spec()?;
        self.initial_state.build(&bath)?;
        self.integrator.to_core().validate()?;
        Ok(())
    }

    /// Markov generator parameters for this configuration: vacuum (N, M
    /// from r) at KT = 0, thermal (N(ω₀), |M(ω₀)|) otherwise.
    pub fn markov_params(&self) -> Result<MarkovParams> {
        let bath = self.bath.to_spec()?;
        MarkovParams::thermal_at_resonance(self.markov_gamma, &bath)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips_through_json() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_json();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = ExperimentConfig::from_json(
            r#"{"bath": {"kt": 2.0}, "initial_state": {"kind": "psi2", "epsilon": 0.54}}"#,
        )
        .unwrap();
        assert_eq!(cfg.bath.kt, 2.0);
        assert_eq!(cfg.bath.r, 0.31);
        assert_eq!(cfg.initial_state.kind, StateKind::Psi2);
        assert_eq!(cfg.markov_gamma, 1.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn empty_regime_list_fails_validation() {
        let mut cfg = ExperimentConfig::default();
        cfg.regimes.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn psi_states_require_epsilon() {
        let mut cfg = ExperimentConfig::default();
        cfg.initial_state = InitialStateConfig {
            kind: StateKind::Psi1,
            epsilon: None,
            amplitudes: None,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn custom_state_builds_from_amplitudes() {
        let cfg = ExperimentConfig {
            initial_state: InitialStateConfig {
                kind: StateKind::Custom,
                epsilon: None,
                amplitudes: Some([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]),
            },
            ..Default::default()
        };
        let bath = cfg.bath.to_spec().unwrap();
        let psi = cfg.initial_state.build(&bath).unwrap();
        assert!((psi.amplitude(qubits::IDX_01).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_phi1_differs_from_vacuum_phi1_at_finite_temperature() {
        let mut bath_cfg = BathConfig::default();
        bath_cfg.kt = 2.0;
        let bath = bath_cfg.to_spec().unwrap();
        let vacuum = InitialStateConfig::named(StateKind::Phi1)
            .build(&bath)
            .unwrap();
        let thermal = InitialStateConfig::named(StateKind::Phi1Thermal)
            .build(&bath)
            .unwrap();
        let overlap = vacuum.inner(&thermal).norm();
        assert!(overlap < 1.0 - 1e-4, "overlap {overlap} too close to 1");
    }
}
