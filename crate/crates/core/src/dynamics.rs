//! Right-hand sides of the Markovian and non-Markovian master equations
//! and their time integration.
//!
//! Both equations are written in the interaction picture, so neither
//! generator carries a coherent −i[H, ρ] term. Evolution proceeds by
//! fixed-step RK4 or adaptive RK45 (Dormand–Prince) on the raw 4×4 complex
//! matrix; after every accepted step the state is re-Hermitized and
//! trace-renormalized, with the pre-enforcement deviations recorded so the
//! enforcement cannot mask integrator bugs.

use std::sync::Arc;

use num_complex::Complex64;

use crate::bath::{self, BathSpec, CoefficientSet, CoefficientTable, QuadratureConfig};
use crate::error::{Result, SimError};
use crate::linalg::{self, Mat4};
use crate::qubits::{self, DensityMatrix};

/// Where the non-Markovian generator gets its coefficients.
#[derive(Debug, Clone)]
pub enum CoefficientSource {
    /// Precomputed table with cubic interpolation (the default in practice).
    Table(Arc<CoefficientTable>),
    /// Per-query quadrature; slow, retained for validation.
    Direct {
        bath: BathSpec,
        quad: QuadratureConfig,
    },
    /// Time-independent coefficients, used to cross-check against the
    /// Markovian generator.
    Frozen(CoefficientSet),
}

impl CoefficientSource {
    pub fn coefficients_at(&self, t: f64) -> Result<CoefficientSet> {
        match self {
            CoefficientSource::Table(table) => table.eval(t),
            CoefficientSource::Direct { bath, quad } => bath::coefficients(t, bath, quad),
            CoefficientSource::Frozen(c) => Ok(*c),
        }
    }
}

/// Constant rates of the Markovian master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovParams {
    pub gamma: f64,
    pub n: f64,
    pub m: f64,
    pub theta: f64,
}

impl MarkovParams {
    pub fn new(gamma: f64, n: f64, m: f64, theta: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "markov rate γ must be > 0, got {gamma}"
            )));
        }
        if !(n >= 0.0) || !(m >= 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "markov occupations must satisfy N ≥ 0, M ≥ 0, got N={n}, M={m}"
            )));
        }
        // M = √(N(N+1)) holds at zero temperature but is deliberately not
        // enforced, so thermal (N(ω₀), |M(ω₀)|) parameters are accepted
        Ok(Self { gamma, n, m, theta })
    }

    /// Zero-temperature parameters from the squeeze magnitude alone:
    /// N = sinh²r, M = sinh r cosh r.
    pub fn squeezed_vacuum(gamma: f64, r: f64, theta: f64) -> Result<Self> {
        Self::new(gamma, r.sinh().powi(2), r.sinh() * r.cosh(), theta)
    }

    /// Broadband thermal parameters evaluated at the resonance,
    /// N = N(ω₀), M = |M(ω₀)|, θ from the bath.
    pub fn thermal_at_resonance(gamma: f64, bath: &BathSpec) -> Result<Self> {
        if bath.kt == 0.0 {
            return Self::squeezed_vacuum(gamma, bath.squeeze_magnitude, bath.squeeze_phase);
        }
        let n = bath::occupancy_n(bath.omega0, bath)?;
        let m = bath::correlation_m(bath.omega0, bath)?.norm();
        Self::new(gamma, n, m, bath.squeeze_phase)
    }
}

/// Which master equation drives the evolution.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    Markov(MarkovParams),
    /// Common unsqueezed heat bath: the Markov generator with M = 0.
    MarkovUnsqueezed { gamma: f64, n: f64 },
    NonMarkov(CoefficientSource),
}

/// Collective-operator products shared by both generators.
struct Ops {
    s_plus: Mat4,
    s_minus: Mat4,
    sp_sm: Mat4, // S₊S₋
    sm_sp: Mat4, // S₋S₊
    sp_sp: Mat4,
    sm_sm: Mat4,
}

impl Ops {
    fn new() -> Self {
        let s_minus = qubits::collective_lowering();
        let s_plus = qubits::collective_raising();
        Self {
            sp_sm: s_plus * s_minus,
            sm_sp: s_minus * s_plus,
            sp_sp: s_plus * s_plus,
            sm_sm: s_minus * s_minus,
            s_plus,
            s_minus,
        }
    }
}

fn nonmarkov_rhs_with(ops: &Ops, rho: &Mat4, c: &CoefficientSet) -> Mat4 {
    let sp_rho_sm = ops.s_plus * rho * ops.s_minus;
    let sm_rho_sp = ops.s_minus * rho * ops.s_plus;
    let sp_rho_sp = ops.s_plus * rho * ops.s_plus;
    let sm_rho_sm = ops.s_minus * rho * ops.s_minus;

    let two = Complex64::new(2.0, 0.0);
    (sp_rho_sm - rho * ops.sm_sp) * c.delta
        + (sp_rho_sm - ops.sm_sp * rho) * c.delta.conj()
        + (sm_rho_sp - ops.sp_sm * rho) * c.mu
        + (sm_rho_sp - rho * ops.sp_sm) * c.mu.conj()
        + (sp_rho_sp * two - ops.sp_sp * rho - rho * ops.sp_sp) * c.alpha
        + (sm_rho_sm * two - ops.sm_sm * rho - rho * ops.sm_sm) * c.alpha.conj()
}

/// Non-Markovian generator: the time-local master equation evaluated with
/// one coefficient triple.
pub fn nonmarkov_rhs(rho: &Mat4, c: &CoefficientSet) -> Mat4 {
    nonmarkov_rhs_with(&Ops::new(), rho, c)
}

fn markov_rhs_with(ops: &Ops, rho: &Mat4, p: &MarkovParams) -> Mat4 {
    let sm_rho_sp = ops.s_minus * rho * ops.s_plus;
    let sp_rho_sm = ops.s_plus * rho * ops.s_minus;
    let half_gamma = 0.5 * p.gamma;

    let two = Complex64::new(2.0, 0.0);
    let mut out = (sm_rho_sp * two - ops.sp_sm * rho - rho * ops.sp_sm)
        * Complex64::new(half_gamma * (p.n + 1.0), 0.0);
    if p.n != 0.0 {
        out += (sp_rho_sm * two - ops.sm_sp * rho - rho * ops.sm_sp)
            * Complex64::new(half_gamma * p.n, 0.0);
    }
    if p.m != 0.0 {
        let phase = Complex64::from_polar(1.0, p.theta);
        let sp_rho_sp = ops.s_plus * rho * ops.s_plus;
        let sm_rho_sm = ops.s_minus * rho * ops.s_minus;
        out -= (sp_rho_sp * two - ops.sp_sp * rho - rho * ops.sp_sp) * (phase * (half_gamma * p.m));
        out -= (sm_rho_sm * two - ops.sm_sm * rho - rho * ops.sm_sm)
            * (phase.conj() * (half_gamma * p.m));
    }
    out
}

/// Markovian generator for the broadband squeezed bath.
pub fn markov_rhs(rho: &Mat4, params: &MarkovParams) -> Mat4 {
    markov_rhs_with(&Ops::new(), rho, params)
}

impl GeneratorSpec {
    /// Generator evaluated at time `t` on state `rho`.
    pub fn rhs(&self, t: f64, rho: &Mat4) -> Result<Mat4> {
        let ops = Ops::new();
        self.rhs_with(&ops, t, rho)
    }

    fn rhs_with(&self, ops: &Ops, t: f64, rho: &Mat4) -> Result<Mat4> {
        match self {
            GeneratorSpec::Markov(p) => Ok(markov_rhs_with(ops, rho, p)),
            GeneratorSpec::MarkovUnsqueezed { gamma, n } => {
                let p = MarkovParams {
                    gamma: *gamma,
                    n: *n,
                    m: 0.0,
                    theta: 0.0,
                };
                Ok(markov_rhs_with(ops, rho, &p))
            }
            GeneratorSpec::NonMarkov(source) => {
                let c = source.coefficients_at(t)?;
                Ok(nonmarkov_rhs_with(ops, rho, &c))
            }
        }
    }
}

/// Integration method selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Rk4Fixed {
        dt: f64,
    },
    Rk45Adaptive {
        rel_tol: f64,
        abs_tol: f64,
        dt_min: f64,
        dt_max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub t_max: f64,
    /// Output decimation: one stored sample per `sample_stride` grid steps.
    pub sample_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            // dt_max matches the default coefficient-table step so the
            // interpolation error stays subdominant
            method: Method::Rk45Adaptive {
                rel_tol: 1e-8,
                abs_tol: 1e-10,
                dt_min: 1e-12,
                dt_max: 0.01,
            },
            t_max: 20.0,
            sample_stride: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "t_max must be > 0, got {}",
                self.t_max
            )));
        }
        if self.sample_stride == 0 {
            return Err(SimError::InvalidParameter(
                "sample_stride must be ≥ 1".into(),
            ));
        }
        match self.method {
            Method::Rk4Fixed { dt } => {
                if !(dt > 0.0) {
                    return Err(SimError::InvalidParameter(format!(
                        "fixed step dt must be > 0, got {dt}"
                    )));
                }
            }
            Method::Rk45Adaptive {
                rel_tol,
                abs_tol,
                dt_min,
                dt_max,
            } => {
                if !(rel_tol > 0.0) || !(abs_tol > 0.0) {
                    return Err(SimError::InvalidParameter(
                        "adaptive tolerances must be > 0".into(),
                    ));
                }
                if !(dt_min > 0.0) || dt_min > dt_max {
                    return Err(SimError::InvalidParameter(format!(
                        "need 0 < dt_min ≤ dt_max, got {dt_min}, {dt_max}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Spacing of the uniform output grid.
    pub fn sample_dt(&self) -> f64 {
        let base = match self.method {
            Method::Rk4Fixed { dt } => dt,
            Method::Rk45Adaptive { dt_max, .. } => dt_max,
        };
        base * self.sample_stride as f64
    }
}

/// One stored point of a trajectory, with pre-enforcement diagnostics.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: DensityMatrix,
    /// |Tr ρ − 1| before renormalization of the step that produced this state.
    pub trace_dev: f64,
    /// max-entry Hermiticity deviation before re-Hermitization.
    pub herm_dev: f64,
    /// Smallest eigenvalue of the stored (enforced) state.
    pub min_eig: f64,
}

/// Time grid with density matrices and per-sample diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// Worst pre-enforcement trace deviation over all accepted steps.
    pub max_trace_dev: f64,
    /// Worst pre-enforcement Hermiticity deviation over all accepted steps.
    pub max_herm_dev: f64,
    /// Smallest eigenvalue seen at any stored sample.
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }
}

struct StepMonitor {
    max_trace_dev: f64,
    max_herm_dev: f64,
    last_trace_dev: f64,
    last_herm_dev: f64,
}

impl StepMonitor {
    /// Record pre-enforcement deviations, then enforce Hermiticity and
    /// unit trace.
    fn enforce(&mut self, y: &mut Mat4) {
        let trace_dev = (linalg::trace_re(y) - 1.0).abs();
        let herm_dev = linalg::hermiticity_deviation(y);
        self.last_trace_dev = trace_dev;
        self.last_herm_dev = herm_dev;
        self.max_trace_dev = self.max_trace_dev.max(trace_dev);
        self.max_herm_dev = self.max_herm_dev.max(herm_dev);
        *y = linalg::hermitize(y);
        let tr = linalg::trace_re(y);
        if tr != 0.0 {
            *y /= Complex64::new(tr, 0.0);
        }
    }
}

fn rk4_step(ops: &Ops, g: &GeneratorSpec, t: f64, y: &Mat4, dt: f64) -> Result<Mat4> {
    let half_dt = Complex64::new(0.5 * dt, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let k1 = g.rhs_with(ops, t, y)?;
    let k2 = g.rhs_with(ops, t + 0.5 * dt, &(y + k1 * half_dt))?;
    let k3 = g.rhs_with(ops, t + 0.5 * dt, &(y + k2 * half_dt))?;
    let k4 = g.rhs_with(ops, t + dt, &(y + k3 * Complex64::new(dt, 0.0)))?;
    Ok(y + (k1 + k2 * two + k3 * two + k4) * Complex64::new(dt / 6.0, 0.0))
}

// Dormand–Prince 5(4) tableau
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One trial Dormand–Prince step: returns (y5, max-entry error estimate).
fn dp45_step(ops: &Ops, g: &GeneratorSpec, t: f64, y: &Mat4, dt: f64) -> Result<(Mat4, f64)> {
    let mut k: Vec<Mat4> = Vec::with_capacity(7);
    k.push(g.rhs_with(ops, t, y)?);
    for stage in 0..6 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate() {
            let a = DP_A[stage][j];
            if a != 0.0 {
                yi += kj * Complex64::new(a * dt, 0.0);
            }
        }
        k.push(g.rhs_with(ops, t + DP_C[stage + 1] * dt, &yi)?);
    }
    let mut y5 = *y;
    let mut err = Mat4::zeros();
    for (j, kj) in k.iter().enumerate() {
        if DP_B5[j] != 0.0 {
            y5 += kj * Complex64::new(DP_B5[j] * dt, 0.0);
        }
        let db = DP_B5[j] - DP_B4[j];
        if db != 0.0 {
            err += kj * Complex64::new(db * dt, 0.0);
        }
    }
    Ok((y5, linalg::max_abs_entry(&err)))
}

/// Integrate the master equation from `rho0` to `cfg.t_max`.
///
/// Samples land on the uniform grid spaced by [`IntegratorConfig::sample_dt`]
/// (adaptive internal steps are clamped to hit grid points exactly), so two
/// runs with the same grid can be compared pointwise.
pub fn evolve(
    rho0: &DensityMatrix,
    generator: &GeneratorSpec,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let ops = Ops::new();
    let sample_dt = cfg.sample_dt();
    let n_samples = (cfg.t_max / sample_dt).round().max(1.0) as usize;

    let mut y = *rho0.matrix();
    let mut monitor = StepMonitor {
        max_trace_dev: 0.0,
        max_herm_dev: 0.0,
        last_trace_dev: 0.0,
        last_herm_dev: 0.0,
    };
    let mut samples = Vec::with_capacity(n_samples + 1);
    let mut min_eig_seen = f64::INFINITY;

    let record = |t: f64,
                  y: &Mat4,
                  mon: &StepMonitor,
                  samples: &mut Vec<TrajectorySample>,
                  min_seen: &mut f64|
     -> Result<()> {
        let min_eig = linalg::min_eigenvalue(y)?;
        *min_seen = min_seen.min(min_eig);
        samples.push(TrajectorySample {
            t,
            state: DensityMatrix::from_matrix_unchecked(*y),
            trace_dev: mon.last_trace_dev,
            herm_dev: mon.last_herm_dev,
            min_eig,
        });
        Ok(())
    };

    record(0.0, &y, &monitor, &mut samples, &mut min_eig_seen)?;

    match cfg.method {
        Method::Rk4Fixed { dt } => {
            let steps_per_sample = cfg.sample_stride;
            let mut t = 0.0;
            for k in 1..=n_samples {
                for _ in 0..steps_per_sample {
                    y = rk4_step(&ops, generator, t, &y, dt)?;
                    t += dt;
                    monitor.enforce(&mut y);
                }
                let grid_t = k as f64 * sample_dt;
                t = grid_t; // suppress accumulation drift in reported times
                record(grid_t, &y, &monitor, &mut samples, &mut min_eig_seen)?;
            }
        }
        Method::Rk45Adaptive {
            rel_tol,
            abs_tol,
            dt_min,
            dt_max,
        } => {
            let mut t = 0.0;
            let mut dt = dt_max;
            for k in 1..=n_samples {
                let target = if k == n_samples {
                    cfg.t_max
                } else {
                    k as f64 * sample_dt
                };
                while t < target - 1e-13 {
                    let trial_dt = dt.min(target - t);
                    let (y5, err) = dp45_step(&ops, generator, t, &y, trial_dt)?;
                    let scale =
                        abs_tol + rel_tol * linalg::max_abs_entry(&y).max(linalg::max_abs_entry(&y5));
                    if err <= scale {
                        t += trial_dt;
                        y = y5;
                        monitor.enforce(&mut y);
                        let grow = if err == 0.0 {
                            5.0
                        } else {
                            (0.9 * (scale / err).powf(0.2)).clamp(0.2, 5.0)
                        };
                        dt = (trial_dt * grow).min(dt_max);
                    } else {
                        let shrink = (0.9 * (scale / err).powf(0.2)).clamp(0.1, 1.0);
                        dt = trial_dt * shrink;
                        if dt < dt_min {
                            return Err(SimError::StepSizeUnderflow { t, dt, dt_min });
                        }
                    }
                }
                t = target;
                record(target, &y, &monitor, &mut samples, &mut min_eig_seen)?;
            }
        }
    }

    Ok(Trajectory {
        samples,
        max_trace_dev: monitor.max_trace_dev,
        max_herm_dev: monitor.max_herm_dev,
        min_eigenvalue: min_eig_seen,
    })
}
