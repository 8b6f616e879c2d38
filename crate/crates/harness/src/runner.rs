//! Executes experiment configurations: trajectory integration per regime,
//! concurrence series, ESD detection, and file emission (CSV + SVG).

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use sqbath::bath::{self, BathSpec, CoefficientTable, QuadratureConfig};
use sqbath::dynamics::{self, CoefficientSource, GeneratorSpec, Trajectory};
use sqbath::entanglement::{self, EsdReport};
use sqbath::error::Result;
use sqbath::qubits::DensityMatrix;

use crate::config::{ExperimentConfig, Regime};
use crate::plot;

/// Everything produced for one regime of one run.
pub struct RegimeResult {
    pub regime: Regime,
    pub trajectory: Trajectory,
    pub concurrence: Vec<f64>,
    pub esd: EsdReport,
    /// Coefficient table used (non-Markov regime only).
    pub table: Option<Arc<CoefficientTable>>,
}

pub struct RunResult {
    pub config: ExperimentConfig,
    pub regimes: Vec<RegimeResult>,
}

impl RunResult {
    pub fn regime(&self, regime: Regime) -> Option<&RegimeResult> {
        self.regimes.iter().find(|r| r.regime == regime)
    }
}

// ---------------------------------------------------------------------------
// shared coefficient-table cache
// ---------------------------------------------------------------------------

#[derive(PartialEq, Eq, Hash, Clone)]
struct TableKey {
    bath: [u64; 6],
    t_max: u64,
    h_coeff: u64,
    tol: u64,
}

impl TableKey {
    fn new(bath: &BathSpec, t_max: f64, h_coeff: f64, quad: &QuadratureConfig) -> Self {
        Self {
            bath: [
                bath.coupling_strength.to_bits(),
                bath.omega0.to_bits(),
                bath.omega_c.to_bits(),
                bath.squeeze_magnitude.to_bits(),
                bath.squeeze_phase.to_bits(),
                bath.kt.to_bits(),
            ],
            t_max: t_max.to_bits(),
            h_coeff: h_coeff.to_bits(),
            tol: quad.tol.to_bits(),
        }
    }
}

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<CoefficientTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<CoefficientTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build (or fetch from the process-wide cache) the coefficient table for
/// a bath over [0, t_max]. Tables are immutable and shared across runs.
pub fn coefficient_table(
    bath: &BathSpec,
    t_max: f64,
    h_coeff: f64,
    quad: &QuadratureConfig,
) -> Result<Arc<CoefficientTable>> {
    let key = TableKey::new(bath, t_max, h_coeff, quad);
    if let Some(hit) = table_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    // built outside the lock so unrelated tables do not serialize
    let table = Arc::new(bath::build_coefficient_table(bath, t_max, h_coeff, quad)?);
    let mut cache = table_cache().lock().unwrap();
    Ok(cache.entry(key).or_insert(table).clone())
}

// ---------------------------------------------------------------------------
// execution
// ---------------------------------------------------------------------------

fn run_regime(cfg: &ExperimentConfig, regime: Regime) -> Result<RegimeResult> {
    let bath = cfg.bath.to_spec()?;
    let rho0 = DensityMatrix::from_pure(&cfg.initial_state.build(&bath)?);
    let integrator = cfg.integrator.to_core();

    let (generator, table) = match regime {
        Regime::Markov => (GeneratorSpec::Markov(cfg.markov_params()?), None),
        Regime::Nonmarkov => {
            let table = coefficient_table(
                &bath,
                integrator.t_max,
                cfg.integrator.h_coeff,
                &cfg.quadrature.to_core(),
            )?;
            (
                GeneratorSpec::NonMarkov(CoefficientSource::Table(table.clone())),
                Some(table),
            )
        }
    };

    let trajectory = dynamics::evolve(&rho0, &generator, &integrator)?;
    let mut concurrence = Vec::with_capacity(trajectory.samples.len());
    for sample in &trajectory.samples {
        concurrence.push(entanglement::concurrence(&sample.state)?);
    }
    let times = trajectory.times();
    let esd = entanglement::detect_esd(&times, &concurrence, &cfg.esd.to_core());

    Ok(RegimeResult {
        regime,
        trajectory,
        concurrence,
        esd,
        table,
    })
}

/// Run every selected regime of one configuration (no file output).
pub fn run_config(cfg: &ExperimentConfig) -> Result<RunResult> {
    cfg.validate()?;
    let mut regimes = Vec::new();
    for &regime in &cfg.regimes {
        regimes.push(run_regime(cfg, regime)?);
    }
    Ok(RunResult {
        config: cfg.clone(),
        regimes,
    })
}

// ---------------------------------------------------------------------------
// file emission
// ---------------------------------------------------------------------------

/// 17 significant digits: round-trips every f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

const BASIS_LABELS: [&str; 4] = ["00", "01", "10", "11"];

fn trajectory_csv(result: &RegimeResult) -> String {
    let mut header = String::from("t,concurrence,trace_dev,herm_dev,min_eig");
    for i in BASIS_LABELS {
        for j in BASIS_LABELS {
            header.push_str(&format!(",rho_{i}_{j}_re,rho_{i}_{j}_im"));
        }
    }
    let mut out = header;
    out.push('\n');
    for (sample, &c) in result.trajectory.samples.iter().zip(&result.concurrence) {
        let mut row = vec![
            fmt_f64(sample.t),
            fmt_f64(c),
            fmt_f64(sample.trace_dev),
            fmt_f64(sample.herm_dev),
            fmt_f64(sample.min_eig),
        ];
        let m = sample.state.matrix();
        for i in 0..4 {
            for j in 0..4 {
                row.push(fmt_f64(m[(i, j)].re));
                row.push(fmt_f64(m[(i, j)].im));
            }
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn coefficients_csv(table: &CoefficientTable) -> String {
    let mut out = String::from("t,delta_re,delta_im,mu_re,mu_im,alpha_re,alpha_im\n");
    for node in table.nodes() {
        let row = [
            fmt_f64(node.t),
            fmt_f64(node.delta.re),
            fmt_f64(node.delta.im),
            fmt_f64(node.mu.re),
            fmt_f64(node.mu.im),
            fmt_f64(node.alpha.re),
            fmt_f64(node.alpha.im),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn esd_csv(report: &EsdReport) -> String {
    let mut out = String::from("t_start,t_end,revived\n");
    for interval in &report.dead_intervals {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(interval.t_start),
            fmt_f64(interval.t_end),
            interval.revived
        ));
    }
    out
}

fn write_file(dir: &Path, name: &str, content: &str) -> io::Result<()> {
    let mut f = fs::File::create(dir.join(name))?;
    f.write_all(content.as_bytes())
}

/// Emit all artifacts of one run into `dir`:
/// `trajectory_<regime>.csv`, `esd_<regime>.csv`, `coefficients.csv`
/// (non-Markov only), and the combined `concurrence.svg`.
pub fn write_outputs(dir: &Path, result: &RunResult) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for regime_result in &result.regimes {
        let label = regime_result.regime.label();
        write_file(
            dir,
            &format!("trajectory_{label}.csv"),
            &trajectory_csv(regime_result),
        )?;
        write_file(dir, &format!("esd_{label}.csv"), &esd_csv(&regime_result.esd))?;
        if let Some(table) = &regime_result.table {
            write_file(dir, "coefficients.csv", &coefficients_csv(table))?;
        }
    }
    let curves: Vec<plot::Curve> = result
        .regimes
        .iter()
        .map(|r| plot::Curve {
            label: r.regime.label().to_string(),
            times: r.trajectory.times(),
            values: r.concurrence.clone(),
        })
        .collect();
    write_file(dir, "concurrence.svg", &plot::concurrence_svg(&curves))
}
