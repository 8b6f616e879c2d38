//! Wootters concurrence and entanglement sudden-death / revival detection.
//!
//! C(ρ) = max(0, √λ₁ − √λ₂ − √λ₃ − √λ₄) with λᵢ the descending eigenvalues
//! of ρ ρ̃, ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y). The √λᵢ are computed through the
//! Hermitian route √ρ ρ̃ √ρ, whose eigenvalues equal those of ρ ρ̃ but are
//! accessible to the Jacobi solver; the non-Hermitian route serves as an
//! independent cross-check in the test suites.

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::linalg::{self, Mat4};
use crate::qubits::DensityMatrix;

/// Eigenvalues this far below zero are clamped to zero as roundoff.
pub const NEGATIVITY_CLAMP: f64 = 1e-6;
/// Below −NEGATIVITY_HARD_LIMIT is treated as integrator failure.
pub const NEGATIVITY_HARD_LIMIT: f64 = 1e-4;

/// σ_y ⊗ σ_y in the fixed product basis: the antidiagonal (−1, 1, 1, −1).
fn sigma_y_tensor() -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// Spin-flipped state ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y), conjugation entrywise
/// in the fixed product basis.
pub fn spin_flip(rho: &Mat4) -> Mat4 {
    let yy = sigma_y_tensor();
    let conj = rho.map(|z| z.conj());
    yy * conj * yy
}

/// The √λᵢ of ρ ρ̃ in descending order, via the Hermitian route:
/// eigenvalues of √ρ ρ̃ √ρ, clamped at zero, square-rooted.
pub fn sqrt_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let m = linalg::hermitize(rho.matrix());
    let min_eig = linalg::min_eigenvalue(&m)?;
    if min_eig < -NEGATIVITY_HARD_LIMIT {
        return Err(SimError::InvalidState(format!(
            "state eigenvalue {min_eig:.3e} below -{NEGATIVITY_HARD_LIMIT:.0e}; \
             integrator failure rather than roundoff"
        )));
    }
    let sqrt_rho = linalg::hermitian_sqrt(&m, NEGATIVITY_HARD_LIMIT)?;
    let w = linalg::hermitize(&(sqrt_rho * spin_flip(&m) * sqrt_rho));
    let (lambda, _) = linalg::jacobi_hermitian_eigen(&w)?;
    // eigenvalues below the solver's resolution are indistinguishable from
    // zero, and the square root would amplify the roundoff to ~10⁻⁸
    const NOISE_FLOOR: f64 = 1e-13;
    let mut roots = [0.0; 4];
    for k in 0..4 {
        // ascending from the solver; store descending
        let l = if lambda[k] < NOISE_FLOOR { 0.0 } else { lambda[k] };
        roots[3 - k] = l.sqrt();
    }
    Ok(roots)
}

/// Wootters concurrence, in [0, 1].
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let s = sqrt_lambdas(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// One maximal run of samples with concurrence at or below the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeadInterval {
    pub t_start: f64,
    pub t_end: f64,
    /// False when the interval extends to the end of the trajectory.
    pub revived: bool,
}

/// Detection settings for [`detect_esd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsdConfig {
    /// Concurrence at or below this counts as dead.
    pub threshold: f64,
    /// Runs shorter than this many samples are discarded as chatter.
    pub min_width: usize,
}

impl Default for EsdConfig {
    fn default() -> Self {
        Self {
            threshold: 1e-3,
            min_width: 5,
        }
    }
}

/// Death/revival structure of a concurrence time series.
#[derive(Debug, Clone, Default)]
pub struct EsdReport {
    /// Disjoint, increasing dead intervals.
    pub dead_intervals: Vec<DeadInterval>,
    /// Interval start times (entanglement deaths).
    pub death_times: Vec<f64>,
    /// End times of intervals followed by a revival.
    pub revival_times: Vec<f64>,
    /// Mean concurrence over the final 10% of samples.
    pub asymptotic_concurrence: f64,
    /// Number of dead intervals.
    pub cycle_count: usize,
}

/// Scan a concurrence series for dead intervals.
///
/// Interval endpoints are refined by linear interpolation of the threshold
/// crossing. A run that begins at the very first sample is not counted:
/// entanglement that was never present cannot die. A run reaching the last
/// sample is reported with `t_end` at the final time and flagged
/// non-revived.
pub fn detect_esd(times: &[f64], concurrence: &[f64], cfg: &EsdConfig) -> EsdReport {
    assert_eq!(times.len(), concurrence.len());
    let n = times.len();
    let mut report = EsdReport::default();
    if n == 0 {
        return report;
    }

    let dead = |k: usize| concurrence[k] <= cfg.threshold;
    let mut k = 0;
    while k < n {
        if !dead(k) {
            k += 1;
            continue;
        }
        let start = k;
        while k < n && dead(k) {
            k += 1;
        }
        let end = k - 1; // inclusive
        let starts_at_origin = start == 0;
        let reaches_end = end == n - 1;
        if starts_at_origin || (end + 1 - start) < cfg.min_width {
            continue;
        }
        // refine the entry crossing between samples start−1 and start
        let t_start = interpolate_crossing(
            times[start - 1],
            concurrence[start - 1],
            times[start],
            concurrence[start],
            cfg.threshold,
        );
        let (t_end, revived) = if reaches_end {
            (times[n - 1], false)
        } else {
            (
                interpolate_crossing(
                    times[end],
                    concurrence[end],
                    times[end + 1],
                    concurrence[end + 1],
                    cfg.threshold,
                ),
                true,
            )
        };
        report.dead_intervals.push(DeadInterval {
            t_start,
            t_end,
            revived,
        });
        report.death_times.push(t_start);
        if revived {
            report.revival_times.push(t_end);
        }
    }
    report.cycle_count = report.dead_intervals.len();

    let tail = (n / 10).max(1);
    report.asymptotic_concurrence =
        concurrence[n - tail..].iter().sum::<f64>() / tail as f64;
    report
}

fn interpolate_crossing(t0: f64, c0: f64, t1: f64, c1: f64, threshold: f64) -> f64 {
    if (c1 - c0).abs() < 1e-300 {
        return t1;
    }
    let frac = ((threshold - c0) / (c1 - c0)).clamp(0.0, 1.0);
    t0 + frac * (t1 - t0)
}
