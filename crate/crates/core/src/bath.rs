//! Reservoir spectral functions and the time-dependent master-equation
//! coefficients Δ(t), μ(t), α(t).
//!
//! The coefficients are frequency integrals of the Ohmic spectral density
//! J(ω) = Γ ω exp(−ω²/ωc²) against the squeezed-thermal occupations N(ω),
//! M(ω) and an oscillatory time kernel. The inner time integral is done
//! analytically (see [`memory_kernel`] / [`anomalous_kernel`]); the
//! remaining frequency integral is evaluated by adaptive Simpson quadrature
//! with panels seeded fine enough to resolve the oscillation period 2π/t.
//!
//! For use inside an ODE integrator the coefficients are cached on a
//! uniform grid ([`CoefficientTable`]) with cubic interpolation; direct
//! evaluation is retained for validation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::linalg::C64;

/// All reservoir parameters, in natural units with ω₀ = 1 by default.
///
/// `kt = 0` encodes the squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    /// Dimensionless coupling strength Γ of the Ohmic spectral density.
    pub coupling_strength: f64,
    /// Qubit resonance frequency ω₀.
    pub omega0: f64,
    /// High-frequency cutoff ω_c.
    pub omega_c: f64,
    /// Resonant squeeze magnitude r ≥ 0.
    pub squeeze_magnitude: f64,
    /// Resonant squeeze phase θ, reduced to [0, 2π).
    pub squeeze_phase: f64,
    /// Bath temperature KT in units of ω₀.
    pub kt: f64,
}

impl BathSpec {
    pub fn new(
        coupling_strength: f64,
        omega0: f64,
        omega_c: f64,
        squeeze_magnitude: f64,
        squeeze_phase: f64,
        kt: f64,
    ) -> Result<Self> {
        if !(coupling_strength > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "coupling strength must be > 0, got {coupling_strength}"
            )));
        }
        if !(omega0 > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "resonance frequency must be > 0, got {omega0}"
            )));
        }
        if !(omega_c > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "cutoff frequency must be > 0, got {omega_c}"
            )));
        }
        if !(squeeze_magnitude >= 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "squeeze magnitude must be >= 0, got {squeeze_magnitude}"
            )));
        }
        if !(kt >= 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "temperature must be >= 0, got {kt}"
            )));
        }
        Ok(Self {
            coupling_strength,
            omega0,
            omega_c,
            squeeze_magnitude,
            squeeze_phase: squeeze_phase.rem_euclid(2.0 * PI),
            kt,
        })
    }

    /// Vacuum (KT = 0) squeezed bath with the given squeeze parameters.
    pub fn squeezed_vacuum(
        coupling_strength: f64,
        omega0: f64,
        omega_c: f64,
        r: f64,
        theta: f64,
    ) -> Result<Self> {
        Self::new(coupling_strength, omega0, omega_c, r, theta, 0.0)
    }

    /// e^{iθ} for the squeeze phase.
    pub fn phase_factor(&self) -> C64 {
        Complex64::from_polar(1.0, self.squeeze_phase)
    }
}

/// Quadrature settings for the coefficient integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance per integral.
    pub tol: f64,
    /// Global subdivision budget per integral.
    pub max_subdivisions: usize,
    /// Override for the upper integration limit; default ω₀ + 6ω_c.
    pub omega_max: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_subdivisions: 20_000,
            omega_max: None,
        }
    }
}

impl QuadratureConfig {
    pub fn effective_omega_max(&self, bath: &BathSpec) -> f64 {
        self.omega_max.unwrap_or(bath.omega0 + 6.0 * bath.omega_c)
    }
}

/// The complex coefficient triple (Δ(t), μ(t), α(t)) at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub t: f64,
    pub delta: C64,
    pub mu: C64,
    pub alpha: C64,
}

impl CoefficientSet {
    pub fn zero(t: f64) -> Self {
        Self {
            t,
            delta: Complex64::new(0.0, 0.0),
            mu: Complex64::new(0.0, 0.0),
            alpha: Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_finite(&self) -> bool {
        let f = |z: C64| z.re.is_finite() && z.im.is_finite();
        f(self.delta) && f(self.mu) && f(self.alpha)
    }
}

/// Planck occupancy n(ω) = 1/(e^{ω/KT} − 1); 0 in the zero-temperature limit.
///
/// At KT > 0 the occupancy diverges as ω → 0; callers integrating through
/// ω = 0 must substitute the analytic limit of the full integrand instead
/// (the envelope functions below do).
pub fn planck_occupancy(omega: f64, kt: f64) -> Result<f64> {
    if kt == 0.0 {
        if omega < 0.0 {
            return Err(SimError::Domain(format!(
                "planck occupancy needs ω ≥ 0 at KT = 0, got ω = {omega}"
            )));
        }
        return Ok(0.0);
    }
    if omega <= 0.0 {
        return Err(SimError::Domain(format!(
            "planck occupancy diverges for ω ≤ 0 at KT > 0 (ω = {omega})"
        )));
    }
    Ok(1.0 / (omega / kt).exp_m1())
}

/// Squeezed-thermal occupation N(ω) = n(ω)[cosh²r + sinh²r] + sinh²r.
pub fn occupancy_n(omega: f64, bath: &BathSpec) -> Result<f64> {
    let r = bath.squeeze_magnitude;
    let n = planck_occupancy(omega, bath.kt)?;
    Ok(n * (2.0 * r).cosh() + r.sinh().powi(2))
}

/// Squeezed-thermal correlation M(ω) = −cosh r sinh r e^{iθ} [2n(ω) + 1].
pub fn correlation_m(omega: f64, bath: &BathSpec) -> Result<C64> {
    let r = bath.squeeze_magnitude;
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = planck_occupancy(omega, bath.kt)?;
    Ok(-bath.phase_factor() * (r.cosh() * r.sinh() * (2.0 * n + 1.0)))
}

/// Ohmic spectral density with Gaussian cutoff, J(ω) = Γ ω exp(−ω²/ωc²).
pub fn spectral_density(omega: f64, bath: &BathSpec) -> f64 {
    bath.coupling_strength * omega * (-omega * omega / (bath.omega_c * bath.omega_c)).exp()
}

const KERNEL_SERIES_THRESHOLD: f64 = 1e-6;

/// Analytic inner time integral K(δ, t) = ∫₀ᵗ e^{iδ(t−t₁)} dt₁ = (e^{iδt} − 1)/(iδ).
///
/// The removable singularity at δ → 0 is handled by the Taylor series
/// t(1 + iδt/2 − (δt)²/6) below |δt| = 10⁻⁶.
pub fn memory_kernel(delta: f64, t: f64) -> C64 {
    let x = delta * t;
    if x.abs() < KERNEL_SERIES_THRESHOLD {
        return Complex64::new(t * (1.0 - x * x / 6.0), t * x / 2.0);
    }
    let num = Complex64::from_polar(1.0, x) - 1.0;
    num / Complex64::new(0.0, delta)
}

/// Analytic inner time integral of the anomalous term,
/// ∫₀ᵗ e^{iδ(t+t₁)} dt₁ = e^{iδt} K(δ, t).
pub fn anomalous_kernel(delta: f64, t: f64) -> C64 {
    Complex64::from_polar(1.0, delta * t) * memory_kernel(delta, t)
}

// ---------------------------------------------------------------------------
// integrand envelopes (kernel-free frequency factors), with analytic ω → 0
// limits at finite temperature where J(ω)n(ω) → Γ·KT
// ---------------------------------------------------------------------------

fn j_times_planck(omega: f64, bath: &BathSpec) -> f64 {
    if bath.kt == 0.0 {
        return 0.0;
    }
    if omega == 0.0 {
        return bath.coupling_strength * bath.kt;
    }
    spectral_density(omega, bath) / (omega / bath.kt).exp_m1()
}

/// J(ω)·N(ω), finite down to ω = 0.
fn envelope_delta(omega: f64, bath: &BathSpec) -> f64 {
    let r = bath.squeeze_magnitude;
    j_times_planck(omega, bath) * (2.0 * r).cosh()
        + spectral_density(omega, bath) * r.sinh().powi(2)
}

/// J(ω)·[1 + N(ω)], finite down to ω = 0.
fn envelope_mu(omega: f64, bath: &BathSpec) -> f64 {
    let r = bath.squeeze_magnitude;
    j_times_planck(omega, bath) * (2.0 * r).cosh()
        + spectral_density(omega, bath) * (1.0 + r.sinh().powi(2))
}

/// J(ω)·M(ω), finite down to ω = 0.
fn envelope_alpha(omega: f64, bath: &BathSpec) -> C64 {
    let r = bath.squeeze_magnitude;
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let magnitude =
        r.cosh() * r.sinh() * (2.0 * j_times_planck(omega, bath) + spectral_density(omega, bath));
    -bath.phase_factor() * magnitude
}

// ---------------------------------------------------------------------------
// adaptive Simpson quadrature for complex integrands
// ---------------------------------------------------------------------------

struct QuadBudget {
    used: usize,
    max: usize,
}

fn simpson(h: f64, fa: C64, fm: C64, fb: C64) -> C64 {
    (fa + fm * 4.0 + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    fa: C64,
    b: f64,
    fb: C64,
    fm: C64,
    whole: C64,
    tol: f64,
    depth: usize,
    budget: &mut QuadBudget,
) -> (C64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let s2 = left + right;
    let err = (s2 - whole).norm() / 15.0;
    let out_of_budget = budget.used + 2 > budget.max;
    if err <= tol || depth >= 40 || out_of_budget {
        return (s2 + (s2 - whole) / 15.0, err);
    }
    budget.used += 2;
    let (vl, el) = adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1, budget);
    let (vr, er) = adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1, budget);
    (vl + vr, el + er)
}

/// Adaptive Simpson integration of a complex integrand on [a, b], with
/// initial panels no wider than `seed_width` so oscillations of known
/// period are resolved before refinement starts.
///
/// Returns the integral and the accumulated error estimate, or an error if
/// the estimate still exceeds `tol` once the subdivision budget is spent.
pub fn integrate_complex<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    b: f64,
    seed_width: f64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<(C64, f64)> {
    assert!(b > a, "integration interval must be non-degenerate");
    let span = b - a;
    let n_panels = ((span / seed_width).ceil() as usize).clamp(4, 200_000);
    let h = span / n_panels as f64;
    let mut budget = QuadBudget {
        used: n_panels,
        max: max_subdivisions.max(n_panels),
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_total = 0.0;
    let panel_tol = tol / n_panels as f64;
    let mut fa = f(a);
    for k in 0..n_panels {
        let x0 = a + k as f64 * h;
        let x1 = if k + 1 == n_panels { b } else { x0 + h };
        let fb = f(x1);
        let fm = f(0.5 * (x0 + x1));
        let whole = simpson(x1 - x0, fa, fm, fb);
        let (v, e) = adapt(&f, x0, fa, x1, fb, fm, whole, panel_tol, 0, &mut budget);
        total += v;
        err_total += e;
        fa = fb;
    }
    if err_total > tol {
        return Err(SimError::QuadratureNonConvergence {
            achieved: err_total,
            requested: tol,
            max_subdivisions,
        });
    }
    Ok((total, err_total))
}

fn kernel_seed_width(bath: &BathSpec, t: f64) -> f64 {
    // integrand = smooth envelope × oscillation of frequency t
    (bath.omega_c / 8.0).min(PI / (4.0 * t))
}

/// The master-equation coefficients (Δ(t), μ(t), α(t)) by direct quadrature.
///
/// Δ(t) = ∫₀^∞ J N K(ω₀−ω, t) dω, μ(t) the same with 1+N, and α(t) uses
/// J M with the anomalous kernel. The Gaussian cutoff makes the tail beyond
/// ω₀ + 6ω_c negligible, so the integral is truncated there by default.
pub fn coefficients(t: f64, bath: &BathSpec, quad: &QuadratureConfig) -> Result<CoefficientSet> {
    if t < 0.0 {
        return Err(SimError::Domain(format!(
            "coefficients need t ≥ 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(CoefficientSet::zero(0.0));
    }
    let omega_max = quad.effective_omega_max(bath);
    let width = kernel_seed_width(bath, t);
    let omega0 = bath.omega0;

    let (delta, _) = integrate_complex(
        |w| memory_kernel(omega0 - w, t) * envelope_delta(w, bath),
        0.0,
        omega_max,
        width,
        quad.tol,
        quad.max_subdivisions,
    )?;
    let (mu, _) = integrate_complex(
        |w| memory_kernel(omega0 - w, t) * envelope_mu(w, bath),
        0.0,
        omega_max,
        width,
        quad.tol,
        quad.max_subdivisions,
    )?;
    let alpha = if bath.squeeze_magnitude == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        integrate_complex(
            |w| anomalous_kernel(omega0 - w, t) * envelope_alpha(w, bath),
            0.0,
            omega_max,
            // the anomalous kernel oscillates at up to 2t
            0.5 * width,
            quad.tol,
            quad.max_subdivisions,
        )?
        .0
    };
    Ok(CoefficientSet {
        t,
        delta,
        mu,
        alpha,
    })
}

/// Bath correlation functions at a single time lag, used by the
/// augmented-ODE cross-check route: dΔ/dt = g_Δ(t), dμ/dt = g_μ(t),
/// dα/dt = 2 g_α(2t) − g_α(t).
#[derive(Debug, Clone, Copy)]
pub struct CorrelationSample {
    pub g_delta: C64,
    pub g_mu: C64,
    pub g_alpha: C64,
}

/// g_X(s) = ∫₀^∞ envelope_X(ω) e^{i(ω₀−ω)s} dω for the three envelopes.
pub fn correlation_functions(
    lag: f64,
    bath: &BathSpec,
    quad: &QuadratureConfig,
) -> Result<CorrelationSample> {
    let omega_max = quad.effective_omega_max(bath);
    let width = kernel_seed_width(bath, lag.abs().max(1e-3));
    let omega0 = bath.omega0;
    let osc = |w: f64| Complex64::from_polar(1.0, (omega0 - w) * lag);

    let (g_delta, _) = integrate_complex(
        |w| osc(w) * envelope_delta(w, bath),
        0.0,
        omega_max,
        width,
        quad.tol,
        quad.max_subdivisions,
    )?;
    let (g_mu, _) = integrate_complex(
        |w| osc(w) * envelope_mu(w, bath),
        0.0,
        omega_max,
        width,
        quad.tol,
        quad.max_subdivisions,
    )?;
    let g_alpha = if bath.squeeze_magnitude == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        integrate_complex(
            |w| osc(w) * envelope_alpha(w, bath),
            0.0,
            omega_max,
            width,
            quad.tol,
            quad.max_subdivisions,
        )?
        .0
    };
    Ok(CorrelationSample {
        g_delta,
        g_mu,
        g_alpha,
    })
}

// ---------------------------------------------------------------------------
// coefficient cache
// ---------------------------------------------------------------------------

/// Precomputed coefficients on a uniform time grid with cubic interpolation.
///
/// Immutable after construction; safe to share across concurrent trajectory
/// evaluations. Queries at grid nodes return the node values exactly.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    step: f64,
    t_max: f64,
    nodes: Vec<CoefficientSet>,
}

impl CoefficientTable {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn nodes(&self) -> &[CoefficientSet] {
        &self.nodes
    }

    /// Cubic (4-point Lagrange) interpolation of the coefficient triple.
    pub fn eval(&self, t: f64) -> Result<CoefficientSet> {
        if t < -1e-12 || t > self.t_max * (1.0 + 1e-12) + 1e-12 {
            return Err(SimError::CoefficientOutOfRange {
                t,
                t_max: self.t_max,
            });
        }
        let t = t.clamp(0.0, self.t_max);
        let n = self.nodes.len();
        let s = t / self.step;
        let nearest = s.round() as usize;
        if nearest < n && self.grid_time(nearest) == t {
            return Ok(self.nodes[nearest]);
        }
        let i = (s.floor() as usize).min(n - 2);
        let j0 = i.saturating_sub(1).min(n - 4);
        let mut delta = Complex64::new(0.0, 0.0);
        let mut mu = Complex64::new(0.0, 0.0);
        let mut alpha = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            let tk = self.grid_time(j0 + k);
            let mut w = 1.0;
            for l in 0..4 {
                if l != k {
                    let tl = self.grid_time(j0 + l);
                    w *= (t - tl) / (tk - tl);
                }
            }
            let node = &self.nodes[j0 + k];
            delta += node.delta * w;
            mu += node.mu * w;
            alpha += node.alpha * w;
        }
        Ok(CoefficientSet {
            t,
            delta,
            mu,
            alpha,
        })
    }

    fn grid_time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }
}

/// Build a coefficient table on a uniform grid [0, t_max] with step
/// `h_coeff` (the last node lands on or just past t_max).
pub fn build_coefficient_table(
    bath: &BathSpec,
    t_max: f64,
    h_coeff: f64,
    quad: &QuadratureConfig,
) -> Result<CoefficientTable> {
    if !(t_max > 0.0) || !(h_coeff > 0.0) {
        return Err(SimError::InvalidParameter(format!(
            "coefficient table needs t_max > 0 and h_coeff > 0, got {t_max}, {h_coeff}"
        )));
    }
    let n = ((t_max / h_coeff).ceil() as usize + 1).max(4);
    let mut nodes = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 * h_coeff;
        nodes.push(coefficients(t, bath, quad)?);
    }
    Ok(CoefficientTable {
        step: h_coeff,
        t_max: (n - 1) as f64 * h_coeff,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vacuum_bath(r: f64, theta: f64) -> BathSpec {
        BathSpec::squeezed_vacuum(1.0, 1.0, 1.0, r, theta).unwrap()
    }

    #[test]
    fn planck_examples() {
        assert_eq!(planck_occupancy(1.0, 0.0).unwrap(), 0.0);
        let n = planck_occupancy(1.0, 1.0).unwrap();
        assert!((n - 1.0 / (1.0f64.exp() - 1.0)).abs() < 1e-15);
        // depends only on ω/KT
        let n2 = planck_occupancy(2.0, 2.0).unwrap();
        assert!((n - n2).abs() < 1e-15);
        assert!(planck_occupancy(0.0, 1.0).is_err());
        assert!(planck_occupancy(-1.0, 1.0).is_err());
    }

    #[test]
    fn occupancy_examples() {
        let vac = vacuum_bath(0.0, 0.0);
        assert_eq!(occupancy_n(1.0, &vac).unwrap(), 0.0);

        let sq = vacuum_bath(0.31, 0.0);
        let n = occupancy_n(0.7, &sq).unwrap();
        assert!((n - 0.31f64.sinh().powi(2)).abs() < 1e-15);
        assert!((n - 0.09921).abs() < 2e-5);

        let thermal = BathSpec::new(1.0, 1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let n = occupancy_n(1.0, &thermal).unwrap();
        assert!((n - planck_occupancy(1.0, 1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn correlation_examples() {
        let unsq = vacuum_bath(0.0, 0.0);
        assert_eq!(correlation_m(1.0, &unsq).unwrap().norm(), 0.0);

        let sq = vacuum_bath(0.31, 0.0);
        let m = correlation_m(2.0, &sq).unwrap();
        let expected = -(0.31f64.sinh() * 0.31f64.cosh());
        assert!((m.re - expected).abs() < 1e-15);
        assert!(m.im.abs() < 1e-15);
        assert!((m.re + 0.33025).abs() < 2e-5);

        let flipped = vacuum_bath(0.31, PI);
        let m_pi = correlation_m(2.0, &flipped).unwrap();
        assert!((m_pi.re + expected).abs() < 1e-12);
    }

    #[test]
    fn m_and_n_satisfy_squeezing_inequality() {
        // |M|² ≥ N(N+1) − n(n+1), equality at KT = 0
        for (r, kt) in [(0.31, 0.0), (0.31, 2.0), (0.05, 5.0)] {
            let bath = BathSpec::new(1.0, 1.0, 1.0, r, 0.3, kt).unwrap();
            let w = 1.0;
            let n_th = planck_occupancy(w, kt).unwrap();
            let big_n = occupancy_n(w, &bath).unwrap();
            let m2 = correlation_m(w, &bath).unwrap().norm_sqr();
            let bound = big_n * (big_n + 1.0) - n_th * (n_th + 1.0);
            assert!(m2 >= bound - 1e-12);
            if kt == 0.0 {
                assert!((m2 - big_n * (big_n + 1.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectral_density_shape() {
        let bath = vacuum_bath(0.0, 0.0);
        assert_eq!(spectral_density(0.0, &bath), 0.0);
        assert!((spectral_density(1.0, &bath) - (-1.0f64).exp()).abs() < 1e-15);
        // maximum at ω_c/√2
        let peak_w = bath.omega_c / 2.0f64.sqrt();
        let peak = spectral_density(peak_w, &bath);
        assert!((peak - peak_w * (-0.5f64).exp()).abs() < 1e-15);
        assert!(spectral_density(peak_w * 0.999, &bath) < peak);
        assert!(spectral_density(peak_w * 1.001, &bath) < peak);
        // negligible tail
        assert!(spectral_density(6.0 * bath.omega_c, &bath) < 1e-14 * peak);
    }

    #[test]
    fn memory_kernel_examples() {
        let k = memory_kernel(0.0, 3.0);
        assert!((k - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        assert_eq!(memory_kernel(1.7, 0.0).norm(), 0.0);
        let k = memory_kernel(PI, 1.0);
        assert!((k - Complex64::new(0.0, 2.0 / PI)).norm() < 1e-14);
    }

    #[test]
    fn memory_kernel_magnitude_identity() {
        for (delta, t) in [(0.3, 2.0), (-1.2, 5.0), (4.0, 0.7), (1e-4, 10.0)] {
            let k = memory_kernel(delta, t);
            let expected = (2.0 * (0.5 * delta * t).sin() / delta).abs();
            assert!(
                (k.norm() - expected).abs() < 1e-12,
                "δ={delta} t={t}: {} vs {expected}",
                k.norm()
            );
        }
    }

    #[test]
    fn kernel_series_matches_exact_branch_at_threshold() {
        // reference: one more series term than the production branch uses
        let t = 1.0;
        let reference = |delta: f64| {
            let x = delta * t;
            Complex64::new(t * (1.0 - x * x / 6.0), t * (x / 2.0 - x * x * x / 24.0))
        };
        // series side of the threshold: essentially exact
        let d = 9.9e-7;
        assert!((memory_kernel(d, t) - reference(d)).norm() < 1e-14);
        // exact side: limited by cancellation in e^{iδt} − 1
        let d = 1.1e-6;
        assert!((memory_kernel(d, t) - reference(d)).norm() < 1e-9);
    }

    #[test]
    fn anomalous_kernel_examples() {
        assert!((anomalous_kernel(0.0, 3.0) - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        assert_eq!(anomalous_kernel(2.0, 0.0).norm(), 0.0);
        let k = anomalous_kernel(PI, 1.0);
        assert!((k - Complex64::new(0.0, -2.0 / PI)).norm() < 1e-14);
    }

    #[test]
    fn coefficients_vanish_at_t_zero() {
        let bath = vacuum_bath(0.31, 0.0);
        let c = coefficients(0.0, &bath, &QuadratureConfig::default()).unwrap();
        assert_eq!(c.delta.norm(), 0.0);
        assert_eq!(c.mu.norm(), 0.0);
        assert_eq!(c.alpha.norm(), 0.0);
    }

    #[test]
    fn alpha_vanishes_without_squeezing() {
        let bath = vacuum_bath(0.0, 0.0);
        let c = coefficients(3.0, &bath, &QuadratureConfig::default()).unwrap();
        assert_eq!(c.alpha.norm(), 0.0);
        // vacuum, unsqueezed: N = 0 so Δ = 0 too
        assert!(c.delta.norm() < 1e-10);
        assert!(c.mu.norm() > 0.1);
    }

    #[test]
    fn mu_reaches_stationary_phase_limit() {
        // Γ=1, ω₀=ω_c=1, r=0, KT=0: Re μ(t→∞) → π J(ω₀) = π e⁻¹
        let bath = vacuum_bath(0.0, 0.0);
        let quad = QuadratureConfig {
            tol: 1e-8,
            ..Default::default()
        };
        let c = coefficients(50.0, &bath, &quad).unwrap();
        let limit = PI * (-1.0f64).exp();
        assert!(
            (c.mu.re - limit).abs() < 0.02 * limit,
            "Re μ(50) = {}, limit = {limit}",
            c.mu.re
        );
    }

    #[test]
    fn mu_minus_delta_is_squeeze_independent() {
        // μ − Δ = ∫ J K dω regardless of N; compare against the unsqueezed
        // vacuum bath where μ itself equals that integral
        let quad = QuadratureConfig::default();
        let plain = vacuum_bath(0.0, 0.0);
        for (r, kt) in [(0.31, 0.0), (0.31, 2.0)] {
            let bath = BathSpec::new(1.0, 1.0, 1.0, r, 0.0, kt).unwrap();
            for t in [0.5, 2.0, 7.0] {
                let c = coefficients(t, &bath, &quad).unwrap();
                let reference = coefficients(t, &plain, &quad).unwrap();
                assert!(
                    ((c.mu - c.delta) - reference.mu).norm() < 20.0 * quad.tol,
                    "t={t} r={r} kt={kt}"
                );
            }
        }
    }

    #[test]
    fn coefficients_finite_at_finite_temperature() {
        let bath = BathSpec::new(1.0, 1.0, 1.0, 0.31, 0.0, 5.0).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let c = coefficients(t, &bath, &QuadratureConfig::default()).unwrap();
            assert!(c.is_finite(), "t={t}: {c:?}");
        }
    }

    #[test]
    fn table_grid_arithmetic() {
        let bath = vacuum_bath(0.31, 0.0);
        let quad = QuadratureConfig {
            tol: 1e-7,
            ..Default::default()
        };
        let table = build_coefficient_table(&bath, 10.0, 0.01, &quad).unwrap();
        assert_eq!(table.nodes().len(), 1001);
        assert!((table.t_max() - 10.0).abs() < 1e-12);

        // node queries are exact
        let t500 = 500.0 * table.step();
        let at_node = table.eval(t500).unwrap();
        assert_eq!(at_node.delta, table.nodes()[500].delta);
        assert_eq!(at_node.mu, table.nodes()[500].mu);
        assert_eq!(at_node.alpha, table.nodes()[500].alpha);

        let at_zero = table.eval(0.0).unwrap();
        assert_eq!(at_zero.delta.norm(), 0.0);
        assert_eq!(at_zero.mu.norm(), 0.0);
        assert_eq!(at_zero.alpha.norm(), 0.0);

        assert!(table.eval(10.5).is_err());
        assert!(table.eval(-0.1).is_err());
    }

    #[test]
    fn table_interpolation_matches_half_step_refinement() {
        let bath = vacuum_bath(0.31, 0.0);
        let quad = QuadratureConfig {
            tol: 1e-9,
            ..Default::default()
        };
        let coarse = build_coefficient_table(&bath, 1.0, 0.005, &quad).unwrap();
        let fine = build_coefficient_table(&bath, 1.0, 0.0025, &quad).unwrap();
        // probe at the fine grid's odd nodes, which are the coarse grid's
        // segment midpoints
        for k in (1..fine.nodes().len()).step_by(2) {
            let t = k as f64 * fine.step();
            let interp = coarse.eval(t).unwrap();
            let exact = &fine.nodes()[k];
            let dev = (interp.delta - exact.delta)
                .norm()
                .max((interp.mu - exact.mu).norm())
                .max((interp.alpha - exact.alpha).norm());
            assert!(dev < 10.0 * quad.tol.max(1e-8), "t={t}: dev={dev:.3e}");
        }
    }

    #[test]
    fn bath_spec_validation() {
        assert!(BathSpec::new(0.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(BathSpec::new(1.0, -1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(BathSpec::new(1.0, 1.0, 1.0, -0.1, 0.0, 0.0).is_err());
        assert!(BathSpec::new(1.0, 1.0, 1.0, 0.0, 0.0, -1.0).is_err());
        let b = BathSpec::new(1.0, 1.0, 1.0, 0.1, -PI, 0.0).unwrap();
        assert!((b.squeeze_phase - PI).abs() < 1e-15);
    }
}
