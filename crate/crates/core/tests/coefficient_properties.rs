//! Cross-checks of the time-dependent coefficients Δ(t), μ(t), α(t):
//! quadrature-resolution stability, the long-time stationary-phase limit,
//! and an independent augmented-ODE route through the bath correlation
//! functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use sqbath::bath::{
    coefficients, correlation_functions, occupancy_n, spectral_density, BathSpec,
    QuadratureConfig,
};

fn bath(r: f64, kt: f64) -> BathSpec {
    BathSpec::new(1.0 / PI, 1.0, 1.0, r, 0.0, kt).unwrap()
}

#[test]
fn coefficients_stable_under_quadrature_refinement() {
    let quad = QuadratureConfig::default();
    let refined = QuadratureConfig {
        tol: quad.tol / 4.0,
        max_subdivisions: quad.max_subdivisions * 4,
        omega_max: None,
    };
    for kt in [0.0, 2.0, 5.0] {
        for r in [0.0, 0.31] {
            let b = bath(r, kt);
            for t in [0.2, 1.0, 5.0, 12.0, 20.0] {
                let coarse = coefficients(t, &b, &quad).unwrap();
                let fine = coefficients(t, &b, &refined).unwrap();
                let dev = (coarse.delta - fine.delta)
                    .norm()
                    .max((coarse.mu - fine.mu).norm())
                    .max((coarse.alpha - fine.alpha).norm());
                assert!(
                    dev < 10.0 * quad.tol,
                    "kt={kt} r={r} t={t}: refinement shift {dev:.3e}"
                );
            }
        }
    }
}

#[test]
fn re_mu_approaches_stationary_phase_limit() {
    // Re μ(t) → π J(ω₀)(1 + N(ω₀)) as t → ∞; checked at t = 50/ω₀
    let quad = QuadratureConfig::default();
    for kt in [0.0, 2.0] {
        for r in [0.0, 0.31] {
            let b = bath(r, kt);
            let n0 = occupancy_n(b.omega0, &b).unwrap();
            let limit = PI * spectral_density(b.omega0, &b) * (1.0 + n0);
            let c = coefficients(50.0, &b, &quad).unwrap();
            assert!(
                (c.mu.re - limit).abs() < 0.02 * limit,
                "kt={kt} r={r}: Re μ(50) = {}, limit = {limit}",
                c.mu.re
            );
        }
    }
}

#[test]
fn delta_vanishes_without_occupation() {
    // KT = 0 and r = 0: N(ω) ≡ 0, so Δ(t) = 0 for all t
    let b = bath(0.0, 0.0);
    let quad = QuadratureConfig::default();
    for t in [0.5, 3.0, 15.0] {
        let c = coefficients(t, &b, &quad).unwrap();
        assert!(c.delta.norm() < 1e-9, "t={t}: Δ = {:?}", c.delta);
    }
}

#[test]
fn augmented_ode_route_reproduces_coefficients() {
    // dΔ/dt = g_Δ(t), dμ/dt = g_μ(t), dα/dt = 2 g_α(2t) − g_α(t);
    // integrate the correlation functions with composite Simpson and
    // compare against the direct quadrature
    let b = bath(0.31, 0.0);
    let quad = QuadratureConfig::default();
    let t_end = 2.0;
    let n_panels = 200; // Simpson needs an even number of intervals
    let h = t_end / n_panels as f64;

    let mut delta = Complex64::new(0.0, 0.0);
    let mut mu = Complex64::new(0.0, 0.0);
    let mut alpha = Complex64::new(0.0, 0.0);
    let weight = |k: usize| -> f64 {
        if k == 0 || k == n_panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    for k in 0..=n_panels {
        let s = k as f64 * h;
        let g = correlation_functions(s, &b, &quad).unwrap();
        let g2 = correlation_functions(2.0 * s, &b, &quad).unwrap();
        let w = Complex64::new(weight(k) * h / 3.0, 0.0);
        delta += g.g_delta * w;
        mu += g.g_mu * w;
        alpha += (g2.g_alpha * Complex64::new(2.0, 0.0) - g.g_alpha) * w;
    }

    let direct = coefficients(t_end, &b, &quad).unwrap();
    assert!(
        (delta - direct.delta).norm() < 1e-5,
        "Δ: ODE route {delta}, direct {}",
        direct.delta
    );
    assert!(
        (mu - direct.mu).norm() < 1e-5,
        "μ: ODE route {mu}, direct {}",
        direct.mu
    );
    assert!(
        (alpha - direct.alpha).norm() < 1e-5,
        "α: ODE route {alpha}, direct {}",
        direct.alpha
    );
}
