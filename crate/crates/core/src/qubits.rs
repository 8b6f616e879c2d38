//! Two-qubit operator algebra and the named states of the model:
//! collective operators S±, the DFS basis φ1–φ4, and the initial-state
//! families Ψ1(ε), Ψ2(ε).
//!
//! Basis convention (module-wide constant): product basis ordered
//! (|00⟩, |01⟩, |10⟩, |11⟩) with |1⟩ the excited state. Complex
//! conjugation in the concurrence is taken entrywise in this basis, so all
//! operators and states must use it consistently.

use nalgebra::Vector4;
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::linalg::{self, CVec4, Mat4, ONE, ZERO};

/// Index of |00⟩ in the fixed product basis.
pub const IDX_00: usize = 0;
/// Index of |01⟩.
pub const IDX_01: usize = 1;
/// Index of |10⟩.
pub const IDX_10: usize = 2;
/// Index of |11⟩.
pub const IDX_11: usize = 3;

/// Collective lowering operator S₋ = σ₋¹ + σ₋².
///
/// S₋|11⟩ = |01⟩ + |10⟩, S₋|01⟩ = S₋|10⟩ = |00⟩, S₋|00⟩ = 0.
pub fn collective_lowering() -> Mat4 {
    let mut m = Mat4::zeros();
    m[(IDX_01, IDX_11)] = ONE;
    m[(IDX_10, IDX_11)] = ONE;
    m[(IDX_00, IDX_01)] = ONE;
    m[(IDX_00, IDX_10)] = ONE;
    m
}

/// Collective raising operator S₊ = S₋†.
pub fn collective_raising() -> Mat4 {
    collective_lowering().adjoint()
}

/// A normalized four-amplitude pure state in the fixed product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVec4,
}

impl PureState {
    /// Wrap an amplitude vector, requiring unit norm within 10⁻¹².
    pub fn new(amplitudes: CVec4) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(SimError::InvalidState(format!(
                "pure state norm {norm} differs from 1 by more than 1e-12"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary nonzero amplitude vector.
    pub fn normalized(amplitudes: CVec4) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(SimError::InvalidState(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    pub fn amplitudes(&self) -> &CVec4 {
        &self.amplitudes
    }

    pub fn amplitude(&self, idx: usize) -> Complex64 {
        self.amplitudes[idx]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// ρ = |ψ⟩⟨ψ|.
    pub fn projector(&self) -> Mat4 {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

fn squeeze_nm(r: f64) -> (f64, f64) {
    (r.sinh().powi(2), r.sinh() * r.cosh())
}

/// φ1 built directly from occupation parameters (N, M):
/// (N|11⟩ + M e^{−iθ}|00⟩)/√(N² + M²).
///
/// Used both for the vacuum construction (N, M from r) and the thermal one
/// (N(ω₀), |M(ω₀)|).
pub fn dfs_state_phi1_from_nm(n: f64, m: f64, theta: f64) -> Result<PureState> {
    if n <= 0.0 || m <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "phi1 is degenerate for N = {n}, M = {m}; both must be > 0"
        )));
    }
    let mut amps = Vector4::from_element(ZERO);
    amps[IDX_11] = Complex64::new(n, 0.0);
    amps[IDX_00] = Complex64::from_polar(m, -theta);
    PureState::normalized(amps)
}

/// φ4 counterpart of [`dfs_state_phi1_from_nm`]:
/// (M|11⟩ − N e^{−iθ}|00⟩)/√(N² + M²).
pub fn dfs_state_phi4_from_nm(n: f64, m: f64, theta: f64) -> Result<PureState> {
    if n <= 0.0 || m <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "phi4 is degenerate for N = {n}, M = {m}; both must be > 0"
        )));
    }
    let mut amps = Vector4::from_element(ZERO);
    amps[IDX_11] = Complex64::new(m, 0.0);
    amps[IDX_00] = -Complex64::from_polar(n, -theta);
    PureState::normalized(amps)
}

/// Markovian DFS state φ1 = (N|11⟩ + M e^{−iθ}|00⟩)/√(N² + M²) with
/// N = sinh²r, M = sinh r cosh r.
///
/// Rejects r ≤ 0: at r = 0 both N and M vanish and the state is undefined.
pub fn dfs_state_phi1(r: f64, theta: f64) -> Result<PureState> {
    if r <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "phi1 undefined at r = {r}; requires r > 0"
        )));
    }
    let (n, m) = squeeze_nm(r);
    dfs_state_phi1_from_nm(n, m, theta)
}

/// The singlet φ2 = (|01⟩ − |10⟩)/√2.
pub fn dfs_state_phi2() -> PureState {
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = Vector4::from_element(ZERO);
    amps[IDX_01] = inv;
    amps[IDX_10] = -inv;
    PureState { amplitudes: amps }
}

/// The triplet φ3 = (|01⟩ + |10⟩)/√2.
pub fn dfs_state_phi3() -> PureState {
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = Vector4::from_element(ZERO);
    amps[IDX_01] = inv;
    amps[IDX_10] = inv;
    PureState { amplitudes: amps }
}

/// φ4 = (M|11⟩ − N e^{−iθ}|00⟩)/√(N² + M²), orthogonal to φ1.
pub fn dfs_state_phi4(r: f64, theta: f64) -> Result<PureState> {
    if r <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "phi4 undefined at r = {r}; requires r > 0"
        )));
    }
    let (n, m) = squeeze_nm(r);
    dfs_state_phi4_from_nm(n, m, theta)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(SimError::InvalidParameter(format!(
            "amplitude ε must lie in [0, 1], got {epsilon}"
        )));
    }
    Ok(())
}

/// Ψ1(ε) = ε φ1 + √(1−ε²) φ4.
pub fn initial_psi1(epsilon: f64, r: f64, theta: f64) -> Result<PureState> {
    check_epsilon(epsilon)?;
    let phi1 = dfs_state_phi1(r, theta)?;
    let phi4 = dfs_state_phi4(r, theta)?;
    let c1 = Complex64::new(epsilon, 0.0);
    let c4 = Complex64::new((1.0 - epsilon * epsilon).max(0.0).sqrt(), 0.0);
    PureState::normalized(phi1.amplitudes * c1 + phi4.amplitudes * c4)
}

/// Ψ2(ε) = ε φ2 + √(1−ε²) φ3.
pub fn initial_psi2(epsilon: f64) -> Result<PureState> {
    check_epsilon(epsilon)?;
    let phi2 = dfs_state_phi2();
    let phi3 = dfs_state_phi3();
    let c2 = Complex64::new(epsilon, 0.0);
    let c3 = Complex64::new((1.0 - epsilon * epsilon).max(0.0).sqrt(), 0.0);
    PureState::normalized(phi2.amplitudes * c2 + phi3.amplitudes * c3)
}

/// The single Lindblad operator of the Markovian equation,
/// L = √(N+1) S₋ − √N e^{iθ} S₊.
pub fn lindblad_operator(n: f64, theta: f64) -> Mat4 {
    let s_minus = collective_lowering();
    let s_plus = collective_raising();
    s_minus * Complex64::new((n + 1.0).sqrt(), 0.0)
        - s_plus * (Complex64::from_polar(n.sqrt(), theta))
}

/// A validated 4×4 two-qubit density matrix.
///
/// Hermitian within 10⁻¹⁰, unit trace within 10⁻¹⁰, eigenvalues ≥ −10⁻⁸
/// (small transient negativity is tolerated mid-integration).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: Mat4,
}

impl DensityMatrix {
    pub fn new(entries: Mat4) -> Result<Self> {
        let herm_dev = linalg::hermiticity_deviation(&entries);
        if herm_dev > 1e-10 {
            return Err(SimError::InvalidState(format!(
                "density matrix Hermiticity deviation {herm_dev:.3e} exceeds 1e-10"
            )));
        }
        let trace_dev = (linalg::trace_re(&entries) - 1.0).abs();
        if trace_dev > 1e-10 {
            return Err(SimError::InvalidState(format!(
                "density matrix trace deviation {trace_dev:.3e} exceeds 1e-10"
            )));
        }
        let min_eig = linalg::min_eigenvalue(&linalg::hermitize(&entries))?;
        if min_eig < -1e-8 {
            return Err(SimError::InvalidState(format!(
                "density matrix eigenvalue {min_eig:.3e} below -1e-8"
            )));
        }
        Ok(Self { entries })
    }

    /// Wrap without validation. For integrator-produced states whose
    /// deviations are tracked separately as diagnostics (time-local
    /// non-Markovian evolution may transiently violate positivity).
    pub fn from_matrix_unchecked(entries: Mat4) -> Self {
        Self { entries }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.entries
    }

    /// ρ = |ψ⟩⟨ψ| for a unit-norm pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            entries: psi.projector(),
        }
    }
}

/// ρ = |ψ⟩⟨ψ|.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(psi)
}
