//! Mode structure of a one-dimensional cavity with Dirichlet walls and the
//! windowed time-overlap integrals between the qubit phase and a mode phase.
//!
//! Conventions (natural units, massless field):
//!   frequency      ω_j = jπ/L
//!   mode function  u_j(x) = sin(jπx/L) / sqrt(jπ)
//!
//! The 1/sqrt(jπ) amplitude is the usual 1/sqrt(ω_j L) box normalization
//! with ω_j L = jπ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary condition of the cavity walls. Only Dirichlet (field vanishes at
/// both walls) is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Dirichlet,
}

/// Sign of the qubit phase in an overlap integral: `e^{i(±Ω + ω_j)τ}`.
///
/// `Minus` is the co-rotating combination that resonates at Ω = ω_j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapSign {
    Plus,
    Minus,
}

impl OverlapSign {
    fn apply(self, omega_qubit: f64) -> f64 {
        match self {
            OverlapSign::Plus => omega_qubit,
            OverlapSign::Minus => -omega_qubit,
        }
    }
}

/// Geometry of the cavity and the (static) qubit inside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    /// Cavity length L > 0.
    pub length: f64,
    /// Qubit position x, strictly inside (0, L).
    pub qubit_position: f64,
    /// Number of modes kept in mode sums, J >= 1.
    pub mode_count: u32,
    #[serde(default)]
    pub boundary: Boundary,
}

impl CavitySpec {
    pub fn new(length: f64, qubit_position: f64, mode_count: u32) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::domain("length", length, "must be > 0"));
        }
        if !(qubit_position > 0.0 && qubit_position < length) {
            return Err(Error::domain(
                "qubit_position",
                qubit_position,
                "must lie strictly inside (0, L)",
            ));
        }
        if mode_count == 0 {
            return Err(Error::domain("mode_count", 0.0, "must be >= 1"));
        }
        Ok(CavitySpec {
            length,
            qubit_position,
            mode_count,
            boundary: Boundary::Dirichlet,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.length, self.qubit_position, self.mode_count).map(|_| ())
    }

    /// Angular frequency of mode `j`: ω_j = jπ/L. Strictly increasing in j.
    pub fn mode_frequency(&self, j: u32) -> Result<f64> {
        if j == 0 {
            return Err(Error::domain("mode index", 0.0, "modes are numbered from 1"));
        }
        Ok(j as f64 * std::f64::consts::PI / self.length)
    }

    /// Mode amplitude u_j(x) = sin(jπx/L)/sqrt(jπ) at position `x`.
    ///
    /// Vanishes at both walls; `x` must lie strictly inside the cavity.
    pub fn mode_function(&self, j: u32, x: f64) -> Result<f64> {
        if j == 0 {
            return Err(Error::domain("mode index", 0.0, "modes are numbered from 1"));
        }
        if !(x > 0.0 && x < self.length) {
            return Err(Error::domain("x", x, "must lie strictly inside (0, L)"));
        }
        let jf = j as f64;
        let phase = jf * std::f64::consts::PI * x / self.length;
        Ok(phase.sin() / (jf * std::f64::consts::PI).sqrt())
    }

    /// Mode amplitude at the qubit's position.
    pub fn mode_function_at_qubit(&self, j: u32) -> Result<f64> {
        self.mode_function(j, self.qubit_position)
    }

    /// Windowed overlap integral between the qubit phase and mode `j`:
    ///
    ///   I = ∫_0^T e^{i(±Ω + ω_j)τ} u_j(x) dτ
    ///
    /// for a qubit at rest, with a sharp window on [0, T]. Writing
    /// Δ = ±Ω + ω_j, the closed form is
    ///
    ///   I = u_j(x) · (2 sin(ΔT/2)/Δ) · e^{iΔT/2},
    ///
    /// which on resonance (|Δ| below `RESONANCE_EPS_REL`·max(Ω, ω_j))
    /// degenerates to the secular branch u_j(x)·(T + iΔT²/2).
    pub fn overlap_integral(
        &self,
        sign: OverlapSign,
        j: u32,
        omega_qubit: f64,
        duration: f64,
    ) -> Result<Complex64> {
        if !(duration >= 0.0) {
            return Err(Error::domain("duration", duration, "must be >= 0"));
        }
        if !(omega_qubit >= 0.0) {
            return Err(Error::domain("omega_qubit", omega_qubit, "must be >= 0"));
        }
        let omega_mode = self.mode_frequency(j)?;
        let amplitude = self.mode_function_at_qubit(j)?;
        let detuning = sign.apply(omega_qubit) + omega_mode;
        let eps = RESONANCE_EPS_REL * omega_qubit.max(omega_mode);
        if detuning.abs() < eps {
            // Secular branch with the first detuning correction, continuous
            // with the oscillatory branch to O(eps²·T³).
            let real = duration;
            let imag = 0.5 * detuning * duration * duration;
            return Ok(amplitude * Complex64::new(real, imag));
        }
        let half = 0.5 * detuning * duration;
        let magnitude = 2.0 * half.sin() / detuning;
        Ok(amplitude * magnitude * Complex64::new(half.cos(), half.sin()))
    }
}

/// Relative detuning below which the overlap integral switches to its
/// secular (resonant) branch; avoids cancellation in (e^{iΔT} - 1)/Δ.
pub const RESONANCE_EPS_REL: f64 = 1e-12;

/// Both overlap integrals of a single mode over a window of length
/// `duration`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOverlap {
    /// Mode index, from 1.
    pub mode: u32,
    /// Co-rotating integral I_{-,j} (resonant at Ω = ω_j).
    pub i_minus: Complex64,
    /// Counter-rotating integral I_{+,j}.
    pub i_plus: Complex64,
    /// Window length T.
    pub duration: f64,
}

impl ModeOverlap {
    pub fn compute(spec: &CavitySpec, j: u32, omega_qubit: f64, duration: f64) -> Result<Self> {
        Ok(ModeOverlap {
            mode: j,
            i_minus: spec.overlap_integral(OverlapSign::Minus, j, omega_qubit, duration)?,
            i_plus: spec.overlap_integral(OverlapSign::Plus, j, omega_qubit, duration)?,
            duration,
        })
    }

    /// Overlaps for every mode 1..=J of the spec.
    pub fn compute_all(spec: &CavitySpec, omega_qubit: f64, duration: f64) -> Result<Vec<Self>> {
        (1..=spec.mode_count)
            .map(|j| Self::compute(spec, j, omega_qubit, duration))
            .collect()
    }
}
