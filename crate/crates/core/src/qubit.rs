//! Two-level density matrices.
//!
//! Basis ordering is (excited, ground): the top-left entry is the excited
//! population p. All the 2x2 states handled here are Hermitian, unit-trace
//! and positive semidefinite within small tolerances.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the unit-trace and Hermiticity checks.
pub const STATE_TOL: f64 = 1e-12;

/// Tolerance on eigenvalue positivity. Looser than `STATE_TOL`: states
/// coming out of the second-order expansion are positive only up to the
/// truncation order, and this matches the breakdown threshold there.
pub const EIGENVALUE_TOL: f64 = 1e-9;

/// Density matrix of the qubit in the (excited, ground) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix {
    elements: [[Complex64; 2]; 2],
}

impl QubitDensityMatrix {
    /// Pure superposition sqrt(p)|e⟩ + sqrt(1-p)|g⟩ with real amplitudes.
    pub fn pure_superposition(excited_population: f64) -> Result<Self> {
        let p = excited_population;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("excited_population", p, "must lie in [0, 1]"));
        }
        let c = (p * (1.0 - p)).sqrt();
        Ok(Self::from_parts(p, Complex64::new(c, 0.0)))
    }

    /// Classical mixture diag(p, 1-p) with no coherence.
    pub fn mixed(excited_population: f64) -> Result<Self> {
        let p = excited_population;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("excited_population", p, "must lie in [0, 1]"));
        }
        Ok(Self::from_parts(p, Complex64::new(0.0, 0.0)))
    }

    /// Build from the excited population and the ⟨e|ρ|g⟩ coherence; the
    /// ground population is 1 - p exactly and ⟨g|ρ|e⟩ is the conjugate.
    pub fn from_parts(excited_population: f64, coherence: Complex64) -> Self {
        let p = excited_population;
        QubitDensityMatrix {
            elements: [
                [Complex64::new(p, 0.0), coherence],
                [coherence.conj(), Complex64::new(1.0 - p, 0.0)],
            ],
        }
    }

    /// Build from explicit entries, validating the density-matrix contract.
    pub fn from_elements(elements: [[Complex64; 2]; 2]) -> Result<Self> {
        let rho = QubitDensityMatrix { elements };
        rho.validate()?;
        Ok(rho)
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.elements[row][col]
    }

    /// Excited population (top-left entry).
    pub fn excited_population(&self) -> f64 {
        self.elements[0][0].re
    }

    pub fn ground_population(&self) -> f64 {
        self.elements[1][1].re
    }

    /// Upper off-diagonal ⟨e|ρ|g⟩.
    pub fn coherence(&self) -> Complex64 {
        self.elements[0][1]
    }

    pub fn trace(&self) -> Complex64 {
        self.elements[0][0] + self.elements[1][1]
    }

    /// Eigenvalues in descending order, from the closed form for a
    /// unit-trace Hermitian 2x2 matrix.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let diff = self.elements[0][0].re - self.elements[1][1].re;
        let disc = (diff * diff + 4.0 * self.elements[0][1].norm_sqr()).sqrt();
        let tr = self.trace().re;
        (0.5 * (tr + disc), 0.5 * (tr - disc))
    }

    pub fn purity(&self) -> f64 {
        let (a, b) = self.eigenvalues();
        a * a + b * b
    }

    /// Hermiticity, unit trace and positivity within `STATE_TOL`.
    pub fn validate(&self) -> Result<()> {
        let herm = (self.elements[0][1] - self.elements[1][0].conj()).norm();
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "off-diagonals are not conjugate (|mismatch| = {herm:.3e})"
            )));
        }
        if self.elements[0][0].im.abs() > STATE_TOL || self.elements[1][1].im.abs() > STATE_TOL {
            return Err(Error::InvalidState(
                "diagonal entries must be real".to_string(),
            ));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace = {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let (_, lo) = self.eigenvalues();
        if lo < -EIGENVALUE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lo:.3e}"
            )));
        }
        Ok(())
    }

    /// Multiply the off-diagonals by `e^{i phase}`; populations untouched.
    /// Used to move between the interaction and Schrödinger pictures.
    pub fn with_coherence_phase(&self, phase: f64) -> Self {
        let rot = Complex64::new(phase.cos(), phase.sin());
        Self::from_parts(self.excited_population(), self.coherence() * rot)
    }
}
