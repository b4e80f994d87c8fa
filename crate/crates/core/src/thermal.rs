//! Thermal (Gibbs) state of the cavity modes.
//!
//! Each mode is an independent geometric distribution over Fock occupations
//! with mean n̄ = 1/(e^{ω/T_E} - 1); weights Q(n) = n̄^n/(1+n̄)^{1+n}.

use serde::{Deserialize, Serialize};

use crate::cavity::CavitySpec;
use crate::error::{Error, Result};

/// Bose-Einstein mean occupation of a mode of frequency `omega` at
/// environment temperature `t_env`.
pub fn mean_occupation(omega: f64, t_env: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain("omega", omega, "must be > 0"));
    }
    if !(t_env > 0.0) {
        return Err(Error::domain("t_env", t_env, "must be > 0"));
    }
    // exp overflows to +inf for omega/t_env > ~709, giving exactly 0:
    // the frozen-mode limit.
    Ok(1.0 / ((omega / t_env).exp() - 1.0))
}

/// Probability of Fock occupation `n` under a geometric thermal law with
/// mean `nbar`: Q(n) = n̄^n / (1+n̄)^{1+n}.
pub fn thermal_weight(n: u32, nbar: f64) -> Result<f64> {
    if !(nbar >= 0.0) {
        return Err(Error::domain("nbar", nbar, "must be >= 0"));
    }
    if nbar == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let r = nbar / (1.0 + nbar);
    Ok(r.powi(n as i32) / (1.0 + nbar))
}

/// First and second moments of the geometric occupation law:
/// (⟨n⟩, ⟨n²⟩) = (n̄, 2n̄² + n̄).
pub fn occupation_moments(nbar: f64) -> (f64, f64) {
    (nbar, 2.0 * nbar * nbar + nbar)
}

/// Smallest cutoff `n_max` whose truncated tail probability
/// (n̄/(1+n̄))^{n_max+1} does not exceed `tail_tol`.
pub fn truncation_cutoff(nbar: f64, tail_tol: f64) -> Result<u32> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::domain("tail_tol", tail_tol, "must lie in (0, 1)"));
    }
    if !(nbar >= 0.0) {
        return Err(Error::domain("nbar", nbar, "must be >= 0"));
    }
    if nbar == 0.0 {
        return Ok(0);
    }
    let r = nbar / (1.0 + nbar);
    // (n_max + 1) ln r <= ln tol
    let n = (tail_tol.ln() / r.ln()).ceil() as i64 - 1;
    let mut n_max = n.max(0) as u32;
    // Guard the rounding of the log ratio.
    while r.powi(n_max as i32 + 1) > tail_tol {
        n_max += 1;
    }
    while n_max > 0 && r.powi(n_max as i32) <= tail_tol {
        n_max -= 1;
    }
    Ok(n_max)
}

/// Tail probability above a cutoff: Σ_{n > n_max} Q(n) = (n̄/(1+n̄))^{n_max+1}.
pub fn truncation_tail(nbar: f64, n_max: u32) -> f64 {
    if nbar == 0.0 {
        return 0.0;
    }
    (nbar / (1.0 + nbar)).powi(n_max as i32 + 1)
}

/// Gibbs state of the first J cavity modes at a fixed temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalEnvironment {
    /// Environment temperature T_E > 0.
    pub temperature: f64,
    /// Mean occupations n̄_j for modes j = 1..=J (index j-1).
    pub occupations: Vec<f64>,
    /// Cavity the occupations were computed for.
    pub spec: CavitySpec,
}

impl ThermalEnvironment {
    /// Thermal state over the spec's `mode_count` modes.
    pub fn new(spec: &CavitySpec, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::domain("temperature", temperature, "must be > 0"));
        }
        let occupations = (1..=spec.mode_count)
            .map(|j| mean_occupation(spec.mode_frequency(j)?, temperature))
            .collect::<Result<Vec<f64>>>()?;
        Ok(ThermalEnvironment {
            temperature,
            occupations,
            spec: spec.clone(),
        })
    }

    pub fn mode_count(&self) -> u32 {
        self.occupations.len() as u32
    }

    /// Mean occupation of mode `j` (1-based).
    pub fn occupation(&self, j: u32) -> Result<f64> {
        if j == 0 || j as usize > self.occupations.len() {
            return Err(Error::domain(
                "mode index",
                j as f64,
                "outside the environment's mode range",
            ));
        }
        Ok(self.occupations[j as usize - 1])
    }

    /// Thermal energy Σ_j ω_j n̄_j of the kept modes.
    pub fn energy(&self) -> f64 {
        let terms: Vec<f64> = self
            .occupations
            .iter()
            .enumerate()
            .map(|(i, nbar)| self.spec.mode_frequency(i as u32 + 1).unwrap() * nbar)
            .collect();
        crate::util::pairwise_sum(&terms)
    }
}
