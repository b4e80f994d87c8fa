//! Energy-exchanging (σx) coupling at second order in the coupling
//! constant.
//!
//! Keeping only the co-rotating |I_{-,j}|² contributions (the resonant
//! ones; everything else decays with detuning and is validated against the
//! Fock-space evolver instead), a pure superposition with excited
//! population p evolves to
//!
//!   populations  (p + δp, 1 - p - δp),
//!   coherence    sqrt(p(1-p)) - δd,
//!
//! with per-mode terms
//!
//!   δp_j = λ² [n̄_j(1-p) - (n̄_j+1)p] |I_{-,j}|²,
//!   δd_j = λ² sqrt(p(1-p)) (n̄_j + 1/2) |I_{-,j}|²,
//!   ΔQ_j = λ² ω_j [p(n̄_j+1) - (1-p)n̄_j] |I_{-,j}|²  =  -ω_j δp_j.
//!
//! The heat form follows from the environment's diagonal update and the
//! geometric moments ⟨n⟩ = n̄, ⟨n²⟩ = 2n̄² + n̄; the tests re-derive it
//! numerically from `environment_diagonal_update`.

use num_complex::Complex64;

use crate::cavity::ModeOverlap;
use crate::error::{Error, Result};
use crate::qubit::QubitDensityMatrix;
use crate::thermal::{thermal_weight, ThermalEnvironment};
use crate::util::pairwise_sum;

/// Coupling, environment and overlap window for one evaluation.
#[derive(Debug, Clone)]
pub struct DissipativeParams<'a> {
    pub env: &'a ThermalEnvironment,
    pub overlaps: &'a [ModeOverlap],
    /// Coupling constant λ.
    pub coupling: f64,
}

/// The second-order expansion stops being trustworthy past this scale of
/// λ²(n̄+1)|I_-|².
pub const VALIDITY_WARN_THRESHOLD: f64 = 0.1;

/// Evolved eigenvalues below this are treated as a breakdown, not noise.
pub const BREAKDOWN_EIGENVALUE: f64 = -1e-9;

/// One mode's contribution to the second-order shifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerm {
    pub mode: u32,
    pub delta_p: f64,
    pub delta_d: f64,
    pub heat: f64,
}

/// Bundle of second-order results for one (p, window) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbativeOutcome {
    pub delta_p: f64,
    pub delta_d: f64,
    pub heat: f64,
    pub coupling: f64,
    pub duration: f64,
    pub mode_terms: Vec<ModeTerm>,
    /// max over modes of λ²(n̄_j+1)|I_{-,j}|²; above
    /// `VALIDITY_WARN_THRESHOLD` the expansion is suspect.
    pub perturbation_scale: f64,
}

impl PerturbativeOutcome {
    pub fn validity_warning(&self) -> bool {
        self.perturbation_scale > VALIDITY_WARN_THRESHOLD
    }
}

fn check_population(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "must lie in [0, 1]"));
    }
    Ok(())
}

fn mode_terms(p: f64, params: &DissipativeParams) -> Result<Vec<ModeTerm>> {
    check_population(p)?;
    let lambda_sq = params.coupling * params.coupling;
    let c = (p * (1.0 - p)).sqrt();
    params
        .overlaps
        .iter()
        .map(|ov| {
            let nbar = params.env.occupation(ov.mode)?;
            let omega = params.env.spec.mode_frequency(ov.mode)?;
            let intensity = ov.i_minus.norm_sqr();
            let delta_p = lambda_sq * (nbar * (1.0 - p) - (nbar + 1.0) * p) * intensity;
            Ok(ModeTerm {
                mode: ov.mode,
                delta_p,
                delta_d: lambda_sq * c * (nbar + 0.5) * intensity,
                heat: -omega * delta_p,
            })
        })
        .collect()
}

/// Population shift δp = Σ_j λ²[n̄_j(1-p) - (n̄_j+1)p]|I_{-,j}|².
///
/// Positive exactly when p sits below the single-mode thermal fixed point
/// n̄/(2n̄+1).
pub fn population_shift(p: f64, params: &DissipativeParams) -> Result<f64> {
    let terms: Vec<f64> = mode_terms(p, params)?.iter().map(|t| t.delta_p).collect();
    Ok(pairwise_sum(&terms))
}

/// Coherence loss δd = Σ_j λ² sqrt(p(1-p)) (n̄_j + 1/2) |I_{-,j}|² >= 0.
pub fn coherence_loss(p: f64, params: &DissipativeParams) -> Result<f64> {
    let terms: Vec<f64> = mode_terms(p, params)?.iter().map(|t| t.delta_d).collect();
    Ok(pairwise_sum(&terms))
}

/// Heat gained by the environment, ΔQ = -Σ_j ω_j δp_j.
pub fn heat(p: f64, params: &DissipativeParams) -> Result<f64> {
    let terms: Vec<f64> = mode_terms(p, params)?.iter().map(|t| t.heat).collect();
    Ok(pairwise_sum(&terms))
}

/// All second-order outputs plus the per-mode breakdown.
pub fn outcome(p: f64, params: &DissipativeParams) -> Result<PerturbativeOutcome> {
    let terms = mode_terms(p, params)?;
    let lambda_sq = params.coupling * params.coupling;
    let scale = params
        .overlaps
        .iter()
        .map(|ov| {
            let nbar = params.env.occupation(ov.mode).unwrap_or(0.0);
            lambda_sq * (nbar + 1.0) * ov.i_minus.norm_sqr()
        })
        .fold(0.0f64, f64::max);
    Ok(PerturbativeOutcome {
        delta_p: pairwise_sum(&terms.iter().map(|t| t.delta_p).collect::<Vec<_>>()),
        delta_d: pairwise_sum(&terms.iter().map(|t| t.delta_d).collect::<Vec<_>>()),
        heat: pairwise_sum(&terms.iter().map(|t| t.heat).collect::<Vec<_>>()),
        coupling: params.coupling,
        duration: params.overlaps.first().map_or(0.0, |ov| ov.duration),
        mode_terms: terms,
        perturbation_scale: scale,
    })
}

/// Apply (δp, δd) to an initial state: populations move by ±δp, the
/// off-diagonals lose δd. The correction matrix is traceless, so the trace
/// is preserved exactly.
pub fn evolved_state(
    rho: &QubitDensityMatrix,
    delta_p: f64,
    delta_d: f64,
) -> Result<QubitDensityMatrix> {
    rho.validate()?;
    let evolved = QubitDensityMatrix::from_parts(
        rho.excited_population() + delta_p,
        rho.coherence() - Complex64::new(delta_d, 0.0),
    );
    let (_, lo) = evolved.eigenvalues();
    if lo < BREAKDOWN_EIGENVALUE {
        return Err(Error::PerturbationBreakdown(format!(
            "evolved eigenvalue {lo:.3e}; reduce the coupling or the window"
        )));
    }
    Ok(evolved)
}

/// Second-order change of one mode's diagonal occupation distribution.
///
/// `raised[n]` lands on |n+1⟩⟨n+1|, `lowered[n]` (n >= 1) on |n-1⟩⟨n-1|,
/// and `depleted[n]` (negative) on |n⟩⟨n|; n runs to the cutoff from
/// `truncation_cutoff`. The three series cancel in total probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDiagonalShift {
    pub mode: u32,
    pub raised: Vec<f64>,
    pub lowered: Vec<f64>,
    pub depleted: Vec<f64>,
}

impl ModeDiagonalShift {
    /// Net probability added across all levels; zero up to truncation.
    pub fn probability_balance(&self) -> f64 {
        pairwise_sum(&self.raised) + pairwise_sum(&self.lowered) + pairwise_sum(&self.depleted)
    }

    /// Energy change ω Σ_n n · δdiag(n) implied by the shift.
    pub fn energy_change(&self, omega: f64) -> f64 {
        let mut terms = Vec::with_capacity(3 * self.raised.len());
        for (n, w) in self.raised.iter().enumerate() {
            terms.push((n as f64 + 1.0) * w);
        }
        for (n, w) in self.lowered.iter().enumerate() {
            if n >= 1 {
                terms.push((n as f64 - 1.0) * w);
            }
        }
        for (n, w) in self.depleted.iter().enumerate() {
            terms.push(n as f64 * w);
        }
        omega * pairwise_sum(&terms)
    }
}

/// Diagonal update of the environment per mode:
/// raising weight λ²p|I_-|²Q(n)(1+n), lowering weight λ²(1-p)|I_-|²Q(n)n,
/// and depletion -λ²[n(1-p) + (n+1)p]|I_-|²Q(n).
pub fn environment_diagonal_update(
    p: f64,
    params: &DissipativeParams,
    cutoff: u32,
) -> Result<Vec<ModeDiagonalShift>> {
    check_population(p)?;
    let lambda_sq = params.coupling * params.coupling;
    params
        .overlaps
        .iter()
        .map(|ov| {
            let nbar = params.env.occupation(ov.mode)?;
            let intensity = ov.i_minus.norm_sqr();
            let len = cutoff as usize + 1;
            let mut raised = Vec::with_capacity(len);
            let mut lowered = Vec::with_capacity(len);
            let mut depleted = Vec::with_capacity(len);
            for n in 0..=cutoff {
                let q = thermal_weight(n, nbar)?;
                let nf = n as f64;
                raised.push(lambda_sq * p * intensity * q * (1.0 + nf));
                lowered.push(if n == 0 {
                    0.0
                } else {
                    lambda_sq * (1.0 - p) * intensity * q * nf
                });
                depleted.push(-lambda_sq * (nf * (1.0 - p) + (nf + 1.0) * p) * intensity * q);
            }
            Ok(ModeDiagonalShift {
                mode: ov.mode,
                raised,
                lowered,
                depleted,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::CavitySpec;
    use crate::thermal::truncation_cutoff;
    use approx::assert_relative_eq;

    fn fig1_spec() -> CavitySpec {
        CavitySpec::new(1.234, 0.52345, 20).unwrap()
    }

    /// Single resonant mode j with a synthetic temperature.
    fn single_mode_setup(t_env: f64, duration: f64) -> (ThermalEnvironment, Vec<ModeOverlap>) {
        let spec = fig1_spec();
        let omega = spec.mode_frequency(20).unwrap();
        let env = ThermalEnvironment::new(&spec, t_env).unwrap();
        let overlaps = vec![ModeOverlap::compute(&spec, 20, omega, duration).unwrap()];
        (env, overlaps)
    }

    #[test]
    fn ground_state_in_vacuum_is_inert() {
        // n̄(ω_20) at T_E = 1 is ~1e-22: effectively a vacuum.
        let (env, overlaps) = single_mode_setup(1.0, 3.0);
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        let dp = population_shift(0.0, &params).unwrap();
        assert!(dp.abs() < 1e-24);
        assert_eq!(coherence_loss(0.0, &params).unwrap(), 0.0);
    }

    #[test]
    fn excited_state_in_vacuum_decays() {
        let (env, overlaps) = single_mode_setup(1.0, 3.0);
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        let intensity = overlaps[0].i_minus.norm_sqr();
        let dp = population_shift(1.0, &params).unwrap();
        // Pure spontaneous emission: δp = -λ²|I_-|² (n̄ is negligible).
        assert_relative_eq!(dp, -1e-4 * intensity, max_relative = 1e-10);
        // One emitted quantum of energy ω.
        let omega = env.spec.mode_frequency(20).unwrap();
        assert_relative_eq!(
            heat(1.0, &params).unwrap(),
            1e-4 * omega * intensity,
            max_relative = 1e-10
        );
    }

    #[test]
    fn cold_environment_depopulates_fig1_state() {
        let (env, overlaps) = single_mode_setup(1.0, 5.0);
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        let dp = population_shift(0.2, &params).unwrap();
        assert!(dp < 0.0);
        // Heat flows into the cold environment.
        assert!(heat(0.2, &params).unwrap() > 0.0);
    }

    #[test]
    fn hot_environment_pumps_population() {
        // n̄(ω_20) at T_E = 100 is ~1.5 > p/(1-2p)-threshold for p = 0.2.
        let (env, overlaps) = single_mode_setup(100.0, 5.0);
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        assert!(population_shift(0.2, &params).unwrap() > 0.0);
        assert!(heat(0.2, &params).unwrap() < 0.0);
    }

    #[test]
    fn coherence_loss_nonnegative_and_grows_with_window() {
        let mut prev = 0.0;
        for &t in &[1.0, 2.0, 4.0, 8.0] {
            let (env, overlaps) = single_mode_setup(100.0, t);
            let params = DissipativeParams {
                env: &env,
                overlaps: &overlaps,
                coupling: 0.01,
            };
            let dd = coherence_loss(0.2, &params).unwrap();
            assert!(dd > prev);
            prev = dd;
        }
    }

    #[test]
    fn balanced_state_half_mode_value() {
        let (env, overlaps) = single_mode_setup(1.0, 2.0);
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        let dd = coherence_loss(0.5, &params).unwrap();
        // sqrt(1/4)·(n̄+1/2) -> λ²|I|²/4 in the vacuum limit.
        assert_relative_eq!(
            dd,
            1e-4 * overlaps[0].i_minus.norm_sqr() / 4.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn population_shift_sign_threshold() {
        // Single mode: δp > 0 iff p < n̄/(2n̄+1).
        let spec = CavitySpec::new(2.0, 0.71, 3).unwrap();
        let env = ThermalEnvironment::new(&spec, 5.0).unwrap();
        let omega = spec.mode_frequency(1).unwrap();
        let overlaps = vec![ModeOverlap::compute(&spec, 1, omega, 1.5).unwrap()];
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.02,
        };
        let nbar = env.occupation(1).unwrap();
        let fixed_point = nbar / (2.0 * nbar + 1.0);
        assert!(population_shift(fixed_point - 0.01, &params).unwrap() > 0.0);
        assert!(population_shift(fixed_point + 0.01, &params).unwrap() < 0.0);
        assert!(population_shift(fixed_point, &params).unwrap().abs() < 1e-12);
    }

    #[test]
    fn heat_is_minus_frequency_weighted_population_flow() {
        let spec = CavitySpec::new(1.234, 0.52345, 12).unwrap();
        let env = ThermalEnvironment::new(&spec, 30.0).unwrap();
        let omega = spec.mode_frequency(5).unwrap();
        let overlaps = ModeOverlap::compute_all(&spec, omega, 2.5).unwrap();
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        let terms = outcome(0.3, &params).unwrap();
        for t in &terms.mode_terms {
            let w = spec.mode_frequency(t.mode).unwrap();
            assert_relative_eq!(t.heat, -w * t.delta_p, max_relative = 1e-14);
        }
    }

    #[test]
    fn evolved_state_shape() {
        let rho = QubitDensityMatrix::pure_superposition(0.2).unwrap();
        let out = evolved_state(&rho, -1e-3, 2e-3).unwrap();
        assert_relative_eq!(out.excited_population(), 0.2 - 1e-3, epsilon = 1e-15);
        assert_relative_eq!(out.coherence().re, 0.4 - 2e-3, epsilon = 1e-15);
        assert_eq!(out.trace().re, 1.0); // exact
        // Identity evolution.
        let same = evolved_state(&rho, 0.0, 0.0).unwrap();
        assert_eq!(same, rho);
    }

    #[test]
    fn evolved_state_breakdown_detected() {
        let rho = QubitDensityMatrix::pure_superposition(0.2).unwrap();
        // A coherence gain this size drives an eigenvalue clearly negative.
        assert!(matches!(
            evolved_state(&rho, 0.0, -0.5),
            Err(Error::PerturbationBreakdown(_))
        ));
    }

    #[test]
    fn environment_update_balances_and_reproduces_heat() {
        let spec = CavitySpec::new(1.234, 0.52345, 4).unwrap();
        let env = ThermalEnvironment::new(&spec, 40.0).unwrap();
        let omega = spec.mode_frequency(2).unwrap();
        let overlaps = ModeOverlap::compute_all(&spec, omega, 3.0).unwrap();
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.015,
        };
        let p = 0.35;
        let nbar_max = env.occupations[0];
        let cutoff = truncation_cutoff(nbar_max, 1e-16).unwrap() + 8;
        let shifts = environment_diagonal_update(p, &params, cutoff).unwrap();
        let terms = outcome(p, &params).unwrap();
        let mut total_energy = 0.0;
        for (shift, term) in shifts.iter().zip(&terms.mode_terms) {
            assert!(shift.probability_balance().abs() < 1e-12);
            let w = spec.mode_frequency(shift.mode).unwrap();
            let de = shift.energy_change(w);
            // The closed-form per-mode heat equals the series sum.
            assert_relative_eq!(de, term.heat, max_relative = 1e-9, epsilon = 1e-18);
            total_energy += de;
        }
        assert_relative_eq!(total_energy, terms.heat, max_relative = 1e-9);
    }

    #[test]
    fn vacuum_single_photon_emission_channels() {
        // p = 1, n̄ = 0: only |1⟩⟨1| gains weight λ²|I|², |0⟩⟨0| loses it.
        let (env, overlaps) = single_mode_setup(1.0, 2.0);
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        let shifts = environment_diagonal_update(1.0, &params, 6).unwrap();
        let s = &shifts[0];
        let expect = 1e-4 * overlaps[0].i_minus.norm_sqr();
        assert_relative_eq!(s.raised[0], expect, max_relative = 1e-9);
        assert_relative_eq!(s.depleted[0], -expect, max_relative = 1e-9);
        for n in 1..s.raised.len() {
            assert!(s.raised[n].abs() < 1e-24);
            assert!(s.lowered[n].abs() < 1e-24);
            assert!(s.depleted[n].abs() < 1e-24);
        }
    }

    #[test]
    fn validity_warning_thresholds() {
        let (env, overlaps) = single_mode_setup(1.0, 100.0);
        let strong = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.5,
        };
        assert!(outcome(0.2, &strong).unwrap().validity_warning());
        let weak = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 1e-3,
        };
        assert!(!outcome(0.2, &weak).unwrap().validity_warning());
    }

    #[test]
    fn coherence_loss_nonnegative_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let spec = CavitySpec::new(1.234, 0.52345, 30).unwrap();
        for _ in 0..1000 {
            let t_env = 10f64.powf(rng.random::<f64>() * 3.0 - 1.0);
            let env = ThermalEnvironment::new(&spec, t_env).unwrap();
            let j = rng.random_range(1..=30);
            let omega = spec.mode_frequency(j).unwrap();
            let t = rng.random::<f64>() * 10.0;
            let overlaps = vec![ModeOverlap::compute(&spec, j, omega, t).unwrap()];
            let params = DissipativeParams {
                env: &env,
                overlaps: &overlaps,
                coupling: 0.01,
            };
            let p = rng.random::<f64>();
            assert!(coherence_loss(p, &params).unwrap() >= 0.0);
        }
    }
}
