//! Von Neumann entropy of two-level states, perturbed eigenvalues, and the
//! heat-entropy bound ΔQ >= T_E ΔS.
//!
//! Entropies are in nats. ΔS throughout is the entropy *decrease* of the
//! system, S(initial) - S(final).

use crate::error::{Error, Result};
use crate::qubit::QubitDensityMatrix;
use crate::util::{binary_entropy, x_ln_x};

/// Outcome of a bound check for one process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauerReport {
    /// Heat gained by the environment.
    pub heat: f64,
    /// Entropy decrease of the system, S(initial) - S(final).
    pub entropy_change: f64,
    /// Environment temperature.
    pub env_temperature: f64,
    /// heat - T_E * entropy_change.
    pub gap: f64,
    /// Whether the gap clears `-bound_tolerance(heat)`.
    pub holds: bool,
}

/// Floating-point allowance on the bound: 1e-10 scaled by max(1, |ΔQ|).
pub fn bound_tolerance(heat: f64) -> f64 {
    1e-10 * heat.abs().max(1.0)
}

/// Check ΔQ >= T_E ΔS. Reports the raw gap; never clamps.
pub fn landauer_check(heat: f64, entropy_change: f64, env_temperature: f64) -> Result<LandauerReport> {
    if !(env_temperature > 0.0) {
        return Err(Error::domain(
            "env_temperature",
            env_temperature,
            "must be > 0",
        ));
    }
    let gap = heat - env_temperature * entropy_change;
    Ok(LandauerReport {
        heat,
        entropy_change,
        env_temperature,
        gap,
        holds: gap >= -bound_tolerance(heat),
    })
}

/// Von Neumann entropy S(ρ) = -Tr ρ ln ρ of a validated 2x2 state, in nats.
pub fn von_neumann_entropy(rho: &QubitDensityMatrix) -> Result<f64> {
    rho.validate()?;
    let (hi, lo) = rho.eigenvalues();
    // Eigenvalues may protrude from [0, 1] by roundoff only (validate()
    // bounds the protrusion); clamp before taking logs.
    let hi = hi.clamp(0.0, 1.0);
    let lo = lo.clamp(0.0, 1.0);
    Ok((-x_ln_x(hi) - x_ln_x(lo)).max(0.0))
}

/// Eigenvalues (p₊, p₋) of the second-order evolved state
/// [[p+δp, c-δd], [c-δd, 1-p-δp]] with c = sqrt(p(1-p)), from the exact
/// closed form
///
///   p± = 1/2 ± 1/2 sqrt(1 + (8p-4)δp - 8c δd + 4δd² + 4δp²).
pub fn eigenvalues_exact(p: f64, delta_p: f64, delta_d: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "must lie in [0, 1]"));
    }
    let c = (p * (1.0 - p)).sqrt();
    let disc = 1.0 + (8.0 * p - 4.0) * delta_p - 8.0 * c * delta_d
        + 4.0 * delta_d * delta_d
        + 4.0 * delta_p * delta_p;
    if disc < 0.0 {
        return Err(Error::PerturbationBreakdown(format!(
            "eigenvalue discriminant {disc:.3e} < 0 at p={p}, dp={delta_p}, dd={delta_d}"
        )));
    }
    let root = disc.sqrt();
    Ok((0.5 * (1.0 + root), 0.5 * (1.0 - root)))
}

/// First-order eigenvalues: p₋ = (1-2p)δp + 2 sqrt(p(1-p)) δd, p₊ = 1 - p₋.
///
/// p₋ is non-negative whenever (δp, δd) come from the thermal second-order
/// expressions: substituting them gives per-mode coefficients
/// (2n̄+1)p² - 2n̄p + n̄, a quadratic in p with negative discriminant.
pub fn eigenvalues_first_order(p: f64, delta_p: f64, delta_d: f64) -> (f64, f64) {
    let minus = (1.0 - 2.0 * p) * delta_p + 2.0 * (p * (1.0 - p)).sqrt() * delta_d;
    (1.0 - minus, minus)
}

/// First-order entropy decrease of the *diagonal* (coherence-free) process
/// diag(p, 1-p) -> diag(p+δp, 1-p-δp):
///
///   ΔS = -ln((1-p)/p) · δp                       for 0 < p < 1,
///
/// with the degenerate endpoints routed to the exact binary-entropy
/// difference (the log slope diverges there).
pub fn mixed_process_entropy_change(p: f64, delta_p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "must lie in [0, 1]"));
    }
    let p_final = p + delta_p;
    if !(-1e-12..=1.0 + 1e-12).contains(&p_final) {
        return Err(Error::PerturbationBreakdown(format!(
            "population {p_final} outside [0, 1]"
        )));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(binary_entropy(p) - binary_entropy(p_final.clamp(0.0, 1.0)));
    }
    Ok(-((1.0 - p) / p).ln() * delta_p)
}

/// Exact entropy decrease of the diagonal process, for use where δp is not
/// small against p.
pub fn mixed_process_entropy_change_exact(p: f64, delta_p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "must lie in [0, 1]"));
    }
    let p_final = p + delta_p;
    if !(-1e-12..=1.0 + 1e-12).contains(&p_final) {
        return Err(Error::PerturbationBreakdown(format!(
            "population {p_final} outside [0, 1]"
        )));
    }
    Ok(binary_entropy(p) - binary_entropy(p_final.clamp(0.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Complex, Matrix2};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::LN_2;

    #[test]
    fn entropy_of_pure_states_is_zero() {
        for &p in &[0.0, 0.2, 0.5, 0.93, 1.0] {
            let rho = QubitDensityMatrix::pure_superposition(p).unwrap();
            assert!(von_neumann_entropy(&rho).unwrap() < 1e-14);
        }
    }

    #[test]
    fn entropy_of_maximally_mixed_is_ln2() {
        let rho = QubitDensityMatrix::mixed(0.5).unwrap();
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), LN_2, epsilon = 1e-14);
    }

    #[test]
    fn entropy_of_biased_mixture() {
        let rho = QubitDensityMatrix::mixed(0.2).unwrap();
        let expect = -0.2f64 * 0.2f64.ln() - 0.8 * 0.8f64.ln();
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), expect, epsilon = 1e-14);
        assert_relative_eq!(expect, 0.5004024235381879, epsilon = 1e-12);
    }

    #[test]
    fn unperturbed_eigenvalues_are_pure() {
        let (hi, lo) = eigenvalues_exact(0.37, 0.0, 0.0).unwrap();
        assert_relative_eq!(hi, 1.0, epsilon = 1e-15);
        assert!(lo.abs() < 1e-15);
    }

    #[test]
    fn balanced_state_perfect_square() {
        // p = 1/2, δp = 0: discriminant collapses to (1 - 2δd)².
        let dd = 0.01;
        let (hi, lo) = eigenvalues_exact(0.5, 0.0, dd).unwrap();
        assert_relative_eq!(hi, 1.0 - dd, epsilon = 1e-13);
        assert_relative_eq!(lo, dd, epsilon = 1e-13);
    }

    #[test]
    fn exact_eigenvalues_match_direct_solver() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..2000 {
            let p: f64 = rng.random();
            let dp = (rng.random::<f64>() - 0.5) * 0.02;
            let dd = rng.random::<f64>() * 0.01;
            let c = (p * (1.0 - p)).sqrt();
            let m = Matrix2::new(
                Complex::new(p + dp, 0.0),
                Complex::new(c - dd, 0.0),
                Complex::new(c - dd, 0.0),
                Complex::new(1.0 - p - dp, 0.0),
            );
            let mut eig = m.symmetric_eigenvalues();
            if eig[0] < eig[1] {
                eig.swap_rows(0, 1);
            }
            let (hi, lo) = eigenvalues_exact(p, dp, dd).unwrap();
            assert!((hi - eig[0]).abs() < 1e-12, "p={p} dp={dp} dd={dd}");
            assert!((lo - eig[1]).abs() < 1e-12, "p={p} dp={dp} dd={dd}");
        }
    }

    #[test]
    fn first_order_limits() {
        let (_, lo) = eigenvalues_first_order(0.0, 0.003, 0.5);
        assert_relative_eq!(lo, 0.003, epsilon = 1e-15); // reduces to δp
        let (_, lo) = eigenvalues_first_order(0.5, 0.003, 0.002);
        assert_relative_eq!(lo, 0.002, epsilon = 1e-15); // (1-2p) kills δp
    }

    #[test]
    fn first_order_error_is_second_order() {
        // Quartering the perturbation shrinks the exact/first-order gap
        // by at least 8x (it is O(δ²), so ~16x).
        let p = 0.3;
        let (mut dp, mut dd) = (0.02, 0.015);
        let mut prev_err = f64::INFINITY;
        for _ in 0..4 {
            let (_, exact_lo) = eigenvalues_exact(p, dp, dd).unwrap();
            let (_, approx_lo) = eigenvalues_first_order(p, dp, dd);
            let err = (exact_lo - approx_lo).abs();
            if prev_err.is_finite() {
                assert!(err * 8.0 <= prev_err, "err={err} prev={prev_err}");
            }
            prev_err = err;
            dp /= 4.0;
            dd /= 4.0;
        }
    }

    #[test]
    fn mixed_entropy_change_signs() {
        // ln((1-p)/p) > 0 at p = 0.2: ΔS has the opposite sign of δp.
        assert!(mixed_process_entropy_change(0.2, -1e-3).unwrap() > 0.0);
        assert!(mixed_process_entropy_change(0.2, 1e-3).unwrap() < 0.0);
        assert_relative_eq!(
            mixed_process_entropy_change(0.5, 1e-3).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn mixed_entropy_change_degenerate_branch() {
        // At p = 0 the log formula is invalid; the exact difference is used.
        let dp = 1e-4;
        let ds = mixed_process_entropy_change(0.0, dp).unwrap();
        let expect = -binary_entropy(dp);
        assert_relative_eq!(ds, expect, max_relative = 1e-12);
        assert!(ds < 0.0);
        let ds1 = mixed_process_entropy_change(1.0, -dp).unwrap();
        assert_relative_eq!(ds1, expect, max_relative = 1e-12);
    }

    #[test]
    fn mixed_entropy_first_order_matches_exact_for_small_shift() {
        let p = 0.27;
        let dp = 1e-7;
        let fo = mixed_process_entropy_change(p, dp).unwrap();
        let exact = mixed_process_entropy_change_exact(p, dp).unwrap();
        assert_relative_eq!(fo, exact, max_relative = 1e-5);
    }

    #[test]
    fn landauer_equality_case() {
        let report = landauer_check(0.0, 0.0, 1.0).unwrap();
        assert_eq!(report.gap, 0.0);
        assert!(report.holds);
    }

    #[test]
    fn landauer_violation_detected() {
        let report = landauer_check(-1.0, 1.0, 1.0).unwrap();
        assert!(!report.holds);
        assert_relative_eq!(report.gap, -2.0);
    }

    #[test]
    fn landauer_requires_positive_temperature() {
        assert!(landauer_check(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn coherent_entropy_change_below_mixed() {
        // With δd > 0 the final coherent state carries strictly more
        // entropy, so its ΔS is smaller.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let p: f64 = rng.random::<f64>() * 0.98 + 0.01;
            let dp = (rng.random::<f64>() - 0.5) * 0.01;
            let dd = rng.random::<f64>() * 0.005 + 1e-6;
            let (hi, lo) = eigenvalues_exact(p, dp, dd).unwrap();
            let ds_coherent = -(-x_ln_x(hi) - x_ln_x(lo.max(0.0)));
            let ds_mixed = mixed_process_entropy_change_exact(p, dp).unwrap();
            assert!(
                ds_coherent <= ds_mixed + 1e-14,
                "p={p} dp={dp} dd={dd}: {ds_coherent} vs {ds_mixed}"
            );
        }
    }
}
