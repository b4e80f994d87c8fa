//! Randomized property sweeps and joint-evolver comparison runs.
//!
//! Shared between the acceptance test suite and the CLI `verify` /
//! `oracle` subcommands so both exercise exactly the same code. Sampling
//! is seeded per index, so reports are reproducible and independent of
//! thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cavity::{CavitySpec, ModeOverlap};
use crate::dephasing::{dephased_state, DephasingModel};
use crate::dissipative::{
    coherence_loss, evolved_state, outcome, DissipativeParams, VALIDITY_WARN_THRESHOLD,
};
use crate::entropy::{
    bound_tolerance, eigenvalues_first_order, landauer_check,
    mixed_process_entropy_change_exact, von_neumann_entropy,
};
use crate::error::{Error, Result};
use crate::oracle::{
    build_hamiltonian, build_joint_initial, Coupling, InitialQubit, OracleMode, Propagator,
};
use crate::qubit::QubitDensityMatrix;
use crate::thermal::{mean_occupation, ThermalEnvironment};

/// Aggregate of one randomized bound sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSweepReport {
    pub samples: u32,
    /// Draws discarded by the perturbative validity guard (σx sweep only).
    pub rejected: u32,
    /// Smallest gap over both the coherent and the diagonal process.
    pub min_gap: f64,
    /// Rows where the gap undercuts its tolerance.
    pub violations: u32,
    /// Smallest first-order p₋ seen.
    pub min_p_minus: f64,
    /// Smallest coherence loss seen.
    pub min_delta_d: f64,
    /// Rows where ΔS_coherent exceeded ΔS_mixed beyond 1e-14.
    pub ordering_violations: u32,
}

impl BoundSweepReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
            && self.ordering_violations == 0
            && self.min_p_minus >= -1e-14
            && self.min_delta_d >= -1e-14
    }

    fn merge(self, other: Self) -> Self {
        BoundSweepReport {
            samples: self.samples + other.samples,
            rejected: self.rejected + other.rejected,
            min_gap: self.min_gap.min(other.min_gap),
            violations: self.violations + other.violations,
            min_p_minus: self.min_p_minus.min(other.min_p_minus),
            min_delta_d: self.min_delta_d.min(other.min_delta_d),
            ordering_violations: self.ordering_violations + other.ordering_violations,
        }
    }

    fn empty() -> Self {
        BoundSweepReport {
            samples: 0,
            rejected: 0,
            min_gap: f64::INFINITY,
            violations: 0,
            min_p_minus: f64::INFINITY,
            min_delta_d: f64::INFINITY,
            ordering_violations: 0,
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random::<f64>() * (hi.ln() - lo.ln()) + lo.ln()).exp()
}

/// Randomized σx configurations: p ∈ [0,1], T_E ∈ [0.1, 100], resonant
/// mode j ∈ [1, 40] of the demo cavity, λ²|I_-|² ∈ [0, 0.05].
///
/// Two kinds of draw fall outside the model's domain and are redrawn
/// (counted in `rejected`): those whose perturbative scale λ²(n̄+1)|I_-|²
/// exceeds the validity guard, and those where the second-order state
/// trips the breakdown threshold — at small p against a cold mode the
/// truncated (δp, δd) give the exact 2x2 root a negative eigenvalue of
/// order λ⁴ (determinant defect -s²p/4 at s = λ²|I_-|²), which the
/// module deliberately refuses to carry forward.
pub fn dissipative_bound_sweep(samples: u32, seed: u64) -> Result<BoundSweepReport> {
    let spec = CavitySpec::new(1.234, 0.52345, 40)?;
    let lambda = 0.01;

    (0..samples)
        .into_par_iter()
        .map(|i| -> Result<BoundSweepReport> {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ (0x9e3779b97f4a7c15u64.wrapping_mul(i as u64 + 1)),
            );
            let mut report = BoundSweepReport::empty();
            report.samples = 1;

            for _attempt in 0..10_000 {
                let j = rng.random_range(1..=40u32);
                let t_env = log_uniform(&mut rng, 0.1, 100.0);
                let p: f64 = rng.random();
                let intensity_scaled = rng.random::<f64>() * 0.05; // λ²|I_-|²
                let u = spec.mode_function_at_qubit(j)?.abs();
                if u < 1e-9 {
                    continue; // qubit sits on a node of this mode
                }
                let omega = spec.mode_frequency(j)?;
                let nbar = mean_occupation(omega, t_env)?;
                if intensity_scaled * (nbar + 1.0) > VALIDITY_WARN_THRESHOLD {
                    report.rejected += 1;
                    continue;
                }
                let duration = intensity_scaled.sqrt() / (lambda * u);
                let env = ThermalEnvironment::new(&spec, t_env)?;
                let overlaps = vec![ModeOverlap::compute(&spec, j, omega, duration)?];

                let params = DissipativeParams {
                    env: &env,
                    overlaps: &overlaps,
                    coupling: lambda,
                };
                let out = outcome(p, &params)?;
                let initial = QubitDensityMatrix::pure_superposition(p)?;
                let evolved = match evolved_state(&initial, out.delta_p, out.delta_d) {
                    Ok(state) => state,
                    Err(Error::PerturbationBreakdown(_)) => {
                        report.rejected += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };

                report.min_delta_d = out.delta_d;
                let (_, p_minus) = eigenvalues_first_order(p, out.delta_p, out.delta_d);
                report.min_p_minus = p_minus;

                let ds_coherent =
                    von_neumann_entropy(&initial)? - von_neumann_entropy(&evolved)?;
                let ds_mixed = mixed_process_entropy_change_exact(p, out.delta_p)?;
                if ds_coherent > ds_mixed + 1e-14 {
                    report.ordering_violations += 1;
                }
                for ds in [ds_coherent, ds_mixed] {
                    let check = landauer_check(out.heat, ds, env.temperature)?;
                    report.min_gap = report.min_gap.min(check.gap);
                    if !check.holds {
                        report.violations += 1;
                    }
                }
                return Ok(report);
            }
            Err(Error::Config(
                "bound sweep could not draw an in-domain sample".into(),
            ))
        })
        .try_reduce(BoundSweepReport::empty, |a, b| Ok(a.merge(b)))
}

/// Randomized dephasing configurations: geometry, mode count, coupling up
/// to 1.5, temperature and window all drawn broadly. The solution is
/// exact, so no draws are rejected.
pub fn dephasing_bound_sweep(samples: u32, seed: u64) -> Result<BoundSweepReport> {
    (0..samples)
        .into_par_iter()
        .map(|i| -> Result<BoundSweepReport> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xd1b54a32d192ed03u64.wrapping_mul(i as u64 + 1)));
            let mut report = BoundSweepReport::empty();
            report.samples = 1;

            let length = 0.6 + rng.random::<f64>() * 2.4;
            let frac = 0.05 + rng.random::<f64>() * 0.9;
            let mode_count = rng.random_range(1..=32u32);
            let spec = CavitySpec::new(length, frac * length, mode_count)?;
            let t_env = log_uniform(&mut rng, 0.1, 100.0);
            let env = ThermalEnvironment::new(&spec, t_env)?;
            let coupling = rng.random::<f64>() * 1.5;
            let model = DephasingModel::new(env, coupling);
            let p: f64 = rng.random();
            let t = rng.random::<f64>() * 3.0 * model.recurrence_period();

            let chi = model.suppression_factor(t)?;
            let heat = model.heat(t)?;
            if !(chi > 0.0 && chi <= 1.0) || heat < 0.0 {
                report.violations += 1;
            }
            let initial = QubitDensityMatrix::pure_superposition(p)?;
            let final_state = dephased_state(&initial, chi)?;
            let ds_coherent =
                von_neumann_entropy(&initial)? - von_neumann_entropy(&final_state)?;
            // The diagonal process is inert here.
            for ds in [ds_coherent, 0.0] {
                let check = landauer_check(heat, ds, model.env.temperature)?;
                report.min_gap = report.min_gap.min(check.gap);
                if !check.holds {
                    report.violations += 1;
                }
            }
            report.min_p_minus = 0.0;
            report.min_delta_d = 0.0;
            Ok(report)
        })
        .try_reduce(BoundSweepReport::empty, |a, b| Ok(a.merge(b)))
}

/// |ΔS_coherent - ΔS_mixed| for a fixed demo configuration at excited
/// population `p`; the two coincide as p -> 0.
pub fn coherent_mixed_entropy_gap(p: f64) -> Result<f64> {
    let spec = CavitySpec::new(1.234, 0.52345, 20)?;
    let env = ThermalEnvironment::new(&spec, 50.0)?;
    let omega = spec.mode_frequency(20)?;
    let overlaps = vec![ModeOverlap::compute(&spec, 20, omega, 20.0)?];
    let params = DissipativeParams {
        env: &env,
        overlaps: &overlaps,
        coupling: 0.01,
    };
    let out = outcome(p, &params)?;
    let initial = QubitDensityMatrix::pure_superposition(p)?;
    let evolved = evolved_state(&initial, out.delta_p, out.delta_d)?;
    let ds_coherent = von_neumann_entropy(&initial)? - von_neumann_entropy(&evolved)?;
    let ds_mixed = mixed_process_entropy_change_exact(p, out.delta_p)?;
    Ok((ds_coherent - ds_mixed).abs())
}

/// One rung of the coupling ladder comparing the second-order model
/// against the joint evolver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub lambda: f64,
    pub delta_p_model: f64,
    pub delta_p_oracle: f64,
    pub delta_d_model: f64,
    pub delta_d_oracle: f64,
    pub heat_model: f64,
    pub heat_oracle: f64,
    /// Largest |δp/ΔQ| drift between the coherent and the mixed-initial
    /// oracle runs; structurally zero for a thermal environment.
    pub mixed_initial_drift: f64,
}

impl ConvergencePoint {
    pub fn delta_p_err(&self) -> f64 {
        (self.delta_p_model - self.delta_p_oracle).abs()
    }
    pub fn delta_d_err(&self) -> f64 {
        (self.delta_d_model - self.delta_d_oracle).abs()
    }
    pub fn heat_err(&self) -> f64 {
        (self.heat_model - self.heat_oracle).abs()
    }
}

/// Fixed single-resonant-mode setup for the convergence ladder.
#[derive(Debug, Clone, Copy)]
pub struct LadderSetup {
    pub excited_population: f64,
    pub env_temperature: f64,
    pub mode: u32,
    pub cutoff: u32,
    /// λ²T²u² at the calibration coupling; fixes the window length.
    pub target_scale: f64,
    pub calibration_lambda: f64,
}

impl Default for LadderSetup {
    fn default() -> Self {
        LadderSetup {
            excited_population: 0.2,
            env_temperature: 50.0,
            mode: 20,
            cutoff: 15,
            target_scale: 0.01,
            calibration_lambda: 0.02,
        }
    }
}

/// Run the σx comparison at each coupling in `lambdas`, with the window
/// length frozen at the calibration coupling.
pub fn dissipative_oracle_ladder(
    lambdas: &[f64],
    setup: &LadderSetup,
) -> Result<Vec<ConvergencePoint>> {
    let spec = CavitySpec::new(1.234, 0.52345, setup.mode)?;
    let env = ThermalEnvironment::new(&spec, setup.env_temperature)?;
    let omega = spec.mode_frequency(setup.mode)?;
    let u = spec.mode_function_at_qubit(setup.mode)?.abs();
    let duration = setup.target_scale.sqrt() / (setup.calibration_lambda * u);
    let p = setup.excited_population;
    let modes = [OracleMode {
        index: setup.mode,
        cutoff: setup.cutoff,
    }];
    let coherence_initial = (p * (1.0 - p)).sqrt();

    lambdas
        .iter()
        .map(|&lambda| {
            let overlaps = vec![ModeOverlap::compute(&spec, setup.mode, omega, duration)?];
            let params = DissipativeParams {
                env: &env,
                overlaps: &overlaps,
                coupling: lambda,
            };
            let model = outcome(p, &params)?;

            let h = build_hamiltonian(&spec, Coupling::SigmaX, lambda, omega, &modes)?;
            let propagator = Propagator::new(&h)?;

            let run = |kind: InitialQubit| -> Result<(f64, f64, f64)> {
                let initial = build_joint_initial(p, kind, &env, &modes)?;
                let e0 = initial.environment_energy(&spec)?;
                let evolved = propagator.evolve(&initial, duration);
                evolved.validate_truncation(1e-6)?;
                let qubit = evolved.reduce_system()?;
                Ok((
                    qubit.excited_population() - p,
                    coherence_initial - qubit.coherence().norm(),
                    evolved.environment_energy(&spec)? - e0,
                ))
            };
            let (dp_coh, dd_coh, dq_coh) = run(InitialQubit::PureSuperposition)?;
            let (dp_mix, _, dq_mix) = run(InitialQubit::Mixed)?;
            Ok(ConvergencePoint {
                lambda,
                delta_p_model: model.delta_p,
                delta_p_oracle: dp_coh,
                delta_d_model: model.delta_d,
                delta_d_oracle: dd_coh,
                heat_model: model.heat,
                heat_oracle: dq_coh,
                mixed_initial_drift: (dp_coh - dp_mix).abs().max((dq_coh - dq_mix).abs()),
            })
        })
        .collect()
}

/// Worst-case deviations of the exact dephasing solution from the joint
/// evolver over a set of windows.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DephasingExactness {
    /// max |populations - (p, 1-p)|.
    pub population_err: f64,
    /// max | |coherence| - sqrt(p(1-p))·χ |.
    pub coherence_err: f64,
    /// max |environment energy gain - Σ|α|²ω/4|.
    pub heat_err: f64,
    /// Worst top-Fock-level population seen.
    pub truncation_leak: f64,
}

/// Single-mode strong-coupling comparison: unit cavity mode (L = π,
/// qubit at the antinode), temperature pinned so n̄ = 1.
pub fn dephasing_oracle_check(
    p: f64,
    lambda: f64,
    cutoff: u32,
    windows: &[f64],
) -> Result<DephasingExactness> {
    let spec = CavitySpec::new(std::f64::consts::PI, std::f64::consts::FRAC_PI_2, 1)?;
    let omega = spec.mode_frequency(1)?; // = 1
    let t_env = omega / std::f64::consts::LN_2; // n̄ = 1
    let env = ThermalEnvironment::new(&spec, t_env)?;
    let nbar = env.occupation(1)?;
    if (nbar - 1.0).abs() > 1e-12 {
        return Err(Error::Config(format!("expected unit occupation, got {nbar}")));
    }
    let model = DephasingModel::new(env.clone(), lambda);

    let modes = [OracleMode { index: 1, cutoff }];
    let omega_qubit = 3.0; // irrelevant to dephasing observables
    let initial = build_joint_initial(p, InitialQubit::PureSuperposition, &env, &modes)?;
    let e0 = initial.environment_energy(&spec)?;
    let h = build_hamiltonian(&spec, Coupling::SigmaZ, lambda, omega_qubit, &modes)?;
    let propagator = Propagator::new(&h)?;
    let coherence_initial = (p * (1.0 - p)).sqrt();

    let mut worst = DephasingExactness::default();
    for &t in windows {
        let evolved = propagator.evolve(&initial, t);
        worst.truncation_leak = worst.truncation_leak.max(evolved.top_level_population(0));
        let qubit = evolved.reduce_system()?;
        worst.population_err = worst
            .population_err
            .max((qubit.excited_population() - p).abs())
            .max((qubit.ground_population() - (1.0 - p)).abs());
        let chi = model.suppression_factor(t)?;
        worst.coherence_err = worst
            .coherence_err
            .max((qubit.coherence().norm() - coherence_initial * chi).abs());
        let heat_model = model.heat(t)?;
        let heat_oracle = evolved.environment_energy(&spec)? - e0;
        worst.heat_err = worst.heat_err.max((heat_oracle - heat_model).abs());
    }
    Ok(worst)
}

/// Recurrence diagnostics at the bundled dephasing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceReport {
    pub chi_at_period: f64,
    pub heat_at_period: f64,
    pub heat_max: f64,
    /// max_T |χ(T + 2L) - χ(T)| over the probe grid.
    pub periodicity_defect: f64,
}

/// Probe χ and ΔQ at the demo dephasing parameters (J = 200) around one
/// full recurrence.
pub fn dephasing_recurrence_check(grid_points: u32) -> Result<RecurrenceReport> {
    let spec = CavitySpec::new(1.234, 0.52345, 200)?;
    let env = ThermalEnvironment::new(&spec, 1.0)?;
    let model = DephasingModel::new(env, 0.01);
    let period = model.recurrence_period();

    let mut heat_max = 0.0f64;
    let mut defect = 0.0f64;
    for i in 0..grid_points {
        let t = (i as f64 + 0.5) / grid_points as f64 * period;
        heat_max = heat_max.max(model.heat(t)?);
        let a = model.suppression_factor(t)?;
        let b = model.suppression_factor(t + period)?;
        defect = defect.max((a - b).abs());
    }
    Ok(RecurrenceReport {
        chi_at_period: model.suppression_factor(period)?,
        heat_at_period: model.heat(period)?,
        heat_max,
        periodicity_defect: defect,
    })
}

/// Tolerance a sweep's minimum gap must clear, given the largest |ΔQ|
/// involved; thin wrapper kept so callers need not import entropy.
pub fn sweep_gap_tolerance(heat_scale: f64) -> f64 {
    bound_tolerance(heat_scale)
}

/// Randomized p₋/δd non-negativity probe over raw model inputs (no state
/// construction); used by `verify`.
pub fn nonnegativity_probe(samples: u32, seed: u64) -> Result<(f64, f64)> {
    let spec = CavitySpec::new(1.234, 0.52345, 40)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_p_minus = f64::INFINITY;
    let mut min_delta_d = f64::INFINITY;
    for _ in 0..samples {
        let j = rng.random_range(1..=40u32);
        let t_env = log_uniform(&mut rng, 0.1, 100.0);
        let p: f64 = rng.random();
        let duration = rng.random::<f64>() * 10.0;
        let omega = spec.mode_frequency(j)?;
        let env = ThermalEnvironment::new(&spec, t_env)?;
        let overlaps = vec![ModeOverlap::compute(&spec, j, omega, duration)?];
        let params = DissipativeParams {
            env: &env,
            overlaps: &overlaps,
            coupling: 0.01,
        };
        let out = outcome(p, &params)?;
        let dd = coherence_loss(p, &params)?;
        let (_, p_minus) = eigenvalues_first_order(p, out.delta_p, out.delta_d);
        min_p_minus = min_p_minus.min(p_minus);
        min_delta_d = min_delta_d.min(dd);
    }
    Ok((min_p_minus, min_delta_d))
}
