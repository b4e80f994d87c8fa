//! Integration-level consistency checks between the closed-form models
//! and the joint evolver that do not fit a single module.

use qubit_cavity::cavity::CavitySpec;
use qubit_cavity::dephasing::DephasingModel;
use qubit_cavity::oracle::{
    build_hamiltonian, build_joint_initial, Coupling, InitialQubit, OracleMode, Propagator,
};
use qubit_cavity::thermal::ThermalEnvironment;

/// With the interaction off, the qubit coherence just rotates at the free
/// frequency; stripping e^{-iΩT} recovers the initial value exactly.
#[test]
fn free_phase_stripping_recovers_initial_coherence() {
    let spec = CavitySpec::new(1.234, 0.52345, 20).unwrap();
    let env = ThermalEnvironment::new(&spec, 40.0).unwrap();
    let modes = [OracleMode {
        index: 20,
        cutoff: 8,
    }];
    let omega_qubit = spec.mode_frequency(20).unwrap();
    let p = 0.3;
    let initial = build_joint_initial(p, InitialQubit::PureSuperposition, &env, &modes).unwrap();
    let h = build_hamiltonian(&spec, Coupling::SigmaX, 0.0, omega_qubit, &modes).unwrap();
    let prop = Propagator::new(&h).unwrap();
    for &t in &[0.7, 3.1, 12.0] {
        let qubit = prop.evolve(&initial, t).reduce_system().unwrap();
        // Schrödinger picture: ⟨e|ρ|g⟩ carries e^{-iΩT}.
        let stripped = qubit.with_coherence_phase(omega_qubit * t);
        let expect = (p * (1.0 - p)).sqrt();
        assert!(
            (stripped.coherence().re - expect).abs() < 1e-12,
            "t={t}: {:?}",
            stripped.coherence()
        );
        assert!(stripped.coherence().im.abs() < 1e-12);
    }
}

/// Population flow and environment heat cannot see the initial coherence
/// at any order for a diagonal (thermal) environment: the coherent and
/// mixed runs agree to machine precision even at strong coupling.
#[test]
fn coherent_and_mixed_initial_states_share_diagonal_flow() {
    let spec = CavitySpec::new(1.234, 0.52345, 20).unwrap();
    let env = ThermalEnvironment::new(&spec, 60.0).unwrap();
    let modes = [OracleMode {
        index: 20,
        cutoff: 18,
    }];
    let omega_qubit = spec.mode_frequency(20).unwrap();
    let p = 0.35;
    let lambda = 0.2; // far beyond the perturbative regime
    let h = build_hamiltonian(&spec, Coupling::SigmaX, lambda, omega_qubit, &modes).unwrap();
    let prop = Propagator::new(&h).unwrap();

    let coherent =
        build_joint_initial(p, InitialQubit::PureSuperposition, &env, &modes).unwrap();
    let mixed = build_joint_initial(p, InitialQubit::Mixed, &env, &modes).unwrap();
    for &t in &[0.5, 2.0, 6.0] {
        let a = prop.evolve(&coherent, t);
        let b = prop.evolve(&mixed, t);
        let qa = a.reduce_system().unwrap();
        let qb = b.reduce_system().unwrap();
        assert!(
            (qa.excited_population() - qb.excited_population()).abs() < 1e-12,
            "t={t}"
        );
        let ea = a.environment_energy(&spec).unwrap();
        let eb = b.environment_energy(&spec).unwrap();
        assert!((ea - eb).abs() < 1e-12 * ea.abs().max(1.0), "t={t}");
    }
}

/// Dephasing against two jointly-evolved modes: the coherence suppression
/// factorizes into the per-mode product the closed form predicts.
#[test]
fn two_mode_dephasing_matches_product_form() {
    let spec = CavitySpec::new(2.0, 0.71, 2).unwrap();
    let env = ThermalEnvironment::new(&spec, 1.2).unwrap();
    let lambda = 0.6;
    let model = DephasingModel::new(env.clone(), lambda);
    let modes = [
        OracleMode {
            index: 1,
            cutoff: 16,
        },
        OracleMode {
            index: 2,
            cutoff: 12,
        },
    ];
    let p = 0.2;
    let initial = build_joint_initial(p, InitialQubit::PureSuperposition, &env, &modes).unwrap();
    let h = build_hamiltonian(&spec, Coupling::SigmaZ, lambda, 1.7, &modes).unwrap();
    let prop = Propagator::new(&h).unwrap();
    let coherence_initial = (p * (1.0 - p)).sqrt();

    for &t in &[0.4, 1.3, 2.6] {
        let evolved = prop.evolve(&initial, t);
        evolved.validate_truncation(1e-8).unwrap();
        let qubit = evolved.reduce_system().unwrap();
        let chi = model.suppression_factor(t).unwrap();
        assert!(
            (qubit.coherence().norm() - coherence_initial * chi).abs() < 1e-7,
            "t={t}: |coh| {} vs chi-product {}",
            qubit.coherence().norm(),
            coherence_initial * chi
        );
        // Per-mode displaced energies add up to the closed-form heat.
        let e0 = initial.environment_energy(&spec).unwrap();
        let gain = evolved.environment_energy(&spec).unwrap() - e0;
        assert!(
            (gain - model.heat(t).unwrap()).abs() < 1e-7,
            "t={t}: energy gain {gain}"
        );
        // And each branch energy matches the per-mode formula.
        for (k, mode) in modes.iter().enumerate() {
            let reduced = evolved.reduce_mode(k);
            let mean: f64 = (0..reduced.nrows())
                .map(|n| n as f64 * reduced[(n, n)].re)
                .sum();
            let formula = model.branch_energy(mode.index, t).unwrap();
            assert!(
                (mean - formula).abs() < 1e-6,
                "t={t} mode {}: {mean} vs {formula}",
                mode.index
            );
        }
    }
}
