//! Shared fixtures for the benchmark targets.

use qubit_cavity::cavity::CavitySpec;
use qubit_cavity::thermal::ThermalEnvironment;

/// The demo cavity used across benchmarks.
pub fn demo_environment(mode_count: u32, temperature: f64) -> ThermalEnvironment {
    let spec = CavitySpec::new(1.234, 0.52345, mode_count).expect("demo geometry");
    ThermalEnvironment::new(&spec, temperature).expect("demo environment")
}
