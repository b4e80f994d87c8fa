//! Configuration-driven sweeps over the interaction window, with
//! deterministic CSV/manifest/summary emission.
//!
//! A scenario fixes the cavity, the qubit, the environment temperature and
//! the coupling, then tabulates every quantity of interest over a time
//! grid. Each row carries the entropy change of both the coherent process
//! (pure superposition initial state) and the diagonal one (same
//! populations, no coherence), plus the binding heat-entropy gap across
//! the two; rows where the bound fails are flagged rather than clamped.
//!
//! Emission is bit-reproducible: time points are computed in parallel but
//! assembled in grid order, per-mode reductions use a fixed pairwise tree,
//! and floats are printed with 17 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cavity::{CavitySpec, ModeOverlap};
use crate::dephasing::{dephased_state, DephasingModel};
use crate::dissipative::{evolved_state, outcome, DissipativeParams};
use crate::entropy::{
    bound_tolerance, landauer_check, mixed_process_entropy_change_exact, von_neumann_entropy,
};
use crate::error::{Error, Result};
use crate::oracle::{
    build_hamiltonian, build_joint_initial, Coupling, InitialQubit, OracleMode, Propagator,
};
use crate::qubit::QubitDensityMatrix;
use crate::thermal::{truncation_cutoff, ThermalEnvironment};

/// Which interaction model(s) a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioCase {
    Dissipative,
    Dephasing,
    Both,
}

/// Qubit gap selector: pin Ω to a cavity mode or give it explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QubitGap {
    ResonantMode { resonant_mode: u32 },
    Value { value: f64 },
}

/// Modes entering the dissipative sum: just the resonant one, or all of
/// 1..=mode_count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSelection {
    Resonant,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    /// Number of grid points (inclusive of both ends when >= 2).
    pub steps: u32,
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config("time grid bounds must be finite".into()));
        }
        if self.start < 0.0 {
            return Err(Error::Config("time grid must start at t >= 0".into()));
        }
        if self.steps >= 2 && self.stop <= self.start {
            return Err(Error::Config(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let h = (self.stop - self.start) / (n as f64 - 1.0);
                (0..n).map(|i| self.start + i as f64 * h).collect()
            }
        }
    }
}

/// Joint-evolver cross-checks attached to a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleOptions {
    pub enabled: bool,
    /// Highest Fock level kept per mode.
    pub cutoff: u32,
    /// Truncation-leakage tolerance on the top Fock level.
    pub leak_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            enabled: false,
            cutoff: 15,
            leak_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub case: ScenarioCase,
    pub length: f64,
    pub qubit_position: f64,
    pub excited_population: f64,
    pub env_temperature: f64,
    pub coupling: f64,
    pub qubit_gap: QubitGap,
    pub mode_selection: ModeSelection,
    pub mode_count: u32,
    pub time_grid: TimeGrid,
    #[serde(default)]
    pub oracle: OracleOptions,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

fn default_output_dir() -> String {
    "out".to_string()
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.time_grid.validate()?;
        if !(0.0..=1.0).contains(&self.excited_population) {
            return Err(Error::Config(format!(
                "excited_population {} outside [0, 1]",
                self.excited_population
            )));
        }
        if !(self.env_temperature > 0.0) {
            return Err(Error::Config("env_temperature must be > 0".into()));
        }
        if !(self.coupling >= 0.0) {
            return Err(Error::Config("coupling must be >= 0".into()));
        }
        if let QubitGap::ResonantMode { resonant_mode } = self.qubit_gap {
            if resonant_mode == 0 {
                return Err(Error::Config("resonant_mode must be >= 1".into()));
            }
        }
        if self.mode_selection == ModeSelection::Resonant
            && matches!(self.qubit_gap, QubitGap::Value { .. })
            && matches!(self.case, ScenarioCase::Dissipative | ScenarioCase::Both)
        {
            return Err(Error::Config(
                "resonant mode selection needs a mode-indexed qubit gap".into(),
            ));
        }
        // Building the spec revalidates the geometry.
        self.cavity_spec().map(|_| ())
    }

    /// Number of modes the environment must carry: the mode sum plus the
    /// resonant index when it points past it.
    fn env_mode_count(&self) -> u32 {
        match self.qubit_gap {
            QubitGap::ResonantMode { resonant_mode } => self.mode_count.max(resonant_mode),
            QubitGap::Value { .. } => self.mode_count,
        }
    }

    pub fn cavity_spec(&self) -> Result<CavitySpec> {
        CavitySpec::new(self.length, self.qubit_position, self.env_mode_count())
    }

    pub fn environment(&self) -> Result<ThermalEnvironment> {
        ThermalEnvironment::new(&self.cavity_spec()?, self.env_temperature)
    }

    pub fn qubit_gap_value(&self, spec: &CavitySpec) -> Result<f64> {
        match self.qubit_gap {
            QubitGap::ResonantMode { resonant_mode } => spec.mode_frequency(resonant_mode),
            QubitGap::Value { value } => {
                if !(value >= 0.0) {
                    return Err(Error::Config("qubit gap must be >= 0".into()));
                }
                Ok(value)
            }
        }
    }

    /// Mode indices entering the dissipative sum.
    pub fn dissipative_modes(&self) -> Vec<u32> {
        match (self.mode_selection, self.qubit_gap) {
            (ModeSelection::Resonant, QubitGap::ResonantMode { resonant_mode }) => {
                vec![resonant_mode]
            }
            _ => (1..=self.mode_count).collect(),
        }
    }
}

/// One tabulated time point of a dissipative run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativeRow {
    pub time: f64,
    pub delta_p: f64,
    pub delta_d: f64,
    pub heat: f64,
    pub heat_over_temp: f64,
    pub entropy_change_coherent: f64,
    pub entropy_change_mixed: f64,
    pub landauer_gap: f64,
    pub bound_holds: bool,
}

/// One tabulated time point of a dephasing run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingRow {
    pub time: f64,
    pub suppression_factor: f64,
    pub heat: f64,
    pub heat_over_temp: f64,
    pub entropy_change_coherent: f64,
    pub entropy_change_mixed: f64,
    pub landauer_gap: f64,
    pub bound_holds: bool,
}

/// Model-vs-evolver comparison at one time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub time: f64,
    pub delta_p_model: f64,
    pub delta_p_oracle: f64,
    pub delta_d_model: f64,
    pub delta_d_oracle: f64,
    pub heat_model: f64,
    pub heat_oracle: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ScenarioResult {
    pub dissipative: Option<Vec<DissipativeRow>>,
    pub dephasing: Option<Vec<DephasingRow>>,
    pub oracle: Option<Vec<OracleRow>>,
}

impl ScenarioResult {
    /// Smallest and largest heat-entropy gap across every emitted row.
    pub fn gap_range(&self) -> Option<(f64, f64)> {
        let gaps = self
            .dissipative
            .iter()
            .flatten()
            .map(|r| r.landauer_gap)
            .chain(self.dephasing.iter().flatten().map(|r| r.landauer_gap));
        let mut range: Option<(f64, f64)> = None;
        for g in gaps {
            range = Some(match range {
                None => (g, g),
                Some((lo, hi)) => (lo.min(g), hi.max(g)),
            });
        }
        range
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.dissipative
            .iter()
            .flatten()
            .all(|r| r.bound_holds)
            && self.dephasing.iter().flatten().all(|r| r.bound_holds)
    }
}

fn annotate_time(t: f64, err: Error) -> Error {
    match err {
        Error::PerturbationBreakdown(m) => {
            Error::PerturbationBreakdown(format!("t = {t}: {m}"))
        }
        Error::Truncation(m) => Error::Truncation(format!("t = {t}: {m}")),
        other => other,
    }
}

fn dissipative_row(
    t: f64,
    p: f64,
    env: &ThermalEnvironment,
    spec: &CavitySpec,
    modes: &[u32],
    omega_qubit: f64,
    coupling: f64,
) -> Result<DissipativeRow> {
    let overlaps = modes
        .iter()
        .map(|&j| ModeOverlap::compute(spec, j, omega_qubit, t))
        .collect::<Result<Vec<_>>>()?;
    let params = DissipativeParams {
        env,
        overlaps: &overlaps,
        coupling,
    };
    let out = outcome(p, &params)?;
    let initial = QubitDensityMatrix::pure_superposition(p)?;
    let evolved =
        evolved_state(&initial, out.delta_p, out.delta_d).map_err(|e| annotate_time(t, e))?;
    let s_initial = von_neumann_entropy(&initial)?;
    let s_final = von_neumann_entropy(&evolved)?;
    let ds_coherent = s_initial - s_final;
    let ds_mixed = mixed_process_entropy_change_exact(p, out.delta_p)
        .map_err(|e| annotate_time(t, e))?;
    let t_env = env.temperature;
    let coherent = landauer_check(out.heat, ds_coherent, t_env)?;
    let mixed = landauer_check(out.heat, ds_mixed, t_env)?;
    Ok(DissipativeRow {
        time: t,
        delta_p: out.delta_p,
        delta_d: out.delta_d,
        heat: out.heat,
        heat_over_temp: out.heat / t_env,
        entropy_change_coherent: ds_coherent,
        entropy_change_mixed: ds_mixed,
        landauer_gap: coherent.gap.min(mixed.gap),
        bound_holds: coherent.holds && mixed.holds,
    })
}

fn dephasing_row(t: f64, p: f64, model: &DephasingModel) -> Result<DephasingRow> {
    let chi = model.suppression_factor(t)?;
    let heat = model.heat(t)?;
    let initial = QubitDensityMatrix::pure_superposition(p)?;
    let final_state = dephased_state(&initial, chi).map_err(|e| annotate_time(t, e))?;
    let ds_coherent = von_neumann_entropy(&initial)? - von_neumann_entropy(&final_state)?;
    // The diagonal process is inert under a σz coupling.
    let ds_mixed = 0.0;
    let t_env = model.env.temperature;
    let coherent = landauer_check(heat, ds_coherent, t_env)?;
    let mixed = landauer_check(heat, ds_mixed, t_env)?;
    Ok(DephasingRow {
        time: t,
        suppression_factor: chi,
        heat,
        heat_over_temp: heat / t_env,
        entropy_change_coherent: ds_coherent,
        entropy_change_mixed: ds_mixed,
        landauer_gap: coherent.gap.min(mixed.gap),
        bound_holds: coherent.holds && mixed.holds,
    })
}

/// Joint-evolver comparison rows for a dissipative run; needs at most two
/// modes in the sum.
fn oracle_rows(
    times: &[f64],
    p: f64,
    env: &ThermalEnvironment,
    spec: &CavitySpec,
    modes: &[u32],
    omega_qubit: f64,
    coupling: f64,
    options: &OracleOptions,
) -> Result<Vec<OracleRow>> {
    if modes.len() > 2 {
        return Err(Error::Config(format!(
            "joint-evolver cross-checks support at most 2 modes, got {}",
            modes.len()
        )));
    }
    let oracle_modes: Vec<OracleMode> = modes
        .iter()
        .map(|&j| {
            let thermal_floor = truncation_cutoff(env.occupation(j)?, 1e-12)?;
            Ok(OracleMode {
                index: j,
                cutoff: options.cutoff.max(thermal_floor),
            })
        })
        .collect::<Result<_>>()?;
    let initial = build_joint_initial(p, InitialQubit::PureSuperposition, env, &oracle_modes)?;
    let h = build_hamiltonian(spec, Coupling::SigmaX, coupling, omega_qubit, &oracle_modes)?;
    let propagator = Propagator::new(&h)?;
    let energy_initial = initial.environment_energy(spec)?;
    let coherence_initial = (p * (1.0 - p)).sqrt();

    times
        .par_iter()
        .map(|&t| {
            let evolved = propagator.evolve(&initial, t);
            evolved
                .validate_truncation(options.leak_tol)
                .map_err(|e| annotate_time(t, e))?;
            let qubit = evolved.reduce_system()?;
            let overlaps = modes
                .iter()
                .map(|&j| ModeOverlap::compute(spec, j, omega_qubit, t))
                .collect::<Result<Vec<_>>>()?;
            let params = DissipativeParams {
                env,
                overlaps: &overlaps,
                coupling,
            };
            let out = outcome(p, &params)?;
            Ok(OracleRow {
                time: t,
                delta_p_model: out.delta_p,
                delta_p_oracle: qubit.excited_population() - p,
                delta_d_model: out.delta_d,
                delta_d_oracle: coherence_initial - qubit.coherence().norm(),
                heat_model: out.heat,
                heat_oracle: evolved.environment_energy(spec)? - energy_initial,
            })
        })
        .collect()
}

/// Tabulate a scenario over its time grid.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    config.validate()?;
    let spec = config.cavity_spec()?;
    let env = config.environment()?;
    let times = config.time_grid.points();
    let p = config.excited_population;

    let mut result = ScenarioResult::default();

    if matches!(config.case, ScenarioCase::Dissipative | ScenarioCase::Both) {
        let omega_qubit = config.qubit_gap_value(&spec)?;
        let modes = config.dissipative_modes();
        let rows: Result<Vec<DissipativeRow>> = times
            .par_iter()
            .map(|&t| {
                dissipative_row(t, p, &env, &spec, &modes, omega_qubit, config.coupling)
                    .map_err(|e| annotate_time(t, e))
            })
            .collect();
        result.dissipative = Some(rows?);
        if config.oracle.enabled {
            result.oracle = Some(oracle_rows(
                &times,
                p,
                &env,
                &spec,
                &modes,
                omega_qubit,
                config.coupling,
                &config.oracle,
            )?);
        }
    }

    if matches!(config.case, ScenarioCase::Dephasing | ScenarioCase::Both) {
        let model = DephasingModel::new(env.clone(), config.coupling);
        let rows: Result<Vec<DephasingRow>> = times
            .par_iter()
            .map(|&t| dephasing_row(t, p, &model).map_err(|e| annotate_time(t, e)))
            .collect();
        result.dephasing = Some(rows?);
    }

    Ok(result)
}

fn fmt_float(x: f64) -> String {
    // 17 significant digits round-trip any f64 exactly.
    format!("{x:.16e}")
}

fn dissipative_csv(rows: &[DissipativeRow]) -> String {
    let mut out = String::from(
        "time,delta_p,delta_d,heat,heat_over_temp,entropy_change_coherent,entropy_change_mixed,landauer_gap,bound_holds\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_float(r.time),
            fmt_float(r.delta_p),
            fmt_float(r.delta_d),
            fmt_float(r.heat),
            fmt_float(r.heat_over_temp),
            fmt_float(r.entropy_change_coherent),
            fmt_float(r.entropy_change_mixed),
            fmt_float(r.landauer_gap),
            r.bound_holds
        );
    }
    out
}

fn dephasing_csv(rows: &[DephasingRow]) -> String {
    let mut out = String::from(
        "time,suppression_factor,heat,heat_over_temp,entropy_change_coherent,entropy_change_mixed,landauer_gap,bound_holds\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_float(r.time),
            fmt_float(r.suppression_factor),
            fmt_float(r.heat),
            fmt_float(r.heat_over_temp),
            fmt_float(r.entropy_change_coherent),
            fmt_float(r.entropy_change_mixed),
            fmt_float(r.landauer_gap),
            r.bound_holds
        );
    }
    out
}

fn oracle_csv(rows: &[OracleRow]) -> String {
    let mut out = String::from(
        "time,delta_p_model,delta_p_oracle,delta_d_model,delta_d_oracle,heat_model,heat_oracle\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_float(r.time),
            fmt_float(r.delta_p_model),
            fmt_float(r.delta_p_oracle),
            fmt_float(r.delta_d_model),
            fmt_float(r.delta_d_oracle),
            fmt_float(r.heat_model),
            fmt_float(r.heat_oracle)
        );
    }
    out
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'static str,
    preset: Option<&'a str>,
    config: &'a ScenarioConfig,
}

fn summary_text(result: &ScenarioResult) -> String {
    let mut out = String::new();
    let count = |n: Option<usize>| n.map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(
        out,
        "rows: dissipative={} dephasing={}",
        count(result.dissipative.as_ref().map(Vec::len)),
        count(result.dephasing.as_ref().map(Vec::len)),
    );
    match result.gap_range() {
        Some((lo, hi)) => {
            let _ = writeln!(out, "landauer gap min: {}", fmt_float(lo));
            let _ = writeln!(out, "landauer gap max: {}", fmt_float(hi));
            let _ = writeln!(
                out,
                "bound holds on every row: {}",
                result.all_bounds_hold()
            );
        }
        None => {
            let _ = writeln!(out, "landauer gap: no rows");
        }
    }
    out
}

/// Write the data files, run manifest and summary under `out_dir`.
/// Reruns with an identical config produce identical bytes.
pub fn emit_outputs(
    result: &ScenarioResult,
    config: &ScenarioConfig,
    preset: Option<&str>,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let mut write = |name: &str, contents: String| -> Result<()> {
        let path = out_dir.join(name);
        std::fs::write(&path, contents)?;
        written.push(path);
        Ok(())
    };

    if let Some(rows) = &result.dissipative {
        write("dissipative.csv", dissipative_csv(rows))?;
    }
    if let Some(rows) = &result.dephasing {
        write("dephasing.csv", dephasing_csv(rows))?;
    }
    if let Some(rows) = &result.oracle {
        write("dissipative_oracle.csv", oracle_csv(rows))?;
    }
    let manifest = Manifest {
        version: crate::VERSION,
        preset,
        config,
    };
    let mut manifest_json = serde_json::to_string_pretty(&manifest)?;
    manifest_json.push('\n');
    write("manifest.json", manifest_json)?;
    write("summary.txt", summary_text(result))?;
    Ok(written)
}

/// Names of the bundled demo configurations.
pub const PRESET_NAMES: [&str; 4] = ["fig1-te1", "fig1-te100", "fig2", "fig3"];

/// A bundled demo configuration by name.
///
/// The `fig1-*` pair sweeps the energy-exchanging case on a single
/// resonant mode at a cold and a hot temperature; `fig2`/`fig3` sweep the
/// dephasing case over three and two recurrence periods respectively.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    let base = ScenarioConfig {
        case: ScenarioCase::Dissipative,
        length: 1.234,
        qubit_position: 0.52345,
        excited_population: 0.2,
        env_temperature: 1.0,
        coupling: 0.01,
        qubit_gap: QubitGap::ResonantMode { resonant_mode: 20 },
        mode_selection: ModeSelection::Resonant,
        mode_count: 20,
        time_grid: TimeGrid {
            start: 0.0,
            stop: 50.0,
            steps: 500,
        },
        oracle: OracleOptions::default(),
        output_dir: default_output_dir(),
    };
    let recurrence = 2.0 * base.length;
    match name {
        "fig1-te1" => Some(base),
        "fig1-te100" => Some(ScenarioConfig {
            env_temperature: 100.0,
            ..base
        }),
        "fig2" => Some(ScenarioConfig {
            case: ScenarioCase::Dephasing,
            mode_selection: ModeSelection::All,
            mode_count: 200,
            time_grid: TimeGrid {
                start: 0.0,
                stop: 3.0 * recurrence,
                steps: 600,
            },
            ..base
        }),
        "fig3" => Some(ScenarioConfig {
            case: ScenarioCase::Dephasing,
            mode_selection: ModeSelection::All,
            mode_count: 200,
            time_grid: TimeGrid {
                start: 0.0,
                stop: 2.0 * recurrence,
                steps: 500,
            },
            ..base
        }),
        _ => None,
    }
}

/// Apply `key=value` overrides onto a JSON configuration value. Keys use
/// dotted paths (`time_grid.steps=100`); values parse as JSON scalars,
/// falling back to strings.
pub fn apply_overrides(config: &mut serde_json::Value, assignments: &[String]) -> Result<()> {
    for assignment in assignments {
        let (path, raw) = assignment.split_once('=').ok_or_else(|| {
            Error::Config(format!("override '{assignment}' is not of the form key=value"))
        })?;
        let value: serde_json::Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let mut node = &mut *config;
        let segments: Vec<&str> = path.split('.').collect();
        let (last, parents) = segments.split_last().expect("split_once gave a key");
        for seg in parents {
            node = node
                .as_object_mut()
                .ok_or_else(|| {
                    Error::Config(format!("override path '{path}' does not address an object"))
                })?
                .entry((*seg).to_string())
                .or_insert_with(|| serde_json::Value::Object(Default::default()));
        }
        node.as_object_mut()
            .ok_or_else(|| {
                Error::Config(format!("override path '{path}' does not address an object"))
            })?
            .insert((*last).to_string(), value);
    }
    Ok(())
}

/// Parse a configuration from JSON text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let config: ScenarioConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}

/// Largest tolerated bound violation across a table; re-exported for
/// callers running their own row checks.
pub fn row_tolerance(heat: f64) -> f64 {
    bound_tolerance(heat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ScenarioConfig {
        let mut cfg = preset("fig1-te1").unwrap();
        cfg.time_grid.steps = 5;
        cfg
    }

    #[test]
    fn presets_exist_and_validate() {
        for name in PRESET_NAMES {
            let cfg = preset(name).expect(name);
            cfg.validate().expect(name);
        }
        assert!(preset("unknown").is_none());
    }

    #[test]
    fn config_round_trips_through_json() {
        for name in PRESET_NAMES {
            let cfg = preset(name).unwrap();
            let text = serde_json::to_string_pretty(&cfg).unwrap();
            let back = parse_config(&text).unwrap();
            assert_eq!(cfg, back, "{name}");
        }
    }

    #[test]
    fn grid_shapes() {
        let grid = TimeGrid {
            start: 0.0,
            stop: 1.0,
            steps: 0,
        };
        assert!(grid.points().is_empty());
        let grid = TimeGrid {
            start: 0.5,
            stop: 9.0,
            steps: 1,
        };
        assert_eq!(grid.points(), vec![0.5]);
        let grid = TimeGrid {
            start: 0.0,
            stop: 1.0,
            steps: 5,
        };
        assert_eq!(grid.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn decreasing_grid_rejected() {
        let mut cfg = tiny_config();
        cfg.time_grid = TimeGrid {
            start: 2.0,
            stop: 1.0,
            steps: 10,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn resonant_selection_requires_mode_indexed_gap() {
        let mut cfg = tiny_config();
        cfg.qubit_gap = QubitGap::Value { value: 3.0 };
        assert!(cfg.validate().is_err());
        cfg.mode_selection = ModeSelection::All;
        cfg.validate().unwrap();
    }

    #[test]
    fn dissipative_run_rows_pass_bound() {
        let cfg = tiny_config();
        let result = run_scenario(&cfg).unwrap();
        let rows = result.dissipative.unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.bound_holds));
        // Cold preset: heat flows out of the qubit for T > 0.
        assert!(rows[4].heat > 0.0);
        assert!(rows[4].entropy_change_mixed > 0.0);
        assert!(rows[4].entropy_change_coherent < 0.0);
    }

    #[test]
    fn dephasing_run_recurs() {
        let mut cfg = preset("fig2").unwrap();
        cfg.time_grid.steps = 7;
        cfg.time_grid.stop = 2.0 * cfg.length; // one full recurrence
        let result = run_scenario(&cfg).unwrap();
        let rows = result.dephasing.unwrap();
        assert!(rows.iter().all(|r| r.bound_holds));
        assert!((rows.last().unwrap().suppression_factor - 1.0).abs() < 1e-9);
    }

    #[test]
    fn both_case_produces_both_tables() {
        let mut cfg = tiny_config();
        cfg.case = ScenarioCase::Both;
        let result = run_scenario(&cfg).unwrap();
        assert!(result.dissipative.is_some());
        assert!(result.dephasing.is_some());
    }

    #[test]
    fn emission_is_deterministic() {
        let dir = std::env::temp_dir().join(format!("qcav-emit-{}", std::process::id()));
        let cfg = tiny_config();
        let result = run_scenario(&cfg).unwrap();
        let a_dir = dir.join("a");
        let b_dir = dir.join("b");
        emit_outputs(&result, &cfg, Some("fig1-te1"), &a_dir).unwrap();
        let result2 = run_scenario(&cfg).unwrap();
        emit_outputs(&result2, &cfg, Some("fig1-te1"), &b_dir).unwrap();
        for name in ["dissipative.csv", "manifest.json", "summary.txt"] {
            let a = std::fs::read(a_dir.join(name)).unwrap();
            let b = std::fs::read(b_dir.join(name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn empty_grid_emits_header_only() {
        let dir = std::env::temp_dir().join(format!("qcav-empty-{}", std::process::id()));
        let mut cfg = tiny_config();
        cfg.time_grid.steps = 0;
        let result = run_scenario(&cfg).unwrap();
        emit_outputs(&result, &cfg, None, &dir).unwrap();
        let text = std::fs::read_to_string(dir.join("dissipative.csv")).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("time,delta_p,"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn overrides_apply_to_nested_keys() {
        let cfg = preset("fig1-te1").unwrap();
        let mut value = serde_json::to_value(&cfg).unwrap();
        apply_overrides(
            &mut value,
            &[
                "env_temperature=100".to_string(),
                "time_grid.steps=7".to_string(),
            ],
        )
        .unwrap();
        let back: ScenarioConfig = serde_json::from_value(value).unwrap();
        assert_eq!(back.env_temperature, 100.0);
        assert_eq!(back.time_grid.steps, 7);
    }

    #[test]
    fn malformed_override_rejected() {
        let mut value = serde_json::json!({});
        assert!(apply_overrides(&mut value, &["oops".to_string()]).is_err());
    }

    #[test]
    fn oracle_rows_track_model_at_weak_coupling() {
        let mut cfg = tiny_config();
        cfg.time_grid = TimeGrid {
            start: 0.0,
            stop: 20.0,
            steps: 3,
        };
        cfg.env_temperature = 50.0;
        cfg.oracle = OracleOptions {
            enabled: true,
            cutoff: 15,
            leak_tol: 1e-6,
        };
        let result = run_scenario(&cfg).unwrap();
        let rows = result.oracle.unwrap();
        for r in &rows[1..] {
            assert!(
                (r.delta_p_model - r.delta_p_oracle).abs() <= 0.05 * r.delta_p_oracle.abs(),
                "{r:?}"
            );
        }
    }
}
