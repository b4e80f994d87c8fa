//! Brute-force reference evolution of the joint qubit ⊗ truncated-Fock
//! system.
//!
//! Everything here is deliberately independent of the closed forms in
//! [`crate::dissipative`] and [`crate::dephasing`]: the joint state is a
//! dense density matrix, the Hamiltonian is assembled from ladder
//! operators, and propagation goes through a full eigendecomposition
//! (no integrator error in the comparison budget).
//!
//! Basis ordering: the qubit is the slowest index (excited first, matching
//! [`crate::qubit::QubitDensityMatrix`]), then the modes in the order
//! given, each with Fock levels 0..=cutoff.
//!
//! Pictures: the closed forms live in the interaction picture while this
//! evolver works in the Schrödinger picture. Populations, entropies and
//! environment energies agree between pictures; qubit coherences differ by
//! the free phase e^{-iΩT}, which
//! [`QubitDensityMatrix::with_coherence_phase`] strips before comparisons
//! (their magnitudes are picture-invariant either way).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::cavity::CavitySpec;
use crate::error::{Error, Result};
use crate::qubit::QubitDensityMatrix;
use crate::thermal::{thermal_weight, ThermalEnvironment};

/// Which monopole operator couples the qubit to the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Energy-exchanging σx coupling.
    SigmaX,
    /// Pure-dephasing σz coupling.
    SigmaZ,
}

/// Initial qubit state variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialQubit {
    /// sqrt(p)|e⟩ + sqrt(1-p)|g⟩, carrying coherence.
    PureSuperposition,
    /// diag(p, 1-p), no coherence.
    Mixed,
}

/// One cavity mode kept in the joint space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleMode {
    /// Cavity mode index, from 1.
    pub index: u32,
    /// Highest Fock level kept (dimension cutoff + 1).
    pub cutoff: u32,
}

/// Largest joint dimension the dense evolver will accept.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

fn fock_dim(modes: &[OracleMode]) -> usize {
    modes.iter().map(|m| m.cutoff as usize + 1).product()
}

fn joint_dim(modes: &[OracleMode]) -> usize {
    2 * fock_dim(modes)
}

fn identity(dim: usize) -> DMatrix<Complex64> {
    DMatrix::identity(dim, dim)
}

fn annihilation(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

fn number_operator(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(r as f64, 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

fn sigma_z() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(-1.0, 0.0),
        ],
    )
}

fn sigma_x() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::ZERO,
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
        ],
    )
}

/// Embed a single-mode operator at position `k` of the mode list,
/// tensoring identities over the other modes (qubit slot excluded).
fn embed_mode_op(modes: &[OracleMode], k: usize, op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut acc: Option<DMatrix<Complex64>> = None;
    for (i, m) in modes.iter().enumerate() {
        let dim = m.cutoff as usize + 1;
        let factor = if i == k { op.clone() } else { identity(dim) };
        acc = Some(match acc {
            None => factor,
            Some(prev) => prev.kronecker(&factor),
        });
    }
    acc.unwrap_or_else(|| identity(1))
}

/// Joint density matrix of the qubit and the kept modes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointFockState {
    pub modes: Vec<OracleMode>,
    pub matrix: DMatrix<Complex64>,
}

impl JointFockState {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diagonal().sum()
    }

    /// Tr(ρ²); conserved under unitary evolution.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Max |ρ - ρ†| entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Hermiticity, unit trace and spectrum >= -tol.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > tol {
            return Err(Error::InvalidState(format!(
                "joint state not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "joint trace {} + {}i",
                tr.re, tr.im
            )));
        }
        let min_eig = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "joint eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Population of the highest kept Fock level of mode `k`; the
    /// truncation-leakage figure of merit.
    pub fn top_level_population(&self, k: usize) -> f64 {
        let reduced = self.reduce_mode(k);
        let top = reduced.nrows() - 1;
        reduced[(top, top)].re
    }

    /// Error unless every mode keeps its top-level population below `tol`.
    pub fn validate_truncation(&self, tol: f64) -> Result<()> {
        for k in 0..self.modes.len() {
            let leak = self.top_level_population(k);
            if leak > tol {
                return Err(Error::Truncation(format!(
                    "mode {} holds {leak:.3e} at its top Fock level (tol {tol:.1e}); enlarge the cutoff",
                    self.modes[k].index
                )));
            }
        }
        Ok(())
    }

    /// Partial trace over all modes: the reduced qubit state.
    pub fn reduce_system(&self) -> Result<QubitDensityMatrix> {
        let df = fock_dim(&self.modes);
        let mut out = [[Complex64::ZERO; 2]; 2];
        for (q1, row) in out.iter_mut().enumerate() {
            for (q2, entry) in row.iter_mut().enumerate() {
                let mut acc = Complex64::ZERO;
                for f in 0..df {
                    acc += self.matrix[(q1 * df + f, q2 * df + f)];
                }
                *entry = acc;
            }
        }
        QubitDensityMatrix::from_elements(out)
    }

    /// Partial trace down to a single mode `k` (qubit and the other modes
    /// traced out).
    pub fn reduce_mode(&self, k: usize) -> DMatrix<Complex64> {
        let df = fock_dim(&self.modes);
        let dim_k = self.modes[k].cutoff as usize + 1;
        // Stride of mode k in the row-major Fock index.
        let stride: usize = self.modes[k + 1..]
            .iter()
            .map(|m| m.cutoff as usize + 1)
            .product();
        let outer = df / (dim_k * stride);
        let mut out = DMatrix::zeros(dim_k, dim_k);
        for q in 0..2 {
            for hi in 0..outer {
                for lo in 0..stride {
                    for n1 in 0..dim_k {
                        for n2 in 0..dim_k {
                            let i = q * df + (hi * dim_k + n1) * stride + lo;
                            let j = q * df + (hi * dim_k + n2) * stride + lo;
                            out[(n1, n2)] += self.matrix[(i, j)];
                        }
                    }
                }
            }
        }
        out
    }

    /// Reduced density matrices of every kept mode.
    pub fn reduce_environment(&self) -> Vec<DMatrix<Complex64>> {
        (0..self.modes.len()).map(|k| self.reduce_mode(k)).collect()
    }

    /// Environment energy Tr(H_E ρ) = Σ_j ω_j ⟨n_j⟩, read directly off the
    /// joint diagonal.
    pub fn environment_energy(&self, spec: &CavitySpec) -> Result<f64> {
        let df = fock_dim(&self.modes);
        let omegas: Vec<f64> = self
            .modes
            .iter()
            .map(|m| spec.mode_frequency(m.index))
            .collect::<Result<_>>()?;
        let mut energy = 0.0;
        for q in 0..2 {
            for f in 0..df {
                // Decode the row-major Fock multi-index.
                let mut rem = f;
                let mut e_basis = 0.0;
                for (m, omega) in self.modes.iter().zip(&omegas).rev() {
                    let dim = m.cutoff as usize + 1;
                    let n = rem % dim;
                    rem /= dim;
                    e_basis += omega * n as f64;
                }
                energy += self.matrix[(q * df + f, q * df + f)].re * e_basis;
            }
        }
        Ok(energy)
    }
}

/// Uncorrelated initial state: qubit (pure superposition or mixture with
/// excited population `p`) ⊗ truncated thermal state of each kept mode,
/// each mode renormalized over its kept levels.
pub fn build_joint_initial(
    p: f64,
    kind: InitialQubit,
    env: &ThermalEnvironment,
    modes: &[OracleMode],
) -> Result<JointFockState> {
    let dim = joint_dim(modes);
    if dim > DEFAULT_DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: DEFAULT_DIMENSION_CAP,
        });
    }
    let qubit = match kind {
        InitialQubit::PureSuperposition => QubitDensityMatrix::pure_superposition(p)?,
        InitialQubit::Mixed => QubitDensityMatrix::mixed(p)?,
    };
    let qubit_m = DMatrix::from_fn(2, 2, |r, c| qubit.element(r, c));
    let mut joint = qubit_m;
    for mode in modes {
        let nbar = env.occupation(mode.index)?;
        let dim_m = mode.cutoff as usize + 1;
        let mut weights = Vec::with_capacity(dim_m);
        for n in 0..=mode.cutoff {
            weights.push(thermal_weight(n, nbar)?);
        }
        let mass: f64 = weights.iter().sum();
        if mass <= 0.0 {
            return Err(Error::Truncation(format!(
                "mode {} keeps no thermal mass below cutoff {}",
                mode.index, mode.cutoff
            )));
        }
        let thermal = DMatrix::from_fn(dim_m, dim_m, |r, c| {
            if r == c {
                Complex64::new(weights[r] / mass, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        joint = joint.kronecker(&thermal);
    }
    Ok(JointFockState {
        modes: modes.to_vec(),
        matrix: joint,
    })
}

/// Schrödinger-picture total Hamiltonian
/// H = (Ω/2)σz ⊗ 1 + Σ_j ω_j n̂_j + λ m ⊗ Σ_j u_j(x)(a_j + a_j†).
pub fn build_hamiltonian(
    spec: &CavitySpec,
    coupling: Coupling,
    lambda: f64,
    omega_qubit: f64,
    modes: &[OracleMode],
) -> Result<DMatrix<Complex64>> {
    let dim = joint_dim(modes);
    if dim > DEFAULT_DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: DEFAULT_DIMENSION_CAP,
        });
    }
    let df = fock_dim(modes);
    let monopole = match coupling {
        Coupling::SigmaX => sigma_x(),
        Coupling::SigmaZ => sigma_z(),
    };

    let mut h = sigma_z().kronecker(&identity(df)) * Complex64::new(0.5 * omega_qubit, 0.0);
    for (k, mode) in modes.iter().enumerate() {
        let omega = spec.mode_frequency(mode.index)?;
        let dim_m = mode.cutoff as usize + 1;
        let number = embed_mode_op(modes, k, &number_operator(dim_m));
        h += identity(2).kronecker(&number) * Complex64::new(omega, 0.0);

        let u = spec.mode_function_at_qubit(mode.index)?;
        let a = annihilation(dim_m);
        let quadrature = &a + a.adjoint();
        let field = embed_mode_op(modes, k, &quadrature);
        h += monopole.kronecker(&field) * Complex64::new(lambda * u, 0.0);
    }
    Ok(h)
}

/// Max |[a, b]| entry.
pub fn commutator_norm(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a * b - b * a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max |h - h†| entry.
pub fn hermiticity_defect(h: &DMatrix<Complex64>) -> f64 {
    (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian Hamiltonian, reusable across
/// evolution times.
pub struct Propagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self> {
        let dim = h.nrows();
        if dim > DEFAULT_DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim,
                cap: DEFAULT_DIMENSION_CAP,
            });
        }
        let defect = hermiticity_defect(h);
        if defect > 1e-12 {
            return Err(Error::InvalidState(format!(
                "Hamiltonian not Hermitian (defect {defect:.3e})"
            )));
        }
        let eig = nalgebra::SymmetricEigen::new(h.clone());
        Ok(Propagator {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    /// U(t) = V e^{-iΛt} V†.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let mut scaled = self.eigenvectors.clone();
        for (c, &e) in self.eigenvalues.iter().enumerate() {
            let phase = Complex64::new(0.0, -e * t).exp();
            for r in 0..scaled.nrows() {
                scaled[(r, c)] *= phase;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// ρ(t) = U(t) ρ U(t)†.
    pub fn evolve(&self, state: &JointFockState, t: f64) -> JointFockState {
        let u = self.unitary(t);
        let evolved = &u * &state.matrix * u.adjoint();
        JointFockState {
            modes: state.modes.clone(),
            matrix: evolved,
        }
    }
}

/// One-shot evolution ρ(T) = e^{-iHT} ρ e^{iHT}.
pub fn evolve(state: &JointFockState, h: &DMatrix<Complex64>, t: f64) -> Result<JointFockState> {
    Ok(Propagator::new(h)?.evolve(state, t))
}
