//! Numerical tolerances and solver/search settings.
//!
//! Every threshold used by the library lives here so that callers can audit
//! and override them in one place.

use serde::{Deserialize, Serialize};

/// Validation and spectral tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Frobenius bound on `U^dagger U - I` for unitary validation.
    pub unitary: f64,
    /// Bound on `| ||psi|| - 1 |` for pure states.
    pub state_norm: f64,
    /// Entrywise Hermiticity bound for density matrices.
    pub hermitian: f64,
    /// Smallest admissible eigenvalue of a density matrix is `-psd`.
    pub psd: f64,
    /// Bound on `|Tr rho - 1|`.
    pub trace: f64,
    /// Frobenius bound on the reconstruction of a unitary from its spectrum.
    pub eig_reconstruction: f64,
    /// Bound on the deviation of the eigenvector Gram matrix from identity.
    pub eig_gram: f64,
    /// Eigenvalues of the Hermitian part closer than this are clustered.
    pub degeneracy: f64,
    /// An eigenvalue with `|Im| <= pi_snap` and negative real part gets phase `+pi`.
    pub pi_snap: f64,
    /// Prior probabilities must sum to one within this bound.
    pub priors: f64,
    /// Slack for the closed-form three-state conditions.
    pub condition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitary: 1e-10,
            state_norm: 1e-12,
            hermitian: 1e-12,
            psd: 1e-10,
            trace: 1e-10,
            eig_reconstruction: 1e-8,
            eig_gram: 1e-9,
            degeneracy: 1e-8,
            pi_snap: 1e-12,
            priors: 1e-12,
            condition: 1e-9,
        }
    }
}

/// Settings for the POVM program solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Target for `primal - Tr(Y)` with both sides certified feasible.
    pub gap_tol: f64,
    /// Bound on completeness/positivity violation of the reported POVM.
    pub residual_tol: f64,
    pub max_iters: usize,
    /// Initial augmented-Lagrangian penalty.
    pub penalty: f64,
    /// Iterations between certificate evaluations.
    pub check_every: usize,
    /// `A >= 1 - decision_tol` counts as perfect antidistinguishability.
    pub decision_tol: f64,
    pub verbose: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gap_tol: 1e-7,
            residual_tol: 1e-8,
            max_iters: 200_000,
            penalty: 1.0,
            check_every: 10,
            decision_tol: 1e-6,
            verbose: false,
        }
    }
}

impl SolverConfig {
    /// Cheap settings used to score candidates inside searches. The score is
    /// always a certified lower bound, so loose settings never overstate a value.
    pub fn scoring(&self) -> Self {
        Self {
            gap_tol: 1e-4,
            max_iters: 3_000,
            verbose: false,
            ..*self
        }
    }
}

/// Settings for derivative-free probe and state searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Independent starts of the probe search.
    pub starts: usize,
    /// Objective evaluations allowed per start.
    pub evals_per_start: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Polar and azimuthal resolution of the Bloch-sphere grid.
    pub grid_polar: usize,
    pub grid_azimuth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            starts: 32,
            evals_per_start: 4_000,
            initial_step: 0.5,
            min_step: 1e-7,
            grid_polar: 12,
            grid_azimuth: 24,
        }
    }
}

/// Everything an analysis call needs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Config {
    pub tol: Tolerances,
    pub solver: SolverConfig,
    pub search: SearchConfig,
}
