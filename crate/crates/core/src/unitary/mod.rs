//! Antidistinguishability of unitaries through the states they produce from a
//! probe.
//!
//! For a pure probe, the overlap of two evolved states is
//! `|sum_l w_l e^{i theta_l}|^2` where `e^{i theta_l}` are the eigenvalues of
//! `U_i^dagger U_j` and `w_l` are convex weights fixed by the probe:
//! `|<v_l|psi>|^2` for a single system, `sum_w C_w^2 |<v_l|eta_w>|^2` for an
//! entangled probe with Schmidt data `(C_w, eta_w)`, and `1/d` for a maximally
//! entangled probe.

mod hierarchy;
mod search;

pub use hierarchy::{
    hierarchy_check, qubit_hierarchy_trial, qubit_hierarchy_trial_with, HierarchyReport, TrialOutcome, DOMINANCE_SLACK,
};
pub use search::{optimize_probe, random_probe, ProbeMode};

use std::f64::consts::PI;

use crate::config::{Config, SolverConfig, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{
    c, complete_basis, kron, unitary_eig, ComplexMatrix, ComplexVector, PureState, SpectralDecomposition,
    UnitaryOperator, C64,
};
use crate::states::{
    antidist_value, three_pure_condition, uniform, AntidistDecision, AntidistResult, OverlapTriple,
    StateEnsemble, Verdict,
};

/// Unitaries with prior probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryEnsemble {
    members: Vec<UnitaryOperator>,
    priors: Vec<f64>,
}

impl UnitaryEnsemble {
    pub fn new(members: Vec<UnitaryOperator>, priors: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("no unitaries".into()));
        }
        let d = members[0].dim();
        if let Some(u) = members.iter().find(|u| u.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: u.dim() });
        }
        if priors.len() != members.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} priors for {} unitaries",
                priors.len(),
                members.len()
            )));
        }
        if priors.iter().any(|&p| p.is_nan() || p <= 0.0) {
            return Err(Error::InvalidEnsemble("priors must be positive".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > Tolerances::default().priors {
            return Err(Error::InvalidEnsemble(format!("priors sum to {total}")));
        }
        Ok(Self { members, priors })
    }

    pub fn uniform(members: Vec<UnitaryOperator>) -> Result<Self> {
        let n = members.len();
        Self::new(members, uniform(n))
    }

    pub fn members(&self) -> &[UnitaryOperator] {
        &self.members
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// Concatenation with equal priors over all members.
    pub fn union(&self, other: &UnitaryEnsemble) -> Result<Self> {
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        Self::uniform(members)
    }
}

/// Input state fed to the unknown unitary.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeSpec {
    SingleSystem(PureState),
    /// `sum_w C_w |eta_w>|w>` with `eta_w` the columns of `a_basis`; the
    /// ancilla side is the computational basis.
    Entangled {
        schmidt: Vec<f64>,
        a_basis: UnitaryOperator,
    },
    /// `sum_k |kk> / sqrt(d)`.
    MaximallyEntangled,
}

impl ProbeSpec {
    pub fn entangled(schmidt: Vec<f64>, a_basis: UnitaryOperator) -> Result<Self> {
        if schmidt.len() != a_basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: a_basis.dim(),
                found: schmidt.len(),
            });
        }
        if schmidt.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(Error::OutOfRange("Schmidt coefficients must be nonnegative".into()));
        }
        let norm: f64 = schmidt.iter().map(|w| w * w).sum();
        if (norm - 1.0).abs() > Tolerances::default().state_norm {
            return Err(Error::NotNormalized { norm: norm.sqrt() });
        }
        Ok(ProbeSpec::Entangled { schmidt, a_basis })
    }

    /// Entangled probe with Schmidt coefficients `sqrt(weights)` after
    /// normalizing `weights` onto the simplex.
    pub(crate) fn from_weights(weights: &[f64], a_basis: UnitaryOperator) -> Self {
        let total: f64 = weights.iter().sum();
        ProbeSpec::Entangled {
            schmidt: weights.iter().map(|w| (w / total).sqrt()).collect(),
            a_basis,
        }
    }

    /// Local dimension the probe acts on, if fixed by the probe itself.
    pub fn local_dim(&self) -> Option<usize> {
        match self {
            ProbeSpec::SingleSystem(s) => Some(s.dim()),
            ProbeSpec::Entangled { a_basis, .. } => Some(a_basis.dim()),
            ProbeSpec::MaximallyEntangled => None,
        }
    }

    pub fn is_bipartite(&self) -> bool {
        !matches!(self, ProbeSpec::SingleSystem(_))
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        match self.local_dim() {
            Some(k) if k != d => Err(Error::DimensionMismatch { expected: d, found: k }),
            _ => Ok(()),
        }
    }

    /// The probe vector: in `C^d` for a single system, in `C^d (x) C^d`
    /// (system index major) otherwise.
    pub fn state(&self, d: usize) -> Result<PureState> {
        self.check_dim(d)?;
        match self {
            ProbeSpec::SingleSystem(s) => Ok(s.clone()),
            ProbeSpec::Entangled { schmidt, a_basis } => {
                let mut v = ComplexVector::zeros(d * d);
                for (w, &cw) in schmidt.iter().enumerate() {
                    for a in 0..d {
                        v[a * d + w] += a_basis.matrix()[(a, w)] * cw;
                    }
                }
                PureState::normalized(v)
            }
            ProbeSpec::MaximallyEntangled => {
                let mut v = ComplexVector::zeros(d * d);
                let amp = c(1.0 / (d as f64).sqrt(), 0.0);
                for k in 0..d {
                    v[k * d + k] = amp;
                }
                Ok(PureState::from_trusted(v))
            }
        }
    }

    /// Convex weights over the eigenvectors of a pair spectrum.
    pub fn pair_weights(&self, spectrum: &PairSpectrum) -> Result<PairWeights> {
        let vecs = &spectrum.eigenvectors;
        let d = vecs.nrows();
        self.check_dim(d)?;
        let weights = match self {
            ProbeSpec::SingleSystem(s) => (0..d)
                .map(|l| vecs.column(l).dotc(s.amps()).norm_sqr())
                .collect(),
            ProbeSpec::Entangled { schmidt, a_basis } => {
                let overlaps = vecs.adjoint() * a_basis.matrix();
                (0..d)
                    .map(|l| {
                        schmidt
                            .iter()
                            .enumerate()
                            .map(|(w, cw)| cw * cw * overlaps[(l, w)].norm_sqr())
                            .sum()
                    })
                    .collect()
            }
            ProbeSpec::MaximallyEntangled => vec![1.0 / d as f64; d],
        };
        Ok(PairWeights { weights })
    }

    /// A single-system probe rewritten as an entangled probe with one unit
    /// Schmidt coefficient; other probes are returned unchanged.
    pub fn embed_as_entangled(&self) -> ProbeSpec {
        match self {
            ProbeSpec::SingleSystem(s) => {
                let d = s.dim();
                let basis = complete_basis(&[s.amps().clone()], d);
                let mut schmidt = vec![0.0; d];
                schmidt[0] = 1.0;
                ProbeSpec::Entangled {
                    schmidt,
                    a_basis: UnitaryOperator::from_trusted(basis),
                }
            }
            other => other.clone(),
        }
    }
}

/// Eigenphases and eigenvectors of `U_i^dagger U_j`.
pub type PairSpectrum = SpectralDecomposition;

pub fn pair_spectrum(ui: &UnitaryOperator, uj: &UnitaryOperator, tol: &Tolerances) -> Result<PairSpectrum> {
    unitary_eig(&ui.relative_to(uj)?, tol)
}

/// Convex weights `w_l >= 0`, `sum_l w_l = 1`, over eigenphase points.
#[derive(Debug, Clone, PartialEq)]
pub struct PairWeights {
    pub weights: Vec<f64>,
}

impl PairWeights {
    /// `sum_l w_l e^{i theta_l}`.
    pub fn convex_point(&self, phases: &[f64]) -> C64 {
        self.weights
            .iter()
            .zip(phases)
            .map(|(&w, &t)| C64::from_polar(w, t))
            .sum()
    }

    pub fn simplex_residual(&self) -> f64 {
        (self.weights.iter().sum::<f64>() - 1.0).abs()
    }
}

/// `|<psi| (U_i^dagger U_j (x) I) |psi>|^2` through the eigenphase weights.
pub fn pair_overlap(probe: &ProbeSpec, ui: &UnitaryOperator, uj: &UnitaryOperator, tol: &Tolerances) -> Result<f64> {
    let spectrum = pair_spectrum(ui, uj, tol)?;
    overlap_from_spectrum(probe, &spectrum)
}

pub(crate) fn overlap_from_spectrum(probe: &ProbeSpec, spectrum: &PairSpectrum) -> Result<f64> {
    let w = probe.pair_weights(spectrum)?;
    Ok(w.convex_point(&spectrum.phases).norm_sqr().clamp(0.0, 1.0))
}

/// Evolved states `U_x|psi>` (single system) or `(U_x (x) I)|psi_AB>`.
pub fn evolve_ensemble(u: &UnitaryEnsemble, probe: &ProbeSpec) -> Result<StateEnsemble> {
    let d = u.dim();
    let psi = probe.state(d)?;
    let states = if probe.is_bipartite() {
        let eye = ComplexMatrix::identity(d, d);
        u.members
            .iter()
            .map(|m| PureState::normalized(kron(m.matrix(), &eye) * psi.amps()))
            .collect::<Result<Vec<_>>>()?
    } else {
        u.members.iter().map(|m| m.apply(&psi)).collect::<Result<Vec<_>>>()?
    };
    StateEnsemble::from_pure(states, u.priors.clone())
}

fn ensure_same_dim(us: &[&UnitaryOperator]) -> Result<usize> {
    let d = us[0].dim();
    for u in us {
        if u.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: u.dim() });
        }
    }
    Ok(d)
}

/// `|Tr(U_i^dagger U_j)|^2 / d^2`, the pair overlap under any maximally
/// entangled probe.
pub fn maxent_pair_overlap(ui: &UnitaryOperator, uj: &UnitaryOperator) -> Result<f64> {
    let d = ensure_same_dim(&[ui, uj])?;
    let t = (ui.matrix().adjoint() * uj.matrix()).trace();
    Ok((t.norm_sqr() / (d * d) as f64).clamp(0.0, 1.0))
}

pub fn maxent_overlaps(u1: &UnitaryOperator, u2: &UnitaryOperator, u3: &UnitaryOperator) -> Result<OverlapTriple> {
    ensure_same_dim(&[u1, u2, u3])?;
    OverlapTriple::new(
        maxent_pair_overlap(u1, u2)?,
        maxent_pair_overlap(u1, u3)?,
        maxent_pair_overlap(u2, u3)?,
    )
}

fn require_three(u: &UnitaryEnsemble) -> Result<()> {
    if u.len() != 3 {
        return Err(Error::InvalidEnsemble(format!("expected three unitaries, got {}", u.len())));
    }
    Ok(())
}

/// Pairwise overlaps `(12, 13, 23)` of the states evolved from `probe`.
pub fn probe_overlaps(u: &UnitaryEnsemble, probe: &ProbeSpec, tol: &Tolerances) -> Result<OverlapTriple> {
    require_three(u)?;
    let m = &u.members;
    OverlapTriple::new(
        pair_overlap(probe, &m[0], &m[1], tol)?,
        pair_overlap(probe, &m[0], &m[2], tol)?,
        pair_overlap(probe, &m[1], &m[2], tol)?,
    )
}

/// Closed-form decision for three unitaries and a probe. Boundary verdicts
/// and triples with an (almost) orthogonal pair are settled by the
/// semidefinite program on the evolved states.
pub fn decide_three_with_probe(u: &UnitaryEnsemble, probe: &ProbeSpec, cfg: &Config) -> Result<AntidistDecision> {
    let x = probe_overlaps(u, probe, &cfg.tol)?;
    let mut decision = three_pure_condition(&x, cfg.tol.condition)?;
    if decision.verdict == Verdict::Boundary || x.min() <= cfg.tol.condition {
        let value = antidist_value_with_probe(u, probe, &cfg.solver)?.value;
        decision.sdp_value = Some(value);
        decision.verdict = if value >= 1.0 - cfg.solver.decision_tol {
            Verdict::Antidistinguishable
        } else {
            Verdict::NotAntidistinguishable
        };
    }
    Ok(decision)
}

pub fn antidist_value_with_probe(u: &UnitaryEnsemble, probe: &ProbeSpec, cfg: &SolverConfig) -> Result<AntidistResult> {
    antidist_value(&evolve_ensemble(u, probe)?, cfg)
}

/// Phases closer to a half-turn gap than this count as spanning the origin.
const HALF_PLANE_SLACK: f64 = 1e-10;

/// Whether two unitaries can be told apart with certainty in one shot: the
/// origin lies in the convex hull of the eigenvalues of `U1^dagger U2`,
/// i.e. no gap between consecutive eigenphases exceeds `pi`.
pub fn two_unitary_perfect_distinguishability(u1: &UnitaryOperator, u2: &UnitaryOperator, tol: &Tolerances) -> Result<bool> {
    ensure_same_dim(&[u1, u2])?;
    let spectrum = pair_spectrum(u1, u2, tol)?;
    Ok(largest_phase_gap(&spectrum.phases) <= PI + HALF_PLANE_SLACK)
}

/// Largest angular gap between consecutive points on the circle.
pub fn largest_phase_gap(phases: &[f64]) -> f64 {
    let mut sorted = phases.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n == 0 {
        return 2.0 * PI;
    }
    let wrap = sorted[0] + 2.0 * PI - sorted[n - 1];
    sorted.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}
