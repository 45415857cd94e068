//! Antidistinguishability of state ensembles.
//!
//! `A[{rho_k}, {q_k}] = 1 - min_M sum_k q_k Tr(rho_k M_k)`: the best
//! probability of announcing a label that is not the prepared one.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{Config, SolverConfig, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, DensityMatrix, PureState, C64};
use crate::sdp::{solve_best_effort, solve_min_povm, Povm, PovmProgram};

/// States with prior probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct StateEnsemble {
    members: Vec<DensityMatrix>,
    priors: Vec<f64>,
    pure: Option<Vec<PureState>>,
}

fn check_priors(priors: &[f64], n: usize, tol: &Tolerances) -> Result<()> {
    if priors.len() != n {
        return Err(Error::InvalidEnsemble(format!(
            "{} priors for {} states",
            priors.len(),
            n
        )));
    }
    if let Some(q) = priors.iter().find(|&&q| q.is_nan() || q <= 0.0) {
        return Err(Error::InvalidEnsemble(format!("prior {q} is not positive")));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > tol.priors {
        return Err(Error::InvalidEnsemble(format!("priors sum to {total}")));
    }
    Ok(())
}

pub(crate) fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

impl StateEnsemble {
    pub fn from_pure(states: Vec<PureState>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidEnsemble("no states".into()));
        }
        check_priors(&priors, states.len(), &Tolerances::default())?;
        let d = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
        Ok(Self {
            members: states.iter().map(PureState::density).collect(),
            priors,
            pure: Some(states),
        })
    }

    pub fn uniform_pure(states: Vec<PureState>) -> Result<Self> {
        let n = states.len();
        Self::from_pure(states, uniform(n))
    }

    pub fn from_mixed(members: Vec<DensityMatrix>, priors: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("no states".into()));
        }
        check_priors(&priors, members.len(), &Tolerances::default())?;
        let d = members[0].dim();
        if let Some(m) = members.iter().find(|m| m.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
        }
        Ok(Self { members, priors, pure: None })
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

    pub fn members(&self) -> &[DensityMatrix] {
        &self.members
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Pure-state vectors, when every member was supplied as one.
    pub fn pure_states(&self) -> Option<&[PureState]> {
        self.pure.as_deref()
    }

    /// Weighted costs `q_k rho_k` of the exclusion program.
    pub fn program(&self) -> Result<PovmProgram> {
        PovmProgram::new(
            self.members
                .iter()
                .zip(&self.priors)
                .map(|(m, &q)| m.matrix() * c(q, 0.0))
                .collect(),
        )
    }
}

/// Squared overlaps of three pure states in the order
/// `x1 = |<1|2>|^2`, `x2 = |<1|3>|^2`, `x3 = |<2|3>|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapTriple {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl OverlapTriple {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        for x in [x1, x2, x3] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::OutOfRange(format!("overlap {x} outside [0, 1]")));
            }
        }
        Ok(Self { x1, x2, x3 })
    }

    pub fn from_states(a: &PureState, b: &PureState, c3: &PureState) -> Result<Self> {
        let d = a.dim();
        for s in [b, c3] {
            if s.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
            }
        }
        let ov = |p: &PureState, q: &PureState| p.inner(q).norm_sqr().clamp(0.0, 1.0);
        Ok(Self {
            x1: ov(a, b),
            x2: ov(a, c3),
            x3: ov(b, c3),
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// The same overlaps in cyclic pair order `(12, 23, 31)`.
    pub fn cyclic(&self) -> [f64; 3] {
        [self.x1, self.x3, self.x2]
    }

    pub fn sum(&self) -> f64 {
        self.x1 + self.x2 + self.x3
    }

    pub fn product(&self) -> f64 {
        self.x1 * self.x2 * self.x3
    }

    /// `1 - (x1 + x2 + x3)`; positive when the linear condition holds.
    pub fn sum_margin(&self) -> f64 {
        1.0 - self.sum()
    }

    /// `(x1 + x2 + x3 - 1)^2 - 4 x1 x2 x3`; nonnegative when the cubic condition holds.
    pub fn cubic_margin(&self) -> f64 {
        let s = self.sum() - 1.0;
        s * s - 4.0 * self.product()
    }

    /// `min(sum_margin, cubic_margin)`: positive iff both conditions hold strictly.
    pub fn margin(&self) -> f64 {
        self.sum_margin().min(self.cubic_margin())
    }

    pub fn min(&self) -> f64 {
        self.x1.min(self.x2).min(self.x3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Antidistinguishable,
    NotAntidistinguishable,
    Boundary,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Antidistinguishable => "antidistinguishable",
            Verdict::NotAntidistinguishable => "not_antidistinguishable",
            Verdict::Boundary => "boundary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntidistDecision {
    pub verdict: Verdict,
    pub sum_margin: f64,
    pub cubic_margin: f64,
    /// Set when the verdict was settled by the semidefinite program.
    pub sdp_value: Option<f64>,
}

/// Closed-form test for three pairwise non-orthogonal pure states:
/// antidistinguishable iff `x1 + x2 + x3 < 1` and
/// `(x1 + x2 + x3 - 1)^2 >= 4 x1 x2 x3`.
///
/// A clear violation of either condition (by more than `eps`) gives
/// `NotAntidistinguishable`; otherwise an expression within `eps` of
/// equality gives `Boundary`.
pub fn three_pure_condition(x: &OverlapTriple, eps: f64) -> Result<AntidistDecision> {
    let x = OverlapTriple::new(x.x1, x.x2, x.x3)?;
    let sum_margin = x.sum_margin();
    let cubic_margin = x.cubic_margin();
    let verdict = if sum_margin < -eps || cubic_margin < -eps {
        Verdict::NotAntidistinguishable
    } else if sum_margin.abs() <= eps || cubic_margin.abs() <= eps {
        Verdict::Boundary
    } else {
        Verdict::Antidistinguishable
    };
    Ok(AntidistDecision {
        verdict,
        sum_margin,
        cubic_margin,
        sdp_value: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntidistResult {
    /// Certified lower bound `1 - primal` on the antidistinguishability.
    pub value: f64,
    /// Effect `k` is the outcome "exclude label k".
    pub povm: Povm,
    /// `Y <= q_k rho_k` for all `k`; `1 - Tr(Y)` bounds the value from above.
    pub dual_certificate: ComplexMatrix,
    pub gap: f64,
}

impl AntidistResult {
    pub fn upper_bound(&self) -> f64 {
        1.0 - self.dual_certificate.trace().re
    }
}

fn single_member_result(e: &StateEnsemble) -> AntidistResult {
    let d = e.dim();
    AntidistResult {
        value: 0.0,
        povm: Povm {
            effects: vec![ComplexMatrix::identity(d, d)],
        },
        dual_certificate: e.members[0].matrix().clone(),
        gap: 0.0,
    }
}

fn result_from(sol: crate::sdp::PovmSolution) -> AntidistResult {
    AntidistResult {
        value: (1.0 - sol.primal).clamp(0.0, 1.0),
        povm: sol.povm,
        dual_certificate: sol.dual_y,
        gap: sol.gap,
    }
}

/// Antidistinguishability of `e` with its optimal measurement and certificate.
pub fn antidist_value(e: &StateEnsemble, cfg: &SolverConfig) -> Result<AntidistResult> {
    if e.len() == 1 {
        return Ok(single_member_result(e));
    }
    Ok(result_from(solve_min_povm(&e.program()?, cfg)?))
}

/// Certified lower bound on the value, never failing on the iteration budget.
pub(crate) fn antidist_lower_bound(e: &StateEnsemble, cfg: &SolverConfig) -> Result<f64> {
    if e.len() == 1 {
        return Ok(0.0);
    }
    let sol = solve_best_effort(&e.program()?, cfg);
    Ok((1.0 - sol.primal).clamp(0.0, 1.0))
}

/// `A >= 1 - cfg.decision_tol`.
pub fn is_perfectly_antidist(e: &StateEnsemble, cfg: &SolverConfig) -> Result<bool> {
    Ok(antidist_value(e, cfg)?.value >= 1.0 - cfg.decision_tol)
}

fn bloch_state(polar: f64, azimuth: f64) -> PureState {
    PureState::from_trusted(crate::linalg::ComplexVector::from_vec(vec![
        c((polar / 2.0).cos(), 0.0),
        C64::from_polar((polar / 2.0).sin(), azimuth),
    ]))
}

/// Find a qubit state whose addition makes `states` perfectly
/// antidistinguishable under equal priors.
///
/// Every point of a Bloch-sphere grid is scored by a cheap certified lower
/// bound on the enlarged set's value; the best point is then refined by a
/// shrinking-step direct search in the polar/azimuthal angles.
pub fn extend_qubit_pure_set(states: &[PureState], cfg: &Config) -> Result<PureState> {
    if states.is_empty() {
        return Err(Error::InvalidEnsemble("no states".into()));
    }
    if let Some(s) = states.iter().find(|s| s.dim() != 2) {
        return Err(Error::BadDimension(s.dim()));
    }
    let solver = cfg.solver;
    if states.len() >= 2 && is_perfectly_antidist(&StateEnsemble::uniform_pure(states.to_vec())?, &solver)? {
        return Err(Error::NotNeeded);
    }

    let enlarged_value = |candidate: &PureState, scfg: &SolverConfig| -> Result<f64> {
        let mut set = states.to_vec();
        set.push(candidate.clone());
        antidist_lower_bound(&StateEnsemble::uniform_pure(set)?, scfg)
    };

    let search = cfg.search;
    let polar_steps = search.grid_polar.max(2);
    let azimuth_steps = search.grid_azimuth.max(1);
    let scoring = solver.scoring();
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..polar_steps {
        let polar = PI * i as f64 / (polar_steps - 1) as f64;
        // the poles need a single azimuth
        let azimuths = if i == 0 || i == polar_steps - 1 { 1 } else { azimuth_steps };
        for j in 0..azimuths {
            let azimuth = 2.0 * PI * j as f64 / azimuth_steps as f64;
            let score = enlarged_value(&bloch_state(polar, azimuth), &scoring)?;
            if score > best.0 {
                best = (score, polar, azimuth);
            }
        }
    }

    let (_, mut polar, mut azimuth) = best;
    let mut value = enlarged_value(&bloch_state(polar, azimuth), &solver)?;
    let mut step = PI / (polar_steps - 1) as f64;
    let target = 1.0 - solver.decision_tol;
    let mut evals = 0;
    while value < target && step >= search.min_step && evals < search.evals_per_start {
        let mut improved = false;
        for (dp, da) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            evals += 1;
            let v = enlarged_value(&bloch_state(polar + dp, azimuth + da), &solver)?;
            if v > value {
                value = v;
                polar += dp;
                azimuth += da;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let found = bloch_state(polar, azimuth);
    let mut enlarged = states.to_vec();
    enlarged.push(found.clone());
    let certified = antidist_value(&StateEnsemble::uniform_pure(enlarged)?, &solver)?.value;
    if certified >= target {
        Ok(found)
    } else {
        Err(Error::SearchExhausted { best_value: certified })
    }
}
