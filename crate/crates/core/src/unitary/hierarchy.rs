//! Monte Carlo comparison of maximally entangled probes against arbitrary
//! probes for qubit unitaries.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::search::random_probe;
use super::{maxent_pair_overlap, pair_overlap, ProbeMode, ProbeSpec};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{haar_unitary, UnitaryOperator};
use crate::states::{three_pure_condition, OverlapTriple, Verdict};

/// Allowed excess of a maximally entangled pair overlap over a probe's.
pub const DOMINANCE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub probe_overlaps: OverlapTriple,
    pub maxent_overlaps: OverlapTriple,
    pub probe_passes: bool,
    pub maxent_passes: bool,
    /// `max over pairs of g_maxent - g_probe`.
    pub dominance_excess: f64,
}

impl TrialOutcome {
    pub fn is_counterexample(&self) -> bool {
        self.probe_passes && !self.maxent_passes
    }

    pub fn violates_dominance(&self) -> bool {
        self.dominance_excess > DOMINANCE_SLACK
    }
}

/// Compare `probe` against a maximally entangled probe on one triple.
pub fn hierarchy_check(triple: &[UnitaryOperator; 3], probe: &ProbeSpec, tol: &Tolerances) -> Result<TrialOutcome> {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut g = [0.0; 3];
    let mut m = [0.0; 3];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        g[k] = pair_overlap(probe, &triple[i], &triple[j], tol)?;
        m[k] = maxent_pair_overlap(&triple[i], &triple[j])?;
    }
    let probe_overlaps = OverlapTriple::new(g[0], g[1], g[2])?;
    let maxent_overlaps = OverlapTriple::new(m[0], m[1], m[2])?;
    let passes = |x: &OverlapTriple| -> Result<bool> {
        Ok(three_pure_condition(x, tol.condition)?.verdict != Verdict::NotAntidistinguishable)
    };
    Ok(TrialOutcome {
        probe_passes: passes(&probe_overlaps)?,
        maxent_passes: passes(&maxent_overlaps)?,
        probe_overlaps,
        maxent_overlaps,
        dominance_excess: (0..3).map(|k| m[k] - g[k]).fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub seed: u64,
    pub trials: usize,
    pub single_probe_trials: usize,
    pub entangled_probe_trials: usize,
    pub probe_passes: usize,
    pub maxent_passes: usize,
    /// Trials where the probe passes the closed-form test and the maximally
    /// entangled probe does not.
    pub counterexamples: usize,
    pub dominance_violations: usize,
    pub max_dominance_excess: f64,
    pub dominance_slack: f64,
}

/// Haar-random qubit triples with random probes, alternating single-system
/// (even trials) and entangled (odd trials).
pub fn qubit_hierarchy_trial(seed: u64, trials: usize, tol: &Tolerances) -> Result<HierarchyReport> {
    qubit_hierarchy_trial_with(seed, trials, &[ProbeMode::Single, ProbeMode::Entangled], tol)
}

/// As [`qubit_hierarchy_trial`], cycling through `modes` for the probe kind.
pub fn qubit_hierarchy_trial_with(
    seed: u64,
    trials: usize,
    modes: &[ProbeMode],
    tol: &Tolerances,
) -> Result<HierarchyReport> {
    if trials == 0 || modes.is_empty() {
        return Err(Error::OutOfRange("trials and probe modes must be nonempty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = HierarchyReport {
        seed,
        trials,
        single_probe_trials: 0,
        entangled_probe_trials: 0,
        probe_passes: 0,
        maxent_passes: 0,
        counterexamples: 0,
        dominance_violations: 0,
        max_dominance_excess: f64::NEG_INFINITY,
        dominance_slack: DOMINANCE_SLACK,
    };
    for t in 0..trials {
        let triple = [haar_unitary(2, &mut rng), haar_unitary(2, &mut rng), haar_unitary(2, &mut rng)];
        let mode = modes[t % modes.len()];
        match mode {
            ProbeMode::Single => report.single_probe_trials += 1,
            ProbeMode::Entangled => report.entangled_probe_trials += 1,
        }
        let probe = random_probe(mode, 2, &mut rng);
        let out = hierarchy_check(&triple, &probe, tol)?;
        report.probe_passes += out.probe_passes as usize;
        report.maxent_passes += out.maxent_passes as usize;
        report.counterexamples += out.is_counterexample() as usize;
        report.dominance_violations += out.violates_dominance() as usize;
        report.max_dominance_excess = report.max_dominance_excess.max(out.dominance_excess);
    }
    Ok(report)
}
