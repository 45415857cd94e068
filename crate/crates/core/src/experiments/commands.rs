//! Back ends of the file-driven commands.

use super::ReproReport;
use crate::config::Config;
use crate::error::Result;
use crate::states::{antidist_value, three_pure_condition, OverlapTriple, StateEnsemble, Verdict};
use crate::unitary::{
    antidist_value_with_probe, decide_three_with_probe, optimize_probe, qubit_hierarchy_trial,
    two_unitary_perfect_distinguishability, ProbeMode, ProbeSpec, UnitaryEnsemble,
};

fn verdict_of(value: f64, cfg: &Config) -> Verdict {
    if value >= 1.0 - cfg.solver.decision_tol {
        Verdict::Antidistinguishable
    } else {
        Verdict::NotAntidistinguishable
    }
}

/// Solver value of a state ensemble, with the closed-form test alongside
/// for three pure states. Returns the report and whether the ensemble is
/// perfectly antidistinguishable.
pub fn check_states(e: &StateEnsemble, cfg: &Config) -> Result<(ReproReport, bool)> {
    let mut r = ReproReport::new("check-states");
    r.param("members", e.len()).param("dim", e.dim());
    r.param("gap_tol", cfg.solver.gap_tol).param("decision_tol", cfg.solver.decision_tol);
    if let Some([a, b, c3]) = e.pure_states() {
        let x = OverlapTriple::from_states(a, b, c3)?;
        let decision = three_pure_condition(&x, cfg.tol.condition)?;
        r.info("x12", x.x1);
        r.info("x13", x.x2);
        r.info("x23", x.x3);
        r.info("sum_margin", decision.sum_margin);
        r.info("cubic_margin", decision.cubic_margin);
        r.info("closed_form_verdict", decision.verdict.to_string());
    }
    let result = antidist_value(e, &cfg.solver)?;
    r.info("value", result.value);
    r.info("upper_bound", result.upper_bound());
    r.info("gap", result.gap);
    let verdict = verdict_of(result.value, cfg);
    r.info("verdict", verdict.to_string());
    r.finish();
    Ok((r, verdict == Verdict::Antidistinguishable))
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitaryCheck {
    /// Evaluate with the given probe.
    Probe(ProbeSpec),
    /// Search for the best probe of the given kind.
    Optimize(ProbeMode),
}

/// Value of a unitary ensemble with a fixed or optimized probe.
pub fn check_unitaries(u: &UnitaryEnsemble, how: &UnitaryCheck, cfg: &Config) -> Result<(ReproReport, bool)> {
    let mut r = ReproReport::new("check-unitaries");
    r.param("members", u.len()).param("dim", u.dim());
    r.param("gap_tol", cfg.solver.gap_tol).param("decision_tol", cfg.solver.decision_tol);
    if u.len() == 2 {
        let m = u.members();
        r.info(
            "perfectly_distinguishable",
            two_unitary_perfect_distinguishability(&m[0], &m[1], &cfg.tol)?,
        );
    }
    let (probe, result) = match how {
        UnitaryCheck::Probe(p) => {
            r.param("probe", crate::io::ProbeJson::from_probe(p).kind_name());
            (p.clone(), antidist_value_with_probe(u, p, &cfg.solver)?)
        }
        UnitaryCheck::Optimize(mode) => {
            r.param("optimize", serde_json::to_value(mode).expect("serializable"));
            r.param("seed", cfg.search.seed).param("starts", cfg.search.starts);
            optimize_probe(u, *mode, cfg)?
        }
    };
    if u.len() == 3 {
        let d = decide_three_with_probe(u, &probe, cfg)?;
        r.info("sum_margin", d.sum_margin);
        r.info("cubic_margin", d.cubic_margin);
        r.info("closed_form_verdict", d.verdict.to_string());
    }
    r.info("value", result.value);
    r.info("upper_bound", result.upper_bound());
    r.info("gap", result.gap);
    let verdict = verdict_of(result.value, cfg);
    r.info("verdict", verdict.to_string());
    r.info("probe_json", serde_json::to_value(crate::io::ProbeJson::from_probe(&probe)).expect("serializable"));
    r.finish();
    Ok((r, verdict == Verdict::Antidistinguishable))
}

/// Monte Carlo hierarchy run on Haar qubit triples.
pub fn random_hierarchy(trials: usize, seed: u64, cfg: &Config) -> Result<ReproReport> {
    let h = qubit_hierarchy_trial(seed, trials, &cfg.tol)?;
    let mut r = ReproReport::new("random-hierarchy");
    r.param("trials", trials).param("seed", seed).param("rng", "ChaCha8");
    r.info("single_probe_trials", h.single_probe_trials as u64);
    r.info("entangled_probe_trials", h.entangled_probe_trials as u64);
    r.info("probe_passes", h.probe_passes as u64);
    r.info("maxent_passes", h.maxent_passes as u64);
    r.expect("counterexamples", h.counterexamples as u64, 0);
    r.expect("dominance_violations", h.dominance_violations as u64, 0);
    r.at_most("max_dominance_excess", h.max_dominance_excess, 0.0, h.dominance_slack);
    r.finish();
    Ok(r)
}
