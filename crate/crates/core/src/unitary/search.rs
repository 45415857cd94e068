//! Derivative-free probe search.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{
    antidist_value_with_probe, evolve_ensemble, overlap_from_spectrum, pair_spectrum, PairSpectrum, ProbeSpec,
    UnitaryEnsemble,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, PureState, UnitaryOperator, C64};
use crate::states::{antidist_lower_bound, AntidistResult, OverlapTriple};

/// Margin beyond which a three-member search stops early.
const ROBUST_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeMode {
    Single,
    Entangled,
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Product of two-level rotations, one `(angle, phase)` pair per `p < q`.
pub(crate) fn givens_unitary(d: usize, params: &[f64]) -> UnitaryOperator {
    let mut m = ComplexMatrix::identity(d, d);
    let mut k = 0;
    for p in 0..d {
        for q in p + 1..d {
            let (theta, phi) = (params[2 * k], params[2 * k + 1]);
            k += 1;
            let (s, co) = theta.sin_cos();
            let e = C64::from_polar(1.0, phi);
            for r in 0..d {
                let a = m[(r, p)];
                let b = m[(r, q)];
                m[(r, p)] = a * co + b * e * s;
                m[(r, q)] = -a * e.conj() * s + b * co;
            }
        }
    }
    UnitaryOperator::from_trusted(m)
}

fn param_count(mode: ProbeMode, d: usize) -> usize {
    match mode {
        ProbeMode::Single => 2 * d,
        ProbeMode::Entangled => d + d * (d - 1),
    }
}

fn probe_from_params(mode: ProbeMode, d: usize, x: &[f64]) -> ProbeSpec {
    let weights = softmax(&x[..d]);
    match mode {
        ProbeMode::Single => {
            let amps = ComplexVector::from_fn(d, |l, _| C64::from_polar(weights[l].sqrt(), x[d + l]));
            ProbeSpec::SingleSystem(PureState::from_trusted(amps))
        }
        ProbeMode::Entangled => ProbeSpec::from_weights(&weights, givens_unitary(d, &x[d..])),
    }
}

fn start_point(mode: ProbeMode, d: usize, start: usize, seed: u64) -> Vec<f64> {
    let n = param_count(mode, d);
    if start == 0 {
        return vec![0.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(start as u64));
    let mut x = Vec::with_capacity(n);
    for _ in 0..d {
        x.push(StandardNormal.sample(&mut rng));
    }
    for _ in d..n {
        x.push(rng.random_range(-PI..PI));
    }
    x
}

enum Objective<'a> {
    /// Margin of the closed-form test on the three pair overlaps.
    Margin([PairSpectrum; 3]),
    /// Cheap certified lower bound from the scoring solver.
    Value(&'a UnitaryEnsemble),
}

impl Objective<'_> {
    fn eval(&self, probe: &ProbeSpec, cfg: &Config) -> Result<f64> {
        match self {
            Objective::Margin(spectra) => {
                let x = OverlapTriple::new(
                    overlap_from_spectrum(probe, &spectra[0])?,
                    overlap_from_spectrum(probe, &spectra[1])?,
                    overlap_from_spectrum(probe, &spectra[2])?,
                )?;
                Ok(x.margin())
            }
            Objective::Value(u) => antidist_lower_bound(&evolve_ensemble(u, probe)?, &cfg.solver.scoring()),
        }
    }

    fn good_enough(&self, f: f64, cfg: &Config) -> bool {
        match self {
            Objective::Margin(_) => f >= ROBUST_MARGIN,
            Objective::Value(_) => f >= 1.0 - cfg.solver.decision_tol,
        }
    }
}

/// Best probe from a multi-start shrinking-step coordinate search, with the
/// value of the final candidate certified by the full solver.
///
/// Start 0 is the uniform point (equal weights, identity rotations); the
/// other starts are random with streams seeded by `seed + start`. For three
/// members the search maximizes the closed-form margin, otherwise a cheap
/// lower bound on the value.
pub fn optimize_probe(u: &UnitaryEnsemble, mode: ProbeMode, cfg: &Config) -> Result<(ProbeSpec, AntidistResult)> {
    if u.len() < 2 {
        return Err(Error::InvalidEnsemble("need at least two unitaries".into()));
    }
    let d = u.dim();
    let objective = if u.len() == 3 {
        let m = u.members();
        Objective::Margin([
            pair_spectrum(&m[0], &m[1], &cfg.tol)?,
            pair_spectrum(&m[0], &m[2], &cfg.tol)?,
            pair_spectrum(&m[1], &m[2], &cfg.tol)?,
        ])
    } else {
        Objective::Value(u)
    };

    let search = cfg.search;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in 0..search.starts.max(1) {
        let mut x = start_point(mode, d, start, search.seed);
        let mut fx = objective.eval(&probe_from_params(mode, d, &x), cfg)?;
        let mut evals = 1;
        let mut step = search.initial_step;
        while step >= search.min_step && evals < search.evals_per_start && !objective.good_enough(fx, cfg) {
            let mut improved = false;
            'coords: for i in 0..x.len() {
                for delta in [step, -step] {
                    x[i] += delta;
                    evals += 1;
                    let f = objective.eval(&probe_from_params(mode, d, &x), cfg)?;
                    if f > fx {
                        fx = f;
                        improved = true;
                        break 'coords;
                    }
                    x[i] -= delta;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best.as_ref().is_none_or(|(bf, _)| fx > *bf) {
            best = Some((fx, x));
        }
        if objective.good_enough(fx, cfg) {
            break;
        }
    }

    let (_, x) = best.expect("at least one start");
    let probe = probe_from_params(mode, d, &x);
    let result = antidist_value_with_probe(u, &probe, &cfg.solver)?;
    Ok((probe, result))
}

/// Uniformly random probe of the given kind: a Haar state, or Schmidt
/// weights uniform on the simplex with a Haar A-side basis.
pub fn random_probe<R: Rng + ?Sized>(mode: ProbeMode, d: usize, rng: &mut R) -> ProbeSpec {
    match mode {
        ProbeMode::Single => ProbeSpec::SingleSystem(crate::linalg::random_pure_state(d, rng)),
        ProbeMode::Entangled => {
            let weights: Vec<f64> = (0..d).map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
            ProbeSpec::from_weights(&weights, crate::linalg::haar_unitary(d, rng))
        }
    }
}
