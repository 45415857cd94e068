//! Explicit unitary families and set-level procedures built on them.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{c, complete_basis, ComplexMatrix, ComplexVector, PureState, UnitaryOperator, C64};
use crate::states::{extend_qubit_pure_set, Verdict};
use crate::unitary::{
    antidist_value_with_probe, decide_three_with_probe, evolve_ensemble, ProbeSpec, UnitaryEnsemble,
};

fn from_columns(cols: &[ComplexVector]) -> Result<UnitaryOperator> {
    UnitaryOperator::new(ComplexMatrix::from_columns(cols))
}

fn real_vec(v: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))
}

/// `V1 = I`; `V2` rotates the plane of basis vectors 0 and 1 by 60 degrees;
/// `V3` does the same in the plane of 0 and 2.
pub fn build_v(d: usize) -> Result<UnitaryEnsemble> {
    if d < 3 {
        return Err(Error::BadDimension(d));
    }
    let half = 0.5;
    let s = 3f64.sqrt() / 2.0;
    let rotation = |other: usize| -> Result<UnitaryOperator> {
        let mut m = ComplexMatrix::identity(d, d);
        m[(0, 0)] = c(half, 0.0);
        m[(other, 0)] = c(s, 0.0);
        m[(0, other)] = c(-s, 0.0);
        m[(other, other)] = c(half, 0.0);
        UnitaryOperator::new(m)
    };
    UnitaryEnsemble::uniform(vec![UnitaryOperator::identity(d), rotation(1)?, rotation(2)?])
}

/// `sqrt(p)|00> + sqrt(1-p)|11>` on `d (x) d`; at `p = 1` the single-system
/// probe `|0>`.
pub fn build_thm3_probe(p: f64, d: usize) -> Result<ProbeSpec> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("p = {p} outside (0, 1]")));
    }
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    if p == 1.0 {
        return Ok(ProbeSpec::SingleSystem(PureState::basis(d, 0)));
    }
    let mut schmidt = vec![0.0; d];
    schmidt[0] = p.sqrt();
    schmidt[1] = (1.0 - p).sqrt();
    ProbeSpec::entangled(schmidt, UnitaryOperator::identity(d))
}

/// Closed-form overlaps `(12, 13, 23)` of the V family evolved from
/// `build_thm3_probe(p, d)`.
pub fn thm3_overlaps(p: f64) -> [f64; 3] {
    [0.25, (1.0 - p / 2.0).powi(2), (0.5 - p / 4.0).powi(2)]
}

/// `W1 = I`, `W2 = |+><0| - |-><1|`.
pub fn build_w() -> UnitaryEnsemble {
    let w2 = from_columns(&[
        real_vec(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
        real_vec(&[-FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
    ])
    .expect("rotation is unitary");
    UnitaryEnsemble::uniform(vec![UnitaryOperator::identity(2), w2]).expect("two members")
}

fn tensor_square(u: &UnitaryEnsemble) -> UnitaryEnsemble {
    let m = u.members();
    let members = m.iter().flat_map(|a| m.iter().map(move |b| a.tensor(b))).collect();
    UnitaryEnsemble::uniform(members).expect("nonempty")
}

/// `{W_i (x) W_j}` with `i` major.
pub fn build_w_tensor() -> UnitaryEnsemble {
    tensor_square(&build_w())
}

pub const ETA_ANGLE: f64 = 5.0 * PI / 18.0;
pub const ZETA_ANGLE: f64 = 19.0 * PI / 60.0;
pub const ZETA_PHASE: f64 = 2.0 * PI / 3.0;

/// `Q1 = I`, `Q2 = |eta><0| - |eta_perp><1|`, `Q3 = |zeta><0| - |zeta_perp><1|`
/// with `eta_perp = -sin|0> + cos|1>` and
/// `zeta_perp = -e^{-i 2pi/3} sin|0> + cos|1>`.
pub fn build_q() -> UnitaryEnsemble {
    let (se, ce) = ETA_ANGLE.sin_cos();
    let (sz, cz) = ZETA_ANGLE.sin_cos();
    let eta = real_vec(&[ce, se]);
    let eta_perp = real_vec(&[-se, ce]);
    let zeta = ComplexVector::from_vec(vec![c(cz, 0.0), C64::from_polar(sz, ZETA_PHASE)]);
    let zeta_perp = ComplexVector::from_vec(vec![-C64::from_polar(sz, -ZETA_PHASE), c(cz, 0.0)]);
    let q2 = from_columns(&[eta, -eta_perp]).expect("orthonormal columns");
    let q3 = from_columns(&[zeta, -zeta_perp]).expect("orthonormal columns");
    UnitaryEnsemble::uniform(vec![UnitaryOperator::identity(2), q2, q3]).expect("three members")
}

/// `{Q_i (x) Q_j}` with `i` major.
pub fn build_q_tensor() -> UnitaryEnsemble {
    tensor_square(&build_q())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyTag {
    V(usize),
    W,
    WTensor,
    Q,
    QTensor,
}

impl FamilyTag {
    pub fn build(&self) -> Result<UnitaryEnsemble> {
        match *self {
            FamilyTag::V(d) => build_v(d),
            FamilyTag::W => Ok(build_w()),
            FamilyTag::WTensor => Ok(build_w_tensor()),
            FamilyTag::Q => Ok(build_q()),
            FamilyTag::QTensor => Ok(build_q_tensor()),
        }
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "w" => Ok(FamilyTag::W),
            "wxw" => Ok(FamilyTag::WTensor),
            "q" => Ok(FamilyTag::Q),
            "qxq" => Ok(FamilyTag::QTensor),
            other => match other.strip_prefix('v').map(str::parse::<usize>) {
                Some(Ok(d)) if d >= 3 => Ok(FamilyTag::V(d)),
                Some(Ok(d)) => Err(Error::BadDimension(d)),
                _ => Err(Error::Parse(format!("unknown family '{s}'"))),
            },
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::V(d) => write!(f, "v{d}"),
            FamilyTag::W => f.write_str("w"),
            FamilyTag::WTensor => f.write_str("wxw"),
            FamilyTag::Q => f.write_str("q"),
            FamilyTag::QTensor => f.write_str("qxq"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionReport {
    pub value: f64,
    pub gap: f64,
    pub passed: bool,
}

fn require_qubit_triple(s: &UnitaryEnsemble) -> Result<()> {
    if s.len() != 3 {
        return Err(Error::InvalidEnsemble(format!("expected three unitaries, got {}", s.len())));
    }
    if s.dim() != 2 {
        return Err(Error::BadDimension(s.dim()));
    }
    Ok(())
}

/// Value of the six-member union of two triples under a maximally entangled
/// probe. Both triples must be antidistinguishable with that probe.
pub fn union_closure_check(s1: &UnitaryEnsemble, s2: &UnitaryEnsemble, cfg: &Config) -> Result<UnionReport> {
    for (name, s) in [("first", s1), ("second", s2)] {
        require_qubit_triple(s)?;
        let decision = decide_three_with_probe(s, &ProbeSpec::MaximallyEntangled, cfg)?;
        if decision.verdict != Verdict::Antidistinguishable {
            return Err(Error::PreconditionFailed(format!(
                "{name} triple is not antidistinguishable with a maximally entangled probe"
            )));
        }
    }
    let r = antidist_value_with_probe(&s1.union(s2)?, &ProbeSpec::MaximallyEntangled, &cfg.solver)?;
    Ok(UnionReport {
        value: r.value,
        gap: r.gap,
        passed: r.value >= 1.0 - cfg.solver.decision_tol,
    })
}

/// A qubit unitary whose addition makes `u` perfectly antidistinguishable
/// with the single-system probe `probe`.
pub fn extend_unitary_set(u: &UnitaryEnsemble, probe: &PureState, cfg: &Config) -> Result<UnitaryOperator> {
    if u.dim() != 2 {
        return Err(Error::BadDimension(u.dim()));
    }
    if probe.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: probe.dim() });
    }
    let evolved = evolve_ensemble(u, &ProbeSpec::SingleSystem(probe.clone()))?;
    let states = evolved.pure_states().expect("single-system evolution is pure");
    let target = extend_qubit_pure_set(states, cfg)?;
    let to = complete_basis(&[target.amps().clone()], 2);
    let from = complete_basis(&[probe.amps().clone()], 2);
    UnitaryOperator::new(to * from.adjoint())
}
