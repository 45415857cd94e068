//! JSON interchange formats.
//!
//! Complex numbers are `[re, im]` pairs. Matrices are
//! `{"rows", "cols", "data"}` with `data` row-major nested lists; states are
//! `{"dim", "amps"}`.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexVector, DensityMatrix, PureState, UnitaryOperator};
use crate::states::{uniform, AntidistResult, StateEnsemble};
use crate::unitary::{ProbeSpec, UnitaryEnsemble};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Parse(format!("matrix data does not match {}x{}", self.rows, self.cols)));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i][j];
            c(re, im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub amps: Vec<[f64; 2]>,
}

impl StateJson {
    pub fn from_state(s: &PureState) -> Self {
        Self {
            dim: s.dim(),
            amps: s.amps().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        if self.amps.len() != self.dim {
            return Err(Error::Parse(format!("{} amplitudes for dimension {}", self.amps.len(), self.dim)));
        }
        PureState::new(ComplexVector::from_iterator(self.dim, self.amps.iter().map(|&[re, im]| c(re, im))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemberJson {
    Pure(StateJson),
    Mixed(MatrixJson),
}

/// Missing priors mean equal priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
    pub states: Vec<MemberJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryEnsembleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
    pub unitaries: Vec<MatrixJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    Single,
    Entangled,
    Maxent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeJson {
    pub kind: ProbeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schmidt: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_basis: Option<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultJson {
    pub value: f64,
    pub upper_bound: f64,
    pub gap: f64,
    pub povm: Vec<MatrixJson>,
    pub dual: MatrixJson,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn priors_or_uniform(priors: Option<Vec<f64>>, n: usize) -> Vec<f64> {
    priors.unwrap_or_else(|| uniform(n))
}

impl EnsembleJson {
    pub fn from_ensemble(e: &StateEnsemble) -> Self {
        let states = match e.pure_states() {
            Some(p) => p.iter().map(|s| MemberJson::Pure(StateJson::from_state(s))).collect(),
            None => e
                .members()
                .iter()
                .map(|m| MemberJson::Mixed(MatrixJson::from_matrix(m.matrix())))
                .collect(),
        };
        Self {
            priors: Some(e.priors().to_vec()),
            states,
        }
    }

    pub fn to_ensemble(&self, tol: &Tolerances) -> Result<StateEnsemble> {
        let priors = priors_or_uniform(self.priors.clone(), self.states.len());
        if self.states.iter().all(|s| matches!(s, MemberJson::Pure(_))) {
            let states = self
                .states
                .iter()
                .map(|s| match s {
                    MemberJson::Pure(p) => p.to_state(),
                    MemberJson::Mixed(_) => unreachable!(),
                })
                .collect::<Result<Vec<_>>>()?;
            return StateEnsemble::from_pure(states, priors);
        }
        let members = self
            .states
            .iter()
            .map(|s| match s {
                MemberJson::Pure(p) => Ok(p.to_state()?.density()),
                MemberJson::Mixed(m) => DensityMatrix::new(m.to_matrix()?, tol),
            })
            .collect::<Result<Vec<_>>>()?;
        StateEnsemble::from_mixed(members, priors)
    }
}

impl UnitaryEnsembleJson {
    pub fn from_ensemble(u: &UnitaryEnsemble) -> Self {
        Self {
            priors: Some(u.priors().to_vec()),
            unitaries: u.members().iter().map(|m| MatrixJson::from_matrix(m.matrix())).collect(),
        }
    }

    pub fn to_ensemble(&self) -> Result<UnitaryEnsemble> {
        let members = self
            .unitaries
            .iter()
            .map(|m| UnitaryOperator::new(m.to_matrix()?))
            .collect::<Result<Vec<_>>>()?;
        let priors = priors_or_uniform(self.priors.clone(), members.len());
        UnitaryEnsemble::new(members, priors)
    }
}

impl ProbeJson {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ProbeKind::Single => "single",
            ProbeKind::Entangled => "entangled",
            ProbeKind::Maxent => "maxent",
        }
    }

    pub fn from_probe(p: &ProbeSpec) -> Self {
        match p {
            ProbeSpec::SingleSystem(s) => Self {
                kind: ProbeKind::Single,
                state: Some(StateJson::from_state(s)),
                schmidt: None,
                a_basis: None,
            },
            ProbeSpec::Entangled { schmidt, a_basis } => Self {
                kind: ProbeKind::Entangled,
                state: None,
                schmidt: Some(schmidt.clone()),
                a_basis: Some(MatrixJson::from_matrix(a_basis.matrix())),
            },
            ProbeSpec::MaximallyEntangled => Self {
                kind: ProbeKind::Maxent,
                state: None,
                schmidt: None,
                a_basis: None,
            },
        }
    }

    pub fn to_probe(&self) -> Result<ProbeSpec> {
        let missing = |field: &str| Error::Parse(format!("probe is missing '{field}'"));
        match self.kind {
            ProbeKind::Single => Ok(ProbeSpec::SingleSystem(
                self.state.as_ref().ok_or_else(|| missing("state"))?.to_state()?,
            )),
            ProbeKind::Entangled => {
                let schmidt = self.schmidt.clone().ok_or_else(|| missing("schmidt"))?;
                let basis = self.a_basis.as_ref().ok_or_else(|| missing("a_basis"))?.to_matrix()?;
                ProbeSpec::entangled(schmidt, UnitaryOperator::new(basis)?)
            }
            ProbeKind::Maxent => Ok(ProbeSpec::MaximallyEntangled),
        }
    }
}

impl ResultJson {
    pub fn from_result(r: &AntidistResult) -> Self {
        Self {
            value: r.value,
            upper_bound: r.upper_bound(),
            gap: r.gap,
            povm: r.povm.effects.iter().map(MatrixJson::from_matrix).collect(),
            dual: MatrixJson::from_matrix(&r.dual_certificate),
        }
    }
}

pub fn parse_ensemble(text: &str, tol: &Tolerances) -> Result<StateEnsemble> {
    parse::<EnsembleJson>(text)?.to_ensemble(tol)
}

pub fn parse_unitary_ensemble(text: &str) -> Result<UnitaryEnsemble> {
    parse::<UnitaryEnsembleJson>(text)?.to_ensemble()
}

pub fn parse_probe(text: &str) -> Result<ProbeSpec> {
    parse::<ProbeJson>(text)?.to_probe()
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}
