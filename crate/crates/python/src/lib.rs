//! Python bindings. Matrices are nested lists of `complex`, states are
//! lists of `complex`; reports come back as JSON strings.

use antidist::constructions::FamilyTag;
use antidist::experiments::{self, ReproOptions, TheoremId};
use antidist::linalg::{ComplexMatrix, PureState, UnitaryOperator};
use antidist::states::{self, OverlapTriple};
use antidist::unitary::{self, ProbeMode, ProbeSpec};
use antidist::{Config, Error};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Matrix = Vec<Vec<Complex64>>;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: &Matrix) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(ComplexMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn from_matrix(m: &ComplexMatrix) -> Matrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn to_state(amps: &[Complex64]) -> PyResult<PureState> {
    PureState::from_slice(amps).map_err(err)
}

fn to_unitary(rows: &Matrix) -> PyResult<UnitaryOperator> {
    UnitaryOperator::new(to_matrix(rows)?).map_err(err)
}

fn config(gap_tol: f64, decision_tol: f64, seed: u64) -> Config {
    let mut cfg = Config::default();
    cfg.solver.gap_tol = gap_tol;
    cfg.solver.decision_tol = decision_tol;
    cfg.search.seed = seed;
    cfg
}

/// Solver outcome: certified value, upper bound, gap and the optimal POVM.
#[pyclass(name = "AntidistResult", frozen)]
struct PyAntidistResult(states::AntidistResult);

#[pymethods]
impl PyAntidistResult {
    #[getter]
    fn value(&self) -> f64 {
        self.0.value
    }

    #[getter]
    fn upper_bound(&self) -> f64 {
        self.0.upper_bound()
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.0.gap
    }

    #[getter]
    fn povm(&self) -> Vec<Matrix> {
        self.0.povm.effects.iter().map(from_matrix).collect()
    }

    fn __repr__(&self) -> String {
        format!("AntidistResult(value={}, gap={:e})", self.0.value, self.0.gap)
    }
}

/// Closed-form three-state decision.
#[pyclass(name = "Decision", frozen)]
struct PyDecision(states::AntidistDecision);

#[pymethods]
impl PyDecision {
    #[getter]
    fn verdict(&self) -> String {
        self.0.verdict.to_string()
    }

    #[getter]
    fn sum_margin(&self) -> f64 {
        self.0.sum_margin
    }

    #[getter]
    fn cubic_margin(&self) -> f64 {
        self.0.cubic_margin
    }

    #[getter]
    fn sdp_value(&self) -> Option<f64> {
        self.0.sdp_value
    }

    fn __repr__(&self) -> String {
        format!(
            "Decision({}, sum_margin={}, cubic_margin={})",
            self.0.verdict, self.0.sum_margin, self.0.cubic_margin
        )
    }
}

#[pyclass(name = "StateEnsemble", frozen)]
struct PyStateEnsemble(states::StateEnsemble);

#[pymethods]
impl PyStateEnsemble {
    /// Pure states with optional priors (equal by default).
    #[new]
    #[pyo3(signature = (states, priors = None))]
    fn new(states: Vec<Vec<Complex64>>, priors: Option<Vec<f64>>) -> PyResult<Self> {
        let states = states.iter().map(|s| to_state(s)).collect::<PyResult<Vec<_>>>()?;
        let e = match priors {
            Some(q) => states::StateEnsemble::from_pure(states, q),
            None => states::StateEnsemble::uniform_pure(states),
        };
        e.map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        antidist::io::parse_ensemble(text, &Default::default()).map(Self).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[pyo3(signature = (gap_tol = 1e-7))]
    fn value(&self, gap_tol: f64) -> PyResult<PyAntidistResult> {
        let cfg = config(gap_tol, 1e-6, 0).solver;
        states::antidist_value(&self.0, &cfg).map(PyAntidistResult).map_err(err)
    }

    #[pyo3(signature = (gap_tol = 1e-7, decision_tol = 1e-6))]
    fn is_perfectly_antidist(&self, gap_tol: f64, decision_tol: f64) -> PyResult<bool> {
        states::is_perfectly_antidist(&self.0, &config(gap_tol, decision_tol, 0).solver).map_err(err)
    }
}

/// Probe state for a unitary ensemble.
#[pyclass(name = "Probe", frozen)]
struct PyProbe(ProbeSpec);

#[pymethods]
impl PyProbe {
    #[staticmethod]
    fn single(amps: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self(ProbeSpec::SingleSystem(to_state(&amps)?)))
    }

    /// `sum_w sqrt(schmidt[w]) |a_w> |w>` with `a_w` the columns of `a_basis`.
    #[staticmethod]
    fn entangled(schmidt: Vec<f64>, a_basis: Matrix) -> PyResult<Self> {
        ProbeSpec::entangled(schmidt, to_unitary(&a_basis)?).map(Self).map_err(err)
    }

    #[staticmethod]
    fn maxent() -> Self {
        Self(ProbeSpec::MaximallyEntangled)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        antidist::io::parse_probe(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        antidist::io::to_json_string(&antidist::io::ProbeJson::from_probe(&self.0))
    }

    fn state(&self, d: usize) -> PyResult<Vec<Complex64>> {
        Ok(self.0.state(d).map_err(err)?.amps().iter().copied().collect())
    }

    fn __repr__(&self) -> String {
        format!("Probe({})", antidist::io::ProbeJson::from_probe(&self.0).kind_name())
    }
}

#[pyclass(name = "UnitaryEnsemble", frozen)]
struct PyUnitaryEnsemble(unitary::UnitaryEnsemble);

#[pymethods]
impl PyUnitaryEnsemble {
    #[new]
    #[pyo3(signature = (unitaries, priors = None))]
    fn new(unitaries: Vec<Matrix>, priors: Option<Vec<f64>>) -> PyResult<Self> {
        let members = unitaries.iter().map(to_unitary).collect::<PyResult<Vec<_>>>()?;
        let u = match priors {
            Some(q) => unitary::UnitaryEnsemble::new(members, q),
            None => unitary::UnitaryEnsemble::uniform(members),
        };
        u.map(Self).map_err(err)
    }

    /// Built-in family: `v3`, `v4`, ..., `w`, `wxw`, `q`, `qxq`.
    #[staticmethod]
    fn family(tag: &str) -> PyResult<Self> {
        let tag: FamilyTag = tag.parse().map_err(err)?;
        tag.build().map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        antidist::io::parse_unitary_ensemble(text).map(Self).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn members(&self) -> Vec<Matrix> {
        self.0.members().iter().map(|u| from_matrix(u.matrix())).collect()
    }

    #[pyo3(signature = (probe, gap_tol = 1e-7))]
    fn value(&self, probe: &PyProbe, gap_tol: f64) -> PyResult<PyAntidistResult> {
        let cfg = config(gap_tol, 1e-6, 0).solver;
        unitary::antidist_value_with_probe(&self.0, &probe.0, &cfg)
            .map(PyAntidistResult)
            .map_err(err)
    }

    /// Pairwise overlaps `(x12, x13, x23)` of the evolved probe; three members only.
    fn overlaps(&self, probe: &PyProbe) -> PyResult<(f64, f64, f64)> {
        let x = unitary::probe_overlaps(&self.0, &probe.0, &Default::default()).map_err(err)?;
        Ok((x.x1, x.x2, x.x3))
    }

    fn decide(&self, probe: &PyProbe) -> PyResult<PyDecision> {
        unitary::decide_three_with_probe(&self.0, &probe.0, &Config::default())
            .map(PyDecision)
            .map_err(err)
    }

    /// Best probe of the given kind (`"single"` or `"entangled"`) and its result.
    #[pyo3(signature = (mode, seed, starts = 32))]
    fn optimize(&self, mode: &str, seed: u64, starts: usize) -> PyResult<(PyProbe, PyAntidistResult)> {
        let mode = match mode {
            "single" => ProbeMode::Single,
            "entangled" => ProbeMode::Entangled,
            other => return Err(PyValueError::new_err(format!("unknown probe mode '{other}'"))),
        };
        let mut cfg = config(1e-7, 1e-6, seed);
        cfg.search.starts = starts;
        let (p, r) = unitary::optimize_probe(&self.0, mode, &cfg).map_err(err)?;
        Ok((PyProbe(p), PyAntidistResult(r)))
    }
}

/// Overlaps `(|<a|b>|^2, |<a|c>|^2, |<b|c>|^2)`.
#[pyfunction]
fn overlaps(a: Vec<Complex64>, b: Vec<Complex64>, c: Vec<Complex64>) -> PyResult<(f64, f64, f64)> {
    let x = OverlapTriple::from_states(&to_state(&a)?, &to_state(&b)?, &to_state(&c)?).map_err(err)?;
    Ok((x.x1, x.x2, x.x3))
}

#[pyfunction]
#[pyo3(signature = (x1, x2, x3, eps = 1e-9))]
fn three_pure_condition(x1: f64, x2: f64, x3: f64, eps: f64) -> PyResult<PyDecision> {
    let x = OverlapTriple::new(x1, x2, x3).map_err(err)?;
    states::three_pure_condition(&x, eps).map(PyDecision).map_err(err)
}

/// `|Tr(Ui^dagger Uj)|^2 / d^2`.
#[pyfunction]
fn maxent_overlap(ui: Matrix, uj: Matrix) -> PyResult<f64> {
    unitary::maxent_pair_overlap(&to_unitary(&ui)?, &to_unitary(&uj)?).map_err(err)
}

#[pyfunction]
fn perfectly_distinguishable(u1: Matrix, u2: Matrix) -> PyResult<bool> {
    unitary::two_unitary_perfect_distinguishability(&to_unitary(&u1)?, &to_unitary(&u2)?, &Default::default())
        .map_err(err)
}

/// Report JSON for `thm1` ... `thm9`, `thm3-interval`, or a JSON list for `all`.
#[pyfunction]
#[pyo3(signature = (theorem, seed, d = None, p = None, trials = None))]
fn repro(theorem: &str, seed: u64, d: Option<usize>, p: Option<f64>, trials: Option<usize>) -> PyResult<String> {
    let opts = ReproOptions {
        seed,
        d,
        p,
        trials,
        timing: false,
    };
    let cfg = config(1e-7, 1e-6, seed);
    if theorem.eq_ignore_ascii_case("all") {
        let reports = experiments::repro_all(&opts, &cfg).map_err(err)?;
        return Ok(serde_json::to_string_pretty(&reports).expect("serializable"));
    }
    let id: TheoremId = theorem.parse().map_err(err)?;
    experiments::repro(id, &opts, &cfg).map(|r| r.to_json()).map_err(err)
}

/// CSV rows of the two-level probe sweep with the bisected boundary appended.
#[pyfunction]
#[pyo3(signature = (d = 3, p_min = 0.01, p_max = 1.0, steps = 100))]
fn sweep_p(d: usize, p_min: f64, p_max: f64, steps: usize) -> PyResult<String> {
    experiments::sweep_p(d, p_min, p_max, steps, &Config::default())
        .map(|s| s.to_csv())
        .map_err(err)
}

#[pymodule]
fn antidist_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAntidistResult>()?;
    m.add_class::<PyDecision>()?;
    m.add_class::<PyStateEnsemble>()?;
    m.add_class::<PyProbe>()?;
    m.add_class::<PyUnitaryEnsemble>()?;
    m.add_function(wrap_pyfunction!(overlaps, m)?)?;
    m.add_function(wrap_pyfunction!(three_pure_condition, m)?)?;
    m.add_function(wrap_pyfunction!(maxent_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(perfectly_distinguishable, m)?)?;
    m.add_function(wrap_pyfunction!(repro, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_p, m)?)?;
    Ok(())
}
