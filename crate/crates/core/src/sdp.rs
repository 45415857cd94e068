//! Minimization of `sum_k Tr(A_k N_k)` over POVMs `{N_k}`, with a dual
//! certificate `Y` satisfying `Y <= A_k` for every `k`.
//!
//! The solver alternates an affine step that restores `sum_k N_k = I` with a
//! per-effect projection onto the PSD cone, wrapped in an augmented-Lagrangian
//! (ADMM) update. The multiplier of the completeness constraint is the dual
//! variable `Y`. At every check both sides are made exactly feasible: the
//! PSD iterates are congruence-normalized into a POVM, and `Y` is shifted down
//! by `max_k lambda_max(Y - A_k)`. The reported gap is therefore a rigorous
//! bound on the suboptimality of the returned POVM.

use serde::Serialize;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::{
    c, ensure_square, frobenius_norm, hermitian_deviation, hermitian_eig, hermitian_part, lambda_max,
    psd_projection, trace, ComplexMatrix,
};

/// Costs `A_k` of the program `min sum_k Tr(A_k N_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmProgram {
    costs: Vec<ComplexMatrix>,
    dim: usize,
}

impl PovmProgram {
    pub fn new(costs: Vec<ComplexMatrix>) -> Result<Self> {
        if costs.len() < 2 {
            return Err(Error::InvalidEnsemble(format!(
                "program needs at least two costs, got {}",
                costs.len()
            )));
        }
        let dim = ensure_square(&costs[0])?;
        for a in &costs {
            let d = ensure_square(a)?;
            if d != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: d });
            }
            let deviation = hermitian_deviation(a);
            if deviation > 1e-10 {
                return Err(Error::NotHermitian { deviation });
            }
        }
        let costs = costs.iter().map(hermitian_part).collect();
        Ok(Self { costs, dim })
    }

    pub fn costs(&self) -> &[ComplexMatrix] {
        &self.costs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn objective(&self, povm: &Povm) -> f64 {
        self.costs
            .iter()
            .zip(&povm.effects)
            .map(|(a, n)| (a * n).trace().re)
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            costs: self.costs.iter().map(|a| a * c(factor, 0.0)).collect(),
            dim: self.dim,
        }
    }
}

/// A measurement: PSD effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    pub effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn dim(&self) -> usize {
        self.effects.first().map_or(0, |e| e.nrows())
    }

    /// `||sum_b N_b - I||_F`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &self.effects {
            sum += e;
        }
        frobenius_norm(&(sum - ComplexMatrix::identity(d, d)))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.effects
            .iter()
            .map(|e| hermitian_eig(e).0.first().copied().unwrap_or(0.0))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.completeness_residual() <= tol && self.min_eigenvalue() >= -tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PovmSolution {
    pub povm: Povm,
    /// Objective of `povm`; an upper bound on the optimum.
    pub primal: f64,
    /// Dual-feasible certificate; `Tr(dual_y)` is a lower bound on the optimum.
    pub dual_y: ComplexMatrix,
    pub gap: f64,
    pub iterations: usize,
}

impl PovmSolution {
    pub fn dual_value(&self) -> f64 {
        trace(&self.dual_y).re
    }
}

#[derive(Serialize)]
struct IterationRecord {
    iteration: usize,
    primal: f64,
    dual: f64,
    gap: f64,
    primal_residual: f64,
    dual_residual: f64,
    penalty: f64,
}

/// `max_k lambda_max(Y - A_k)`; `Y` is dual feasible iff this is `<= 0`.
pub fn dual_violation(p: &PovmProgram, y: &ComplexMatrix) -> f64 {
    p.costs
        .iter()
        .map(|a| lambda_max(&(y - a)))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn check_dual_feasible(p: &PovmProgram, y: &ComplexMatrix, tol: f64) -> Result<bool> {
    let d = ensure_square(y)?;
    if d != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: d });
    }
    Ok(dual_violation(p, y) <= tol)
}

/// Congruence-normalize PSD matrices into a POVM: `N_k = S^{-1/2} Z_k S^{-1/2}`
/// with `S = sum_k Z_k`; any kernel of `S` goes to the cheapest effect.
fn normalize_to_povm(p: &PovmProgram, z: &[ComplexMatrix]) -> Povm {
    let d = p.dim;
    let mut sum = ComplexMatrix::zeros(d, d);
    for zk in z {
        sum += zk;
    }
    let (vals, vecs) = hermitian_eig(&sum);
    let top = vals.last().copied().unwrap_or(0.0).max(1e-300);
    let mut inv_sqrt = ComplexMatrix::zeros(d, d);
    let mut kernel = ComplexMatrix::zeros(d, d);
    let mut has_kernel = false;
    for (j, &lam) in vals.iter().enumerate() {
        let v = vecs.column(j);
        let proj = v * v.adjoint();
        if lam > 1e-12 * top {
            inv_sqrt += proj * c(1.0 / lam.sqrt(), 0.0);
        } else {
            kernel += proj;
            has_kernel = true;
        }
    }
    let mut effects: Vec<ComplexMatrix> = z
        .iter()
        .map(|zk| hermitian_part(&(&inv_sqrt * zk * &inv_sqrt)))
        .collect();
    if has_kernel {
        let cheapest = p
            .costs
            .iter()
            .enumerate()
            .map(|(k, a)| (k, (a * &kernel).trace().re))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map_or(0, |(k, _)| k);
        effects[cheapest] += kernel;
    }
    Povm { effects }
}

struct Certificate {
    povm: Povm,
    primal: f64,
    dual_y: ComplexMatrix,
    dual: f64,
}

/// Runs the splitting iteration until the certified gap meets `cfg.gap_tol`
/// or the iteration budget is spent. Returns the best certified pair found and
/// whether the tolerance was met.
fn run(p: &PovmProgram, cfg: &SolverConfig) -> (PovmSolution, bool) {
    let n = p.len();
    let d = p.dim;
    let eye = ComplexMatrix::identity(d, d);
    let scale = p
        .costs
        .iter()
        .map(frobenius_norm)
        .fold(0.0, f64::max)
        .max(1e-12);
    let mut rho = cfg.penalty * scale;

    let mut z: Vec<ComplexMatrix> = vec![&eye * c(1.0 / n as f64, 0.0); n];
    let mut u: Vec<ComplexMatrix> = vec![ComplexMatrix::zeros(d, d); n];
    let mut m: Vec<ComplexMatrix> = z.clone();

    let initial_povm = Povm { effects: z.clone() };
    let initial_y = {
        let shift = dual_violation(p, &ComplexMatrix::zeros(d, d));
        &eye * c(-shift, 0.0)
    };
    let mut best = Certificate {
        primal: p.objective(&initial_povm),
        povm: initial_povm,
        dual: trace(&initial_y).re,
        dual_y: initial_y,
    };

    let check_every = cfg.check_every.max(1);
    let mut iterations = 0;
    let mut converged = false;
    let mut sum_v = ComplexMatrix::zeros(d, d);

    for it in 1..=cfg.max_iters {
        iterations = it;
        sum_v.fill(c(0.0, 0.0));
        for k in 0..n {
            m[k] = &z[k] - &u[k] - &p.costs[k] * c(1.0 / rho, 0.0);
            sum_v += &m[k];
        }
        let deviation = (&sum_v - &eye) * c(1.0 / n as f64, 0.0);
        for mk in m.iter_mut() {
            *mk -= &deviation;
        }

        let checking = it % check_every == 0 || it == cfg.max_iters;
        let mut dual_residual_sq = 0.0;
        for k in 0..n {
            let next = psd_projection(&(&m[k] + &u[k]));
            if checking {
                dual_residual_sq += frobenius_norm(&(&next - &z[k])).powi(2);
            }
            z[k] = next;
            u[k] += &m[k] - &z[k];
        }

        if !checking {
            continue;
        }

        let y = hermitian_part(&(&deviation * c(-rho, 0.0)));
        let shift = dual_violation(p, &y);
        let y_feasible = y - &eye * c(shift, 0.0);
        let dual = trace(&y_feasible).re;
        if dual > best.dual {
            best.dual = dual;
            best.dual_y = y_feasible;
        }
        let povm = normalize_to_povm(p, &z);
        let primal = p.objective(&povm);
        if primal < best.primal {
            best.primal = primal;
            best.povm = povm;
        }

        let primal_residual = m
            .iter()
            .zip(&z)
            .map(|(mk, zk)| frobenius_norm(&(mk - zk)).powi(2))
            .sum::<f64>()
            .sqrt();
        let dual_residual = rho * dual_residual_sq.sqrt();
        let gap = best.primal - best.dual;

        if cfg.verbose {
            let record = IterationRecord {
                iteration: it,
                primal: best.primal,
                dual: best.dual,
                gap,
                primal_residual,
                dual_residual,
                penalty: rho,
            };
            if let Ok(line) = serde_json::to_string(&record) {
                eprintln!("{line}");
            }
        }

        if gap <= cfg.gap_tol && best.povm.completeness_residual() <= cfg.residual_tol {
            converged = true;
            break;
        }

        // residual balancing
        if primal_residual > 10.0 * dual_residual {
            rho *= 2.0;
            for uk in u.iter_mut() {
                *uk *= c(0.5, 0.0);
            }
        } else if dual_residual > 10.0 * primal_residual {
            rho *= 0.5;
            for uk in u.iter_mut() {
                *uk *= c(2.0, 0.0);
            }
        }
    }

    let gap = (best.primal - best.dual).max(0.0);
    (
        PovmSolution {
            povm: best.povm,
            primal: best.primal,
            dual_y: best.dual_y,
            gap,
            iterations,
        },
        converged,
    )
}

/// Solve `min sum_k Tr(A_k N_k)` over POVMs to the certified gap `cfg.gap_tol`.
pub fn solve_min_povm(p: &PovmProgram, cfg: &SolverConfig) -> Result<PovmSolution> {
    let (sol, converged) = run(p, cfg);
    if converged {
        Ok(sol)
    } else {
        Err(Error::SolverFailure {
            gap: sol.gap,
            iterations: sol.iterations,
        })
    }
}

/// Like [`solve_min_povm`] but returns the best certified pair even when the
/// tolerance was not reached.
pub fn solve_best_effort(p: &PovmProgram, cfg: &SolverConfig) -> PovmSolution {
    run(p, cfg).0
}
