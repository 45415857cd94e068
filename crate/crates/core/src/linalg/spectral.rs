use std::f64::consts::PI;

use nalgebra::SymmetricEigen;

use super::{c, frobenius_distance, hermitian_part, ComplexMatrix, UnitaryOperator, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns of a
/// Hermitian matrix. Only the Hermitian part of `m` is used.
pub fn hermitian_eig(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }
    if n == 1 {
        return (vec![m[(0, 0)].re], ComplexMatrix::identity(1, 1));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Largest eigenvalue of the Hermitian part of `m`.
pub fn lambda_max(m: &ComplexMatrix) -> f64 {
    match m.nrows() {
        0 => f64::NEG_INFINITY,
        1 => m[(0, 0)].re,
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
            0.5 * (a + d) + (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt()
        }
        _ => SymmetricEigen::new(hermitian_part(m)).eigenvalues.max(),
    }
}

/// Euclidean projection of the Hermitian part of `m` onto the PSD cone.
pub fn psd_projection(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    let eig = SymmetricEigen::new(hermitian_part(m));
    if eig.eigenvalues.iter().all(|&v| v >= 0.0) {
        return hermitian_part(m);
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k];
        if lam <= 0.0 {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        out += (v * v.adjoint()) * c(lam, 0.0);
    }
    out
}

/// Eigenphases `theta_l` in `(-pi, pi]` (ascending) with orthonormal
/// eigenvectors, so that `U = sum_l e^{i theta_l} v_l v_l^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub phases: Vec<f64>,
    /// Eigenvectors as columns, in the order of `phases`.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.phases.iter().map(|&t| C64::from_polar(1.0, t)).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (l, &theta) in self.phases.iter().enumerate() {
            let v = self.eigenvectors.column(l);
            out += (v * v.adjoint()) * C64::from_polar(1.0, theta);
        }
        out
    }
}

fn phase_of(z: C64, tol: &Tolerances) -> f64 {
    if z.im.abs() <= tol.pi_snap && z.re < 0.0 {
        PI
    } else {
        z.im.atan2(z.re)
    }
}

/// Spectral decomposition of a unitary.
///
/// The Hermitian part `(U + U^dagger)/2` is diagonalized first; inside each
/// cluster of its eigenvalues (gap below `tol.degeneracy`) the restriction of
/// `(U - U^dagger)/2i` is diagonalized to split conjugate pairs and resolve the
/// basis. Phases are read off as Rayleigh quotients.
pub fn unitary_eig(u: &UnitaryOperator, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let m = u.matrix();
    let n = u.dim();
    let (cosines, mut vecs) = hermitian_eig(m);
    let skew = (m - m.adjoint()) * c(0.0, -0.5);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cosines[end] - cosines[end - 1] <= tol.degeneracy {
            end += 1;
        }
        if end - start > 1 {
            let block = vecs.columns(start, end - start).into_owned();
            let restricted = block.adjoint() * &skew * &block;
            let (_, rot) = hermitian_eig(&restricted);
            let rotated = &block * rot;
            vecs.columns_mut(start, end - start).copy_from(&rotated);
        }
        start = end;
    }

    let mut pairs: Vec<(f64, usize)> = (0..n)
        .map(|k| {
            let v = vecs.column(k);
            let rq = (v.adjoint() * m * v)[(0, 0)];
            (phase_of(rq, tol), k)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let phases: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| vecs[(i, pairs[j].1)]);
    let dec = SpectralDecomposition {
        phases,
        eigenvectors,
    };

    let residual = frobenius_distance(&dec.reconstruct(), m);
    let gram = frobenius_distance(
        &(dec.eigenvectors.adjoint() * &dec.eigenvectors),
        &ComplexMatrix::identity(n, n),
    );
    if residual > tol.eig_reconstruction || gram > tol.eig_gram {
        return Err(Error::ConvergenceFailure {
            residual: residual.max(gram),
        });
    }
    Ok(dec)
}
