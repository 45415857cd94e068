//! Dense complex linear algebra: validated operators and states, spectral
//! decomposition of unitaries, overlaps, Haar sampling.

mod haar;
mod spectral;

pub use haar::{haar_random_unitary, haar_unitary, random_pure_state};
pub use spectral::{hermitian_eig, lambda_max, psd_projection, unitary_eig, SpectralDecomposition};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    frobenius_norm(&(a - b))
}

/// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m^dagger) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Entries of the Hermitian matrix `|v><v|`.
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub(crate) fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// A validated `d x d` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

/// Wrap `m` as a unitary iff `||m^dagger m - I||_F <= tol`.
pub fn validate_unitary(m: ComplexMatrix, tol: f64) -> Result<UnitaryOperator> {
    let d = ensure_square(&m)?;
    ensure_finite(&m)?;
    let residual = frobenius_distance(&(m.adjoint() * &m), &ComplexMatrix::identity(d, d));
    if residual > tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(UnitaryOperator { matrix: m })
}

impl UnitaryOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_unitary(m, Tolerances::default().unitary)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d, d),
        }
    }

    /// Skips validation; for products of already validated operators.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self::from_trusted(self.matrix.adjoint())
    }

    pub fn compose(&self, other: &UnitaryOperator) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self::from_trusted(&self.matrix * &other.matrix))
    }

    /// `self^dagger * other`, the operator whose spectrum governs the pair overlap.
    pub fn relative_to(&self, other: &UnitaryOperator) -> Result<Self> {
        self.dagger().compose(other)
    }

    pub fn tensor(&self, other: &UnitaryOperator) -> Self {
        Self::from_trusted(kron(&self.matrix, &other.matrix))
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(PureState {
            amps: &self.matrix * &psi.amps,
        })
    }

    pub fn trace(&self) -> C64 {
        trace(&self.matrix)
    }
}

/// A unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: ComplexVector,
}

impl PureState {
    /// Accepts `amps` only if it has unit norm within the default tolerance.
    pub fn new(amps: ComplexVector) -> Result<Self> {
        let norm = amps.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if amps.is_empty() || (norm - 1.0).abs() > Tolerances::default().state_norm {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: ComplexVector) -> Result<Self> {
        let norm = amps.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm < 1e-300 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps: amps / c(norm, 0.0) })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(ComplexVector::from_column_slice(amps))
    }

    /// Computational basis vector `|k>` (zero-based).
    pub fn basis(d: usize, k: usize) -> Self {
        let mut amps = ComplexVector::zeros(d);
        amps[k] = ONE;
        Self { amps }
    }

    pub(crate) fn from_trusted(amps: ComplexVector) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &ComplexVector {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn tensor(&self, other: &PureState) -> Self {
        Self {
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: outer(&self.amps),
        }
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        ensure_square(&m)?;
        ensure_finite(&m)?;
        let deviation = hermitian_deviation(&m);
        if deviation > tol.hermitian {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = trace(&m);
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let (vals, _) = hermitian_eig(&m);
        let min_eigenvalue = vals.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol.psd {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn conjugate_by(&self, u: &UnitaryOperator) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Ok(Self {
            matrix: u.matrix() * &self.matrix * u.matrix().adjoint(),
        })
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.density()
    }
}

/// Symmetric matrix of squared overlaps `|<psi_i|psi_j>|^2` with unit diagonal.
pub fn gram_overlaps(states: &[PureState]) -> Result<DMatrix<f64>> {
    let n = states.len();
    if let Some(first) = states.first() {
        for s in states {
            if s.dim() != first.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: s.dim(),
                });
            }
        }
    }
    let mut g = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = states[i].inner(&states[j]).norm_sqr().clamp(0.0, 1.0);
            g[(i, j)] = x;
            g[(j, i)] = x;
        }
    }
    Ok(g)
}

/// Extend the columns of `cols` (orthonormal) to an orthonormal basis of `C^d`
/// by Gram-Schmidt over the computational basis vectors in order.
pub fn complete_basis(cols: &[ComplexVector], d: usize) -> ComplexMatrix {
    let mut basis: Vec<ComplexVector> = cols.to_vec();
    for k in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = ComplexVector::zeros(d);
        v[k] = ONE;
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / c(norm, 0.0));
        }
    }
    ComplexMatrix::from_columns(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn w2() -> ComplexMatrix {
        let h = FRAC_1_SQRT_2;
        ComplexMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(-h, 0.0), c(h, 0.0), c(h, 0.0)])
    }

    #[test]
    fn identity_is_unitary() {
        assert!(validate_unitary(ComplexMatrix::identity(2, 2), 1e-10).is_ok());
    }

    #[test]
    fn w2_is_unitary() {
        assert!(validate_unitary(w2(), 1e-10).is_ok());
    }

    #[test]
    fn stretched_diagonal_is_rejected() {
        let m = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![ONE, c(1.1, 0.0)]));
        match validate_unitary(m, 1e-10) {
            Err(Error::NotUnitary { residual }) => assert!((residual - 0.21).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_square_is_rejected() {
        let m = ComplexMatrix::zeros(2, 3);
        assert_eq!(
            validate_unitary(m, 1e-10),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn gram_of_orthogonal_pair() {
        let g = gram_overlaps(&[PureState::basis(2, 0), PureState::basis(2, 1)]).unwrap();
        assert_eq!(g[(0, 1)], 0.0);
        assert_eq!(g[(0, 0)], 1.0);
    }

    #[test]
    fn gram_of_zero_and_plus() {
        let plus = PureState::normalized(ComplexVector::from_vec(vec![ONE, ONE])).unwrap();
        let g = gram_overlaps(&[PureState::basis(2, 0), plus]).unwrap();
        assert!((g[(0, 1)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gram_of_evolved_v_states() {
        // |w1>, 1/2|w1> + sqrt3/2|w2>, 1/2|w1> + sqrt3/2|w3>
        let s = 3f64.sqrt() / 2.0;
        let a = PureState::basis(3, 0);
        let b = PureState::from_slice(&[c(0.5, 0.0), c(s, 0.0), c(0.0, 0.0)]).unwrap();
        let cc = PureState::from_slice(&[c(0.5, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
        let g = gram_overlaps(&[a, b, cc]).unwrap();
        assert!((g[(0, 1)] - 0.25).abs() < 1e-15);
        assert!((g[(0, 2)] - 0.25).abs() < 1e-15);
        assert!((g[(1, 2)] - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn gram_dimension_mismatch() {
        let r = gram_overlaps(&[PureState::basis(2, 0), PureState::basis(3, 0)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        let tol = Tolerances::default();
        let rho = PureState::basis(2, 1).density();
        assert!(DensityMatrix::new(rho.matrix().clone(), &tol).is_ok());
        let bad = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(DensityMatrix::new(bad, &tol), Err(Error::NotPsd { .. })));
        let bad_trace = ComplexMatrix::identity(2, 2);
        assert!(matches!(DensityMatrix::new(bad_trace, &tol), Err(Error::BadTrace { .. })));
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let r = PureState::from_slice(&[ONE, ONE]);
        assert!(matches!(r, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn completion_is_unitary() {
        let v = PureState::normalized(ComplexVector::from_vec(vec![c(0.3, 0.1), c(-0.2, 0.7), c(0.0, 0.4)]))
            .unwrap();
        let basis = complete_basis(&[v.amps().clone()], 3);
        assert!(validate_unitary(basis.clone(), 1e-12).is_ok());
        assert_eq!(basis.column(0), v.amps().column(0));
    }
}
