use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{c, ComplexMatrix, ComplexVector, PureState, UnitaryOperator};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Haar-distributed unitary drawn from `rng`: QR of a complex Ginibre matrix
/// with the diagonal of `R` rotated to the positive real axis.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryOperator {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = ComplexMatrix::from_fn(d, d, |_, _| c(gaussian(rng) * scale, gaussian(rng) * scale));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let phase = if norm > 0.0 { rjj / norm } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOperator::from_trusted(q)
}

/// Deterministic Haar sample for a fixed seed.
pub fn haar_random_unitary(d: usize, seed: u64) -> UnitaryOperator {
    haar_unitary(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniformly random pure state (normalized complex Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    loop {
        let v = ComplexVector::from_fn(d, |_, _| c(gaussian(rng), gaussian(rng)));
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}
