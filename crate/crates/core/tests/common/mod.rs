//! Test-only oracles that share no code path with the library numerics.
#![allow(dead_code)]

use antidist::linalg::{c, ComplexMatrix, ComplexVector, PureState, C64};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenvalues of a Hermitian matrix via its real embedding
/// `[[Re, -Im], [Im, Re]]`, which doubles every eigenvalue.
pub fn hermitian_eigenvalues_oracle(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut a = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    let doubled = jacobi_eigenvalues(a);
    doubled.iter().step_by(2).copied().collect()
}

pub fn trace_norm_oracle(h: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues_oracle(h).iter().map(|l| l.abs()).sum()
}

/// Optimum of `min Tr(A1 N1) + Tr(A2 N2)` over two-outcome POVMs:
/// `(Tr A1 + Tr A2 - ||A1 - A2||_1) / 2`.
pub fn two_outcome_optimum(a1: &ComplexMatrix, a2: &ComplexMatrix) -> f64 {
    let t1: f64 = a1.diagonal().iter().map(|z| z.re).sum();
    let t2: f64 = a2.diagonal().iter().map(|z| z.re).sum();
    0.5 * (t1 + t2 - trace_norm_oracle(&(a1 - a2)))
}

pub fn gaussian_c<R: Rng>(rng: &mut R) -> C64 {
    c(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Random density matrix of the given rank (Wishart-style).
pub fn random_density<R: Rng>(d: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, rank, |_, _| gaussian_c(rng));
    let w = &g * g.adjoint();
    let tr: f64 = w.diagonal().iter().map(|z| z.re).sum();
    w / c(tr, 0.0)
}

pub fn ket(amps: &[(f64, f64)]) -> PureState {
    PureState::normalized(ComplexVector::from_iterator(
        amps.len(),
        amps.iter().map(|&(re, im)| c(re, im)),
    ))
    .unwrap()
}

pub fn plus() -> PureState {
    ket(&[(1.0, 0.0), (1.0, 0.0)])
}

pub fn pbr_states() -> Vec<PureState> {
    let z = PureState::basis(2, 0);
    let p = plus();
    vec![z.tensor(&z), z.tensor(&p), p.tensor(&z), p.tensor(&p)]
}

pub fn random_unitary_oracle<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    // Gram-Schmidt on Gaussian columns
    let mut cols: Vec<ComplexVector> = Vec::new();
    while cols.len() < d {
        let mut v = ComplexVector::from_fn(d, |_, _| gaussian_c(rng));
        for u in &cols {
            let p = u.dotc(&v);
            v -= u * p;
        }
        let n = v.norm();
        if n > 1e-6 {
            cols.push(v / c(n, 0.0));
        }
    }
    ComplexMatrix::from_columns(&cols)
}

/// `|<psi| W |psi>|^2` by explicit products.
pub fn direct_overlap(psi: &ComplexVector, w: &ComplexMatrix) -> f64 {
    psi.dotc(&(w * psi)).norm_sqr()
}

/// `A (x) I_d` applied to a `d*d` vector with system index major.
pub fn apply_on_system(a: &ComplexMatrix, psi: &ComplexVector) -> ComplexVector {
    let d = a.nrows();
    let mut out = ComplexVector::zeros(d * d);
    for i in 0..d {
        for k in 0..d {
            for b in 0..d {
                out[i * d + b] += a[(i, k)] * psi[k * d + b];
            }
        }
    }
    out
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Signed depth of the origin in the convex hull of `points`: the largest,
/// over triangles, of the smallest barycentric coordinate of the origin.
/// Positive inside, negative outside.
pub fn origin_hull_depth(points: &[C64]) -> f64 {
    let n = points.len();
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, cc) = (points[i], points[j], points[k]);
                let area = cross(a, b) + cross(b, cc) + cross(cc, a);
                if area.abs() < 1e-14 {
                    continue;
                }
                let lam = [cross(b, cc) / area, cross(cc, a) / area, cross(a, b) / area];
                best = best.max(lam.iter().copied().fold(f64::INFINITY, f64::min));
            }
        }
    }
    best
}
