#![allow(dead_code)]

use biqpca::quaternion::{mgs_orthonormalize, QMatrix, QVector, Quaternion};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_quaternion(rng: &mut impl Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_qmatrix(rng: &mut impl Rng, m: usize, n: usize) -> QMatrix {
    QMatrix::from_fn(m, n, |_, _| random_quaternion(rng))
}

pub fn random_qvector(rng: &mut impl Rng, n: usize) -> QVector {
    QVector::from_fn(n, |_| random_quaternion(rng))
}

pub fn random_pure_qmatrix(rng: &mut impl Rng, m: usize, n: usize) -> QMatrix {
    QMatrix::from_fn(m, n, |_, _| {
        Quaternion::pure(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))
    })
}

/// Entry-wise Hamilton evaluation of `A B`, independent of the plane kernels.
pub fn hamilton_matmul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    QMatrix::from_fn(a.nrows(), b.ncols(), |i, j| {
        let mut acc = Quaternion::ZERO;
        for l in 0..a.ncols() {
            acc += a.get(i, l) * b.get(l, j);
        }
        acc
    })
}

pub fn hamilton_matvec(a: &QMatrix, w: &QVector) -> QVector {
    QVector::from_fn(a.nrows(), |i| {
        let mut acc = Quaternion::ZERO;
        for l in 0..a.ncols() {
            acc += a.get(i, l) * w.get(l);
        }
        acc
    })
}

/// `n` orthonormal quaternion vectors of length `len`.
pub fn random_orthonormal(rng: &mut impl Rng, len: usize, n: usize) -> Vec<QVector> {
    let mut out: Vec<QVector> = Vec::with_capacity(n);
    while out.len() < n {
        let v = random_qvector(rng, len);
        if let Ok(u) = mgs_orthonormalize(&v, &out) {
            out.push(u);
        }
    }
    out
}

/// Samples whose stacked matrix is `W diag(sigma) Q*` with orthonormal `W`, so
/// `sum_i F_i* F_i = Q diag(sigma^2) Q*` exactly.
pub fn samples_with_spectrum(rng: &mut impl Rng, count: usize, m: usize, sigma: &[f64]) -> (Vec<QMatrix>, QMatrix) {
    let n = sigma.len();
    let q = QMatrix::from_columns(n, &random_orthonormal(rng, n, n)).unwrap();
    let w = QMatrix::from_columns(count * m, &random_orthonormal(rng, count * m, n)).unwrap();
    let stacked = w
        .scale_columns(sigma)
        .unwrap()
        .matmul(&q.conj_transpose())
        .unwrap();
    let samples = (0..count)
        .map(|s| QMatrix::from_fn(m, n, |i, j| stacked.get(s * m + i, j)))
        .collect();
    (samples, q)
}

/// Real analogue of [`samples_with_spectrum`].
pub fn real_samples_with_spectrum(rng: &mut impl Rng, count: usize, m: usize, sigma: &[f64]) -> Vec<DMatrix<f64>> {
    let n = sigma.len();
    let orth = |rows: usize, rng: &mut dyn rand::RngCore| {
        let a = DMatrix::from_fn(rows, n, |_, _| rng.gen_range(-1.0..1.0));
        a.qr().q()
    };
    let q = orth(n, rng);
    let w = orth(count * m, rng);
    let stacked = w * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(sigma)) * q.transpose();
    (0..count).map(|s| stacked.rows(s * m, m).into_owned()).collect()
}

/// Two classes with disjoint pixel supports: class "a" lights the top-left
/// block, class "b" the bottom-right block, each with small per-image jitter.
pub fn separable_two_class(rng: &mut impl Rng, per_class: usize, m: usize, n: usize) -> Vec<(String, QMatrix)> {
    let mut out = Vec::new();
    for (label, rows, cols, color) in [
        ("a", 0..m / 2, 0..n / 2, (0.9, 0.2, 0.1)),
        ("b", m / 2..m, n / 2..n, (0.1, 0.3, 0.8)),
    ] {
        for _ in 0..per_class {
            let img = QMatrix::from_fn(m, n, |i, j| {
                if rows.contains(&i) && cols.contains(&j) {
                    let mut c = || rng.gen_range(-0.05..0.05);
                    Quaternion::pure(color.0 + c(), color.1 + c(), color.2 + c())
                } else {
                    Quaternion::ZERO
                }
            });
            out.push((label.to_string(), img));
        }
    }
    out
}

/// Largest principal angle between real column spaces (both orthonormal).
pub fn real_max_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let resid = b - a * (a.transpose() * b);
    resid.singular_values().iter().copied().fold(0.0, f64::max).min(1.0).asin()
}
