use super::matrix::QMatrix;
use super::vector::QVector;
use super::DEGENERATE_TOL;
use crate::error::{shape_err, Error, Result};

/// Orthonormalizes `vnew` against an orthonormal `basis` by modified Gram-Schmidt.
///
/// Each update is `v <- v - u (u* v)` with the coefficient on the right. The
/// sweep is applied twice, which keeps `|u* v'|` at rounding level even when
/// `vnew` starts close to the span of `basis`.
pub fn mgs_orthonormalize(vnew: &QVector, basis: &[QVector]) -> Result<QVector> {
    mgs_orthonormalize_with(vnew, basis, DEGENERATE_TOL)
}

/// [`mgs_orthonormalize`] with an explicit degeneracy threshold. The residual is
/// rejected when its 2-norm falls below `tol * max(1, |vnew|_2)`.
pub fn mgs_orthonormalize_with(vnew: &QVector, basis: &[QVector], tol: f64) -> Result<QVector> {
    let n = vnew.len();
    if let Some(bad) = basis.iter().find(|u| u.len() != n) {
        return Err(shape_err(format!(
            "basis vector of length {} against vector of length {n}",
            bad.len()
        )));
    }
    let scale = vnew.norm2().max(1.0);
    let mut v = vnew.clone();
    for _ in 0..2 {
        for u in basis {
            let c = u.inner(&v)?;
            v = v.sub(&u.mul_right(c))?;
        }
    }
    let r = v.norm2();
    if !(r >= tol * scale) {
        return Err(Error::DegenerateDirection(format!(
            "residual norm {r:e} after orthogonalization against {} vectors",
            basis.len()
        )));
    }
    Ok(v.scale(1.0 / r))
}

/// Frobenius norm of `W* W - I`.
pub fn orthonormality_defect(w: &QMatrix) -> f64 {
    let gram = w.conj_transpose().matmul(w).expect("conformant by construction");
    gram.sub(&QMatrix::identity(w.ncols()))
        .expect("square gram matrix")
        .fro_norm()
}

/// Largest principal angle (radians) between the spans of two matrices with
/// orthonormal columns and equal column counts.
///
/// Computed as `asin` of the spectral norm of `(I - A A*) B`, which stays
/// accurate for small angles.
pub fn max_principal_angle(a: &QMatrix, b: &QMatrix) -> Result<f64> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(shape_err(format!(
            "subspace comparison of {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let coeff = a.conj_transpose().matmul(b)?;
    let residual = b.sub(&a.matmul(&coeff)?)?;
    let sv = residual.real_repr().into_matrix().singular_values();
    let sigma = sv.iter().copied().fold(0.0_f64, f64::max);
    Ok(sigma.min(1.0).asin())
}

/// Column-wise quaternion phase fix: right-multiplies `v` by a unit quaternion
/// so the first entry with modulus above `tol` becomes real and positive.
pub fn fix_phase(v: &QVector, tol: f64) -> QVector {
    match v.iter().find(|q| q.abs() > tol) {
        Some(lead) => v.mul_right(lead.sign().conj()),
        None => v.clone(),
    }
}
