use nalgebra::SymmetricEigen;

use super::matrix::QMatrix;
use super::ortho::{fix_phase, mgs_orthonormalize_with};
use super::vector::QVector;
use super::HERMITIAN_TOL;
use crate::error::{shape_err, Error, Result};

/// One right eigenpair `G v = v lambda` of a Hermitian quaternion matrix.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: QVector,
}

// Candidates whose residual after projection onto already accepted quaternion
// directions falls below this are copies of an accepted direction.
const SPAN_TOL: f64 = 1e-6;
const PHASE_TOL: f64 = 1e-8;

/// Top-`k` eigenpairs of a Hermitian quaternion matrix, eigenvalues descending.
///
/// Solves the symmetric eigenproblem of the real representation, whose spectrum
/// repeats each quaternion eigenvalue four times. Real eigenvectors are taken in
/// descending eigenvalue order, mapped back to quaternion vectors and kept when
/// they are not in the quaternion span of those already kept. Each kept vector
/// is normalized and phase-fixed so its leading nonzero entry is real positive.
pub fn hermitian_topk_eig(g: &QMatrix, k: usize) -> Result<Vec<EigenPair>> {
    let (m, n) = g.shape();
    if m != n {
        return Err(shape_err(format!("eigenproblem of non-square {m}x{n} matrix")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs of a {n}x{n} matrix; need 1 <= k <= n"
        )));
    }
    let asym = g.sub(&g.conj_transpose())?.fro_norm();
    if asym > HERMITIAN_TOL * g.fro_norm() {
        return Err(Error::InvalidParameter(format!(
            "matrix is not Hermitian: |G - G*|_F = {asym:e}"
        )));
    }

    let r = g.real_repr().into_matrix();
    let r = (&r + r.transpose()) * 0.5;
    let eig = SymmetricEigen::new(r);
    let mut order: Vec<usize> = (0..4 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut kept: Vec<QVector> = Vec::with_capacity(k);
    for idx in order {
        if kept.len() == k {
            break;
        }
        let x = eig.eigenvectors.column(idx);
        let cand = QVector::from_real_vec(x.as_slice())?;
        let v = match mgs_orthonormalize_with(&cand, &kept, SPAN_TOL) {
            Ok(v) => v,
            Err(Error::DegenerateDirection(_)) => continue,
            Err(e) => return Err(e),
        };
        kept.push(fix_phase(&v, PHASE_TOL));
    }
    debug_assert_eq!(kept.len(), k);

    kept.into_iter()
        .map(|v| {
            let gv = g.matvec(&v)?;
            let value = v.inner(&gv)?.w0;
            Ok(EigenPair { value, vector: v })
        })
        .collect()
}
