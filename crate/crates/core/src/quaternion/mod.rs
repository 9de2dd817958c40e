//! Quaternion scalars, vectors and matrices with the structure-preserving real
//! representation, Gram-Schmidt orthogonalization and a Hermitian eigensolver.

mod eig;
mod matrix;
mod ortho;
mod repr;
mod scalar;
mod vector;

pub use eig::{hermitian_topk_eig, EigenPair};
pub use matrix::{conj_transpose, fro_norm, matmul, matvec, QMatrix};
pub use ortho::{
    fix_phase, max_principal_angle, mgs_orthonormalize, mgs_orthonormalize_with,
    orthonormality_defect,
};
pub use repr::{from_real_vec, real_repr, real_repr_vec, RealRepr};
pub use scalar::{qabs, qmul, qsign, Quaternion};
pub use vector::{lp_norm, real_scale, vabs, vsign, QVector};

pub(crate) use vector::{check_exponent, lp_norm_of_moduli};

/// Orthogonality target for fitted bases and Gram-Schmidt output.
pub const ORTHO_TOL: f64 = 1e-10;
/// Agreement between the Hamilton-product and real-representation paths.
pub const EQUIV_TOL: f64 = 1e-12;
/// Residual norm below which a direction is treated as lying in a span.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Relative asymmetry accepted by the Hermitian eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
