//! Bilateral generalized two-dimensional quaternion PCA with Lp norms.
//!
//! Color images are pure quaternion matrices (`r i + g j + b k` per pixel).
//! [`solver::fit`] extracts left and right projector bases by a
//! minorization-maximization iteration with deflation; [`weighting`],
//! [`recognition`] and [`reconstruction`] build weighted feature matrices,
//! classify them by 1-nearest-neighbor and map them back to images.

// `!(x > 0.0)` guards are written that way so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod error;
pub mod quaternion;
pub mod recognition;
pub mod reconstruction;
pub mod solver;
pub mod weighting;

pub use error::{Error, Result};
pub use quaternion::{QMatrix, QVector, Quaternion};
