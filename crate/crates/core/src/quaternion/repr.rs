use nalgebra::DMatrix;

use super::matrix::QMatrix;
use super::vector::QVector;
use crate::error::{shape_err, Result};

/// Real structure-preserving representation of an `m x n` quaternion matrix.
///
/// The `4m x 4n` block layout is
///
/// ```text
/// [ F0 -F1 -F2 -F3 ]
/// [ F1  F0 -F3  F2 ]
/// [ F2  F3  F0 -F1 ]
/// [ F3 -F2  F1  F0 ]
/// ```
///
/// so that `(F w)` stacked as `[y0; y1; y2; y3]` equals `repr(F) * [w0; w1; w2; w3]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRepr {
    matrix: DMatrix<f64>,
    rows: usize,
    cols: usize,
}

// (block row, block col) -> (plane, sign)
const LAYOUT: [[(usize, f64); 4]; 4] = [
    [(0, 1.0), (1, -1.0), (2, -1.0), (3, -1.0)],
    [(1, 1.0), (0, 1.0), (3, -1.0), (2, 1.0)],
    [(2, 1.0), (3, 1.0), (0, 1.0), (1, -1.0)],
    [(3, 1.0), (2, -1.0), (1, 1.0), (0, 1.0)],
];

impl RealRepr {
    pub fn of(f: &QMatrix) -> Self {
        let (m, n) = f.shape();
        let mut matrix = DMatrix::zeros(4 * m, 4 * n);
        for (br, row) in LAYOUT.iter().enumerate() {
            for (bc, &(plane, sign)) in row.iter().enumerate() {
                let block = f.plane(plane) * sign;
                matrix.view_mut((br * m, bc * n), (m, n)).copy_from(&block);
            }
        }
        RealRepr { matrix, rows: m, cols: n }
    }

    /// Quaternion dimensions `(m, n)` of the represented matrix.
    pub fn quaternion_shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// Reads the quaternion matrix back from the first block column.
    pub fn to_qmatrix(&self) -> QMatrix {
        let (m, n) = (self.rows, self.cols);
        let planes = std::array::from_fn(|c| self.matrix.view((c * m, 0), (m, n)).into_owned());
        QMatrix::from_planes(planes).expect("blocks share shape")
    }

    /// `repr(F) * w^(gamma)` mapped back to a quaternion vector.
    pub fn apply(&self, w: &QVector) -> Result<QVector> {
        if w.len() != self.cols {
            return Err(shape_err(format!(
                "real representation has {} quaternion columns, vector has length {}",
                self.cols,
                w.len()
            )));
        }
        let y = &self.matrix * w.to_real_vec();
        QVector::from_real_vec(y.as_slice())
    }
}

pub fn real_repr(f: &QMatrix) -> RealRepr {
    RealRepr::of(f)
}

/// Stacked real layout of a quaternion vector.
pub fn real_repr_vec(w: &QVector) -> Vec<f64> {
    w.to_real_vec().as_slice().to_vec()
}

pub fn from_real_vec(y: &[f64]) -> Result<QVector> {
    QVector::from_real_vec(y)
}
