use nalgebra::{DMatrix, DVector};

use super::repr::RealRepr;
use super::scalar::Quaternion;
use super::vector::QVector;
use crate::error::{shape_err, Result};

/// Dense `m x n` quaternion matrix `Q0 + Q1 i + Q2 j + Q3 k`, one real plane per component.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    planes: [DMatrix<f64>; 4],
}

/// Plane-wise Hamilton product of two conformant quaternion operands.
macro_rules! hamilton_planes {
    ($a:expr, $b:expr) => {{
        let a = $a;
        let b = $b;
        [
            &a[0] * &b[0] - &a[1] * &b[1] - &a[2] * &b[2] - &a[3] * &b[3],
            &a[0] * &b[1] + &a[1] * &b[0] + &a[2] * &b[3] - &a[3] * &b[2],
            &a[0] * &b[2] - &a[1] * &b[3] + &a[2] * &b[0] + &a[3] * &b[1],
            &a[0] * &b[3] + &a[1] * &b[2] - &a[2] * &b[1] + &a[3] * &b[0],
        ]
    }};
}

impl QMatrix {
    pub fn zeros(m: usize, n: usize) -> Self {
        QMatrix {
            planes: std::array::from_fn(|_| DMatrix::zeros(m, n)),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut q = QMatrix::zeros(n, n);
        q.planes[0] = DMatrix::identity(n, n);
        q
    }

    pub fn from_planes(planes: [DMatrix<f64>; 4]) -> Result<Self> {
        let shape = planes[0].shape();
        if planes.iter().any(|p| p.shape() != shape) {
            return Err(shape_err("matrix component planes differ in shape"));
        }
        Ok(QMatrix { planes })
    }

    /// Real matrix embedded in the real plane.
    pub fn from_real(a: DMatrix<f64>) -> Self {
        let (m, n) = a.shape();
        let mut q = QMatrix::zeros(m, n);
        q.planes[0] = a;
        q
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut q = QMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                q.set(i, j, f(i, j));
            }
        }
        q
    }

    /// Real diagonal matrix.
    pub fn from_real_diagonal(d: &[f64]) -> Self {
        QMatrix::from_real(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn from_columns(m: usize, cols: &[QVector]) -> Result<Self> {
        let mut q = QMatrix::zeros(m, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != m {
                return Err(shape_err(format!(
                    "column {j} has length {}, expected {m}",
                    c.len()
                )));
            }
            for p in 0..4 {
                q.planes[p].set_column(j, c.plane(p));
            }
        }
        Ok(q)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.planes[0].nrows()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.planes[0].ncols()
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        self.planes[0].shape()
    }

    #[inline]
    pub fn plane(&self, c: usize) -> &DMatrix<f64> {
        &self.planes[c]
    }

    #[inline]
    pub fn planes(&self) -> &[DMatrix<f64>; 4] {
        &self.planes
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        Quaternion::new(
            self.planes[0][(i, j)],
            self.planes[1][(i, j)],
            self.planes[2][(i, j)],
            self.planes[3][(i, j)],
        )
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.planes[0][(i, j)] = q.w0;
        self.planes[1][(i, j)] = q.w1;
        self.planes[2][(i, j)] = q.w2;
        self.planes[3][(i, j)] = q.w3;
    }

    pub fn column(&self, j: usize) -> QVector {
        QVector::from_planes(std::array::from_fn(|c| self.planes[c].column(j).into_owned()))
            .expect("planes share shape")
    }

    pub fn columns(&self, start: usize, count: usize) -> QMatrix {
        QMatrix {
            planes: std::array::from_fn(|c| self.planes[c].columns(start, count).into_owned()),
        }
    }

    /// True when the real plane is identically zero.
    pub fn is_pure(&self) -> bool {
        self.planes[0].iter().all(|&x| x == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.planes.iter().all(|p| p.iter().all(|x| x.is_finite()))
    }

    /// Conjugate transpose `F*`.
    pub fn conj_transpose(&self) -> QMatrix {
        QMatrix {
            planes: [
                self.planes[0].transpose(),
                -self.planes[1].transpose(),
                -self.planes[2].transpose(),
                -self.planes[3].transpose(),
            ],
        }
    }

    pub fn matvec(&self, w: &QVector) -> Result<QVector> {
        if self.ncols() != w.len() {
            return Err(shape_err(format!(
                "matrix-vector product of {}x{} matrix with vector of length {}",
                self.nrows(),
                self.ncols(),
                w.len()
            )));
        }
        QVector::from_planes(hamilton_planes!(&self.planes, w.planes()))
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.ncols() != other.nrows() {
            return Err(shape_err(format!(
                "matrix product of {}x{} and {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        Ok(QMatrix {
            planes: hamilton_planes!(&self.planes, &other.planes),
        })
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(other, "sum")?;
        Ok(QMatrix {
            planes: std::array::from_fn(|c| &self.planes[c] + &other.planes[c]),
        })
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(other, "difference")?;
        Ok(QMatrix {
            planes: std::array::from_fn(|c| &self.planes[c] - &other.planes[c]),
        })
    }

    pub fn scale(&self, r: f64) -> QMatrix {
        QMatrix {
            planes: std::array::from_fn(|c| &self.planes[c] * r),
        }
    }

    /// `F D` for a real diagonal `D` given by its entries (scales columns).
    pub fn scale_columns(&self, d: &[f64]) -> Result<QMatrix> {
        if d.len() != self.ncols() {
            return Err(shape_err(format!(
                "{} column weights for a matrix with {} columns",
                d.len(),
                self.ncols()
            )));
        }
        let mut out = self.clone();
        for p in out.planes.iter_mut() {
            for (j, &w) in d.iter().enumerate() {
                p.column_mut(j).scale_mut(w);
            }
        }
        Ok(out)
    }

    /// `D F` for a real diagonal `D` given by its entries (scales rows).
    pub fn scale_rows(&self, d: &[f64]) -> Result<QMatrix> {
        if d.len() != self.nrows() {
            return Err(shape_err(format!(
                "{} row weights for a matrix with {} rows",
                d.len(),
                self.nrows()
            )));
        }
        let mut out = self.clone();
        for p in out.planes.iter_mut() {
            for (i, &w) in d.iter().enumerate() {
                p.row_mut(i).scale_mut(w);
            }
        }
        Ok(out)
    }

    /// Quaternion Frobenius norm: root of the summed squared entry moduli.
    pub fn fro_norm(&self) -> f64 {
        self.planes.iter().map(|p| p.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn real_repr(&self) -> RealRepr {
        RealRepr::of(self)
    }

    pub fn max_abs_diff(&self, other: &QMatrix) -> f64 {
        self.planes
            .iter()
            .zip(other.planes.iter())
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    fn check_same_shape(&self, other: &QMatrix, what: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(shape_err(format!(
                "matrix {what} of {}x{} and {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        Ok(())
    }
}

pub fn matvec(f: &QMatrix, w: &QVector) -> Result<QVector> {
    f.matvec(w)
}

pub fn matmul(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    a.matmul(b)
}

pub fn conj_transpose(f: &QMatrix) -> QMatrix {
    f.conj_transpose()
}

pub fn fro_norm(f: &QMatrix) -> f64 {
    f.fro_norm()
}
