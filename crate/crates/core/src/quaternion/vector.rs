use nalgebra::DVector;

use super::scalar::Quaternion;
use crate::error::{shape_err, Error, Result};

/// Dense quaternion column vector stored as four real component planes.
///
/// Scalars act on the right (`v * q`), matching the right-module convention
/// used by the inner product `<u, v> = u* v`.
#[derive(Clone, Debug, PartialEq)]
pub struct QVector {
    planes: [DVector<f64>; 4],
}

impl QVector {
    pub fn zeros(n: usize) -> Self {
        QVector {
            planes: std::array::from_fn(|_| DVector::zeros(n)),
        }
    }

    pub fn from_planes(planes: [DVector<f64>; 4]) -> Result<Self> {
        let n = planes[0].len();
        if planes.iter().any(|p| p.len() != n) {
            return Err(shape_err("vector component planes differ in length"));
        }
        Ok(QVector { planes })
    }

    pub fn from_quaternions(q: &[Quaternion]) -> Self {
        let mut v = QVector::zeros(q.len());
        for (i, &x) in q.iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> Quaternion) -> Self {
        let mut v = QVector::zeros(n);
        for i in 0..n {
            v.set(i, f(i));
        }
        v
    }

    /// Real vector embedded in the real plane.
    pub fn from_real(x: &[f64]) -> Self {
        let mut v = QVector::zeros(x.len());
        v.planes[0] = DVector::from_column_slice(x);
        v
    }

    /// Unit vector `e_i` of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = QVector::zeros(n);
        v.planes[0][i] = 1.0;
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.planes[0].len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn plane(&self, c: usize) -> &DVector<f64> {
        &self.planes[c]
    }

    #[inline]
    pub fn planes(&self) -> &[DVector<f64>; 4] {
        &self.planes
    }

    #[inline]
    pub fn get(&self, i: usize) -> Quaternion {
        Quaternion::new(
            self.planes[0][i],
            self.planes[1][i],
            self.planes[2][i],
            self.planes[3][i],
        )
    }

    #[inline]
    pub fn set(&mut self, i: usize, q: Quaternion) {
        self.planes[0][i] = q.w0;
        self.planes[1][i] = q.w1;
        self.planes[2][i] = q.w2;
        self.planes[3][i] = q.w3;
    }

    pub fn iter(&self) -> impl Iterator<Item = Quaternion> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    /// Element-wise moduli.
    pub fn abs(&self) -> Vec<f64> {
        self.iter().map(Quaternion::abs).collect()
    }

    /// Element-wise sign; zero entries stay zero.
    pub fn sign(&self) -> QVector {
        QVector::from_fn(self.len(), |i| self.get(i).sign())
    }

    /// `(sum |w_i|^p)^(1/p)`, or `max |w_i|` for `p = +inf`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let moduli = self.abs();
        Ok(lp_norm_of_moduli(&moduli, p))
    }

    pub fn norm2(&self) -> f64 {
        self.planes.iter().map(|p| p.norm_squared()).sum::<f64>().sqrt()
    }

    /// Hadamard scaling of every component plane by a real vector.
    pub fn real_scale(&self, w: &[f64]) -> Result<QVector> {
        if w.len() != self.len() {
            return Err(shape_err(format!(
                "real weight vector has length {}, quaternion vector has length {}",
                w.len(),
                self.len()
            )));
        }
        let w = DVector::from_column_slice(w);
        Ok(QVector {
            planes: std::array::from_fn(|c| self.planes[c].component_mul(&w)),
        })
    }

    pub fn scale(&self, r: f64) -> QVector {
        QVector {
            planes: std::array::from_fn(|c| &self.planes[c] * r),
        }
    }

    /// Right scalar multiplication `v q`.
    pub fn mul_right(&self, q: Quaternion) -> QVector {
        QVector::from_fn(self.len(), |i| self.get(i) * q)
    }

    /// Quaternion inner product `self* other`.
    pub fn inner(&self, other: &QVector) -> Result<Quaternion> {
        if self.len() != other.len() {
            return Err(shape_err(format!(
                "inner product of vectors of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        let mut acc = Quaternion::ZERO;
        for i in 0..self.len() {
            acc += self.get(i).conj() * other.get(i);
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &QVector) -> Result<QVector> {
        if self.len() != other.len() {
            return Err(shape_err("vector difference of unequal lengths"));
        }
        Ok(QVector {
            planes: std::array::from_fn(|c| &self.planes[c] - &other.planes[c]),
        })
    }

    pub fn add(&self, other: &QVector) -> Result<QVector> {
        if self.len() != other.len() {
            return Err(shape_err("vector sum of unequal lengths"));
        }
        Ok(QVector {
            planes: std::array::from_fn(|c| &self.planes[c] + &other.planes[c]),
        })
    }

    /// Stacked real layout `[w0; w1; w2; w3]` of length `4n`.
    pub fn to_real_vec(&self) -> DVector<f64> {
        let n = self.len();
        let mut out = DVector::zeros(4 * n);
        for c in 0..4 {
            out.rows_mut(c * n, n).copy_from(&self.planes[c]);
        }
        out
    }

    /// Inverse of [`QVector::to_real_vec`].
    pub fn from_real_vec(y: &[f64]) -> Result<QVector> {
        if !y.len().is_multiple_of(4) {
            return Err(shape_err(format!(
                "real vector of length {} is not a multiple of 4",
                y.len()
            )));
        }
        let n = y.len() / 4;
        Ok(QVector {
            planes: std::array::from_fn(|c| DVector::from_column_slice(&y[c * n..(c + 1) * n])),
        })
    }

    pub fn max_abs_diff(&self, other: &QVector) -> f64 {
        self.planes
            .iter()
            .zip(other.planes.iter())
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "norm exponent must satisfy p > 0 or p = inf, got {p}"
        )));
    }
    Ok(())
}

pub(crate) fn lp_norm_of_moduli(moduli: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        moduli.iter().copied().fold(0.0, f64::max)
    } else if p == 1.0 {
        moduli.iter().sum()
    } else if p == 2.0 {
        moduli.iter().map(|x| x * x).sum::<f64>().sqrt()
    } else {
        moduli.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Free-function form of [`QVector::abs`].
pub fn vabs(w: &QVector) -> Vec<f64> {
    w.abs()
}

/// Free-function form of [`QVector::sign`].
pub fn vsign(w: &QVector) -> QVector {
    w.sign()
}

pub fn lp_norm(w: &QVector, p: f64) -> Result<f64> {
    w.lp_norm(p)
}

/// The `w ⊚ v` operation: scale each entry of `v` by the matching real weight.
pub fn real_scale(w: &[f64], v: &QVector) -> Result<QVector> {
    v.real_scale(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion as Q;

    #[test]
    fn vabs_and_vsign_examples() {
        let w = QVector::from_quaternions(&[Q::I, Q::pure(3.0, 4.0, 0.0)]);
        assert_eq!(vabs(&w), vec![1.0, 5.0]);
        let z = QVector::from_quaternions(&[Q::ZERO, Q::new(0.0, 0.0, 0.0, 2.0)]);
        assert_eq!(vsign(&z), QVector::from_quaternions(&[Q::ZERO, Q::K]));
    }

    #[test]
    fn lp_norm_examples() {
        let w = QVector::from_quaternions(&[Q::I, Q::J]);
        assert_eq!(lp_norm(&w, 1.0).unwrap(), 2.0);
        let ones = QVector::from_real(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(lp_norm(&ones, 2.0).unwrap(), 2.0);
        let v = QVector::from_quaternions(&[Q::pure(3.0, 4.0, 0.0), Q::K]);
        assert_eq!(lp_norm(&v, f64::INFINITY).unwrap(), 5.0);
    }

    #[test]
    fn lp_norm_rejects_nonpositive_exponent() {
        let w = QVector::from_quaternions(&[Q::I]);
        assert!(matches!(lp_norm(&w, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(lp_norm(&w, -1.5), Err(Error::InvalidParameter(_))));
        assert!(matches!(lp_norm(&w, f64::NAN), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn sub_unit_exponent_is_computed_as_stated() {
        let w = QVector::from_real(&[1.0, 1.0]);
        let v = lp_norm(&w, 0.5).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn real_scale_examples() {
        let v = QVector::from_quaternions(&[Q::I, Q::J]);
        assert_eq!(real_scale(&[1.0, 1.0], &v).unwrap(), v);
        assert_eq!(real_scale(&[0.0, 0.0], &v).unwrap(), QVector::zeros(2));
        assert_eq!(
            real_scale(&[2.0, 3.0], &v).unwrap(),
            QVector::from_quaternions(&[Q::pure(2.0, 0.0, 0.0), Q::pure(0.0, 3.0, 0.0)])
        );
        assert!(matches!(real_scale(&[1.0], &v), Err(Error::Shape(_))));
    }

    #[test]
    fn real_vec_layout_round_trips() {
        let w = QVector::from_quaternions(&[Q::new(1.0, 2.0, 3.0, 4.0), Q::new(5.0, 6.0, 7.0, 8.0)]);
        let y = w.to_real_vec();
        assert_eq!(y.as_slice(), &[1.0, 5.0, 2.0, 6.0, 3.0, 7.0, 4.0, 8.0]);
        assert_eq!(QVector::from_real_vec(y.as_slice()).unwrap(), w);
        assert!(matches!(QVector::from_real_vec(&[1.0; 5]), Err(Error::Shape(_))));
    }

    #[test]
    fn inner_product_conjugates_left_argument() {
        let u = QVector::from_quaternions(&[Q::I]);
        let v = QVector::from_quaternions(&[Q::J]);
        // (-i) j = -k
        assert_eq!(u.inner(&v).unwrap(), -Q::K);
    }
}
