use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A real quaternion `w0 + w1 i + w2 j + w3 k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w0: f64, w1: f64, w2: f64, w3: f64) -> Self {
        Quaternion { w0, w1, w2, w3 }
    }

    #[inline]
    pub const fn real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    /// Pure quaternion `r i + g j + b k`, the encoding of one RGB pixel.
    #[inline]
    pub const fn pure(r: f64, g: f64, b: f64) -> Self {
        Quaternion::new(0.0, r, g, b)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Quaternion::new(self.w0, -self.w1, -self.w2, -self.w3)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w0 * self.w0 + self.w1 * self.w1 + self.w2 * self.w2 + self.w3 * self.w3
    }

    /// Modulus `|a|`.
    #[inline]
    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `a / |a|`, or exactly zero when `a = 0`.
    #[inline]
    pub fn sign(self) -> Self {
        let r = self.abs();
        if r == 0.0 {
            Quaternion::ZERO
        } else {
            self.scale(1.0 / r)
        }
    }

    #[inline]
    pub fn scale(self, r: f64) -> Self {
        Quaternion::new(self.w0 * r, self.w1 * r, self.w2 * r, self.w3 * r)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w0.is_finite() && self.w1.is_finite() && self.w2.is_finite() && self.w3.is_finite()
    }

    #[inline]
    pub fn components(self) -> [f64; 4] {
        [self.w0, self.w1, self.w2, self.w3]
    }
}

/// Hamilton product.
#[inline]
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w0 * b.w0 - a.w1 * b.w1 - a.w2 * b.w2 - a.w3 * b.w3,
        a.w0 * b.w1 + a.w1 * b.w0 + a.w2 * b.w3 - a.w3 * b.w2,
        a.w0 * b.w2 - a.w1 * b.w3 + a.w2 * b.w0 + a.w3 * b.w1,
        a.w0 * b.w3 + a.w1 * b.w2 - a.w2 * b.w1 + a.w3 * b.w0,
    )
}

#[inline]
pub fn qabs(a: Quaternion) -> f64 {
    a.abs()
}

#[inline]
pub fn qsign(a: Quaternion) -> Quaternion {
    a.sign()
}

impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w0 + rhs.w0, self.w1 + rhs.w1, self.w2 + rhs.w2, self.w3 + rhs.w3)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w0 - rhs.w0, self.w1 - rhs.w1, self.w2 - rhs.w2, self.w3 - rhs.w3)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w0, -self.w1, -self.w2, -self.w3)
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w0, self.w1, self.w2, self.w3)
    }
}
