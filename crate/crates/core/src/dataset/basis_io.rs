//! Binary basis file.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic  "BQP1"
//! u32    format version (1)
//! u32    m, n, k1, k2
//! f64    s, p            (p = +inf encoded as IEEE +inf)
//! f64[]  U planes 0..3, each m x k1 row-major
//! f64[]  V planes 0..3, each n x k2 row-major
//! f64[]  d_left (k1), d_right (k2)
//! f64[]  mean planes 0..3, each m x n row-major
//! ```

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quaternion::QMatrix;
use crate::solver::BasisPair;

pub const BASIS_MAGIC: &[u8; 4] = b"BQP1";
pub const BASIS_VERSION: u32 = 1;

const HEADER_LEN: usize = 4 + 4 + 4 * 4 + 2 * 8;

fn put_matrix(out: &mut Vec<u8>, q: &QMatrix) {
    for c in 0..4 {
        let plane = q.plane(c);
        for i in 0..plane.nrows() {
            for j in 0..plane.ncols() {
                out.extend_from_slice(&plane[(i, j)].to_le_bytes());
            }
        }
    }
}

pub fn encode_basis(b: &BasisPair) -> Vec<u8> {
    let (m, n) = b.image_shape();
    let (k1, k2) = (b.k1(), b.k2());
    let floats = 4 * (m * k1 + n * k2 + m * n) + k1 + k2;
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * floats);
    out.extend_from_slice(BASIS_MAGIC);
    out.extend_from_slice(&BASIS_VERSION.to_le_bytes());
    for d in [m, n, k1, k2] {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    out.extend_from_slice(&b.s.to_le_bytes());
    out.extend_from_slice(&b.p.to_le_bytes());
    put_matrix(&mut out, &b.u);
    put_matrix(&mut out, &b.v);
    for x in b.d_left.iter().chain(&b.d_right) {
        out.extend_from_slice(&x.to_le_bytes());
    }
    put_matrix(&mut out, &b.mean);
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format(format!("basis file truncated at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn finite(&mut self, what: &str) -> Result<f64> {
        let x = self.f64()?;
        if !x.is_finite() {
            return Err(Error::Format(format!("non-finite value in {what}")));
        }
        Ok(x)
    }

    fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<QMatrix> {
        let mut planes = Vec::with_capacity(4);
        for _ in 0..4 {
            let mut plane = DMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    plane[(i, j)] = self.finite(what)?;
                }
            }
            planes.push(plane);
        }
        let planes: [DMatrix<f64>; 4] = planes.try_into().expect("four planes");
        QMatrix::from_planes(planes)
    }
}

pub fn decode_basis(bytes: &[u8]) -> Result<BasisPair> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != BASIS_MAGIC {
        return Err(Error::Format("bad magic; not a basis file".into()));
    }
    let version = r.u32()?;
    if version != BASIS_VERSION {
        return Err(Error::Format(format!("unsupported basis format version {version}")));
    }
    let [m, n, k1, k2] = [r.u32()?, r.u32()?, r.u32()?, r.u32()?].map(|d| d as usize);
    if m == 0 || n == 0 || k1 == 0 || k2 == 0 || k1 > m || k2 > n {
        return Err(Error::Format(format!(
            "inconsistent dimensions m={m} n={n} k1={k1} k2={k2}"
        )));
    }
    let s = r.f64()?;
    let p = r.f64()?;
    if !(s.is_finite() && s >= 1.0) || p.is_nan() || p <= 0.0 {
        return Err(Error::Format(format!("invalid hyperparameters s={s} p={p}")));
    }
    // size check before allocating anything dimension-dependent
    let floats = [m.checked_mul(k1), n.checked_mul(k2), m.checked_mul(n)]
        .into_iter()
        .try_fold(0usize, |acc, x| x.and_then(|x| x.checked_mul(4)).and_then(|x| acc.checked_add(x)))
        .and_then(|x| x.checked_add(k1 + k2))
        .and_then(|x| x.checked_mul(8));
    match floats {
        Some(len) if bytes.len() - r.pos == len => {}
        Some(len) => {
            return Err(Error::Format(format!(
                "basis payload is {} bytes, header implies {len}",
                bytes.len() - r.pos
            )))
        }
        None => return Err(Error::Format("basis dimensions overflow".into())),
    }
    let u = r.matrix(m, k1, "U")?;
    let v = r.matrix(n, k2, "V")?;
    let mut weights = Vec::with_capacity(k1 + k2);
    for _ in 0..k1 + k2 {
        let x = r.finite("weights")?;
        if x < 0.0 {
            return Err(Error::Format(format!("negative projector weight {x}")));
        }
        weights.push(x);
    }
    let d_right = weights.split_off(k1);
    let mean = r.matrix(m, n, "mean")?;
    Ok(BasisPair {
        u,
        v,
        d_left: weights,
        d_right,
        s,
        p,
        mean,
    })
}

pub fn save_basis(basis: &BasisPair, path: &Path) -> Result<()> {
    fs::write(path, encode_basis(basis)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_basis(path: &Path) -> Result<BasisPair> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_basis(&bytes).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}
