//! Mapping feature matrices back to images and the reconstruction ratio.

use crate::dataset::SampleSet;
use crate::error::{shape_err, Error, Result};
use crate::quaternion::QMatrix;
use crate::solver::BasisPair;
use crate::weighting::{build_weights, project, Manner, WeightingScheme};

/// `U f(Wl)^-1 P f(Wr)^-1 V* + mean`, inverting only the weights the scheme applied.
pub fn reconstruct(p: &QMatrix, basis: &BasisPair, scheme: WeightingScheme) -> Result<QMatrix> {
    if p.shape() != (basis.k1(), basis.k2()) {
        return Err(shape_err(format!(
            "feature matrix is {}x{}, basis has {}x{} projectors",
            p.nrows(),
            p.ncols(),
            basis.k1(),
            basis.k2()
        )));
    }
    let mut core = p.clone();
    if scheme.manner != Manner::Unweighted {
        let w = build_weights(basis, scheme.transform)?;
        let invert = |d: &[f64], side: &str| -> Result<Vec<f64>> {
            d.iter()
                .enumerate()
                .map(|(t, &x)| {
                    if x == 0.0 || !x.is_finite() {
                        Err(Error::InvalidWeight(format!(
                            "{side} weight {} is {x}; cannot invert",
                            t + 1
                        )))
                    } else {
                        Ok(1.0 / x)
                    }
                })
                .collect()
        };
        if scheme.manner.weights_left() {
            core = core.scale_rows(&invert(&w.left, "left")?)?;
        }
        if scheme.manner.weights_right() {
            core = core.scale_columns(&invert(&w.right, "right")?)?;
        }
    }
    basis
        .u
        .matmul(&core)?
        .matmul(&basis.v.conj_transpose())?
        .add(&basis.mean)
}

/// Projects each image (centered by the basis mean) and reconstructs it.
pub fn reconstruct_set(set: &SampleSet, basis: &BasisPair, scheme: WeightingScheme) -> Result<Vec<QMatrix>> {
    let centered = set.center_with(&basis.mean)?;
    centered
        .images()
        .map(|f| reconstruct(&project(f, basis, scheme)?, basis, scheme))
        .collect()
}

/// `(1/l) sum_i (1 - |F_i - F_i^rec|_F / |F_i|_F)` over uncentered originals.
pub fn reconstruction_ratio(originals: &[QMatrix], recs: &[QMatrix]) -> Result<f64> {
    if originals.is_empty() {
        return Err(Error::InvalidDataset("no images to compare".into()));
    }
    if originals.len() != recs.len() {
        return Err(shape_err(format!(
            "{} originals against {} reconstructions",
            originals.len(),
            recs.len()
        )));
    }
    let mut total = 0.0;
    for (i, (f, r)) in originals.iter().zip(recs).enumerate() {
        let norm = f.fro_norm();
        if norm == 0.0 {
            return Err(Error::InvalidDataset(format!("original image {i} is all zero")));
        }
        total += 1.0 - f.sub(r)?.fro_norm() / norm;
    }
    Ok(total / originals.len() as f64)
}

/// Ratio for a sample set against its own reconstructions.
pub fn set_reconstruction_ratio(set: &SampleSet, basis: &BasisPair, scheme: WeightingScheme) -> Result<f64> {
    let recs = reconstruct_set(set, basis, scheme)?;
    reconstruction_ratio(&set.raw_images(), &recs)
}
