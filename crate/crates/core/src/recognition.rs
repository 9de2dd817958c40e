//! Feature galleries and 1-nearest-neighbor classification.

use crate::dataset::SampleSet;
use crate::error::{shape_err, Error, Result};
use crate::quaternion::QMatrix;
use crate::solver::BasisPair;
use crate::weighting::{build_weights, project_with, Manner, WeightMatrices, WeightingScheme};

/// Labeled feature matrices of a training set under one basis and scheme.
#[derive(Clone, Debug)]
pub struct Gallery {
    entries: Vec<(String, QMatrix)>,
    scheme: WeightingScheme,
    weights: Option<WeightMatrices>,
    feature_shape: (usize, usize),
}

impl Gallery {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, QMatrix)] {
        &self.entries
    }

    pub fn scheme(&self) -> WeightingScheme {
        self.scheme
    }

    /// Feature matrix of an already centered image.
    pub fn features(&self, centered: &QMatrix, basis: &BasisPair) -> Result<QMatrix> {
        project_with(centered, basis, self.scheme.manner, self.weights.as_ref())
    }
}

fn scheme_weights(basis: &BasisPair, scheme: WeightingScheme) -> Result<Option<WeightMatrices>> {
    if scheme.manner == Manner::Unweighted {
        Ok(None)
    } else {
        build_weights(basis, scheme.transform).map(Some)
    }
}

/// Projects every training image, after centering by the basis mean.
pub fn build_gallery(train: &SampleSet, basis: &BasisPair, scheme: WeightingScheme) -> Result<Gallery> {
    if train.is_empty() {
        return Err(Error::InvalidDataset("cannot build a gallery from an empty set".into()));
    }
    let centered = train.center_with(&basis.mean)?;
    let weights = scheme_weights(basis, scheme)?;
    let entries = centered
        .samples()
        .iter()
        .map(|s| {
            Ok((
                s.label.clone(),
                project_with(&s.image, basis, scheme.manner, weights.as_ref())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Gallery {
        entries,
        scheme,
        weights,
        feature_shape: (basis.k1(), basis.k2()),
    })
}

/// Nearest gallery entry to a centered probe under the quaternion Frobenius
/// distance between feature matrices. Ties go to the earliest entry.
pub fn classify(
    probe: &QMatrix,
    gallery: &Gallery,
    basis: &BasisPair,
    scheme: WeightingScheme,
) -> Result<(String, f64)> {
    if gallery.is_empty() {
        return Err(Error::InvalidDataset("empty gallery".into()));
    }
    if scheme != gallery.scheme {
        return Err(Error::InvalidParameter(format!(
            "gallery was built with {:?}, probe requested {:?}",
            gallery.scheme, scheme
        )));
    }
    if (basis.k1(), basis.k2()) != gallery.feature_shape {
        return Err(shape_err("basis does not match the gallery's feature shape"));
    }
    let p = gallery.features(probe, basis)?;
    nearest(&p, gallery)
}

fn nearest(p: &QMatrix, gallery: &Gallery) -> Result<(String, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (j, (_, pj)) in gallery.entries.iter().enumerate() {
        let d = pj.sub(p)?.fro_norm();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((j, d));
        }
    }
    let (j, d) = best.expect("gallery is nonempty");
    Ok((gallery.entries[j].0.clone(), d))
}

/// Predicted label per probe, in sample order. Probes are centered by the basis mean.
pub fn predict(test: &SampleSet, gallery: &Gallery, basis: &BasisPair, scheme: WeightingScheme) -> Result<Vec<String>> {
    let centered = test.center_with(&basis.mean)?;
    centered
        .images()
        .map(|f| classify(f, gallery, basis, scheme).map(|(l, _)| l))
        .collect()
}

/// Fraction of probes whose predicted label matches their own.
pub fn evaluate(test: &SampleSet, gallery: &Gallery, basis: &BasisPair, scheme: WeightingScheme) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::InvalidDataset("empty test set".into()));
    }
    let predicted = predict(test, gallery, basis, scheme)?;
    let hits = predicted.iter().zip(test.labels()).filter(|(p, t)| p.as_str() == *t).count();
    Ok(hits as f64 / test.len() as f64)
}
