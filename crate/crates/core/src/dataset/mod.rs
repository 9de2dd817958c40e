//! Labeled sample sets: loading color images as pure quaternion matrices,
//! mean-centering, stratified splitting and basis serialization.

mod basis_io;
mod images;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use basis_io::{decode_basis, encode_basis, load_basis, save_basis, BASIS_MAGIC, BASIS_VERSION};
pub use images::{
    decode_ppm, encode_ppm, export_image, image_to_qmatrix, load_dataset, load_image,
    qmatrix_to_rgb8, RgbImage,
};

use crate::error::{Error, Result};
use crate::quaternion::QMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub label: String,
    pub image: QMatrix,
    /// File the image was read from, when it came from disk.
    pub source: Option<PathBuf>,
}

impl Sample {
    pub fn new(label: impl Into<String>, image: QMatrix) -> Self {
        Sample {
            label: label.into(),
            image,
            source: None,
        }
    }
}

/// Equally-shaped labeled quaternion images plus the mean that was removed
/// from them (zero until [`SampleSet::center`] is applied).
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    samples: Vec<Sample>,
    mean: QMatrix,
    centered: bool,
}

impl SampleSet {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        let shape = match samples.first() {
            Some(s) => s.image.shape(),
            None => (0, 0),
        };
        for s in &samples {
            if s.image.shape() != shape {
                return Err(Error::InvalidDataset(format!(
                    "image {} of class {:?} is {}x{}, expected {}x{}",
                    describe(s),
                    s.label,
                    s.image.nrows(),
                    s.image.ncols(),
                    shape.0,
                    shape.1
                )));
            }
            if !s.image.is_finite() {
                return Err(Error::InvalidDataset(format!(
                    "image {} has non-finite entries",
                    describe(s)
                )));
            }
        }
        Ok(SampleSet {
            samples,
            mean: QMatrix::zeros(shape.0, shape.1),
            centered: false,
        })
    }

    /// Builds a set from bare matrices sharing one label each.
    pub fn from_matrices<L: Into<String>>(items: impl IntoIterator<Item = (L, QMatrix)>) -> Result<Self> {
        SampleSet::new(items.into_iter().map(|(l, m)| Sample::new(l, m)).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Image dimensions `(m, n)`; `(0, 0)` for an empty set.
    pub fn shape(&self) -> (usize, usize) {
        self.mean.shape()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn images(&self) -> impl Iterator<Item = &QMatrix> {
        self.samples.iter().map(|s| &s.image)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.samples.iter().map(|s| s.label.as_str())
    }

    pub fn mean(&self) -> &QMatrix {
        &self.mean
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// Images with the stored mean added back.
    pub fn raw_images(&self) -> Vec<QMatrix> {
        self.samples
            .iter()
            .map(|s| {
                if self.centered {
                    s.image.add(&self.mean).expect("shapes checked on construction")
                } else {
                    s.image.clone()
                }
            })
            .collect()
    }

    /// The same samples in uncentered form.
    pub fn uncentered(&self) -> SampleSet {
        if !self.centered {
            return self.clone();
        }
        let samples = self
            .samples
            .iter()
            .zip(self.raw_images())
            .map(|(s, image)| Sample { image, ..s.clone() })
            .collect();
        SampleSet {
            samples,
            mean: QMatrix::zeros(self.mean.nrows(), self.mean.ncols()),
            centered: false,
        }
    }

    /// Subtracts the sample mean from every image. Idempotent: a centered set
    /// is returned unchanged with its original mean.
    pub fn center(&self) -> Result<SampleSet> {
        if self.samples.is_empty() {
            return Err(Error::InvalidDataset("cannot center an empty sample set".into()));
        }
        if self.centered {
            return Ok(self.clone());
        }
        let (m, n) = self.shape();
        let mut sum = QMatrix::zeros(m, n);
        for s in &self.samples {
            sum = sum.add(&s.image)?;
        }
        let mean = sum.scale(1.0 / self.samples.len() as f64);
        let samples = self
            .samples
            .iter()
            .map(|s| {
                Ok(Sample {
                    image: s.image.sub(&mean)?,
                    ..s.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampleSet {
            samples,
            mean,
            centered: true,
        })
    }

    /// Subtracts a given mean (typically the training mean) from every image.
    pub fn center_with(&self, mean: &QMatrix) -> Result<SampleSet> {
        let raw = self.uncentered();
        if !raw.is_empty() && raw.shape() != mean.shape() {
            return Err(Error::Shape(format!(
                "mean is {}x{}, images are {}x{}",
                mean.nrows(),
                mean.ncols(),
                raw.shape().0,
                raw.shape().1
            )));
        }
        let samples = raw
            .samples
            .iter()
            .map(|s| {
                Ok(Sample {
                    image: s.image.sub(mean)?,
                    ..s.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampleSet {
            samples,
            mean: mean.clone(),
            centered: true,
        })
    }

    /// Per-class sample indices, classes in byte-wise label order.
    pub fn class_indices(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, s) in self.samples.iter().enumerate() {
            classes.entry(s.label.as_str()).or_default().push(i);
        }
        classes
    }

    /// Subset by index, keeping the centering state and mean.
    pub fn subset(&self, indices: &[usize]) -> SampleSet {
        SampleSet {
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
            mean: self.mean.clone(),
            centered: self.centered,
        }
    }
}

fn describe(s: &Sample) -> String {
    match &s.source {
        Some(p) => p.display().to_string(),
        None => "<in-memory>".to_string(),
    }
}

pub fn center(set: &SampleSet) -> Result<SampleSet> {
    set.center()
}

/// Train/validation/test fractions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitFractions {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitFractions {
    pub const fn new(train: f64, val: f64, test: f64) -> Self {
        SplitFractions { train, val, test }
    }
}

impl Default for SplitFractions {
    fn default() -> Self {
        SplitFractions::new(0.8, 0.1, 0.1)
    }
}

#[derive(Clone, Debug)]
pub struct Split {
    pub train: SampleSet,
    pub val: SampleSet,
    pub test: SampleSet,
}

/// Stratified, seeded three-way split of the uncentered samples.
///
/// Per class of size `c`, each nonzero validation/test fraction `f` receives
/// `max(1, floor(c f))` samples and the training part receives the rest, so
/// rounding leftovers always go to training. Within each part samples keep
/// their original order.
pub fn split(set: &SampleSet, fractions: SplitFractions, seed: u64) -> Result<Split> {
    let SplitFractions { train, val, test } = fractions;
    let parts = [train, val, test];
    if parts.iter().any(|f| !f.is_finite() || *f < 0.0) || train <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "split fractions must be nonnegative with a positive training part, got ({train}, {val}, {test})"
        )));
    }
    if ((train + val + test) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "split fractions must sum to 1, got {}",
            train + val + test
        )));
    }
    let raw = set.uncentered();
    let needed = parts.iter().filter(|f| **f > 0.0).count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut tr, mut va, mut te) = (Vec::new(), Vec::new(), Vec::new());
    for (label, mut idx) in raw.class_indices() {
        let c = idx.len();
        if c < needed {
            return Err(Error::InvalidDataset(format!(
                "class {label:?} has {c} samples but the split needs at least {needed}"
            )));
        }
        let take = |f: f64| if f > 0.0 { ((c as f64 * f).floor() as usize).max(1) } else { 0 };
        let (n_val, n_test) = (take(val), take(test));
        if n_val + n_test >= c {
            return Err(Error::InvalidDataset(format!(
                "class {label:?} has {c} samples, too few to leave a training sample"
            )));
        }
        idx.shuffle(&mut rng);
        va.extend_from_slice(&idx[..n_val]);
        te.extend_from_slice(&idx[n_val..n_val + n_test]);
        tr.extend_from_slice(&idx[n_val + n_test..]);
    }
    for part in [&mut tr, &mut va, &mut te] {
        part.sort_unstable();
    }
    Ok(Split {
        train: raw.subset(&tr),
        val: raw.subset(&va),
        test: raw.subset(&te),
    })
}
