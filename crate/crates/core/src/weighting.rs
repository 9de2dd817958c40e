//! Projection weighting and data-driven selection of the weighting manner.

use std::fmt;
use std::str::FromStr;

use crate::dataset::{split, SampleSet, SplitFractions};
use crate::error::{shape_err, Error, Result};
use crate::quaternion::QMatrix;
use crate::recognition::{build_gallery, evaluate};
use crate::solver::{fit, BasisPair, FitParams};

/// Which sides of the bilateral projection carry diagonal weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Manner {
    Unweighted,
    WeightedLeft,
    WeightedRight,
    WeightedBoth,
}

impl Manner {
    pub const ALL: [Manner; 4] = [
        Manner::Unweighted,
        Manner::WeightedLeft,
        Manner::WeightedRight,
        Manner::WeightedBoth,
    ];

    /// Tie-break order for selection, highest priority first.
    pub const PRECEDENCE: [Manner; 4] = [
        Manner::Unweighted,
        Manner::WeightedRight,
        Manner::WeightedLeft,
        Manner::WeightedBoth,
    ];

    pub fn weights_left(self) -> bool {
        matches!(self, Manner::WeightedLeft | Manner::WeightedBoth)
    }

    pub fn weights_right(self) -> bool {
        matches!(self, Manner::WeightedRight | Manner::WeightedBoth)
    }

    pub fn name(self) -> &'static str {
        match self {
            Manner::Unweighted => "unweighted",
            Manner::WeightedLeft => "left",
            Manner::WeightedRight => "right",
            Manner::WeightedBoth => "both",
        }
    }
}

impl fmt::Display for Manner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Manner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unweighted" => Ok(Manner::Unweighted),
            "left" => Ok(Manner::WeightedLeft),
            "right" => Ok(Manner::WeightedRight),
            "both" => Ok(Manner::WeightedBoth),
            other => Err(Error::InvalidParameter(format!(
                "unknown weighting manner {other:?}; expected unweighted, left, right or both"
            ))),
        }
    }
}

/// Function applied to the per-projector objective values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Transform {
    #[default]
    Identity,
    /// `1 / ln(d)`, natural logarithm.
    InverseLog,
}

impl Transform {
    pub fn name(self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::InverseLog => "inverse_log",
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Transform::Identity),
            "inverse_log" => Ok(Transform::InverseLog),
            other => Err(Error::InvalidParameter(format!(
                "unknown weight transform {other:?}; expected identity or inverse_log"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightingScheme {
    pub manner: Manner,
    pub transform: Transform,
}

impl WeightingScheme {
    pub const fn new(manner: Manner, transform: Transform) -> Self {
        WeightingScheme { manner, transform }
    }

    pub const fn unweighted() -> Self {
        WeightingScheme::new(Manner::Unweighted, Transform::Identity)
    }
}

impl Default for WeightingScheme {
    fn default() -> Self {
        WeightingScheme::unweighted()
    }
}

/// Diagonals of the transformed weight matrices `f(W_left)`, `f(W_right)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrices {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

fn transform_all(d: &[f64], transform: Transform, side: &str) -> Result<Vec<f64>> {
    match transform {
        Transform::Identity => Ok(d.to_vec()),
        Transform::InverseLog => d
            .iter()
            .enumerate()
            .map(|(t, &x)| {
                if !(x > 1.0 + 1e-12) || !x.is_finite() {
                    Err(Error::InvalidWeight(format!(
                        "{side} projector {} has objective {x}; inverse_log needs values above 1 \
                         (rescale the images or use the identity transform)",
                        t + 1
                    )))
                } else {
                    Ok(1.0 / x.ln())
                }
            })
            .collect(),
    }
}

pub fn build_weights(basis: &BasisPair, transform: Transform) -> Result<WeightMatrices> {
    if basis.d_left.len() != basis.k1() || basis.d_right.len() != basis.k2() {
        return Err(shape_err("weight sequences do not match projector counts"));
    }
    Ok(WeightMatrices {
        left: transform_all(&basis.d_left, transform, "left")?,
        right: transform_all(&basis.d_right, transform, "right")?,
    })
}

/// Bilateral projection `(U f(Wl))* F (V f(Wr))` with weights only on the sides
/// the scheme selects.
pub fn project(f: &QMatrix, basis: &BasisPair, scheme: WeightingScheme) -> Result<QMatrix> {
    let weights = if scheme.manner == Manner::Unweighted {
        None
    } else {
        Some(build_weights(basis, scheme.transform)?)
    };
    project_with(f, basis, scheme.manner, weights.as_ref())
}

/// [`project`] with precomputed weights.
pub fn project_with(
    f: &QMatrix,
    basis: &BasisPair,
    manner: Manner,
    weights: Option<&WeightMatrices>,
) -> Result<QMatrix> {
    if f.shape() != basis.image_shape() {
        return Err(shape_err(format!(
            "image is {}x{}, basis expects {}x{}",
            f.nrows(),
            f.ncols(),
            basis.image_shape().0,
            basis.image_shape().1
        )));
    }
    // (U D)* = D U* for real diagonal D
    let mut p = basis.u.conj_transpose().matmul(f)?.matmul(&basis.v)?;
    if manner != Manner::Unweighted {
        let w = weights.ok_or_else(|| Error::InvalidWeight("weighted projection without weights".into()))?;
        if manner.weights_left() {
            p = p.scale_rows(&w.left)?;
        }
        if manner.weights_right() {
            p = p.scale_columns(&w.right)?;
        }
    }
    Ok(p)
}

/// Parameters of the weighting-manner selection protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionConfig {
    pub repeats: usize,
    /// Relative sizes of inner-training and validation parts.
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub seed: u64,
    pub transform: Transform,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            repeats: 3,
            train_fraction: 8.0 / 9.0,
            val_fraction: 1.0 / 9.0,
            seed: 0,
            transform: Transform::Identity,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionReport {
    pub scheme: WeightingScheme,
    /// Mean validation accuracy per manner, in [`Manner::ALL`] order.
    pub accuracies: Vec<(Manner, f64)>,
    /// Per-repeat accuracies, `[repeat][manner]` in [`Manner::ALL`] order.
    pub per_repeat: Vec<[f64; 4]>,
}

/// Chooses the weighting manner by repeated inner train/validation splits.
///
/// Each repeat draws one stratified split, fits on the inner-training part and
/// scores all four manners on the same validation part. The manner with the
/// best mean accuracy wins; ties follow [`Manner::PRECEDENCE`].
pub fn select_weighting(train: &SampleSet, params: &FitParams, protocol: &SelectionConfig) -> Result<SelectionReport> {
    if protocol.repeats == 0 {
        return Err(Error::InvalidParameter("selection needs at least one repeat".into()));
    }
    let total = protocol.train_fraction + protocol.val_fraction;
    if !(protocol.train_fraction > 0.0 && protocol.val_fraction > 0.0 && total.is_finite()) {
        return Err(Error::InvalidParameter(
            "selection fractions must both be positive".into(),
        ));
    }
    for (label, idx) in train.class_indices() {
        if idx.len() < 2 {
            return Err(Error::InvalidDataset(format!(
                "class {label:?} has {} sample; weighting selection needs at least 2 per class",
                idx.len()
            )));
        }
    }
    if train.is_empty() {
        return Err(Error::InvalidDataset("empty training set".into()));
    }
    let fractions = SplitFractions::new(protocol.train_fraction / total, protocol.val_fraction / total, 0.0);

    let mut per_repeat = Vec::with_capacity(protocol.repeats);
    for r in 0..protocol.repeats {
        let parts = split(train, fractions, protocol.seed.wrapping_add(r as u64))?;
        let basis = fit(&parts.train, params)?.basis;
        let inner = parts.train.center()?;
        let val = parts.val.center_with(&basis.mean)?;
        let mut accs = [0.0; 4];
        for (slot, manner) in accs.iter_mut().zip(Manner::ALL) {
            let scheme = WeightingScheme::new(manner, protocol.transform);
            let gallery = build_gallery(&inner, &basis, scheme)?;
            *slot = evaluate(&val, &gallery, &basis, scheme)?;
        }
        per_repeat.push(accs);
    }

    let mean = |k: usize| per_repeat.iter().map(|a| a[k]).sum::<f64>() / per_repeat.len() as f64;
    let accuracies: Vec<(Manner, f64)> = Manner::ALL.iter().enumerate().map(|(k, &m)| (m, mean(k))).collect();
    let score = |m: Manner| accuracies.iter().find(|(x, _)| *x == m).map(|(_, a)| *a).unwrap_or(0.0);
    let mut best = Manner::PRECEDENCE[0];
    for &m in &Manner::PRECEDENCE[1..] {
        if score(m) > score(best) {
            best = m;
        }
    }
    Ok(SelectionReport {
        scheme: WeightingScheme::new(best, protocol.transform),
        accuracies,
        per_repeat,
    })
}
