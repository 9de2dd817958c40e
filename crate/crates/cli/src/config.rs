//! TOML run configuration.
//!
//! ```toml
//! [dataset]
//! root = "faces"            # relative to the config file
//! split = [0.8, 0.1, 0.1]
//! seed = 0
//!
//! [model]
//! s = 2.0
//! p = "inf"                 # or any number > 0
//! k1 = 8
//! k2 = 8
//! tol = 1e-4
//! max_iter = 500
//!
//! [weighting]
//! manner = "both"           # unweighted | left | right | both
//! transform = "identity"    # identity | inverse_log
//!
//! [selection]
//! repeats = 3
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use biqpca::dataset::SplitFractions;
use biqpca::solver::{FitParams, DEFAULT_MAX_ITER, DEFAULT_TOL};
use biqpca::weighting::{Manner, Transform, WeightingScheme};
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dataset: RawDataset,
    model: RawModel,
    #[serde(default)]
    weighting: RawWeighting,
    #[serde(default)]
    selection: RawSelection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    root: PathBuf,
    split: Option<Vec<f64>>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    s: f64,
    p: RawExponent,
    k1: usize,
    k2: usize,
    tol: Option<f64>,
    max_iter: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawExponent {
    Number(f64),
    Text(String),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawWeighting {
    manner: Option<String>,
    transform: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSelection {
    repeats: Option<usize>,
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub dataset_root: PathBuf,
    pub split: SplitFractions,
    pub seed: u64,
    pub params: FitParams,
    pub scheme: WeightingScheme,
    pub repeats: usize,
}

/// Parses and validates configuration text, reporting every violation at once.
pub fn parse_config(text: &str) -> Result<Config, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Validation(vec![e.to_string()]))?;
    let mut errors = Vec::new();

    let p = match raw.model.p {
        RawExponent::Number(p) => p,
        RawExponent::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" => f64::INFINITY,
            _ => {
                errors.push(format!("model.p must be a number or \"inf\", got {t:?}"));
                f64::NAN
            }
        },
    };
    let params = FitParams::new(raw.model.s, p, raw.model.k1, raw.model.k2)
        .with_tol(raw.model.tol.unwrap_or(DEFAULT_TOL))
        .with_max_iter(raw.model.max_iter.unwrap_or(DEFAULT_MAX_ITER));
    errors.extend(params.violations().into_iter().filter(|v| !(p.is_nan() && v.starts_with("p "))));

    let split = match raw.dataset.split.as_deref() {
        None => SplitFractions::default(),
        Some(&[train, val, test]) => {
            if [train, val, test].iter().any(|f| !f.is_finite() || *f < 0.0) || train <= 0.0 {
                errors.push(format!(
                    "dataset.split must be nonnegative with a positive training part, got [{train}, {val}, {test}]"
                ));
            } else if (train + val + test - 1.0).abs() > 1e-9 {
                errors.push(format!("dataset.split must sum to 1, got {}", train + val + test));
            }
            SplitFractions::new(train, val, test)
        }
        Some(other) => {
            errors.push(format!("dataset.split must have 3 entries, got {}", other.len()));
            SplitFractions::default()
        }
    };
    let seed = raw.dataset.seed.unwrap_or(0);

    let manner = raw.weighting.manner.as_deref().map_or(Ok(Manner::Unweighted), str::parse);
    let transform = raw.weighting.transform.as_deref().map_or(Ok(Transform::Identity), str::parse);
    let scheme = match (manner, transform) {
        (Ok(m), Ok(t)) => WeightingScheme::new(m, t),
        (m, t) => {
            for e in [m.err(), t.err()].into_iter().flatten() {
                errors.push(format!("weighting: {e}"));
            }
            WeightingScheme::unweighted()
        }
    };
    let repeats = raw.selection.repeats.unwrap_or(3);
    if repeats == 0 {
        errors.push("selection.repeats must satisfy repeats >= 1, got 0".into());
    }

    if !errors.is_empty() {
        return Err(CliError::Validation(errors));
    }
    Ok(Config {
        dataset_root: raw.dataset.root,
        split,
        seed,
        params,
        scheme,
        repeats,
    })
}

/// Reads a config file; a relative dataset root is taken relative to the file.
pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut cfg = parse_config(&text)?;
    if cfg.dataset_root.is_relative() {
        if let Some(dir) = path.parent() {
            cfg.dataset_root = dir.join(&cfg.dataset_root);
        }
    }
    Ok(cfg)
}
