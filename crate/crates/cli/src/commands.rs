use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use biqpca::dataset::{export_image, load_basis, load_dataset, save_basis, split, SampleSet, Split};
use biqpca::recognition::{build_gallery, predict};
use biqpca::reconstruction::{reconstruct_set, reconstruction_ratio};
use biqpca::solver::{fit, BasisPair, DirectionReport};
use biqpca::weighting::{select_weighting, SelectionConfig, SelectionReport, WeightingScheme};
use biqpca::Error;
use serde_json::{json, Value};

use crate::{CliError, Config};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    writeln!(out, "{text}").map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn load_checked(cfg: &Config) -> Result<SampleSet, CliError> {
    let set = load_dataset(&cfg.dataset_root)?;
    let (m, n) = set.shape();
    let v = cfg.params.dimension_violations(m, n);
    if !v.is_empty() {
        return Err(CliError::Validation(v));
    }
    Ok(set)
}

fn load_split(cfg: &Config) -> Result<Split, CliError> {
    Ok(split(&load_checked(cfg)?, cfg.split, cfg.seed)?)
}

fn load_matching_basis(path: &Path, set: &SampleSet) -> Result<BasisPair, CliError> {
    let basis = load_basis(path)?;
    if basis.image_shape() != set.shape() {
        let (bm, bn) = basis.image_shape();
        let (m, n) = set.shape();
        return Err(Error::Shape(format!("basis {} expects {bm}x{bn} images, dataset has {m}x{n}", path.display())).into());
    }
    Ok(basis)
}

fn scheme_json(scheme: WeightingScheme) -> Value {
    json!({ "manner": scheme.manner.name(), "transform": scheme.transform.name() })
}

fn trace_json(reports: &[DirectionReport]) -> Value {
    reports
        .iter()
        .map(|r| {
            json!({
                "iterations": r.iterations,
                "converged": r.converged,
                "objective": r.objective_trace,
            })
        })
        .collect()
}

fn p_json(p: f64) -> Value {
    if p.is_infinite() {
        json!("inf")
    } else {
        json!(p)
    }
}

/// Fits a basis on the training split and writes it to `basis_path`.
pub fn cmd_fit(cfg: &Config, basis_path: &Path, out: &mut dyn Write) -> Result<BasisPair, CliError> {
    let parts = load_split(cfg)?;
    let result = fit(&parts.train, &cfg.params)?;
    save_basis(&result.basis, basis_path)?;
    let b = &result.basis;
    let (m, n) = b.image_shape();
    emit(
        out,
        &json!({
            "basis": basis_path.display().to_string(),
            "image_shape": [m, n],
            "training_samples": parts.train.len(),
            "s": b.s,
            "p": p_json(b.p),
            "k1": b.k1(),
            "k2": b.k2(),
            "d_left": b.d_left,
            "d_right": b.d_right,
            "left": trace_json(&result.report.left),
            "right": trace_json(&result.report.right),
            "warnings": result.report.warnings(),
        }),
    )?;
    Ok(result.basis)
}

/// Runs weighting selection on the training split and records the choice in
/// the JSON manifest, keeping any other keys already there.
pub fn cmd_select_weighting(
    cfg: &Config,
    manifest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<SelectionReport, CliError> {
    let parts = load_split(cfg)?;
    let protocol = SelectionConfig {
        repeats: cfg.repeats,
        seed: cfg.seed,
        transform: cfg.scheme.transform,
        ..SelectionConfig::default()
    };
    let report = select_weighting(&parts.train, &cfg.params, &protocol)?;

    let w = |e: std::io::Error| CliError::Io(format!("stdout: {e}"));
    writeln!(out, "manner      accuracy").map_err(w)?;
    for (manner, acc) in &report.accuracies {
        writeln!(out, "{:<11} {acc:.6}", manner.name()).map_err(w)?;
    }
    writeln!(out, "chosen: {}", report.scheme.manner).map_err(w)?;

    if let Some(path) = manifest {
        let mut doc = match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str::<Value>(&text)
                .ok()
                .filter(Value::is_object)
                .ok_or_else(|| CliError::Io(format!("{}: manifest is not a JSON object", path.display())))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => json!({}),
            Err(e) => return Err(io_err(path)(e)),
        };
        let accuracies: serde_json::Map<String, Value> =
            report.accuracies.iter().map(|(m, a)| (m.name().to_string(), json!(a))).collect();
        doc["weighting"] = json!({
            "manner": report.scheme.manner.name(),
            "transform": report.scheme.transform.name(),
            "accuracies": accuracies,
            "repeats": cfg.repeats,
            "seed": cfg.seed,
        });
        let text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
        fs::write(path, text + "\n").map_err(io_err(path))?;
    }
    Ok(report)
}

/// Optional files written by [`cmd_recognize`].
#[derive(Clone, Debug, Default)]
pub struct RecognizeOutputs {
    /// `true,predicted,count` rows.
    pub confusion_csv: Option<PathBuf>,
    /// Largest `k` of a `k1 = k2 = k` accuracy sweep, and where to write it.
    pub sweep: Option<(usize, PathBuf)>,
}

fn accuracy(predicted: &[String], test: &SampleSet) -> f64 {
    let hits = predicted.iter().zip(test.labels()).filter(|(p, t)| p.as_str() == *t).count();
    hits as f64 / test.len() as f64
}

/// Classifies the test split against a gallery of the training split.
pub fn cmd_recognize(
    cfg: &Config,
    basis_path: &Path,
    outputs: &RecognizeOutputs,
    out: &mut dyn Write,
) -> Result<f64, CliError> {
    let parts = load_split(cfg)?;
    if parts.test.is_empty() {
        return Err(Error::InvalidDataset("the test split is empty; give dataset.split a positive test fraction".into()).into());
    }
    let basis = load_matching_basis(basis_path, &parts.train)?;
    if let Some((k, _)) = &outputs.sweep {
        let limit = basis.k1().min(basis.k2());
        if *k < 1 || *k > limit {
            return Err(CliError::Validation(vec![format!(
                "sweep bound must satisfy 1 <= k <= min(k1, k2) = {limit}, got {k}"
            )]));
        }
    }
    let scheme = cfg.scheme;
    let gallery = build_gallery(&parts.train, &basis, scheme)?;
    let predicted = predict(&parts.test, &gallery, &basis, scheme)?;
    let acc = accuracy(&predicted, &parts.test);

    if let Some(path) = &outputs.confusion_csv {
        let mut counts: BTreeMap<(&str, &str), usize> = BTreeMap::new();
        let labels: std::collections::BTreeSet<&str> = parts.train.labels().chain(parts.test.labels()).collect();
        for t in &labels {
            for p in &labels {
                counts.insert((t, p), 0);
            }
        }
        for (t, p) in parts.test.labels().zip(&predicted) {
            *counts.entry((t, p.as_str())).or_default() += 1;
        }
        let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
        w.write_record(["true", "predicted", "count"]).map_err(csv_err(path))?;
        for ((t, p), c) in counts {
            w.write_record([t, p, &c.to_string()]).map_err(csv_err(path))?;
        }
        w.flush().map_err(io_err(path))?;
    }

    if let Some((k, path)) = &outputs.sweep {
        let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
        w.write_record(["k", "accuracy"]).map_err(csv_err(path))?;
        for j in 1..=*k {
            let b = basis.truncate(j, j)?;
            let g = build_gallery(&parts.train, &b, scheme)?;
            let a = accuracy(&predict(&parts.test, &g, &b, scheme)?, &parts.test);
            w.write_record([j.to_string(), a.to_string()]).map_err(csv_err(path))?;
        }
        w.flush().map_err(io_err(path))?;
    }

    emit(
        out,
        &json!({
            "accuracy": acc,
            "probes": parts.test.len(),
            "gallery": gallery.len(),
            "k1": basis.k1(),
            "k2": basis.k2(),
            "scheme": scheme_json(scheme),
        }),
    )?;
    Ok(acc)
}

/// Optional files written by [`cmd_reconstruct`].
#[derive(Clone, Debug, Default)]
pub struct ReconstructOutputs {
    /// Reconstructed images go to `<dir>/<label>/<file>`, in the input format.
    pub image_dir: Option<PathBuf>,
    /// `k1,k2,ratio` rows over every truncation of the basis.
    pub sweep_csv: Option<PathBuf>,
}

/// Reconstructs every image of the dataset and reports the mean ratio.
pub fn cmd_reconstruct(
    cfg: &Config,
    basis_path: &Path,
    outputs: &ReconstructOutputs,
    out: &mut dyn Write,
) -> Result<f64, CliError> {
    let set = load_checked(cfg)?;
    let basis = load_matching_basis(basis_path, &set)?;
    let scheme = cfg.scheme;
    let originals = set.raw_images();
    let recs = reconstruct_set(&set, &basis, scheme)?;
    let ratio = reconstruction_ratio(&originals, &recs)?;

    if let Some(dir) = &outputs.image_dir {
        for (i, (sample, rec)) in set.samples().iter().zip(&recs).enumerate() {
            let name = sample
                .source
                .as_deref()
                .and_then(Path::file_name)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(format!("{i}.ppm")));
            export_image(&dir.join(&sample.label).join(name), rec)?;
        }
    }

    if let Some(path) = &outputs.sweep_csv {
        let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
        w.write_record(["k1", "k2", "ratio"]).map_err(csv_err(path))?;
        for k1 in 1..=basis.k1() {
            for k2 in 1..=basis.k2() {
                let b = basis.truncate(k1, k2)?;
                let r = reconstruction_ratio(&originals, &reconstruct_set(&set, &b, scheme)?)?;
                w.write_record([k1.to_string(), k2.to_string(), r.to_string()])
                    .map_err(csv_err(path))?;
            }
        }
        w.flush().map_err(io_err(path))?;
    }

    emit(
        out,
        &json!({
            "ratio": ratio,
            "images": set.len(),
            "k1": basis.k1(),
            "k2": basis.k2(),
            "scheme": scheme_json(scheme),
        }),
    )?;
    Ok(ratio)
}
