//! Projector fitting.
//!
//! Each projector maximizes `sum_i |F_i w|_s^s` subject to `|w|_p = 1` by a
//! minorization-maximization (MM) iteration: linearize the convex objective at
//! the current iterate and maximize the linear surrogate over the Lp sphere in
//! closed form. Projectors are extracted one at a time on deflated samples and
//! orthonormalized against the earlier ones. The left basis is the same
//! procedure run on `F_i*`, since `|w* F|_s = |F* w|_s`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::SampleSet;
use crate::error::{shape_err, Error, Result};
use crate::quaternion::{
    check_exponent, hermitian_topk_eig, lp_norm_of_moduli, mgs_orthonormalize, QMatrix, QVector,
    Quaternion,
};

/// Denominator guard for the relative objective change.
pub const DELTA_EPS: f64 = 1e-300;
pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Row directions `u`: objective `|u* F|_s^s`.
    Left,
    /// Column directions `v`: objective `|F v|_s^s`.
    Right,
}

/// Starting vector of each MM run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Init {
    /// All-ones real vector scaled to unit Lp norm.
    #[default]
    Ones,
    /// Uniform random quaternion entries in `[-1, 1]` from a seeded generator.
    Seeded(u64),
}

/// Modulus factor in the `0 < p < 1` update `y <- |w_ref| ⊚ |w|^(1-p) ⊚ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubUnitReference {
    /// `w_ref` is the run's starting vector.
    #[default]
    Initial,
    /// `w_ref` is the current iterate, giving `|w|^(2-p) ⊚ y`.
    Current,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitParams {
    pub s: f64,
    pub p: f64,
    pub k1: usize,
    pub k2: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub init: Init,
    pub sub_unit_reference: SubUnitReference,
}

impl FitParams {
    pub fn new(s: f64, p: f64, k1: usize, k2: usize) -> Self {
        FitParams {
            s,
            p,
            k1,
            k2,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            init: Init::Ones,
            sub_unit_reference: SubUnitReference::Initial,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn with_sub_unit_reference(mut self, r: SubUnitReference) -> Self {
        self.sub_unit_reference = r;
        self
    }

    /// Every constraint violation, in a fixed order. Image dimensions are not
    /// known here; see [`FitParams::dimension_violations`].
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.s.is_finite() && self.s >= 1.0) {
            out.push(format!("s must satisfy s >= 1 (finite), got {}", self.s));
        }
        if self.p.is_nan() || self.p <= 0.0 {
            out.push(format!("p must satisfy p > 0 or p = inf, got {}", self.p));
        }
        if self.k1 < 1 {
            out.push(format!("k1 must satisfy k1 >= 1, got {}", self.k1));
        }
        if self.k2 < 1 {
            out.push(format!("k2 must satisfy k2 >= 1, got {}", self.k2));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            out.push(format!("tol must be a positive finite number, got {}", self.tol));
        }
        if self.max_iter < 1 {
            out.push("max_iter must be at least 1".to_string());
        }
        out
    }

    pub fn dimension_violations(&self, m: usize, n: usize) -> Vec<String> {
        let mut out = Vec::new();
        if self.k1 > m {
            out.push(format!("k1 must satisfy k1 <= m = {m}, got {}", self.k1));
        }
        if self.k2 > n {
            out.push(format!("k2 must satisfy k2 <= n = {n}, got {}", self.k2));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join("; ")))
        }
    }
}

/// Trace of one MM run.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionReport {
    /// `f^0, f^1, ...` for the iterates (before orthogonalization).
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct Direction {
    pub vector: QVector,
    /// Objective of the orthonormalized vector on the deflated samples.
    pub objective: f64,
    pub report: DirectionReport,
    /// Every accepted MM iterate, starting vector included.
    pub iterates: Vec<QVector>,
}

/// Fitted left/right projector bases.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisPair {
    /// `m x k1`, orthonormal columns.
    pub u: QMatrix,
    /// `n x k2`, orthonormal columns.
    pub v: QMatrix,
    /// Objective value of each left projector on its deflated samples.
    pub d_left: Vec<f64>,
    pub d_right: Vec<f64>,
    pub s: f64,
    pub p: f64,
    /// Training mean removed before fitting.
    pub mean: QMatrix,
}

impl BasisPair {
    pub fn k1(&self) -> usize {
        self.u.ncols()
    }

    pub fn k2(&self) -> usize {
        self.v.ncols()
    }

    /// Image dimensions `(m, n)`.
    pub fn image_shape(&self) -> (usize, usize) {
        (self.u.nrows(), self.v.nrows())
    }

    /// The leading `k1` left and `k2` right projectors. Because projectors are
    /// extracted greedily, this equals a fit run with the smaller counts.
    pub fn truncate(&self, k1: usize, k2: usize) -> Result<BasisPair> {
        if k1 < 1 || k2 < 1 || k1 > self.k1() || k2 > self.k2() {
            return Err(Error::InvalidParameter(format!(
                "cannot truncate a {}x{} basis pair to {k1}x{k2}",
                self.k1(),
                self.k2()
            )));
        }
        Ok(BasisPair {
            u: self.u.columns(0, k1),
            v: self.v.columns(0, k2),
            d_left: self.d_left[..k1].to_vec(),
            d_right: self.d_right[..k2].to_vec(),
            s: self.s,
            p: self.p,
            mean: self.mean.clone(),
        })
    }

    pub fn u_columns(&self) -> Vec<QVector> {
        (0..self.k1()).map(|j| self.u.column(j)).collect()
    }

    pub fn v_columns(&self) -> Vec<QVector> {
        (0..self.k2()).map(|j| self.v.column(j)).collect()
    }

    /// Diagnostic joint weighting factor of the pair `(u_a, v_b)`, zero-based.
    pub fn joint_weight(&self, a: usize, b: usize) -> f64 {
        self.d_left[a] + self.d_right[b]
    }
}

#[derive(Clone, Debug)]
pub struct FitReport {
    pub left: Vec<DirectionReport>,
    pub right: Vec<DirectionReport>,
}

impl FitReport {
    /// One message per projector whose MM run stopped at the iteration cap.
    pub fn warnings(&self) -> Vec<String> {
        let side = |name: &'static str, reps: &[DirectionReport]| {
            reps.iter()
                .enumerate()
                .filter(|(_, r)| !r.converged)
                .map(move |(t, r)| {
                    format!("{name} projector {} stopped at the iteration cap ({} iterations)", t + 1, r.iterations)
                })
                .collect::<Vec<_>>()
        };
        let mut w = side("right", &self.right);
        w.extend(side("left", &self.left));
        w
    }
}

#[derive(Clone, Debug)]
pub struct Fit {
    pub basis: BasisPair,
    pub report: FitReport,
}

/// `sum_i |x_i|^s` over the entry moduli.
fn s_power_sum(x: &QVector, s: f64) -> f64 {
    let moduli = x.abs();
    if s == 1.0 {
        moduli.iter().sum()
    } else if s == 2.0 {
        moduli.iter().map(|a| a * a).sum()
    } else {
        moduli.iter().map(|a| a.powf(s)).sum()
    }
}

fn check_conformant(samples: &[QMatrix], n: usize, what: &str) -> Result<()> {
    if let Some(f) = samples.iter().find(|f| f.ncols() != n) {
        return Err(shape_err(format!(
            "{what}: sample is {}x{} but vector has length {n}",
            f.nrows(),
            f.ncols()
        )));
    }
    Ok(())
}

fn orient(samples: &[QMatrix], side: Side) -> Vec<QMatrix> {
    match side {
        Side::Right => samples.to_vec(),
        Side::Left => samples.iter().map(QMatrix::conj_transpose).collect(),
    }
}

/// `sum_i |F_i w|_s^s` (right) or `sum_i |w* F_i|_s^s` (left).
pub fn objective(samples: &[QMatrix], w: &QVector, side: Side, s: f64) -> Result<f64> {
    match side {
        Side::Right => right_objective(samples, w, s),
        Side::Left => right_objective(&orient(samples, Side::Left), w, s),
    }
}

fn right_objective(samples: &[QMatrix], w: &QVector, s: f64) -> Result<f64> {
    check_conformant(samples, w.len(), "objective")?;
    let mut total = 0.0;
    for f in samples {
        total += s_power_sum(&f.matvec(w)?, s);
    }
    Ok(total)
}

/// Linearization direction `y = sum_i F_i* (|F_i w|^(s-1) ⊚ sign(F_i w))`.
///
/// `0^0` is taken as 0 for `s = 1`; the sign factor is zero there anyway.
pub fn surrogate_gradient(samples: &[QMatrix], w: &QVector, s: f64) -> Result<QVector> {
    check_conformant(samples, w.len(), "gradient")?;
    let mut y = QVector::zeros(w.len());
    for f in samples {
        let proj = f.matvec(w)?;
        let weights: Vec<f64> = proj
            .abs()
            .into_iter()
            .map(|a| if a > 0.0 { a.powf(s - 1.0) } else { 0.0 })
            .collect();
        let g = proj.sign().real_scale(&weights)?;
        y = y.add(&f.conj_transpose().matvec(&g)?)?;
    }
    Ok(y)
}

/// Maximizer of the linear surrogate `Re(y* w)` over `|w|_p = 1`.
///
/// `w` is the current iterate and `w0` the run's starting vector; both are only
/// read in the `0 < p < 1` branch. Fails with `DegenerateDirection` when `y = 0`.
pub fn constrained_update(
    y: &QVector,
    w: &QVector,
    w0: &QVector,
    p: f64,
    reference: SubUnitReference,
) -> Result<QVector> {
    check_exponent(p)?;
    let moduli = y.abs();
    let ymax = moduli.iter().copied().fold(0.0, f64::max);
    if !(ymax > 0.0) {
        return Err(Error::DegenerateDirection(
            "surrogate gradient vanished; samples carry no energy in the remaining subspace".into(),
        ));
    }
    if p.is_infinite() {
        return Ok(y.sign());
    }
    if p == 1.0 {
        let mut j = 0;
        for (i, &a) in moduli.iter().enumerate() {
            if a > moduli[j] {
                j = i;
            }
        }
        let mut out = QVector::zeros(y.len());
        out.set(j, y.get(j).sign());
        return Ok(out);
    }
    // scale to unit max modulus before powers; the direction is unchanged
    let y = y.scale(1.0 / ymax);
    let shaped = if p < 1.0 {
        if w.len() != y.len() || w0.len() != y.len() {
            return Err(shape_err("iterate length differs from gradient length"));
        }
        let cur = w.abs();
        let factor: Vec<f64> = match reference {
            SubUnitReference::Initial => w0
                .abs()
                .iter()
                .zip(&cur)
                .map(|(r, c)| r * c.powf(1.0 - p))
                .collect(),
            SubUnitReference::Current => cur.iter().map(|c| c.powf(2.0 - p)).collect(),
        };
        y.real_scale(&factor)?
    } else {
        let q = p / (p - 1.0);
        let mags: Vec<f64> = y.abs().iter().map(|a| a.powf(q - 1.0)).collect();
        y.sign().real_scale(&mags)?
    };
    let norm = lp_norm_of_moduli(&shaped.abs(), p);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateDirection(format!(
            "update has Lp norm {norm}; iterate support does not meet the gradient"
        )));
    }
    Ok(shaped.scale(1.0 / norm))
}

/// One MM step on right-oriented samples.
pub fn mm_update(
    samples: &[QMatrix],
    w: &QVector,
    w0: &QVector,
    s: f64,
    p: f64,
    reference: SubUnitReference,
) -> Result<QVector> {
    let y = surrogate_gradient(samples, w, s)?;
    constrained_update(&y, w, w0, p, reference)
}

/// Starting vector with unit Lp norm.
pub fn initial_vector(n: usize, p: f64, init: Init) -> Result<QVector> {
    check_exponent(p)?;
    let raw = match init {
        Init::Ones => QVector::from_real(&vec![1.0; n]),
        Init::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            QVector::from_fn(n, |_| {
                Quaternion::new(
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                    rng.gen_range(-1.0..=1.0),
                )
            })
        }
    };
    let norm = lp_norm_of_moduli(&raw.abs(), p);
    if !(norm > 0.0) {
        return Err(Error::InvalidParameter(format!("cannot build a starting vector of length {n}")));
    }
    Ok(raw.scale(1.0 / norm))
}

/// Runs the MM loop on right-oriented samples until the relative objective
/// change drops to `params.tol` or `params.max_iter` steps, then
/// orthonormalizes the result against `orthogonal_to`.
pub fn solve_direction(samples: &[QMatrix], params: &FitParams, orthogonal_to: &[QVector]) -> Result<Direction> {
    params.validate()?;
    let n = samples
        .first()
        .ok_or_else(|| Error::InvalidDataset("no samples to fit".into()))?
        .ncols();
    check_conformant(samples, n, "solve_direction")?;
    let (s, p) = (params.s, params.p);

    let w0 = initial_vector(n, p, params.init)?;
    let mut w = w0.clone();
    let mut f = right_objective(samples, &w, s)?;
    let mut trace = vec![f];
    let mut iterates = vec![w.clone()];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        let next = mm_update(samples, &w, &w0, s, p, params.sub_unit_reference)?;
        let f_next = right_objective(samples, &next, s)?;
        let delta = (f_next - f).abs() / (f.abs() + DELTA_EPS);
        w = next;
        f = f_next;
        trace.push(f);
        iterates.push(w.clone());
        iterations += 1;
        if delta <= params.tol {
            converged = true;
            break;
        }
    }

    let vector = mgs_orthonormalize(&w, orthogonal_to)?;
    let objective = right_objective(samples, &vector, s)?;
    Ok(Direction {
        vector,
        objective,
        report: DirectionReport {
            objective_trace: trace,
            iterations,
            converged,
        },
        iterates,
    })
}

struct SidePass {
    basis: QMatrix,
    weights: Vec<f64>,
    reports: Vec<DirectionReport>,
}

/// Extracts `k` projectors on right-oriented samples with deflation
/// `F_i <- F_i (I - V V*)` after each one.
fn fit_side(samples: &[QMatrix], k: usize, params: &FitParams, side: Side) -> Result<SidePass> {
    let dim = samples[0].ncols();
    let mut deflated = samples.to_vec();
    let mut cols: Vec<QVector> = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    let mut reports = Vec::with_capacity(k);
    for t in 0..k {
        let dir = solve_direction(&deflated, params, &cols).map_err(|e| match e {
            Error::DegenerateDirection(msg) => Error::DegenerateDirection(format!(
                "{} projector {} of {k}: {msg}",
                match side {
                    Side::Left => "left",
                    Side::Right => "right",
                },
                t + 1
            )),
            other => other,
        })?;
        cols.push(dir.vector);
        weights.push(dir.objective);
        reports.push(dir.report);
        let v = QMatrix::from_columns(dim, &cols)?;
        let vh = v.conj_transpose();
        for (f, orig) in deflated.iter_mut().zip(samples) {
            *f = orig.sub(&orig.matmul(&v)?.matmul(&vh)?)?;
        }
    }
    Ok(SidePass {
        basis: QMatrix::from_columns(dim, &cols)?,
        weights,
        reports,
    })
}

/// Fits both projector bases on already centered matrices.
///
/// The right pass runs on `F_i`, the left pass independently on `F_i*`.
pub fn fit_matrices(samples: &[QMatrix], params: &FitParams, mean: QMatrix) -> Result<Fit> {
    params.validate()?;
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidDataset("no samples to fit".into()))?;
    let (m, n) = first.shape();
    if let Some(f) = samples.iter().find(|f| f.shape() != (m, n)) {
        return Err(shape_err(format!(
            "samples differ in shape: {}x{} and {m}x{n}",
            f.nrows(),
            f.ncols()
        )));
    }
    let dims = params.dimension_violations(m, n);
    if !dims.is_empty() {
        return Err(Error::InvalidParameter(dims.join("; ")));
    }
    if mean.shape() != (m, n) {
        return Err(shape_err("mean shape differs from sample shape"));
    }

    let right = fit_side(samples, params.k2, params, Side::Right)?;
    let left = fit_side(&orient(samples, Side::Left), params.k1, params, Side::Left)?;
    Ok(Fit {
        basis: BasisPair {
            u: left.basis,
            v: right.basis,
            d_left: left.weights,
            d_right: right.weights,
            s: params.s,
            p: params.p,
            mean,
        },
        report: FitReport {
            left: left.reports,
            right: right.reports,
        },
    })
}

/// Centers the set if needed and fits both bases.
pub fn fit(samples: &SampleSet, params: &FitParams) -> Result<Fit> {
    let centered = samples.center()?;
    let images: Vec<QMatrix> = centered.images().cloned().collect();
    fit_matrices(&images, params, centered.mean().clone())
}

/// Top-`k` eigenpairs of `G = (1/l) sum_i F_i* F_i` for centered samples.
pub fn covariance_baseline(samples: &[QMatrix], k: usize) -> Result<(Vec<f64>, QMatrix)> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidDataset("no samples for the covariance matrix".into()))?;
    let n = first.ncols();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("k must satisfy 1 <= k <= n = {n}, got {k}")));
    }
    let mut g = QMatrix::zeros(n, n);
    for f in samples {
        if f.shape() != first.shape() {
            return Err(shape_err("samples differ in shape"));
        }
        g = g.add(&f.conj_transpose().matmul(f)?)?;
    }
    let g = g.scale(1.0 / samples.len() as f64);
    // symmetrize rounding so the Hermitian check measures structure, not noise
    let g = g.add(&g.conj_transpose())?.scale(0.5);
    let pairs = hermitian_topk_eig(&g, k)?;
    let values = pairs.iter().map(|p| p.value).collect();
    let cols: Vec<QVector> = pairs.into_iter().map(|p| p.vector).collect();
    Ok((values, QMatrix::from_columns(n, &cols)?))
}
