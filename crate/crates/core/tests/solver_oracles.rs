mod common;

use biqpca::quaternion::{max_principal_angle, orthonormality_defect, real_repr, QMatrix, QVector};
use biqpca::solver::{
    covariance_baseline, fit_matrices, mm_update, objective, solve_direction, FitParams, Init, Side,
    SubUnitReference,
};
use biqpca::Error;
use nalgebra::{DMatrix, SymmetricEigen};

use common::*;

#[test]
fn two_by_two_fixed_point_matches_svd_oracle() {
    let f = QMatrix::from_real_diagonal(&[2.0, 1.0]);
    // oracle: dominant right singular vector of the real representation
    let svd = real_repr(&f).into_matrix().svd(false, true);
    let vt = svd.v_t.unwrap();
    let top = (0..svd.singular_values.len())
        .max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .unwrap();
    let oracle = QVector::from_real_vec(vt.row(top).transpose().as_slice()).unwrap();
    assert!((svd.singular_values[top] - 2.0).abs() < 1e-12);

    let mut w = QVector::from_real(&[1.0, 1.0]).scale(std::f64::consts::FRAC_1_SQRT_2);
    let w0 = w.clone();
    for _ in 0..60 {
        w = mm_update(std::slice::from_ref(&f), &w, &w0, 2.0, 2.0, SubUnitReference::Initial).unwrap();
    }
    // the oracle is defined up to a unit quaternion on the right
    let overlap = oracle.inner(&w).unwrap().abs();
    assert!((overlap - 1.0).abs() < 1e-12, "overlap {overlap}");
    assert!(w.max_abs_diff(&QVector::basis(2, 0)) < 1e-12);
}

#[test]
fn mm_objective_is_monotone_for_every_regime() {
    let mut rng = rng(2024);
    let samples: Vec<QMatrix> = (0..10).map(|_| random_qmatrix(&mut rng, 8, 6)).collect();
    for s in [1.0, 1.5, 2.0, 3.0] {
        for p in [0.5, 1.0, 2.0, f64::INFINITY] {
            for reference in [SubUnitReference::Initial, SubUnitReference::Current] {
                let params = FitParams::new(s, p, 1, 1).with_sub_unit_reference(reference);
                let d = solve_direction(&samples, &params, &[]).unwrap();
                for pair in d.report.objective_trace.windows(2) {
                    assert!(pair[1] >= pair[0] * (1.0 - 1e-10), "s={s} p={p}: {pair:?}");
                }
            }
        }
    }
}

#[test]
fn iterates_stay_on_the_unit_sphere() {
    let mut rng = rng(7);
    let samples: Vec<QMatrix> = (0..6).map(|_| random_qmatrix(&mut rng, 5, 4)).collect();
    for p in [0.5, 1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
        for init in [Init::Ones, Init::Seeded(3)] {
            let params = FitParams::new(1.5, p, 1, 1).with_init(init);
            let d = solve_direction(&samples, &params, &[]).unwrap();
            for w in &d.iterates {
                assert!((w.lp_norm(p).unwrap() - 1.0).abs() <= 1e-10, "p={p}");
            }
        }
    }
}

#[test]
fn seeded_init_is_deterministic() {
    let mut rng = rng(8);
    let samples: Vec<QMatrix> = (0..4).map(|_| random_qmatrix(&mut rng, 4, 4)).collect();
    let params = FitParams::new(1.0, 3.0, 2, 2).with_init(Init::Seeded(42));
    let a = fit_matrices(&samples, &params, QMatrix::zeros(4, 4)).unwrap();
    let b = fit_matrices(&samples, &params, QMatrix::zeros(4, 4)).unwrap();
    assert_eq!(a.basis, b.basis);
}

#[test]
fn fitted_bases_are_orthonormal_and_deflation_annihilates() {
    let mut rng = rng(99);
    let samples: Vec<QMatrix> = (0..10).map(|_| random_qmatrix(&mut rng, 8, 6)).collect();
    for (s, p) in [(1.0, 0.5), (1.5, 1.0), (2.0, 2.0), (3.0, f64::INFINITY), (2.0, 1.3)] {
        let fit = fit_matrices(&samples, &FitParams::new(s, p, 5, 4), QMatrix::zeros(8, 6)).unwrap();
        let b = &fit.basis;
        assert!(orthonormality_defect(&b.u) <= 1e-8);
        assert!(orthonormality_defect(&b.v) <= 1e-8);
        assert!(b.d_left.iter().chain(&b.d_right).all(|&d| d >= 0.0));
        let pu = QMatrix::identity(8).sub(&b.u.matmul(&b.u.conj_transpose()).unwrap()).unwrap();
        let pv = QMatrix::identity(6).sub(&b.v.matmul(&b.v.conj_transpose()).unwrap()).unwrap();
        for f in &samples {
            let left = pu.matmul(f).unwrap();
            let right = f.matmul(&pv).unwrap();
            for j in 0..b.k1() {
                let uj = QMatrix::from_columns(8, &[b.u.column(j)]).unwrap();
                assert!(uj.conj_transpose().matmul(&left).unwrap().fro_norm() <= 1e-8 * f.fro_norm());
            }
            for j in 0..b.k2() {
                assert!(right.matvec(&b.v.column(j)).unwrap().norm2() <= 1e-8 * f.fro_norm());
            }
        }
    }
}

#[test]
fn weights_are_marginal_objective_increments() {
    let mut rng = rng(31);
    let samples: Vec<QMatrix> = (0..8).map(|_| random_qmatrix(&mut rng, 6, 5)).collect();
    for (s, p) in [(2.0, 2.0), (1.0, 1.0), (1.5, f64::INFINITY)] {
        let fit = fit_matrices(&samples, &FitParams::new(s, p, 3, 3), QMatrix::zeros(6, 5)).unwrap();
        let b = &fit.basis;
        // f(k) evaluated on the original samples
        let cumulative = |cols: &[QVector], side: Side| {
            let mut acc = vec![0.0];
            for c in cols {
                acc.push(acc.last().unwrap() + objective(&samples, c, side, s).unwrap());
            }
            acc
        };
        let fr = cumulative(&b.v_columns(), Side::Right);
        let fl = cumulative(&b.u_columns(), Side::Left);
        for k in 0..3 {
            assert!((fr[k + 1] - fr[k] - b.d_right[k]).abs() <= 1e-10 * fr[k + 1]);
            assert!((fl[k + 1] - fl[k] - b.d_left[k]).abs() <= 1e-10 * fl[k + 1]);
        }
    }
}

#[test]
fn quadratic_fit_spans_covariance_eigenspace() {
    let mut rng = rng(5);
    let sigma = [4.0, 3.0, 2.2, 1.6, 1.1, 0.7];
    let (samples, q) = samples_with_spectrum(&mut rng, 6, 5, &sigma);
    for k in 1..=3 {
        let params = FitParams::new(2.0, 2.0, 1, k).with_tol(1e-13).with_max_iter(10_000);
        let fit = fit_matrices(&samples, &params, QMatrix::zeros(5, 6)).unwrap();
        let (vals, w) = covariance_baseline(&samples, k).unwrap();
        assert!(max_principal_angle(&w, &fit.basis.v).unwrap() <= 1e-4);
        // the exact construction gives both routes a third reference
        assert!(max_principal_angle(&q.columns(0, k), &w).unwrap() <= 1e-8);
        for (t, v) in vals.iter().enumerate() {
            assert!((v - sigma[t] * sigma[t] / 6.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn real_samples_match_real_eigenbasis() {
    let mut rng = rng(17);
    let sigma = [3.0, 2.4, 1.9, 1.5, 1.2, 0.9];
    let real = real_samples_with_spectrum(&mut rng, 10, 8, &sigma);
    // oracle: classic real two-dimensional PCA eigenbasis of sum F^T F
    let mut g = DMatrix::zeros(6, 6);
    for f in &real {
        g += f.transpose() * f;
    }
    let eig = SymmetricEigen::new(g);
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let samples: Vec<QMatrix> = real.into_iter().map(QMatrix::from_real).collect();
    for k in [1, 2, 4] {
        let oracle = DMatrix::from_fn(6, k, |i, j| eig.eigenvectors[(i, order[j])]);
        let params = FitParams::new(2.0, 2.0, 1, k).with_tol(1e-15).with_max_iter(20_000);
        let v = fit_matrices(&samples, &params, QMatrix::zeros(8, 6)).unwrap().basis.v;
        assert!(v.planes()[1..].iter().all(|p| p.amax() < 1e-12), "real data keeps a real basis");
        let angle = real_max_angle(&oracle, v.plane(0));
        assert!(angle <= 1e-6, "k={k}: {angle:e}");
    }
}

#[test]
fn exhausted_sample_space_reports_the_projector_index() {
    // rank-one data cannot supply a second right projector
    let f = QMatrix::from_real(DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 2.0, 4.0, 0.0]));
    let err = fit_matrices(&[f], &FitParams::new(2.0, 2.0, 1, 2), QMatrix::zeros(2, 3)).unwrap_err();
    match err {
        Error::DegenerateDirection(msg) => assert!(msg.contains("right projector 2"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn iteration_cap_is_reported_as_warning() {
    let mut rng = rng(4);
    let samples: Vec<QMatrix> = (0..5).map(|_| random_qmatrix(&mut rng, 5, 5)).collect();
    let params = FitParams::new(2.0, 2.0, 1, 1).with_tol(1e-300).with_max_iter(3);
    let fit = fit_matrices(&samples, &params, QMatrix::zeros(5, 5)).unwrap();
    assert!(!fit.report.right[0].converged);
    assert_eq!(fit.report.right[0].iterations, 3);
    assert_eq!(fit.report.warnings().len(), 2);
}

#[test]
fn truncating_a_basis_equals_a_smaller_fit() {
    let mut rng = rng(12);
    let samples: Vec<QMatrix> = (0..6).map(|_| random_qmatrix(&mut rng, 6, 5)).collect();
    for p in [0.5, 2.0, f64::INFINITY] {
        let big = fit_matrices(&samples, &FitParams::new(1.5, p, 4, 4), QMatrix::zeros(6, 5)).unwrap().basis;
        let small = fit_matrices(&samples, &FitParams::new(1.5, p, 2, 3), QMatrix::zeros(6, 5)).unwrap().basis;
        assert_eq!(big.truncate(2, 3).unwrap(), small);
    }
}
