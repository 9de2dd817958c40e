mod common;

use biqpca::quaternion::{
    hermitian_topk_eig, lp_norm, matvec, mgs_orthonormalize, orthonormality_defect, real_repr, QMatrix,
    QVector, Quaternion,
};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;

use common::*;

fn quaternion() -> impl Strategy<Value = Quaternion> {
    [-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64].prop_map(|[a, b, c, d]| Quaternion::new(a, b, c, d))
}

fn unit_quaternion_vec(n: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec([-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64], n)
        .prop_map(|v| QVector::from_quaternions(&v.iter().map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect::<Vec<_>>()))
}

proptest! {
    #[test]
    fn sign_times_abs_recovers_value(a in quaternion()) {
        let s = a.sign();
        if a != Quaternion::ZERO {
            prop_assert!((s.abs() - 1.0).abs() <= 1e-14);
        }
        let back = s.scale(a.abs());
        let scale = a.abs().max(1.0);
        for (x, y) in back.components().iter().zip(a.components()) {
            prop_assert!((x - y).abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn lp_norm_is_absolutely_homogeneous(
        w in unit_quaternion_vec(7),
        alpha in -50.0..50.0f64,
        p in prop_oneof![1.0..6.0f64, Just(f64::INFINITY)],
    ) {
        let lhs = lp_norm(&w.scale(alpha), p).unwrap();
        let rhs = alpha.abs() * lp_norm(&w, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn real_repr_is_a_ring_homomorphism(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = random_qmatrix(&mut rng, 3, 3);
        let b = random_qmatrix(&mut rng, 3, 3);
        let lhs = real_repr(&a.matmul(&b).unwrap()).into_matrix();
        let rhs = real_repr(&a).into_matrix() * real_repr(&b).into_matrix();
        prop_assert!((lhs - rhs).amax() <= 1e-10);
        let lhs = real_repr(&a.conj_transpose()).into_matrix();
        let rhs = real_repr(&a).into_matrix().transpose();
        prop_assert!((lhs - rhs).amax() <= 1e-10);
    }

    #[test]
    fn matvec_paths_agree(seed in any::<u64>(), m in 1usize..8, n in 1usize..8) {
        let mut rng = rng(seed);
        let f = random_qmatrix(&mut rng, m, n);
        let w = random_qvector(&mut rng, n);
        let direct = matvec(&f, &w).unwrap();
        let by_entries = hamilton_matvec(&f, &w);
        let by_repr = real_repr(&f).apply(&w).unwrap();
        prop_assert!(direct.max_abs_diff(&by_entries) <= 1e-12);
        prop_assert!(direct.max_abs_diff(&by_repr) <= 1e-12);
    }

    #[test]
    fn mgs_output_is_orthonormal(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = rng(seed);
        let cols = random_orthonormal(&mut rng, 6, k);
        let w = QMatrix::from_columns(6, &cols).unwrap();
        prop_assert!(orthonormality_defect(&w) <= 1e-10);
        let extra = random_qvector(&mut rng, 6);
        if k < 6 {
            let v = mgs_orthonormalize(&extra, &cols).unwrap();
            for u in &cols {
                prop_assert!(u.inner(&v).unwrap().abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn random_five_by_four_paths_agree() {
    let mut rng = rng(11);
    let f = random_qmatrix(&mut rng, 5, 4);
    let w = random_qvector(&mut rng, 4);
    let d = matvec(&f, &w).unwrap();
    assert!(d.max_abs_diff(&real_repr(&f).apply(&w).unwrap()) <= 1e-12);
    let g = random_qmatrix(&mut rng, 4, 3);
    assert!(f.matmul(&g).unwrap().max_abs_diff(&hamilton_matmul(&f, &g)) <= 1e-12);
}

#[test]
fn eigenvalues_match_real_representation_spectrum() {
    for seed in 0..10 {
        let mut rng = rng(100 + seed);
        let a = random_qmatrix(&mut rng, 6, 4);
        let g = a.conj_transpose().matmul(&a).unwrap();
        let g = g.add(&g.conj_transpose()).unwrap().scale(0.5);
        let pairs = hermitian_topk_eig(&g, 4).unwrap();

        // oracle: full spectrum of the 16x16 real representation, each value x4
        let mut real: Vec<f64> = SymmetricEigen::new(real_repr(&g).into_matrix()).eigenvalues.iter().copied().collect();
        real.sort_by(|a, b| b.total_cmp(a));
        for (t, p) in pairs.iter().enumerate() {
            for r in &real[4 * t..4 * t + 4] {
                assert!((p.value - r).abs() <= 1e-9, "seed {seed}: {} vs {r}", p.value);
            }
            let res = g.matvec(&p.vector).unwrap().sub(&p.vector.scale(p.value)).unwrap();
            assert!(res.norm2() <= 1e-9);
        }
        let w = QMatrix::from_columns(4, &pairs.iter().map(|p| p.vector.clone()).collect::<Vec<_>>()).unwrap();
        assert!(orthonormality_defect(&w) <= 1e-10);
    }
}

#[test]
fn eigenvectors_are_phase_fixed() {
    let mut rng = rng(5);
    let a = random_qmatrix(&mut rng, 5, 3);
    let g = a.conj_transpose().matmul(&a).unwrap();
    let g = g.add(&g.conj_transpose()).unwrap().scale(0.5);
    let first = hermitian_topk_eig(&g, 3).unwrap();
    let again = hermitian_topk_eig(&g, 3).unwrap();
    for (x, y) in first.iter().zip(&again) {
        assert_eq!(x.vector, y.vector);
        let lead = x.vector.iter().find(|q| q.abs() > 1e-8).unwrap();
        assert!(lead.w0 > 0.0 && lead.w1.abs() < 1e-12 && lead.w2.abs() < 1e-12 && lead.w3.abs() < 1e-12);
    }
}
