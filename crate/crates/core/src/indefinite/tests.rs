use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{Mat, Scalar};
use crate::scalars::Quaternion;

fn real(rows: &[&[f64]]) -> Mat<f64> {
    Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn standard_form_examples() {
    let f = FormMatrix::<f64>::standard(1, 1, 1).unwrap();
    assert_eq!(f.matrix(), &real(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]));

    let f = FormMatrix::<f64>::standard(1, 2, 2).unwrap();
    assert_eq!(f.j(), Mat::from_diagonal(&[-1.0, 1.0]));

    let f = FormMatrix::<Complex64>::standard(2, 2, 3).unwrap();
    assert_eq!(f.dim(), 7);
    assert_eq!(f.signature(), (5, 2));
    assert_eq!(f.expected_signature(), (5, 2));
    // eigenvalues from an independent solver
    let q = f.real_matrix();
    let na = nalgebra::DMatrix::from_fn(7, 7, |i, j| q[(i, j)]);
    let eig = na.symmetric_eigen().eigenvalues;
    assert_eq!(eig.iter().filter(|&&l| l > 0.0).count(), 5);
    assert_eq!(eig.iter().filter(|&&l| l < 0.0).count(), 2);

    for (q, p, n3) in [(0, 1, 3), (2, 1, 3), (1, 5, 3), (1, 1, 65)] {
        assert!(matches!(FormMatrix::<f64>::standard(q, p, n3), Err(IndefiniteError::Dimension(_))));
    }
}

#[test]
fn signature_matches_block_counts() {
    for q in 1..=3 {
        for n3 in 0..=5 {
            for p in q..=q + n3 {
                let f = FormMatrix::<Quaternion>::standard(q, p, n3).unwrap();
                assert_eq!(f.signature(), f.expected_signature(), "q={q} p={p} n3={n3}");
            }
        }
    }
}

#[test]
fn preserves_form_examples() {
    let f = FormMatrix::<f64>::standard(2, 3, 4).unwrap();
    assert_eq!(f.preserves_form(&Mat::identity(8)).unwrap(), 0.0);
    let mut swap = Mat::zeros(8, 8);
    swap.set_block(0, 2, &Mat::identity(2));
    swap.set_block(2, 0, &Mat::identity(2));
    swap.set_block(4, 4, &Mat::identity(4));
    assert_eq!(f.preserves_form(&swap).unwrap(), 0.0);

    let f = FormMatrix::<f64>::standard(1, 1, 1).unwrap();
    assert_eq!(f.preserves_form(&Mat::from_diagonal(&[2.0, 0.5, 1.0])).unwrap(), 0.0);
    assert!(f.preserves_form(&Mat::from_diagonal(&[2.0, 2.0, 1.0])).unwrap() > 1.0);
    assert!(matches!(f.preserves_form(&Mat::identity(4)), Err(IndefiniteError::Dimension(_))));
}

fn make_parabolic_examples<T: Scalar>() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = FormMatrix::<T>::standard(2, 3, 4).unwrap();
    let id = f.make_parabolic(Mat::identity(2), Mat::zeros(2, 2), Mat::zeros(4, 2), Mat::identity(4)).unwrap();
    assert_eq!(id.matrix(), &Mat::identity(8));

    let b = Mat::<T>::gaussian(4, 2, &mut rng);
    let y = (&(&b.adjoint() * &f.j()) * &b).scale_real(-0.5);
    let g = f.make_parabolic(Mat::identity(2), y.clone(), b.clone(), Mat::identity(4)).unwrap();
    // g*Qg = Q by direct multiplication
    let direct = &(&g.matrix().adjoint() * f.matrix()) * g.matrix();
    assert!(direct.max_abs_diff(f.matrix()) < 1e-12);
    assert!(f.nil(y.clone(), b.clone()).is_ok());

    let bad_y = &y + &Mat::identity(2);
    match f.make_parabolic(Mat::identity(2), bad_y.clone(), b.clone(), Mat::identity(4)) {
        Err(IndefiniteError::ConstraintViolated { residual, .. }) => {
            let bjb = &(&b.adjoint() * &f.j()) * &b;
            let want = (&(&bad_y + &bad_y.adjoint()) + &bjb).max_abs();
            assert!((residual - want).abs() < 1e-12);
            assert!((residual - 2.0).abs() < 1e-9);
        }
        other => panic!("{other:?}"),
    }
    let mut bad_r = Mat::identity(4);
    bad_r[(0, 0)] = T::from_real(2.0);
    assert!(matches!(
        f.make_parabolic(Mat::identity(2), Mat::zeros(2, 2), Mat::zeros(4, 2), bad_r),
        Err(IndefiniteError::ConstraintViolated { constraint: "R*JR = J", .. })
    ));
    assert!(matches!(
        f.make_parabolic(Mat::zeros(2, 2), Mat::zeros(2, 2), Mat::zeros(4, 2), Mat::identity(4)),
        Err(IndefiniteError::ConstraintViolated { constraint: "M invertible", .. })
    ));
}

#[test]
fn make_parabolic_over_each_field() {
    make_parabolic_examples::<f64>();
    make_parabolic_examples::<Complex64>();
    make_parabolic_examples::<Quaternion>();
}

fn decomposition_examples<T: Scalar>() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = FormMatrix::<T>::standard(2, 3, 5).unwrap();
    let m = f.random_levi_m(&mut rng);
    let r = f.random_r(&mut rng);
    let levi_only = f.make_parabolic(m.clone(), Mat::zeros(2, 2), Mat::zeros(5, 2), r.clone()).unwrap();
    let (n, levi) = f.decompose(&levi_only);
    assert_eq!(n.y.max_abs(), 0.0);
    assert_eq!(n.b.max_abs(), 0.0);
    assert_eq!((levi.m, levi.r), (m, r));

    let nil = f.random_nil(&mut rng);
    let g = f.make_parabolic(Mat::identity(2), nil.y.clone(), nil.b.clone(), Mat::identity(5)).unwrap();
    let (n, levi) = f.decompose(&g);
    assert_eq!(levi.m, Mat::identity(2));
    assert_eq!(levi.r, Mat::identity(5));
    assert!(n.y.max_abs_diff(&nil.y) < 1e-15 && n.b.max_abs_diff(&nil.b) < 1e-15);

    for _ in 0..20 {
        let g = f.random_parabolic(&mut rng).unwrap();
        let (n, levi) = f.decompose(&g);
        assert!(f.nil(n.y.clone(), n.b.clone()).is_ok());
        let rebuilt = &f.nil_matrix(&n) * &f.levi_matrix(&levi.m, &levi.r).unwrap();
        assert!(rebuilt.max_abs_diff(g.matrix()) < 1e-10);
    }
}

#[test]
fn decomposition_over_each_field() {
    decomposition_examples::<f64>();
    decomposition_examples::<Complex64>();
    decomposition_examples::<Quaternion>();
}

fn commutator_examples<T: Scalar>() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let f = FormMatrix::<T>::standard(2, 3, 3).unwrap();
    let a = f.random_nil(&mut rng);
    let c = f.nil_commutator(&a, &a);
    assert!(c.y.max_abs() < 1e-12 && c.b.max_abs() < 1e-12);

    let skew = |rng: &mut ChaCha8Rng| {
        let g = Mat::<T>::gaussian(2, 2, rng);
        f.nil((&g - &g.adjoint()).scale_real(0.5), Mat::zeros(3, 2)).unwrap()
    };
    let (s1, s2) = (skew(&mut rng), skew(&mut rng));
    let c = f.nil_commutator(&s1, &s2);
    assert!(c.y.max_abs() < 1e-14 && c.b.max_abs() == 0.0);

    for _ in 0..20 {
        let (a, b) = (f.random_nil(&mut rng), f.random_nil(&mut rng));
        let c = f.nil_commutator(&a, &b);
        // block multiplication by hand: [a, b] = (B_b* J B_a - B_a* J B_b, 0)
        let j = f.j();
        let want = &(&(&b.b.adjoint() * &j) * &a.b) - &(&(&a.b.adjoint() * &j) * &b.b);
        assert!(c.b.max_abs() < 1e-10);
        assert!(c.y.max_abs_diff(&want) < 1e-10);
        assert!((&c.y + &c.y.adjoint()).max_abs() < 1e-10);
    }
}

#[test]
fn commutators_over_each_field() {
    commutator_examples::<f64>();
    commutator_examples::<Complex64>();
    commutator_examples::<Quaternion>();
}

fn levi_examples<T: Scalar>() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let f = FormMatrix::<T>::standard(2, 4, 6).unwrap();
    let n = f.random_nil(&mut rng);
    let same = f.conjugate_by_levi(&n, &Mat::identity(2), &Mat::identity(6)).unwrap();
    assert!(same.y.max_abs_diff(&n.y) < 1e-14 && same.b.max_abs_diff(&n.b) < 1e-14);

    let u = FormMatrix::<T>::random_unitary(2, &mut rng);
    let g = Mat::<T>::gaussian(2, 2, &mut rng);
    let pure = f.nil((&g - &g.adjoint()).scale_real(0.5), Mat::zeros(6, 2)).unwrap();
    let c = f.conjugate_by_levi(&pure, &u, &Mat::identity(6)).unwrap();
    assert!((c.y.frobenius_norm() - pure.y.frobenius_norm()).abs() < 1e-10);

    // a reflection swapping a negative and a positive direction of J
    let mut mix = Mat::identity(6);
    mix[(0, 0)] = T::zero();
    mix[(2, 2)] = T::zero();
    mix[(0, 2)] = T::one();
    mix[(2, 0)] = T::one();
    assert!(matches!(f.conjugate_by_levi(&n, &u, &mix), Err(IndefiniteError::ConstraintViolated { .. })));
    let mut flip = Mat::identity(6);
    flip[(0, 0)] = -T::one();
    assert!(f.conjugate_by_levi(&n, &u, &flip).is_ok());
}

#[test]
fn levi_conjugation_over_each_field() {
    levi_examples::<f64>();
    levi_examples::<Complex64>();
    levi_examples::<Quaternion>();
}

#[test]
fn isotropic_examples() {
    let f = FormMatrix::<f64>::standard(2, 3, 3).unwrap();
    let e = |i: usize| {
        let mut v = vec![0.0; 7];
        v[i] = 1.0;
        v
    };
    assert!(f.is_isotropic(&[e(0), e(1)]).unwrap());
    assert!(f.is_isotropic(&[e(2)]).unwrap());
    assert!(!f.is_isotropic(&[e(0), e(2)]).unwrap());
    assert!(!f.is_isotropic(&[e(6)]).unwrap());
    // the negative direction of J plus the isotropic line e₀ + e₂ - ...
    assert!(!f.is_isotropic(&[e(4)]).unwrap());
    let null: Vec<f64> = (0..7).map(|i| if i == 4 || i == 5 { 1.0 } else { 0.0 }).collect();
    assert!(f.is_isotropic(&[null]).unwrap());
    assert_eq!(f.is_isotropic(&[e(0), e(0)]), Err(IndefiniteError::RankDeficient));

    let h = FormMatrix::<Quaternion>::standard(1, 1, 2).unwrap();
    let v = vec![Quaternion::new(0.0, 1.0, 0.0, 0.0), Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO];
    assert!(h.is_isotropic(&[v]).unwrap());
}

#[test]
fn projection_kernel_is_the_nil_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let f = FormMatrix::<Complex64>::standard(2, 3, 5).unwrap();
    let n = f.random_nil(&mut rng);
    let id = Mat::identity(f.dim());
    assert!(f.project(&f.nil_matrix(&n)).max_abs_diff(&id) < 1e-15);
    let g = f.random_parabolic(&mut rng).unwrap();
    assert!(f.project(g.matrix()).max_abs_diff(&id) > 1e-3);
}

#[test]
fn parse_reads_back_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let f = FormMatrix::<Quaternion>::standard(2, 3, 4).unwrap();
    let g = f.random_parabolic(&mut rng).unwrap();
    let back = f.parse(g.matrix(), 1e-12).unwrap();
    assert_eq!(back, g);
    let mut bad = g.matrix().clone();
    bad[(2, 0)] = Quaternion::ONE;
    assert!(f.parse(&bad, 1e-12).is_err());
}

#[test]
fn trials_meet_tolerances() {
    for config in PARABOLIC_CONFIGS {
        for index in 0..5 {
            for r in [
                run_trial::<f64>(config, 9, index).unwrap(),
                run_trial::<Complex64>(config, 9, index).unwrap(),
                run_trial::<Quaternion>(config, 9, index).unwrap(),
            ] {
                assert!(r.form <= 1e-10, "{config:?} {r:?}");
                assert!(r.reconstruction <= 1e-10, "{config:?} {r:?}");
                assert!(r.projection <= 1e-9, "{config:?} {r:?}");
                assert!(r.double_commutator <= 1e-12, "{config:?} {r:?}");
                assert!(r.commutator_b <= 1e-10, "{config:?} {r:?}");
                assert!(r.nil_law <= 1e-10, "{config:?} {r:?}");
                assert!(r.levi_blocks <= 1e-10, "{config:?} {r:?}");
                assert!(r.levi_norm <= 1e-10, "{config:?} {r:?}");
                assert!(r.closure <= 1e-9, "{config:?} {r:?}");
            }
        }
    }
}

#[test]
fn trials_are_reproducible() {
    let c = PARABOLIC_CONFIGS[3];
    assert_eq!(run_trial::<Quaternion>(c, 1, 7).unwrap(), run_trial::<Quaternion>(c, 1, 7).unwrap());
    assert_ne!(run_trial::<Quaternion>(c, 1, 7).unwrap(), run_trial::<Quaternion>(c, 1, 8).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn products_and_inverses_stay_parabolic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FormMatrix::<Quaternion>::standard(2, 3, 4).unwrap();
        let g1 = f.random_parabolic(&mut rng).unwrap();
        let g2 = f.random_parabolic(&mut rng).unwrap();
        let prod = g1.matrix() * g2.matrix();
        prop_assert!(f.preserves_form(&prod).unwrap() <= 1e-9);
        prop_assert!(f.parse(&prod, 1e-9).is_ok());
        let inv = g1.matrix().inverse().unwrap();
        prop_assert!(f.preserves_form(&inv).unwrap() <= 1e-9);
        prop_assert!(f.parse(&inv, 1e-9).is_ok());
        // the inverse is Q g* Q
        let qgq = &(f.matrix() * &g1.matrix().adjoint()) * f.matrix();
        prop_assert!(qgq.max_abs_diff(&inv) <= 1e-9);
    }

    #[test]
    fn nil_to_b_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FormMatrix::<Complex64>::standard(2, 2, 6).unwrap();
        let (a, b) = (f.random_nil(&mut rng), f.random_nil(&mut rng));
        let prod = f.nil_from_matrix(&(&f.nil_matrix(&a) * &f.nil_matrix(&b)));
        prop_assert!(prod.b.max_abs_diff(&(&a.b + &b.b)) <= 1e-10);
        let law = f.nil_compose(&a, &b);
        prop_assert!(law.y.max_abs_diff(&prod.y) <= 1e-10);
        let inv = f.nil_compose(&a, &f.nil_inverse(&a));
        prop_assert!(inv.y.max_abs() <= 1e-10 && inv.b.max_abs() <= 1e-10);
    }
}
