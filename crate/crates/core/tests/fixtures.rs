use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ksq::channels::{choi_matrix_tensor, DiagonalTensorParams, TensorMap};
use ksq::classify::{cp_tensor_diag_exact, Status};
use ksq::linalg::{min_eigenvalue, ComplexMatrix};

fn choi(l1: f64, l2: f64, l3: f64) -> ComplexMatrix {
    choi_matrix_tensor(&TensorMap::diagonal(&DiagonalTensorParams::new(l1, l2, l3).unwrap()))
}

/// Printed Choi matrix on the `λ3 = ½` face, which carries no ½ prefactor.
fn upper_face(l1: f64, l2: f64) -> ComplexMatrix {
    let (b1, b2) = (l1 + l2, l1 - l2);
    ComplexMatrix::from_real_rows(&[
        [2.0, 0.0, 0.0, 0.0, 0.0, b1, b1, 0.0],
        [0.0, 1.0, 0.0, 0.0, b2, 0.0, 0.0, b1],
        [0.0, 0.0, 1.0, 0.0, b2, 0.0, 0.0, b1],
        [0.0, 0.0, 0.0, 0.0, 0.0, b2, b2, 0.0],
        [0.0, b2, b2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [b1, 0.0, 0.0, b2, 0.0, 1.0, 0.0, 0.0],
        [b1, 0.0, 0.0, b2, 0.0, 0.0, 1.0, 0.0],
        [0.0, b1, b1, 0.0, 0.0, 0.0, 0.0, 2.0],
    ])
    .unwrap()
}

#[test]
fn upper_face_matches_twice_the_choi_matrix() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (l1, l2) = (r.random_range(-0.5..=0.5), r.random_range(-0.5..=0.5));
        assert!(choi(l1, l2, 0.5).scale_real(2.0).max_abs_diff(&upper_face(l1, l2)) < 1e-14);
    }
}

#[test]
fn faces_need_matching_parameters() {
    // upper face: CP exactly when λ1 = λ2
    let m = min_eigenvalue(&choi(-0.5, 0.0, 0.5), 1e-10).unwrap();
    assert!((m - (0.5 - 0.5f64.sqrt())).abs() < 1e-9, "{m}");
    assert!(min_eigenvalue(&choi(0.3, 0.3, 0.5), 1e-10).unwrap() > -1e-12);

    // lower face: CP exactly when λ1 = -λ2, not only at the corners
    assert!(min_eigenvalue(&choi(0.1, -0.1, -0.5), 1e-10).unwrap() > -1e-12);
    assert!(min_eigenvalue(&choi(0.1, 0.1, -0.5), 1e-10).unwrap() < -1e-3);

    for (l, cp) in [
        ([-0.5, 0.0, 0.5], false),
        ([0.3, 0.3, 0.5], true),
        ([0.1, -0.1, -0.5], true),
        ([0.1, 0.1, -0.5], false),
    ] {
        let p = DiagonalTensorParams::new(l[0], l[1], l[2]).unwrap();
        assert_eq!(cp_tensor_diag_exact(&p).status == Status::HoldsExact, cp, "{l:?}");
    }
}
