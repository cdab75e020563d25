//! Fixed inputs shared by the benchmarks.

use perv_core::algebra::Mat2;
use perv_core::local_system::Representation;
use perv_core::torus::{IntMatrix, TorsionCoset};

/// An irreducible pair with traces (3, 3, 6).
pub fn irreducible_rep() -> Representation {
    Representation::sl2(vec![Mat2::from_ints([[2, 1], [1, 1]]), Mat2::from_ints([[1, 1], [1, 2]])])
        .expect("determinant one")
}

/// A non-split extension of trivial characters at three punctures.
pub fn unipotent_rep() -> Representation {
    let u = Mat2::from_ints([[1, 1], [0, 1]]);
    let v = Mat2::from_ints([[1, 3], [0, 1]]);
    Representation::sl2(vec![u, v, Mat2::identity()]).expect("determinant one")
}

pub fn dense_matrix() -> IntMatrix {
    IntMatrix::from_rows(
        4,
        &[vec![4, -7, 2, 9], vec![-3, 6, 8, -1], vec![5, 2, -9, 3], vec![7, 1, 4, -6]],
    )
}

/// Two cosets of `(C*)^3` whose intersection splits into several components.
pub fn coset_pair() -> (TorsionCoset, TorsionCoset) {
    let a = TorsionCoset::from_ints(3, &[vec![2, 1, 0], vec![0, 3, 1]], &[(0, 1), (1, 2)]).expect("well-formed");
    let b = TorsionCoset::from_ints(3, &[vec![1, -1, 2]], &[(1, 3)]).expect("well-formed");
    (a, b)
}
