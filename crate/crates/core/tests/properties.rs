use biaspca::{
    centered_pca_direct, centered_pca_via_bias, column_mean, covariance_matrix, second_moment_matrix,
    sym_eigendecomposition, DataMatrixF64,
};
use proptest::prelude::*;

fn data(max_dim: usize, max_len: usize) -> impl Strategy<Value = DataMatrixF64> {
    (1..=max_dim, 2..=max_len).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(-10.0f64..10.0, m), n)
            .prop_map(|pts| DataMatrixF64::from_points(&pts).unwrap())
    })
}

proptest! {
    #[test]
    fn second_moment_splits_into_covariance_and_mean(x in data(5, 20)) {
        let b = second_moment_matrix(&x);
        let c = covariance_matrix(&x);
        let mu = column_mean(&x);
        let scale = 1.0 + b.frobenius_norm();
        for i in 0..x.dim() {
            for j in 0..x.dim() {
                prop_assert!((b.get(i, j) - c.get(i, j) - mu[i] * mu[j]).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(x in data(6, 15)) {
        let b = second_moment_matrix(&x);
        let eig = sym_eigendecomposition(&b).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&b) <= 1e-10 * (1.0 + b.frobenius_norm()));
        let sum: f64 = eig.eigenvalues().iter().sum();
        prop_assert!((sum - b.trace()).abs() <= 1e-10 * (1.0 + b.trace().abs()));
        prop_assert!(eig.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        let v = eig.eigenvectors();
        let gram = v.transpose_mul(v);
        for i in 0..v.cols() {
            for j in 0..v.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram.get(i, j) - target).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn centered_pca_ignores_translation(x in data(4, 20), shift in prop::collection::vec(-50.0f64..50.0, 4)) {
        let shifted = x.translated(&shift[..x.dim()]).unwrap();
        let a = centered_pca_direct(&x, x.dim()).unwrap();
        let b = centered_pca_direct(&shifted, x.dim()).unwrap();
        let scale = 1.0 + a.eigenvalues[0];
        for (p, q) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((p - q).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn bias_trick_keeps_orthonormal_components(x in data(5, 20), eps in 0.01f64..0.9) {
        let k = x.dim();
        let out = centered_pca_via_bias(&x, k, eps).unwrap();
        let v = &out.model.components;
        let gram = v.transpose_mul(v);
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram.get(i, j) - target).abs() < 1e-9);
            }
        }
        prop_assert!(out.biased_eigenvalues[0] >= out.config.bias * out.config.bias * (1.0 - 1e-12));
    }
}
