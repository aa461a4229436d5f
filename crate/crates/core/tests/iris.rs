use approx::assert_relative_eq;
use biaspca::evaluation::epsilon_sweep;
use biaspca::{centered_pca_direct, centered_pca_via_bias, column_mean, uncentered_pca, DataMatrixF64};

fn iris() -> DataMatrixF64 {
    let text = include_str!("../../../data/iris.csv");
    let points: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').take(4).map(|c| c.parse().unwrap()).collect())
        .collect();
    DataMatrixF64::from_points(&points).unwrap()
}

#[test]
fn shape_and_mean() {
    let x = iris();
    assert_eq!((x.dim(), x.len()), (4, 150));
    let mu = column_mean(&x);
    let expected = [
        5.843333333333334,
        3.0573333333333337,
        3.7580000000000005,
        1.1993333333333336,
    ];
    for (a, b) in mu.iter().zip(expected) {
        assert_relative_eq!(*a, b, max_relative = 1e-14);
    }
}

#[test]
fn covariance_spectrum_matches_reference() {
    let pca = centered_pca_direct(&iris(), 4).unwrap();
    let expected = [
        4.200053427994634,
        0.24105294294244212,
        0.0776881033759665,
        0.023676192353626446,
    ];
    for (a, b) in pca.eigenvalues.iter().zip(expected) {
        assert_relative_eq!(*a, b, max_relative = 1e-12);
    }
    let leading = [
        0.36138659178536836,
        -0.08452251406456857,
        0.856670605949835,
        0.3582891971515504,
    ];
    for (i, b) in leading.iter().enumerate() {
        assert_relative_eq!(pca.components.get(i, 0), *b, epsilon = 1e-12);
    }
}

#[test]
fn second_moment_spectrum_matches_reference() {
    let pca = uncentered_pca(&iris(), 4).unwrap();
    let expected = [
        61.388700468765684,
        2.1030287771783835,
        0.07985361936604057,
        0.023683801356534997,
    ];
    for (a, b) in pca.eigenvalues.iter().zip(expected) {
        assert_relative_eq!(*a, b, max_relative = 1e-12);
    }
}

#[test]
fn bias_trick_tracks_direct_pca() {
    let x = iris();
    let out = centered_pca_via_bias(&x, 3, 0.01).unwrap();
    let direct = centered_pca_direct(&x, 3).unwrap();
    assert_eq!(out.absorbed_index, 0);
    for (a, b) in out.model.eigenvalues.iter().zip(&direct.eigenvalues) {
        assert_relative_eq!(*a, *b, max_relative = 1e-4);
    }
    let sweep = epsilon_sweep(&x, 4, &[0.5, 0.3, 0.2, 0.1, 0.05, 0.01]).unwrap();
    assert!(sweep.eigenvalue_errors[5] < sweep.eigenvalue_errors[0]);
    for w in sweep.eigenvalue_errors.windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn small_example_through_the_crate_root() {
    let x = DataMatrixF64::from_points(&[vec![3.0, 1.0], vec![5.0, 2.0], vec![4.0, 4.0], vec![6.0, 5.0]]).unwrap();
    let direct = centered_pca_direct(&x, 1).unwrap();
    let biased = centered_pca_via_bias(&x, 1, 0.01).unwrap();
    assert!((direct.eigenvalues[0] - biased.model.eigenvalues[0]).abs() < 1e-3);
}

#[test]
fn single_precision_pipeline() {
    let x = iris();
    let points: Vec<Vec<f32>> = x.points().map(|p| p.iter().map(|&v| v as f32).collect()).collect();
    let x32 = biaspca::DataMatrixF32::from_points(&points).unwrap();
    let direct: biaspca::PcaModelF32 = centered_pca_direct(&x32, 2).unwrap();
    assert_relative_eq!(direct.eigenvalues[0], 4.200053427994634f32, max_relative = 1e-4);
    let biased = centered_pca_via_bias(&x32, 2, 0.1f32).unwrap();
    assert_relative_eq!(biased.model.eigenvalues[0], direct.eigenvalues[0], max_relative = 1e-2);
}
