use biaspca::evaluation::principal_angle;
use biaspca::{centered_pca_direct, centered_pca_via_bias, DataMatrixF64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[test]
fn components_agree_with_direct_pca_at_small_epsilon() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut checked = 0;
    while checked < 25 {
        let m = rng.random_range(2..=6);
        let n = rng.random_range(20..=80);
        let offset: Vec<f64> = (0..m).map(|_| 5.0 * rng.sample::<f64, _>(StandardNormal)).collect();
        let scales: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..3.0)).collect();
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..m)
                    .map(|j| offset[j] + scales[j] * rng.sample::<f64, _>(StandardNormal))
                    .collect()
            })
            .collect();
        let x = DataMatrixF64::from_points(&points).unwrap();
        let k = rng.random_range(1..m);
        let full = centered_pca_direct(&x, m).unwrap();
        if full.eigenvalues[k - 1] - full.eigenvalues[k] < 0.1 * full.eigenvalues[k - 1] {
            continue;
        }
        checked += 1;
        let direct = centered_pca_direct(&x, k).unwrap();
        let biased = centered_pca_via_bias(&x, k, 0.01).unwrap();
        let angle = principal_angle(&biased.model.components, &direct.components).unwrap();
        assert!(angle <= 1e-3, "angle {angle} for m = {m}, k = {k}");
    }
}
