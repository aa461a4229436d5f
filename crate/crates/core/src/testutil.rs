//! Seeded random fixtures shared by the unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::DataMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian points with per-axis scales and a random offset of the given size.
pub fn gaussian_data(rng: &mut ChaCha8Rng, m: usize, n: usize, offset: f64) -> DataMatrix<f64> {
    let scales: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..3.0)).collect();
    let mean: Vec<f64> = (0..m).map(|_| offset * rng.sample::<f64, _>(StandardNormal)).collect();
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..m)
                .map(|j| mean[j] + scales[j] * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    DataMatrix::from_points(&points).unwrap()
}
