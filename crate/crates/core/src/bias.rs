//! The bias trick: centered PCA from an uncentered PCA routine.
//!
//! A constant coordinate `b` is appended to every point. For large `b` the
//! leading eigenvector of the augmented second-moment matrix absorbs the mean
//! direction and the remaining eigenpairs approximate the eigenpairs of the
//! covariance matrix of the original data.

use log::warn;

use crate::error::{Error, Result};
use crate::linalg::{
    column_mean, normalize_sign, second_moment_matrix, sym_eigendecomposition, DataMatrix, EigenDecomposition, Matrix,
    PcaModel,
};
use crate::scalar::{norm, Scalar};

/// Accuracy parameter used when none is given.
pub const DEFAULT_EPSILON: f64 = 0.2;

/// Above this value of `b² / ‖B‖_F` the small eigenvalues lose accuracy.
pub const CONDITIONING_LIMIT: f64 = 1e10;

/// How the bias magnitude is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BiasChoice<T> {
    /// Derive `b` from an accuracy parameter ε.
    Epsilon(T),
    /// Use this `b` as given.
    Explicit(T),
}

/// Accuracy parameter, mean norm, and the bias magnitude derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasConfig<T> {
    pub epsilon: T,
    pub mu_norm: T,
    pub bias: T,
}

impl<T: Scalar> BiasConfig<T> {
    /// `b = √(1−ε²)/ε · ‖μ‖`.
    pub fn from_epsilon(epsilon: T, mu_norm: T) -> Result<Self> {
        Ok(Self {
            epsilon,
            mu_norm,
            bias: bias_magnitude(epsilon, mu_norm)?,
        })
    }

    /// Keeps a user-supplied `b` and records the implied `ε = ‖μ‖/√(b²+‖μ‖²)`.
    ///
    /// The implied ε is zero when `μ = 0`.
    pub fn from_bias(bias: T, mu_norm: T) -> Result<Self> {
        check_bias(bias)?;
        let denom = bias.hypot(mu_norm);
        let epsilon = if denom > T::zero() { mu_norm / denom } else { T::zero() };
        Ok(Self { epsilon, mu_norm, bias })
    }

    pub fn for_data(x: &DataMatrix<T>, choice: BiasChoice<T>) -> Result<Self> {
        let mu_norm = norm(&column_mean(x));
        match choice {
            BiasChoice::Epsilon(eps) => Self::from_epsilon(eps, mu_norm),
            BiasChoice::Explicit(b) => Self::from_bias(b, mu_norm),
        }
    }
}

/// Smallest bias meeting accuracy `epsilon`: `√(1−ε²)/ε · ‖μ‖`.
pub fn bias_magnitude<T: Scalar>(epsilon: T, mu_norm: T) -> Result<T> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidEpsilon(epsilon.as_f64()));
    }
    if !(mu_norm.is_finite() && mu_norm >= T::zero()) {
        return Err(Error::InvalidData(format!(
            "mean norm must be finite and non-negative, got {mu_norm}"
        )));
    }
    Ok((T::one() - epsilon * epsilon).sqrt() / epsilon * mu_norm)
}

fn check_bias<T: Scalar>(bias: T) -> Result<()> {
    if bias.is_finite() && bias >= T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidBias(bias.as_f64()))
    }
}

/// Data with a constant bias row appended: `(m+1) × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedMatrix<T> {
    entries: DataMatrix<T>,
    bias: T,
}

impl<T: Scalar> BiasedMatrix<T> {
    pub fn bias(&self) -> T {
        self.bias
    }

    /// Dimension of the original data.
    pub fn source_dim(&self) -> usize {
        self.entries.dim() - 1
    }

    pub fn as_data(&self) -> &DataMatrix<T> {
        &self.entries
    }

    pub fn into_data(self) -> DataMatrix<T> {
        self.entries
    }
}

/// Appends `b` as an extra coordinate to every column of `x`.
pub fn append_bias_row<T: Scalar>(x: &DataMatrix<T>, b: T) -> Result<BiasedMatrix<T>> {
    check_bias(b)?;
    let points: Vec<Vec<T>> = x
        .points()
        .map(|p| {
            let mut q = Vec::with_capacity(p.len() + 1);
            q.extend_from_slice(p);
            q.push(b);
            q
        })
        .collect();
    Ok(BiasedMatrix {
        entries: DataMatrix::from_points(&points)?,
        bias: b,
    })
}

/// An augmented vector `u = (v; w)` split into its data part and bias coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedEigenSplit<T> {
    pub v: Vec<T>,
    pub w: T,
}

impl<T: Scalar> BiasedEigenSplit<T> {
    pub fn from_vector(u: &[T]) -> Self {
        let (v, w) = u.split_at(u.len() - 1);
        Self { v: v.to_vec(), w: w[0] }
    }
}

/// Closed-form leading eigenvector of `B_b` for large `b`:
/// `v = μ/√(b²+‖μ‖²)`, `w = b/√(b²+‖μ‖²)`.
pub fn leading_biased_eigenpair_prediction<T: Scalar>(mu: &[T], b: T) -> Result<BiasedEigenSplit<T>> {
    check_bias(b)?;
    let mu_norm = norm(mu);
    let scale = b.hypot(mu_norm);
    if scale == T::zero() {
        return Err(Error::DegenerateDirection);
    }
    Ok(BiasedEigenSplit {
        v: mu.iter().map(|&x| x / scale).collect(),
        w: b / scale,
    })
}

/// Emitted when `b² / ‖B‖_F` exceeds [`CONDITIONING_LIMIT`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditioningWarning<T> {
    pub ratio: T,
}

/// Centered PCA recovered through the bias trick, with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasTrickOutcome<T> {
    pub model: PcaModel<T>,
    pub config: BiasConfig<T>,
    /// All `m+1` eigenvalues of `B_b`, descending.
    pub biased_eigenvalues: Vec<T>,
    /// Position of the eigenpair that absorbed the bias direction.
    pub absorbed_index: usize,
    /// Split of the absorbing eigenvector.
    pub leading: BiasedEigenSplit<T>,
    /// Bias coordinate `w` of each retained eigenvector, dropped when truncating.
    pub discarded: Vec<T>,
    pub conditioning: Option<ConditioningWarning<T>>,
}

/// Centered PCA of `x` via the bias trick with `b` derived from `epsilon`.
pub fn centered_pca_via_bias<T: Scalar>(x: &DataMatrix<T>, k: usize, epsilon: T) -> Result<BiasTrickOutcome<T>> {
    let config = BiasConfig::for_data(x, BiasChoice::Epsilon(epsilon))?;
    centered_pca_with_bias(x, k, config)
}

/// Centered PCA of `x` via the bias trick using `config.bias`.
///
/// The absorbing eigenpair is the one with the largest `|w|`; for the
/// magnitudes produced by [`bias_magnitude`] it is the leading pair, and for
/// `b = 0` it is the decoupled null direction of the zero row. The next `k`
/// pairs supply the eigenvalues, and their top `m` entries, orthonormalized,
/// supply the components.
pub fn centered_pca_with_bias<T: Scalar>(
    x: &DataMatrix<T>,
    k: usize,
    config: BiasConfig<T>,
) -> Result<BiasTrickOutcome<T>> {
    let m = x.dim();
    if k == 0 {
        return Err(Error::ZeroRank);
    }
    if k + 1 > m + 1 {
        return Err(Error::RankRequestTooLarge {
            requested: k + 1,
            available: m + 1,
        });
    }
    let conditioning = conditioning_check(x, config.bias);
    let biased = append_bias_row(x, config.bias)?;
    let eig = sym_eigendecomposition(&second_moment_matrix(biased.as_data()))?;

    let absorbed_index = bias_pair_index(&eig);
    let retained: Vec<usize> = (0..=m).filter(|&j| j != absorbed_index).take(k).collect();

    let discarded: Vec<T> = retained.iter().map(|&j| eig.eigenvector(j)[m]).collect();
    let truncated: Vec<Vec<T>> = retained.iter().map(|&j| eig.eigenvector(j)[..m].to_vec()).collect();
    let components = orthonormalize(&truncated)?;

    Ok(BiasTrickOutcome {
        model: PcaModel {
            components,
            eigenvalues: retained.iter().map(|&j| eig.eigenvalues()[j]).collect(),
            center: column_mean(x),
        },
        config,
        biased_eigenvalues: eig.eigenvalues().to_vec(),
        absorbed_index,
        leading: BiasedEigenSplit::from_vector(eig.eigenvector(absorbed_index)),
        discarded,
        conditioning,
    })
}

pub(crate) fn bias_pair_index<T: Scalar>(eig: &EigenDecomposition<T>) -> usize {
    let last = eig.dim() - 1;
    let mut best = 0;
    for j in 1..eig.dim() {
        if eig.eigenvector(j)[last].abs() > eig.eigenvector(best)[last].abs() {
            best = j;
        }
    }
    best
}

fn conditioning_check<T: Scalar>(x: &DataMatrix<T>, bias: T) -> Option<ConditioningWarning<T>> {
    if bias == T::zero() {
        return None;
    }
    let ratio = bias * bias / second_moment_matrix(x).frobenius_norm();
    if ratio > T::lit(CONDITIONING_LIMIT) {
        warn!("bias {bias} gives b²/‖B‖_F = {ratio}; small eigenvalues may be inaccurate");
        Some(ConditioningWarning { ratio })
    } else {
        None
    }
}

/// Symmetric (Löwdin) orthonormalization `V (VᵀV)^{-1/2}`, sign-normalized per column.
///
/// Truncated eigenvectors are orthogonal only up to `w_i w_j`; this is the
/// closest orthonormal basis with the same span.
fn orthonormalize<T: Scalar>(vectors: &[Vec<T>]) -> Result<Matrix<T>> {
    let v = Matrix::from_columns(vectors)?;
    let k = v.cols();
    let gram = v.transpose_mul(&v);
    let mut g = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            g.push(gram.get(i, j));
        }
    }
    let eig = sym_eigendecomposition(&crate::linalg::SymmetricMatrix::new(k, g)?)?;
    // (VᵀV)^{-1/2} = Q diag(λ^{-1/2}) Qᵀ
    let mut inv_sqrt = Matrix::zeros(k, k);
    for (l, &lambda) in eig.eigenvalues().iter().enumerate() {
        if lambda <= T::zero() {
            return Err(Error::InvalidData(
                "truncated eigenvectors are linearly dependent".into(),
            ));
        }
        let s = T::one() / lambda.sqrt();
        let q = eig.eigenvector(l);
        for i in 0..k {
            for j in 0..k {
                inv_sqrt.set(i, j, inv_sqrt.get(i, j) + s * q[i] * q[j]);
            }
        }
    }
    let mut out = Matrix::zeros(v.rows(), k);
    for j in 0..k {
        let col = out.column_mut(j);
        for (i, c) in col.iter_mut().enumerate() {
            *c = (0..k).map(|l| v.get(i, l) * inv_sqrt.get(l, j)).sum();
        }
        normalize_sign(col);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{centered_pca_direct, covariance_matrix, uncentered_pca};
    use crate::scalar::dot;
    use crate::testutil::{gaussian_data, rng};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn bias_magnitude_examples() {
        assert_relative_eq!(
            bias_magnitude(0.2, 1.0).unwrap(),
            0.96f64.sqrt() / 0.2,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            bias_magnitude(0.2, 1.0).unwrap(),
            4.898979485566356,
            max_relative = 1e-15
        );
        assert_eq!(bias_magnitude(0.3, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            bias_magnitude(std::f64::consts::FRAC_1_SQRT_2, 3.0).unwrap(),
            3.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn bias_magnitude_rejects_bad_epsilon() {
        for eps in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(bias_magnitude(eps, 1.0), Err(Error::InvalidEpsilon(_))));
        }
    }

    #[test]
    fn explicit_bias_reports_implied_epsilon() {
        let cfg = BiasConfig::from_bias(4.0, 3.0).unwrap();
        assert_relative_eq!(cfg.epsilon, 0.6, max_relative = 1e-15);
        assert!(cfg.bias >= bias_magnitude(cfg.epsilon, 3.0).unwrap() * (1.0 - 1e-12));
        assert_eq!(BiasConfig::from_bias(2.0, 0.0).unwrap().epsilon, 0.0);
        assert!(BiasConfig::from_bias(-1.0, 1.0).is_err());
    }

    #[test]
    fn append_bias_row_example() {
        let x = DataMatrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        let xb = append_bias_row(&x, 10.0).unwrap();
        assert_eq!(
            xb.as_data(),
            &DataMatrix::from_rows(&[vec![1.0, 2.0], vec![10.0, 10.0]]).unwrap()
        );
        assert_eq!(column_mean(xb.as_data()), vec![1.5, 10.0]);
        assert!(matches!(append_bias_row(&x, f64::NAN), Err(Error::InvalidBias(_))));
    }

    #[test]
    fn zero_bias_preserves_nonzero_spectrum() {
        let x = gaussian_data(&mut rng(3), 3, 10, 2.0);
        let plain = uncentered_pca(&x, 3).unwrap();
        let padded = uncentered_pca(append_bias_row(&x, 0.0).unwrap().as_data(), 4).unwrap();
        for j in 0..3 {
            assert_relative_eq!(plain.eigenvalues[j], padded.eigenvalues[j], max_relative = 1e-12);
        }
        assert!(padded.eigenvalues[3].abs() < 1e-12);
    }

    #[test]
    fn biased_second_moment_has_block_form() {
        let x = gaussian_data(&mut rng(4), 4, 25, 3.0);
        let b = 7.5;
        let bb = second_moment_matrix(append_bias_row(&x, b).unwrap().as_data());
        let bx = second_moment_matrix(&x);
        let mu = column_mean(&x);
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(bb.get(i, j), bx.get(i, j), epsilon = 1e-12);
            }
            assert_abs_diff_eq!(bb.get(i, 4), b * mu[i], epsilon = 1e-12);
            assert_abs_diff_eq!(bb.get(4, i), b * mu[i], epsilon = 1e-12);
        }
        assert_abs_diff_eq!(bb.get(4, 4), b * b, epsilon = 1e-12);
    }

    #[test]
    fn centered_data_matches_direct_exactly() {
        // interleaving each point with its negation makes the running mean exactly zero
        let raw = gaussian_data(&mut rng(5), 3, 40, 4.0);
        let pts: Vec<Vec<f64>> = raw
            .points()
            .flat_map(|p| [p.to_vec(), p.iter().map(|v| -v).collect()])
            .collect();
        let x = DataMatrix::from_points(&pts).unwrap();
        assert!(column_mean(&x).iter().all(|&v| v == 0.0));

        let out = centered_pca_via_bias(&x, 3, 0.2).unwrap();
        let direct = centered_pca_direct(&x, 3).unwrap();
        assert_eq!(out.config.bias, 0.0);
        assert_eq!(out.absorbed_index, 3);
        for j in 0..3 {
            assert_relative_eq!(out.model.eigenvalues[j], direct.eigenvalues[j], max_relative = 1e-12);
        }
        assert!(out.model.components.max_abs_diff(&direct.components) < 1e-10);
        assert!(out.discarded.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn rank_request_checks() {
        let x = gaussian_data(&mut rng(6), 2, 5, 1.0);
        assert!(matches!(
            centered_pca_via_bias(&x, 3, 0.2),
            Err(Error::RankRequestTooLarge {
                requested: 4,
                available: 3
            })
        ));
        assert!(matches!(
            centered_pca_via_bias(&x, 1, 1.2),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn components_are_orthonormal() {
        let x = gaussian_data(&mut rng(7), 5, 60, 3.0);
        let out = centered_pca_via_bias(&x, 4, 0.3).unwrap();
        let gram = out.model.components.transpose_mul(&out.model.components);
        assert!(gram.max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn prediction_examples() {
        let p = leading_biased_eigenpair_prediction(&[0.0, 0.0], 5.0).unwrap();
        assert_eq!((p.v, p.w), (vec![0.0, 0.0], 1.0));
        let p = leading_biased_eigenpair_prediction(&[3.0, 0.0], 4.0).unwrap();
        assert_relative_eq!(p.w, 0.8, max_relative = 1e-15);
        assert_relative_eq!(norm(&p.v), 0.6, max_relative = 1e-15);
        assert_eq!(
            leading_biased_eigenpair_prediction(&[0.0], 0.0).unwrap_err(),
            Error::DegenerateDirection
        );
    }

    #[test]
    fn prediction_matches_leading_eigenvector_for_large_bias() {
        let mut r = rng(8);
        for _ in 0..5 {
            let x = gaussian_data(&mut r, 4, 50, 5.0);
            let mu = column_mean(&x);
            let b = 100.0 * norm(&mu);
            let eig = sym_eigendecomposition(&second_moment_matrix(append_bias_row(&x, b).unwrap().as_data())).unwrap();
            let pred = leading_biased_eigenpair_prediction(&mu, b).unwrap();
            let mut p = pred.v.clone();
            p.push(pred.w);
            let cos = dot(&p, eig.eigenvector(0)).abs().min(1.0);
            assert!(cos.acos() < 1e-3, "angle {}", cos.acos());
        }
    }

    #[test]
    fn leading_biased_eigenvalue_absorbs_bias_energy() {
        let mut r = rng(9);
        for _ in 0..5 {
            let x = gaussian_data(&mut r, 3, 30, 2.0);
            let out = centered_pca_via_bias(&x, 2, 0.1).unwrap();
            let b = out.config.bias;
            assert!(out.biased_eigenvalues[0] >= b * b);
            assert_eq!(out.absorbed_index, 0);
        }
    }

    #[test]
    fn discarded_scalars_shrink_with_bias() {
        // Σ_{i≥2} w_i² = 1 − w_1² ≈ ‖μ‖²/(b²+‖μ‖²), so the bias row mass left on
        // the retained pairs decays like 1/b
        let x = gaussian_data(&mut rng(10), 4, 50, 4.0);
        let mu_norm = norm(&column_mean(&x));
        let mut previous = f64::INFINITY;
        for factor in [1.0, 10.0, 100.0, 1000.0] {
            let cfg = BiasConfig::from_bias(factor * mu_norm, mu_norm).unwrap();
            let out = centered_pca_with_bias(&x, 4, cfg).unwrap();
            let worst = out.discarded.iter().fold(0.0f64, |a, w| a.max(w.abs()));
            assert!(worst < previous);
            previous = worst;
            let mass: f64 = out.discarded.iter().map(|w| w * w).sum();
            assert_relative_eq!(mass + out.leading.w * out.leading.w, 1.0, max_relative = 1e-10);
            if factor >= 100.0 {
                assert_relative_eq!(mass, cfg.epsilon * cfg.epsilon, max_relative = 0.05);
            }
        }
    }

    #[test]
    fn bias_split_has_unit_norm() {
        let x = gaussian_data(&mut rng(11), 3, 20, 2.0);
        let out = centered_pca_via_bias(&x, 3, 0.05).unwrap();
        let l = &out.leading;
        assert_abs_diff_eq!(dot(&l.v, &l.v) + l.w * l.w, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn extreme_bias_emits_conditioning_warning() {
        let x = gaussian_data(&mut rng(12), 2, 10, 1.0);
        let scale = second_moment_matrix(&x).frobenius_norm();
        let cfg = BiasConfig::from_bias((2e10 * scale).sqrt(), 1.0).unwrap();
        assert!(centered_pca_with_bias(&x, 1, cfg).unwrap().conditioning.is_some());
        assert!(centered_pca_via_bias(&x, 1, 0.2).unwrap().conditioning.is_none());
    }

    #[test]
    fn eigenvalues_approach_covariance_spectrum() {
        let x = gaussian_data(&mut rng(13), 3, 80, 6.0);
        let exact = sym_eigendecomposition(&covariance_matrix(&x)).unwrap();
        let out = centered_pca_via_bias(&x, 3, 0.01).unwrap();
        for j in 0..3 {
            assert_relative_eq!(out.model.eigenvalues[j], exact.eigenvalues()[j], max_relative = 2e-4);
        }
    }
}
