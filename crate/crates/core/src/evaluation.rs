//! Numerical checks of the bias-trick theory and the comparison harness for
//! robust PCA results.
//!
//! Every check returns a report carrying the measured quantities alongside
//! its verdict, so a failed precondition shows up as data rather than as a
//! silent pass.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::bias::{append_bias_row, bias_magnitude, bias_pair_index, centered_pca_via_bias};
use crate::error::{Error, Result};
use crate::linalg::{
    centered_pca_direct, column_mean, covariance_matrix, second_moment_matrix, sym_eigendecomposition, DataMatrix,
    Matrix, SymmetricMatrix,
};
use crate::rpca::{centered_fit, copt_with, e_rpca_for, RpcaProblem, RpcaSolution, SearchOptions};
use crate::scalar::{dot, norm, Scalar};

/// Description of the eigenvalue error reported by [`epsilon_sweep`].
pub const EIGENVALUE_ERROR_METRIC: &str = "max_j |lambda_j(bias) - lambda_j(direct)| / max(lambda_j(direct), 1e-12)";

/// Floor on the denominator of the relative eigenvalue error.
const RELATIVE_ERROR_FLOOR: f64 = 1e-12;

/// Slack allowed when checking that a sampled sequence does not increase.
const MONOTONE_SLACK: f64 = 1e-12;

/// `max_j |a_j − b_j| / max(b_j, 1e-12)` over the common prefix.
pub fn max_relative_eigenvalue_error<T: Scalar>(approx: &[T], direct: &[T]) -> T {
    approx
        .iter()
        .zip(direct)
        .map(|(&a, &d)| (a - d).abs() / d.max(T::lit(RELATIVE_ERROR_FLOOR)))
        .fold(T::zero(), T::max)
}

/// Largest principal angle between the column spans of two orthonormal bases, in radians.
pub fn principal_angle<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: b.cols(),
        });
    }
    let k = b.cols();
    if k == 0 {
        return Ok(T::zero());
    }
    // cosines from the overlap AᵀB, sines from the residual B − A AᵀB
    let overlap = a.transpose_mul(b);
    let mut residual = b.clone();
    for j in 0..k {
        for (i, a_col) in a.columns().enumerate() {
            let c = overlap.get(i, j);
            for (r, &ai) in residual.column_mut(j).iter_mut().zip(a_col) {
                *r -= c * ai;
            }
        }
    }
    let gram = |m: &Matrix<T>| {
        let g = m.transpose_mul(m);
        let data = (0..k * k).map(|idx| {
            let (i, j) = (idx / k, idx % k);
            (g.get(i, j) + g.get(j, i)) / T::lit(2.0)
        });
        SymmetricMatrix::new(k, data.collect())
    };
    let cos_gram = gram(&overlap)?;
    let sin_gram = gram(&residual)?;
    let cos_sq = sym_eigendecomposition(&cos_gram)?.eigenvalues()[k - 1].max(T::zero());
    let sin_sq = sym_eigendecomposition(&sin_gram)?.eigenvalues()[0].max(T::zero());
    Ok(sin_sq.sqrt().atan2(cos_sq.sqrt()))
}

/// Angle between the lines spanned by two nonzero vectors, in radians.
pub fn line_angle<T: Scalar>(u: &[T], v: &[T]) -> T {
    let nu = norm(u);
    let nv = norm(v);
    if nu == T::zero() || nv == T::zero() {
        return T::nan();
    }
    let c = dot(u, v) / (nu * nv);
    let perp: T = u
        .iter()
        .zip(v)
        .map(|(&a, &b)| {
            let d = a / nu - c * b / nv;
            d * d
        })
        .sum();
    perp.sqrt().atan2(c.abs())
}

/// Bias-trick accuracy as a function of ε.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub epsilons: Vec<T>,
    pub biases: Vec<T>,
    /// See [`EIGENVALUE_ERROR_METRIC`].
    pub eigenvalue_errors: Vec<T>,
    /// Largest principal angle between bias-trick and direct components.
    pub subspace_angles: Vec<T>,
}

/// Runs the bias trick at every ε and compares it with direct centered PCA.
pub fn epsilon_sweep<T: Scalar>(x: &DataMatrix<T>, k: usize, epsilons: &[T]) -> Result<SweepResult<T>> {
    let direct = centered_pca_direct(x, k)?;
    let mut out = SweepResult {
        epsilons: Vec::with_capacity(epsilons.len()),
        biases: Vec::with_capacity(epsilons.len()),
        eigenvalue_errors: Vec::with_capacity(epsilons.len()),
        subspace_angles: Vec::with_capacity(epsilons.len()),
    };
    for &eps in epsilons {
        let outcome = centered_pca_via_bias(x, k, eps)?;
        out.epsilons.push(eps);
        out.biases.push(outcome.config.bias);
        out.eigenvalue_errors.push(max_relative_eigenvalue_error(
            &outcome.model.eigenvalues,
            &direct.eigenvalues,
        ));
        out.subspace_angles
            .push(principal_angle(&outcome.model.components, &direct.components)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenpairResidual<T> {
    /// Position of the pair in the descending spectrum of `B`.
    pub index: usize,
    pub eigenvalue: T,
    /// `‖C u − λ u‖`.
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CadimaJolliffeReport<T> {
    /// Angle between `μ/‖μ‖` and its nearest eigenvector of `B`.
    pub alignment_angle: T,
    pub aligned_index: usize,
    pub precondition_met: bool,
    /// Bound each residual is held to: `‖μ‖² sin(tolerance) + 64 ε_mach ‖B‖_F`.
    pub residual_tolerance: T,
    /// Every eigenpair of `B` other than the aligned one.
    pub residuals: Vec<EigenpairResidual<T>>,
    pub passed: bool,
}

/// Checks that once `μ/‖μ‖` is an eigenvector of `B`, the other eigenpairs of `B` are eigenpairs of `C`.
///
/// For a unit eigenvector `u` of `B` orthogonal to the aligned one,
/// `C u − λ u = −μ μᵀ u`, whose norm is at most `‖μ‖² sin θ` when the
/// alignment angle is `θ`; that is the residual tolerance used here.
pub fn cadima_jolliffe_check<T: Scalar>(x: &DataMatrix<T>, tolerance: T) -> Result<CadimaJolliffeReport<T>> {
    let mu = column_mean(x);
    let mu_norm = norm(&mu);
    if mu_norm == T::zero() {
        return Err(Error::DegenerateDirection);
    }
    let b = second_moment_matrix(x);
    let c = covariance_matrix(x);
    let eig = sym_eigendecomposition(&b)?;

    let (aligned_index, alignment_angle) = (0..eig.dim())
        .map(|j| (j, line_angle(eig.eigenvector(j), &mu)))
        .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best });
    let precondition_met = alignment_angle <= tolerance;
    let residual_tolerance = mu_norm * mu_norm * tolerance.sin() + T::lit(64.0) * T::epsilon() * b.frobenius_norm();

    let residuals: Vec<EigenpairResidual<T>> = (0..eig.dim())
        .filter(|&j| j != aligned_index)
        .map(|j| {
            let u = eig.eigenvector(j);
            let lambda = eig.eigenvalues()[j];
            EigenpairResidual {
                index: j,
                eigenvalue: lambda,
                residual: eigen_residual(&c, u, lambda),
            }
        })
        .collect();
    let passed = precondition_met && residuals.iter().all(|r| r.residual <= residual_tolerance);
    Ok(CadimaJolliffeReport {
        alignment_angle,
        aligned_index,
        precondition_met,
        residual_tolerance,
        residuals,
        passed,
    })
}

fn eigen_residual<T: Scalar>(a: &SymmetricMatrix<T>, u: &[T], lambda: T) -> T {
    let au = a.mul_vec(u);
    au.iter()
        .zip(u)
        .map(|(&p, &q)| (p - lambda * q) * (p - lambda * q))
        .sum::<T>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedPairResidual<T> {
    pub index: usize,
    pub eigenvalue: T,
    /// `‖C v̂ − λ v̂‖` for the normalized data part `v̂` of the eigenvector.
    pub residual: T,
    /// `|w|`, the bias coordinate of the eigenvector.
    pub bias_component: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasedEigenReport<T> {
    pub bias: T,
    pub absorbed_index: usize,
    /// Angle between the absorbing eigenvector and `(μ; b)`.
    pub absorbed_angle: T,
    /// `‖C‖_F` of the original data.
    pub covariance_norm: T,
    pub pairs: Vec<BiasedPairResidual<T>>,
}

/// Measures how closely the non-absorbed eigenpairs of `B_b` act as eigenpairs of `C`.
pub fn biased_eigenpair_check<T: Scalar>(x: &DataMatrix<T>, b: T) -> Result<BiasedEigenReport<T>> {
    let m = x.dim();
    let c = covariance_matrix(x);
    let biased = append_bias_row(x, b)?;
    let eig = sym_eigendecomposition(&second_moment_matrix(biased.as_data()))?;
    let absorbed_index = bias_pair_index(&eig);

    let mut direction = column_mean(x);
    direction.push(b);
    let absorbed_angle = line_angle(eig.eigenvector(absorbed_index), &direction);

    let pairs = (0..=m)
        .filter(|&j| j != absorbed_index)
        .map(|j| {
            let u = eig.eigenvector(j);
            let lambda = eig.eigenvalues()[j];
            let v = &u[..m];
            let nv = norm(v);
            let residual = if nv == T::zero() {
                T::infinity()
            } else {
                let unit: Vec<T> = v.iter().map(|&t| t / nv).collect();
                eigen_residual(&c, &unit, lambda)
            };
            BiasedPairResidual {
                index: j,
                eigenvalue: lambda,
                residual,
                bias_component: u[m].abs(),
            }
        })
        .collect();
    Ok(BiasedEigenReport {
        bias: b,
        absorbed_index,
        absorbed_angle,
        covariance_norm: c.frobenius_norm(),
        pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingEigenvectorEntry<T> {
    pub bias: T,
    /// True when `b = 0`, where no large-`b` claim applies.
    pub skipped: bool,
    /// `|w₁ − b/√(b² + ‖μ‖²)|` for the leading eigenvector `(v₁; w₁)` of `B_b`.
    pub w_error: T,
    /// Angle between `v₁` and `μ`.
    pub v_angle: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingEigenvectorReport<T> {
    pub mu_norm: T,
    pub entries: Vec<LeadingEigenvectorEntry<T>>,
    /// Both metrics are non-increasing along the supplied `b` values (skipped entries ignored).
    pub w_error_non_increasing: bool,
    pub v_angle_non_increasing: bool,
}

/// Compares the leading eigenvector of `B_b` with its large-`b` limit for each `b`.
pub fn leading_eigenvector_check<T: Scalar>(x: &DataMatrix<T>, biases: &[T]) -> Result<LeadingEigenvectorReport<T>> {
    let mu = column_mean(x);
    let mu_norm = norm(&mu);
    if mu_norm == T::zero() {
        return Err(Error::DegenerateDirection);
    }
    let m = x.dim();
    let mut entries = Vec::with_capacity(biases.len());
    for &b in biases {
        if b == T::zero() {
            entries.push(LeadingEigenvectorEntry {
                bias: b,
                skipped: true,
                w_error: T::nan(),
                v_angle: T::nan(),
            });
            continue;
        }
        let biased = append_bias_row(x, b)?;
        let eig = sym_eigendecomposition(&second_moment_matrix(biased.as_data()))?;
        let u = eig.eigenvector(0);
        let flip = if u[m] < T::zero() { -T::one() } else { T::one() };
        let w = flip * u[m];
        let v: Vec<T> = u[..m].iter().map(|&t| flip * t).collect();
        entries.push(LeadingEigenvectorEntry {
            bias: b,
            skipped: false,
            w_error: (w - b / b.hypot(mu_norm)).abs(),
            v_angle: line_angle(&v, &mu),
        });
    }
    let active: Vec<&LeadingEigenvectorEntry<T>> = entries.iter().filter(|e| !e.skipped).collect();
    let non_increasing = |f: fn(&LeadingEigenvectorEntry<T>) -> T| {
        active.windows(2).all(|w| f(w[1]) <= f(w[0]) + T::lit(MONOTONE_SLACK))
    };
    Ok(LeadingEigenvectorReport {
        mu_norm,
        w_error_non_increasing: non_increasing(|e| e.w_error),
        v_angle_non_increasing: non_increasing(|e| e.v_angle),
        entries,
    })
}

/// Outlier set published by another method, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Baseline {
    pub name: String,
    pub outliers: Vec<usize>,
}

/// Parses a baseline file: one 1-based point index per line, blank lines ignored.
pub fn parse_baseline(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: String| Error::MalformedBaselineFile {
            line: lineno + 1,
            reason,
        };
        let idx: usize = line
            .parse()
            .map_err(|_| malformed(format!("expected a point index, found {line:?}")))?;
        if idx == 0 || idx > n {
            return Err(malformed(format!("index {idx} outside 1..={n}")));
        }
        if out.contains(&(idx - 1)) {
            return Err(malformed(format!("index {idx} listed twice")));
        }
        out.push(idx - 1);
    }
    if out.len() >= n {
        return Err(Error::MalformedBaselineFile {
            line: 0,
            reason: "baseline leaves no inliers".into(),
        });
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantResult<T> {
    pub name: String,
    pub outliers: Vec<usize>,
    pub e_rpca: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<T> {
    pub dataset: String,
    pub num_outliers: usize,
    pub rank: usize,
    pub bias: Option<T>,
    pub epsilon: Option<T>,
    /// COPT first, then the baselines in the order given.
    pub variants: Vec<VariantResult<T>>,
}

/// Solves `p` with COPT and scores every baseline with the same `e_rpca`.
pub fn run_comparison<T: Scalar>(
    dataset: &str,
    p: &RpcaProblem<T>,
    baselines: &[Baseline],
    options: &SearchOptions,
) -> Result<ComparisonReport<T>> {
    let sol = copt_with(p, options)?;
    compare_solution(dataset, p, &sol, baselines)
}

/// Scores every baseline against an already computed solution of `p`.
pub fn compare_solution<T: Scalar>(
    dataset: &str,
    p: &RpcaProblem<T>,
    sol: &RpcaSolution<T>,
    baselines: &[Baseline],
) -> Result<ComparisonReport<T>> {
    let mut variants = vec![VariantResult {
        name: "copt".into(),
        outliers: sol.outliers.clone(),
        e_rpca: sol.e_rpca,
    }];
    for baseline in baselines {
        variants.push(VariantResult {
            name: baseline.name.clone(),
            outliers: baseline.outliers.clone(),
            e_rpca: subset_e_rpca(&p.data, &baseline.outliers, p.rank)?,
        });
    }
    Ok(ComparisonReport {
        dataset: dataset.into(),
        num_outliers: p.num_outliers,
        rank: p.rank,
        bias: sol.bias.map(|c| c.bias),
        epsilon: sol.bias.map(|c| c.epsilon),
        variants,
    })
}

/// `e_rpca` of the centered rank-`r` fit after removing `outliers`.
pub fn subset_e_rpca<T: Scalar>(x: &DataMatrix<T>, outliers: &[usize], r: usize) -> Result<T> {
    let (center, components) = centered_fit(x, outliers, r)?;
    Ok(e_rpca_for(x, outliers, &center, &components))
}

/// `count` uniformly random `k`-subsets of `0..n`, each sorted, from a fixed seed.
pub fn random_subsets(n: usize, k: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s = sample(&mut rng, n, k).into_vec();
            s.sort_unstable();
            s
        })
        .collect()
}

/// Gaussian points with axis scales in `[0.5, 2)` around a random mean of norm `mean_norm`.
pub fn synthetic_gaussian<T: Scalar>(m: usize, n: usize, mean_norm: f64, seed: u64) -> Result<DataMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };
    let scales_dist = Uniform::new(0.5, 2.0).expect("valid range");
    let scales: Vec<f64> = (0..m).map(|_| scales_dist.sample(&mut rng)).collect();
    let mut mean: Vec<f64> = (0..m).map(|_| gauss(&mut rng)).collect();
    let len = mean.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut mean {
        *v *= mean_norm / len;
    }
    let points: Vec<Vec<T>> = (0..n)
        .map(|_| (0..m).map(|j| T::lit(mean[j] + scales[j] * gauss(&mut rng))).collect())
        .collect();
    DataMatrix::from_points(&points)
}

/// Bias magnitudes `b = √(1−ε²)/ε · ‖μ‖` for each ε.
pub fn biases_for<T: Scalar>(x: &DataMatrix<T>, epsilons: &[T]) -> Result<Vec<T>> {
    let mu_norm = norm(&column_mean(x));
    epsilons.iter().map(|&e| bias_magnitude(e, mu_norm)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::BiasChoice;
    use crate::rpca::Centering;
    use crate::testutil::{gaussian_data, rng};

    fn basis(cols: &[Vec<f64>]) -> Matrix<f64> {
        Matrix::from_columns(cols).unwrap()
    }

    #[test]
    fn principal_angle_of_rotated_line() {
        let t: f64 = 0.3;
        let a = basis(&[vec![1.0, 0.0, 0.0]]);
        let b = basis(&[vec![t.cos(), t.sin(), 0.0]]);
        assert!((principal_angle(&a, &b).unwrap() - t).abs() < 1e-14);
    }

    #[test]
    fn principal_angle_ignores_basis_choice() {
        let s = 0.5f64.sqrt();
        let a = basis(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let b = basis(&[vec![s, s, 0.0], vec![s, -s, 0.0]]);
        assert!(principal_angle(&a, &b).unwrap() < 1e-15);
        let c = basis(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!((principal_angle(&a, &c).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn tiny_angles_are_resolved() {
        let t: f64 = 1e-9;
        let a = basis(&[vec![1.0, 0.0]]);
        let b = basis(&[vec![t.cos(), t.sin()]]);
        let got = principal_angle(&a, &b).unwrap();
        assert!((got - t).abs() < 1e-20, "{got}");
    }

    #[test]
    fn relative_error_uses_floor() {
        assert_eq!(max_relative_eigenvalue_error(&[2.0, 1.5], &[2.0, 1.0]), 0.5);
        assert_eq!(max_relative_eigenvalue_error(&[1e-13], &[0.0]), 0.1);
    }

    #[test]
    fn sweep_on_centered_data_is_exact() {
        let pts: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![-1.0, -2.0], vec![3.0, -1.0], vec![-3.0, 1.0]];
        let x = DataMatrix::from_points(&pts).unwrap();
        let sweep = epsilon_sweep(&x, 2, &[0.5, 0.1, 0.01]).unwrap();
        assert!(sweep.eigenvalue_errors.iter().all(|&e| e < 1e-12));
        assert!(sweep.biases.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn sweep_error_shrinks_with_epsilon() {
        let x = synthetic_gaussian::<f64>(3, 50, 10.0, 7).unwrap();
        let sweep = epsilon_sweep(&x, 2, &[0.5, 0.2, 0.05, 0.01]).unwrap();
        for w in sweep.eigenvalue_errors.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert_eq!(sweep.epsilons.len(), sweep.subspace_angles.len());
    }

    #[test]
    fn synthetic_mean_has_requested_norm() {
        let x = synthetic_gaussian::<f64>(3, 2000, 10.0, 1).unwrap();
        let mean = norm(&column_mean(&x));
        assert!((mean - 10.0).abs() < 0.5, "{mean}");
    }

    #[test]
    fn cadima_jolliffe_on_orthogonal_spread() {
        // points μ + y_i with y_i ⊥ μ and Σ y_i = 0
        let mu = [1.0, 2.0, 2.0];
        let y = [
            [2.0, -1.0, 0.0],
            [0.0, 1.0, -1.0],
            [-2.0, 1.0, 0.0],
            [0.0, -1.0, 1.0],
            [2.0, -2.0, 1.0],
            [-2.0, 2.0, -1.0],
        ];
        let pts: Vec<Vec<f64>> = y.iter().map(|yi| (0..3).map(|j| mu[j] + yi[j]).collect()).collect();
        let report = cadima_jolliffe_check(&DataMatrix::from_points(&pts).unwrap(), 1e-8).unwrap();
        assert!(report.precondition_met);
        assert!(report.passed);
        assert!(report.residuals.iter().all(|r| r.residual < 1e-8));
    }

    #[test]
    fn cadima_jolliffe_negative_control() {
        let x = gaussian_data(&mut rng(30), 4, 30, 1.0);
        let report = cadima_jolliffe_check(&x, 1e-6).unwrap();
        assert!(!report.precondition_met);
        assert!(!report.passed);
    }

    #[test]
    fn biased_eigenpair_residuals_are_small() {
        let x = gaussian_data(&mut rng(31), 4, 40, 3.0);
        let mu_norm = norm(&column_mean(&x));
        let report = biased_eigenpair_check(&x, 100.0 * mu_norm).unwrap();
        assert_eq!(report.absorbed_index, 0);
        assert!(report.absorbed_angle < 1e-3);
        assert!(report.pairs.iter().all(|p| p.residual <= 1e-3 * report.covariance_norm));
    }

    #[test]
    fn leading_eigenvector_converges_and_skips_zero() {
        let x = gaussian_data(&mut rng(32), 3, 25, 4.0);
        let mu_norm = norm(&column_mean(&x));
        let bs: Vec<f64> = [0.0, 1.0, 5.0, 25.0, 125.0].iter().map(|f| f * mu_norm).collect();
        let report = leading_eigenvector_check(&x, &bs).unwrap();
        assert!(report.entries[0].skipped);
        assert!(report.w_error_non_increasing && report.v_angle_non_increasing);
        let last = report.entries.last().unwrap();
        assert!(last.w_error < 1e-4 && last.v_angle < 1e-3);
    }

    #[test]
    fn leading_eigenvector_needs_nonzero_mean() {
        let pts: Vec<Vec<f64>> = vec![vec![1.0], vec![-1.0]];
        assert_eq!(
            leading_eigenvector_check(&DataMatrix::from_points(&pts).unwrap(), &[1.0]),
            Err(Error::DegenerateDirection)
        );
    }

    #[test]
    fn baseline_parsing() {
        assert_eq!(parse_baseline("3\n1\n\n7\n", 10).unwrap(), vec![0, 2, 6]);
        assert!(matches!(
            parse_baseline("1\nx\n", 10),
            Err(Error::MalformedBaselineFile { line: 2, .. })
        ));
        assert!(matches!(
            parse_baseline("0\n", 10),
            Err(Error::MalformedBaselineFile { line: 1, .. })
        ));
        assert!(matches!(
            parse_baseline("2\n2\n", 10),
            Err(Error::MalformedBaselineFile { line: 2, .. })
        ));
        assert!(matches!(
            parse_baseline("1\n2\n", 2),
            Err(Error::MalformedBaselineFile { line: 0, .. })
        ));
    }

    #[test]
    fn comparison_shares_e_rpca() {
        let x = gaussian_data(&mut rng(33), 3, 12, 2.0);
        let p = RpcaProblem::new(x, 2, 1, Centering::Bias(BiasChoice::Epsilon(0.01))).unwrap();
        let alone = run_comparison("fixture", &p, &[], &SearchOptions::default()).unwrap();
        assert_eq!(alone.variants.len(), 1);
        let same = Baseline {
            name: "same".into(),
            outliers: alone.variants[0].outliers.clone(),
        };
        let other = Baseline {
            name: "other".into(),
            outliers: vec![0, 1],
        };
        let report = run_comparison("fixture", &p, &[same, other], &SearchOptions::default()).unwrap();
        assert_eq!(report.variants[1].e_rpca.to_bits(), report.variants[0].e_rpca.to_bits());
        assert!(report.variants[0].e_rpca >= 0.0);
    }

    #[test]
    fn random_subsets_are_seeded() {
        let a = random_subsets(20, 5, 10, 3);
        assert_eq!(a, random_subsets(20, 5, 10, 3));
        assert_ne!(a, random_subsets(20, 5, 10, 4));
        assert!(a.iter().all(|s| s.len() == 5 && s.windows(2).all(|w| w[0] < w[1])));
    }
}
