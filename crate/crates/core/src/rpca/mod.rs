//! Exact outlier-based robust PCA.
//!
//! Given `n` points, choose `k` outliers so that the remaining points are
//! fitted as well as possible by a rank-`r` subspace. The fitting error of a
//! point set through the origin is the sum of the trailing eigenvalues of its
//! scatter matrix, so every candidate subset is scored by one eigensolve.
//!
//! Three centering modes are supported:
//!
//! * [`Centering::None`]: subspaces through the origin.
//! * [`Centering::Bias`]: the data is bias-augmented and scored at rank
//!   `r + 1`, which approximates the centered rank-`r` error of the inliers.
//!   Searching this objective exactly is COPT ([`copt`]).
//! * [`Centering::OracleCentered`]: the inliers are centered at their own mean
//!   before scoring. Only the exhaustive search supports it.

mod search;

pub use search::{
    branch_and_bound_outliers, branch_and_bound_with, Child, LowerBounds, SearchNode, SearchOptions, SearchTree,
    BATCH_SIZE,
};

use crate::bias::{append_bias_row, BiasChoice, BiasConfig};
use crate::error::{Error, Result};
use crate::linalg::{
    pca_from_matrix, residual_sq, scatter_matrix, sym_eigendecomposition, DataMatrix, Matrix, SymmetricMatrix,
};
use crate::scalar::Scalar;

/// Subsets enumerated by [`exhaustive_optimal_outliers`] before it gives up.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 2_000_000;

/// Objectives within this absolute distance of the optimum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Centering<T> {
    None,
    Bias(BiasChoice<T>),
    OracleCentered,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RpcaProblem<T> {
    pub data: DataMatrix<T>,
    pub num_outliers: usize,
    pub rank: usize,
    pub centering: Centering<T>,
}

impl<T: Scalar> RpcaProblem<T> {
    pub fn new(data: DataMatrix<T>, num_outliers: usize, rank: usize, centering: Centering<T>) -> Result<Self> {
        let p = Self {
            data,
            num_outliers,
            rank,
            centering,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.data.dim(), self.data.len());
        if self.num_outliers >= n {
            return Err(Error::InvalidProblem(format!(
                "need fewer outliers than points ({} >= {n})",
                self.num_outliers
            )));
        }
        if self.rank == 0 {
            return Err(Error::ZeroRank);
        }
        if self.rank > m {
            return Err(Error::RankRequestTooLarge {
                requested: self.rank,
                available: m,
            });
        }
        Ok(())
    }

    /// Search objective of the given outlier set, recomputed from scratch.
    pub fn objective_of(&self, outliers: &[usize]) -> Result<T> {
        let space = SearchSpace::new(self)?;
        Ok(space.objective(&complement(self.data.len(), outliers)))
    }
}

/// Counters from a search run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub subsets_evaluated: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RpcaSolution<T> {
    /// Outlier indices (0-based), strictly increasing.
    pub outliers: Vec<usize>,
    /// `m × r` orthonormal basis fitted to the inliers.
    pub components: Matrix<T>,
    /// Mean of the inliers, or zero for uncentered problems.
    pub center: Vec<T>,
    /// Search objective on the inliers.
    pub objective: T,
    pub e_rpca: T,
    /// Bias used by the search, when the problem is bias-centered.
    pub bias: Option<BiasConfig<T>>,
    pub stats: SearchStats,
}

impl<T: Scalar> RpcaSolution<T> {
    pub fn inliers(&self, n: usize) -> Vec<usize> {
        complement(n, &self.outliers)
    }

    /// Squared reconstruction residual of every point under the reported fit.
    pub fn residuals(&self, x: &DataMatrix<T>) -> Vec<T> {
        x.points()
            .map(|p| residual_sq(&self.components, &self.center, p))
            .collect()
    }
}

/// The data a search actually scores: original or bias-augmented, at the effective rank.
pub(crate) struct SearchSpace<T> {
    pub matrix: DataMatrix<T>,
    pub rank: usize,
    pub bias: Option<BiasConfig<T>>,
    pub centered: bool,
}

impl<T: Scalar> SearchSpace<T> {
    pub fn new(p: &RpcaProblem<T>) -> Result<Self> {
        p.validate()?;
        Ok(match p.centering {
            Centering::None => Self {
                matrix: p.data.clone(),
                rank: p.rank,
                bias: None,
                centered: false,
            },
            Centering::Bias(choice) => {
                let config = BiasConfig::for_data(&p.data, choice)?;
                Self {
                    matrix: append_bias_row(&p.data, config.bias)?.into_data(),
                    rank: p.rank + 1,
                    bias: Some(config),
                    centered: false,
                }
            }
            Centering::OracleCentered => Self {
                matrix: p.data.clone(),
                rank: p.rank,
                bias: None,
                centered: true,
            },
        })
    }

    pub fn objective(&self, inliers: &[usize]) -> T {
        if self.centered {
            centered_tail_error(&self.matrix, inliers, self.rank)
        } else {
            tail_error(&self.matrix, inliers, self.rank)
        }
    }
}

/// Minimal `Σ_{i∈inliers} ‖x_i − V Vᵀ x_i‖²` over rank-`r` orthonormal `V`:
/// the eigenvalues of the inlier scatter matrix beyond the `r`-th, summed.
pub fn tail_error<T: Scalar>(x: &DataMatrix<T>, inliers: &[usize], r: usize) -> T {
    tail_of(&scatter_matrix(x, inliers), r)
}

/// As [`tail_error`], after centering the inliers at their own mean.
pub fn centered_tail_error<T: Scalar>(x: &DataMatrix<T>, inliers: &[usize], r: usize) -> T {
    tail_of(&centered_scatter(x, inliers), r)
}

pub(crate) fn tail_of<T: Scalar>(s: &SymmetricMatrix<T>, r: usize) -> T {
    if r >= s.dim() {
        return T::zero();
    }
    sym_eigendecomposition(s)
        .expect("Jacobi sweeps converge on finite scatter matrices")
        .tail_sum(r)
}

fn centered_scatter<T: Scalar>(x: &DataMatrix<T>, inliers: &[usize]) -> SymmetricMatrix<T> {
    let mu = subset_mean(x, inliers);
    let mut s = SymmetricMatrix::zeros(x.dim());
    let mut y = vec![T::zero(); x.dim()];
    for &i in inliers {
        y.iter_mut()
            .zip(x.point(i).iter().zip(&mu))
            .for_each(|(d, (&v, &m))| *d = v - m);
        s.add_outer(&y, T::one());
    }
    s
}

fn subset_mean<T: Scalar>(x: &DataMatrix<T>, indices: &[usize]) -> Vec<T> {
    let mut mu = vec![T::zero(); x.dim()];
    for &i in indices {
        mu.iter_mut().zip(x.point(i)).for_each(|(m, &v)| *m += v);
    }
    let n = T::from_count(indices.len().max(1));
    mu.iter_mut().for_each(|m| *m /= n);
    mu
}

/// Sorted indices in `0..n` not listed in `excluded` (which must be sorted).
pub fn complement(n: usize, excluded: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n.saturating_sub(excluded.len()));
    let mut it = excluded.iter().peekable();
    for i in 0..n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

/// Centered rank-`r` fit of the points outside `outliers`: (inlier mean, top-`r` covariance eigenvectors).
pub fn centered_fit<T: Scalar>(x: &DataMatrix<T>, outliers: &[usize], r: usize) -> Result<(Vec<T>, Matrix<T>)> {
    let inliers = complement(x.len(), outliers);
    let center = subset_mean(x, &inliers);
    let model = pca_from_matrix(&centered_scatter(x, &inliers), r, center)?;
    Ok((model.center, model.components))
}

/// `E_rpca = (1/|I|) Σ_{i∈I} ‖(x_i − μ) − V Vᵀ (x_i − μ)‖²` over the inliers `I` of `sol`.
pub fn e_rpca<T: Scalar>(x: &DataMatrix<T>, sol: &RpcaSolution<T>) -> T {
    e_rpca_for(x, &sol.outliers, &sol.center, &sol.components)
}

/// [`e_rpca`] with the fit given explicitly.
pub fn e_rpca_for<T: Scalar>(x: &DataMatrix<T>, outliers: &[usize], center: &[T], components: &Matrix<T>) -> T {
    let inliers = complement(x.len(), outliers);
    let total: T = inliers
        .iter()
        .map(|&i| residual_sq(components, center, x.point(i)))
        .sum();
    total / T::from_count(inliers.len())
}

/// Builds the reported solution from the chosen outlier set.
///
/// The fit is recomputed from the inliers in the original coordinates, so
/// the reported center, components and `e_rpca` carry no bias-trick error.
pub(crate) fn finish<T: Scalar>(
    p: &RpcaProblem<T>,
    space: &SearchSpace<T>,
    outliers: Vec<usize>,
    objective: T,
    stats: SearchStats,
) -> Result<RpcaSolution<T>> {
    let (center, components) = match p.centering {
        Centering::None => {
            let inliers = complement(p.data.len(), &outliers);
            let model = pca_from_matrix(
                &scatter_matrix(&p.data, &inliers),
                p.rank,
                vec![T::zero(); p.data.dim()],
            )?;
            (model.center, model.components)
        }
        Centering::Bias(_) | Centering::OracleCentered => centered_fit(&p.data, &outliers, p.rank)?,
    };
    let e = e_rpca_for(&p.data, &outliers, &center, &components);
    Ok(RpcaSolution {
        outliers,
        components,
        center,
        objective,
        e_rpca: e,
        bias: space.bias,
        stats,
    })
}

/// Tracks every subset within [`TIE_TOLERANCE`] of the best objective seen so far.
///
/// The winner is the lexicographically smallest outlier set among those
/// within tolerance of the final minimum, which makes the answer independent
/// of the order in which subsets are offered.
pub(crate) struct Candidates<T> {
    best: T,
    tol: T,
    entries: Vec<(Vec<usize>, T)>,
}

impl<T: Scalar> Candidates<T> {
    pub fn new() -> Self {
        Self {
            best: T::infinity(),
            tol: T::lit(TIE_TOLERANCE),
            entries: Vec::new(),
        }
    }

    /// Largest objective that can still win.
    pub fn threshold(&self) -> T {
        self.best + self.tol
    }

    pub fn offer(&mut self, outliers: Vec<usize>, objective: T) {
        if objective < self.best {
            self.best = objective;
            let limit = self.threshold();
            self.entries.retain(|(_, o)| *o <= limit);
        }
        if objective <= self.threshold() && !self.entries.iter().any(|(s, _)| *s == outliers) {
            self.entries.push((outliers, objective));
        }
    }

    pub fn into_winner(self) -> Option<(Vec<usize>, T)> {
        self.entries.into_iter().min_by(|a, b| a.0.cmp(&b.0))
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Brute-force optimum over all `C(n, k)` outlier subsets with the default budget.
pub fn exhaustive_optimal_outliers<T: Scalar>(p: &RpcaProblem<T>) -> Result<RpcaSolution<T>> {
    exhaustive_with_budget(p, DEFAULT_ENUMERATION_BUDGET)
}

pub fn exhaustive_with_budget<T: Scalar>(p: &RpcaProblem<T>, budget: u128) -> Result<RpcaSolution<T>> {
    let space = SearchSpace::new(p)?;
    let (n, k) = (p.data.len(), p.num_outliers);
    let subsets = binomial(n, k);
    if subsets > budget {
        return Err(Error::BudgetExceeded { subsets, budget });
    }
    let mut candidates = Candidates::new();
    let mut combo: Vec<usize> = (0..k).collect();
    let mut evaluated = 0u64;
    loop {
        let objective = space.objective(&complement(n, &combo));
        evaluated += 1;
        candidates.offer(combo.clone(), objective);
        if !next_combination(&mut combo, n) {
            break;
        }
    }
    let (outliers, objective) = candidates.into_winner().expect("at least one subset");
    let stats = SearchStats {
        nodes_expanded: 0,
        subsets_evaluated: evaluated,
    };
    finish(p, &space, outliers, objective, stats)
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for pos in (0..k).rev() {
        if combo[pos] < n - k + pos {
            combo[pos] += 1;
            for later in pos + 1..k {
                combo[later] = combo[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Optimal centered robust PCA: exact search of the bias-augmented objective.
pub fn copt<T: Scalar>(p: &RpcaProblem<T>) -> Result<RpcaSolution<T>> {
    copt_with(p, &SearchOptions::default())
}

pub fn copt_with<T: Scalar>(p: &RpcaProblem<T>, options: &SearchOptions) -> Result<RpcaSolution<T>> {
    if !matches!(p.centering, Centering::Bias(_)) {
        return Err(Error::InvalidProblem("COPT needs bias centering".into()));
    }
    branch_and_bound_with(p, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{gaussian_data, rng};
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn complement_and_binomial() {
        assert_eq!(complement(5, &[1, 3]), vec![0, 2, 4]);
        assert_eq!(complement(3, &[]), vec![0, 1, 2]);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(178, 5), 1_407_057_960);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(1000, 500), u128::MAX);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }

    #[test]
    fn tail_error_exact_fits() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, 2.0 * i as f64, -(i as f64)]).collect();
        let x = DataMatrix::from_points(&pts).unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert!(tail_error(&x, &all, 1) < 1e-12);
        assert!(tail_error(&x, &[3], 1) < 1e-12);
        assert_eq!(tail_error(&x, &all, 3), 0.0);
    }

    #[test]
    fn candidates_pick_lexicographic_tie() {
        let mut c = Candidates::new();
        c.offer(vec![2, 3], 1.0);
        c.offer(vec![0, 4], 1.0 + 1e-13);
        c.offer(vec![1, 2], 1.0 + 1e-9);
        assert_eq!(c.into_winner(), Some((vec![0, 4], 1.0 + 1e-13)));
        let mut c = Candidates::new();
        c.offer(vec![0, 1], 2.0);
        c.offer(vec![3, 4], 1.0);
        assert_eq!(c.into_winner(), Some((vec![3, 4], 1.0)));
    }

    #[test]
    fn problem_validation() {
        let x = gaussian_data(&mut rng(1), 3, 5, 1.0);
        assert!(RpcaProblem::new(x.clone(), 5, 1, Centering::None).is_err());
        assert!(matches!(
            RpcaProblem::new(x.clone(), 1, 4, Centering::None),
            Err(Error::RankRequestTooLarge { .. })
        ));
        assert!(matches!(
            RpcaProblem::new(x, 1, 0, Centering::None),
            Err(Error::ZeroRank)
        ));
    }

    #[test]
    fn exhaustive_without_outliers_scores_everything() {
        let x = gaussian_data(&mut rng(2), 3, 9, 1.0);
        let p = RpcaProblem::new(x.clone(), 0, 1, Centering::None).unwrap();
        let sol = exhaustive_optimal_outliers(&p).unwrap();
        assert!(sol.outliers.is_empty());
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(sol.objective, tail_error(&x, &all, 1));
        assert_eq!(sol.stats.subsets_evaluated, 1);
    }

    #[test]
    fn exhaustive_budget() {
        let x = gaussian_data(&mut rng(3), 2, 20, 1.0);
        let p = RpcaProblem::new(x, 3, 1, Centering::None).unwrap();
        assert_eq!(
            exhaustive_with_budget(&p, 100).unwrap_err(),
            Error::BudgetExceeded {
                subsets: 1140,
                budget: 100
            }
        );
    }

    #[test]
    fn objective_is_reproducible_from_outliers() {
        let x = gaussian_data(&mut rng(4), 3, 10, 2.0);
        for centering in [
            Centering::None,
            Centering::Bias(BiasChoice::Epsilon(0.1)),
            Centering::OracleCentered,
        ] {
            let p = RpcaProblem::new(x.clone(), 2, 1, centering).unwrap();
            let sol = exhaustive_optimal_outliers(&p).unwrap();
            assert_relative_eq!(
                p.objective_of(&sol.outliers).unwrap(),
                sol.objective,
                max_relative = 1e-9
            );
            let gram = sol.components.transpose_mul(&sol.components);
            assert!(gram.max_abs_diff(&Matrix::identity(1)) < 1e-8);
        }
    }

    #[test]
    fn e_rpca_zero_cases() {
        let x = gaussian_data(&mut rng(5), 3, 8, 2.0);
        let p = RpcaProblem::new(x.clone(), 1, 3, Centering::OracleCentered).unwrap();
        let sol = exhaustive_optimal_outliers(&p).unwrap();
        assert_eq!(e_rpca(&x, &sol), 0.0);

        // inliers on an affine line
        let mut pts: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0 + i as f64, 5.0 - 2.0 * i as f64]).collect();
        pts.push(vec![10.0, 10.0]);
        let x = DataMatrix::from_points(&pts).unwrap();
        let (center, comps) = centered_fit(&x, &[6], 1).unwrap();
        assert!(e_rpca_for(&x, &[6], &center, &comps) < 1e-12);
    }

    #[test]
    fn objective_monotone_in_outlier_count() {
        let mut r = rng(6);
        for _ in 0..10 {
            let m = r.random_range(2..5);
            let n = r.random_range(6..10);
            let x = gaussian_data(&mut r, m, n, 1.0);
            let rank = r.random_range(1..m);
            let mut previous = f64::INFINITY;
            for k in 0..4.min(n) {
                let p = RpcaProblem::new(x.clone(), k, rank, Centering::None).unwrap();
                let obj = exhaustive_optimal_outliers(&p).unwrap().objective;
                assert!(obj <= previous + 1e-12);
                previous = obj;
            }
        }
    }

    #[test]
    fn copt_requires_bias() {
        let x = gaussian_data(&mut rng(7), 2, 6, 1.0);
        let p = RpcaProblem::new(x, 1, 1, Centering::None).unwrap();
        assert!(matches!(copt(&p), Err(Error::InvalidProblem(_))));
    }
}
