//! Best-first branch and bound over outlier subsets.
//!
//! Points are visited in a fixed branching order and each tree level decides
//! one point: outlier or inlier. A node is `(decided outliers, next
//! position)`; every point before `next` that is not an outlier is a decided
//! inlier. Nodes are expanded in order of an admissible lower bound on the
//! objective of any completion, taking the largest of three bounds:
//!
//! * interlacing: removing `s` more rank-1 terms from the candidate scatter
//!   `A` lowers each eigenvalue by at most `s` positions, so the final tail
//!   beyond `r` is at least `Σ_{j > r+s} λ_j(A)`;
//! * split: trailing eigenvalue sums are concave, so the tail of `D + U'` is
//!   at least `tail_r(D) + tail_{r+s}(U)` for decided inliers `D` and the
//!   undecided suffix `U`;
//! * perturbation: removing `x` from `A` saves at most `‖(I − P)x‖²` under
//!   the final subspace `P`, and that residual is bounded by how far `P` must
//!   rotate away from the top eigenspace of `A`, which itself costs objective.
//!
//! Sibling expansions run concurrently in fixed-size batches. Batches are
//! formed and merged in a deterministic order and the winning subset is
//! chosen by a tie rule that ignores discovery order, so results do not
//! depend on the thread count.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{complement, finish, tail_of, Candidates, RpcaProblem, RpcaSolution, SearchSpace, SearchStats};
use crate::error::{Error, Result};
use crate::linalg::{residual_sq, scatter_matrix, sym_eigendecomposition, EigenDecomposition, SymmetricMatrix};
use crate::scalar::{dot, Scalar};

/// Nodes popped and expanded together per round.
pub const BATCH_SIZE: usize = 32;

/// Lower bounds are reduced by this fraction of `trace(A)` to absorb rounding.
const BOUND_MARGIN: f64 = 1e-9;

const HEURISTIC_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { threads: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode<T> {
    /// Branching positions declared outliers, increasing.
    pub decided_outliers: Vec<usize>,
    /// Every position below this one is decided.
    pub next_index: usize,
    pub lower_bound: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Child<T> {
    Inner(SearchNode<T>),
    /// Fully decided node; outliers are original point indices, sorted.
    Leaf {
        outliers: Vec<usize>,
        objective: T,
    },
}

/// The three bounds that make up a node's lower bound, before the rounding margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBounds<T> {
    pub interlacing: T,
    pub split: T,
    pub perturbation: T,
}

/// Precomputed search state for one problem.
pub struct SearchTree<T> {
    space: SearchSpace<T>,
    k: usize,
    order: Vec<usize>,
    points: Vec<Vec<T>>,
    total: SymmetricMatrix<T>,
    prefix: Vec<SymmetricMatrix<T>>,
    suffix_tails: Vec<Vec<T>>,
    incumbent: (Vec<usize>, T),
}

impl<T: Scalar> SearchTree<T> {
    pub fn new(p: &RpcaProblem<T>) -> Result<Self> {
        let space = SearchSpace::new(p)?;
        if space.centered {
            return Err(Error::InvalidProblem(
                "the centered objective is only available through exhaustive search".into(),
            ));
        }
        let k = p.num_outliers;
        let n = space.matrix.len();
        let (incumbent, residuals) = trimmed_fit(&space, k);

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            residuals[b]
                .partial_cmp(&residuals[a])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let points: Vec<Vec<T>> = order.iter().map(|&i| space.matrix.point(i).to_vec()).collect();

        let d = space.matrix.dim();
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = SymmetricMatrix::zeros(d);
        prefix.push(acc.clone());
        for x in &points {
            acc.add_outer(x, T::one());
            prefix.push(acc.clone());
        }
        let total = acc;

        let mut suffix_tails = vec![Vec::new(); n + 1];
        let mut acc = SymmetricMatrix::zeros(d);
        for pos in (0..=n).rev() {
            if pos < n {
                acc.add_outer(&points[pos], T::one());
            }
            let eig = sym_eigendecomposition(&acc)?;
            suffix_tails[pos] = (0..=k).map(|s| eig.tail_sum(space.rank + s)).collect();
        }

        Ok(Self {
            space,
            k,
            order,
            points,
            total,
            prefix,
            suffix_tails,
            incumbent,
        })
    }

    /// Original point index visited at each branching position.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Outlier set and objective found by the trimmed-fit heuristic.
    pub fn incumbent(&self) -> (&[usize], T) {
        (&self.incumbent.0, self.incumbent.1)
    }

    pub fn root(&self) -> Child<T> {
        self.evaluate(Vec::new(), 0).expect("root is feasible because k < n")
    }

    pub fn children(&self, node: &SearchNode<T>) -> Vec<Child<T>> {
        let i = node.next_index;
        let mut out = Vec::with_capacity(2);
        if node.decided_outliers.len() < self.k {
            let mut with = node.decided_outliers.clone();
            with.push(i);
            out.extend(self.evaluate(with, i + 1));
        }
        out.extend(self.evaluate(node.decided_outliers.clone(), i + 1));
        out
    }

    /// Original indices of every point the given positions refer to, sorted.
    pub fn original_indices(&self, positions: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = positions.iter().map(|&p| self.order[p]).collect();
        v.sort_unstable();
        v
    }

    fn evaluate(&self, outliers: Vec<usize>, next: usize) -> Option<Child<T>> {
        let n = self.points.len();
        let s = self.k - outliers.len();
        let remaining = n - next;
        if s > remaining {
            return None;
        }
        if s == 0 || s == remaining {
            let mut positions = outliers;
            if s > 0 {
                positions.extend(next..n);
            }
            let outliers = self.original_indices(&positions);
            let objective = self.space.objective(&complement(n, &outliers));
            return Some(Child::Leaf { outliers, objective });
        }
        let lower_bound = self.lower_bound(&outliers, next);
        Some(Child::Inner(SearchNode {
            decided_outliers: outliers,
            next_index: next,
            lower_bound,
        }))
    }

    fn lower_bound(&self, outliers: &[usize], next: usize) -> T {
        let (bounds, trace) = self.bounds_and_trace(outliers, next);
        let margin = T::lit(BOUND_MARGIN) * trace.abs();
        (bounds.interlacing.max(bounds.split).max(bounds.perturbation) - margin).max(T::zero())
    }

    /// Individual lower bounds for the node `(outliers, next)` (positions in branching order).
    pub fn lower_bounds(&self, outliers: &[usize], next: usize) -> LowerBounds<T> {
        self.bounds_and_trace(outliers, next).0
    }

    fn bounds_and_trace(&self, outliers: &[usize], next: usize) -> (LowerBounds<T>, T) {
        let r = self.space.rank;
        let s = self.k - outliers.len();

        let mut candidates = self.total.clone();
        let mut decided = self.prefix[next].clone();
        for &o in outliers {
            candidates.sub_outer(&self.points[o]);
            decided.sub_outer(&self.points[o]);
        }
        let eig = sym_eigendecomposition(&candidates).expect("finite scatter matrix");

        let bounds = LowerBounds {
            interlacing: eig.tail_sum(r + s),
            split: tail_of(&decided, r) + self.suffix_tails[next][s],
            perturbation: perturbation_bound(&eig, r, &self.points[next..], s),
        };
        (bounds, candidates.trace())
    }
}

/// Lower bound on `tail_r(A − Σ_{x∈R} x xᵀ)` over all `R ⊆ undecided` with `|R| = s`.
///
/// With `a_j, λ_j` the eigenpairs of `A`, `τ = λ_r`, and `H` the leading
/// indices with `λ_j > τ`, write `q_x = Σ_H (a_jᵀx)²/(λ_j − τ)` and
/// `ρ_x² = Σ_{j∉H} (a_jᵀx)²`. For any rank-`r` projector `P` with excess
/// `Δ = tr((I−P)A) − tail_r(A)`, Cauchy–Schwarz gives
/// `‖(I−P)x‖ ≤ √(q_x Δ) + ρ_x`. Minimizing `tail_r(A) + Δ − Σ_R (√(q_x Δ) + ρ_x)²`
/// over `Δ ≥ 0` yields `tail_r(A) − Σρ² − (Σ√q ρ)²/(1 − Σq)` when `Σq < 1`;
/// each sum is replaced by its `s` largest terms over the undecided points.
fn perturbation_bound<T: Scalar>(eig: &EigenDecomposition<T>, r: usize, undecided: &[Vec<T>], s: usize) -> T {
    let d = eig.dim();
    if r >= d {
        return T::zero();
    }
    let lambda = eig.eigenvalues();
    let tau = lambda[r];
    let gap_floor = T::lit(1e-12) * lambda[0].abs().max(T::min_positive_value());
    let head: Vec<usize> = (0..r).filter(|&j| lambda[j] - tau > gap_floor).collect();

    let mut q = Vec::with_capacity(undecided.len());
    let mut rho2 = Vec::with_capacity(undecided.len());
    let mut cross = Vec::with_capacity(undecided.len());
    for x in undecided {
        let mut qx = T::zero();
        let mut rx = T::zero();
        let mut h = head.iter().peekable();
        for (j, &l) in lambda.iter().enumerate() {
            let xi = dot(eig.eigenvector(j), x);
            if h.peek() == Some(&&j) {
                h.next();
                qx += xi * xi / (l - tau);
            } else {
                rx += xi * xi;
            }
        }
        q.push(qx);
        rho2.push(rx);
        cross.push((qx * rx).sqrt());
    }
    let total_q = top_sum(&mut q, s);
    if total_q >= T::one() {
        return T::neg_infinity();
    }
    let c = top_sum(&mut cross, s);
    eig.tail_sum(r) - top_sum(&mut rho2, s) - c * c / (T::one() - total_q)
}

fn top_sum<T: Scalar>(values: &mut [T], s: usize) -> T {
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    values.iter().take(s).copied().sum()
}

/// Alternating trimmed fit: refit on the inliers, then mark the `k` largest
/// residuals as outliers, until the outlier set stops changing.
///
/// Returns the best outlier set seen with its objective, and every point's
/// residual under the fit of that set's inliers.
fn trimmed_fit<T: Scalar>(space: &SearchSpace<T>, k: usize) -> ((Vec<usize>, T), Vec<T>) {
    let x = &space.matrix;
    let n = x.len();
    let fit_residuals = |outliers: &[usize]| -> Vec<T> {
        let inliers = complement(n, outliers);
        let rank = space.rank.min(x.dim());
        let eig = sym_eigendecomposition(&scatter_matrix(x, &inliers)).expect("finite scatter matrix");
        let basis = eig.eigenvectors().leading_columns(rank);
        let origin = vec![T::zero(); x.dim()];
        x.points().map(|p| residual_sq(&basis, &origin, p)).collect()
    };

    let mut current: Vec<usize> = Vec::new();
    let mut best: Option<(Vec<usize>, T)> = None;
    for _ in 0..HEURISTIC_ITERATIONS {
        let residuals = fit_residuals(&current);
        let next = largest_k(&residuals, k);
        if best.is_some() && next == current {
            break;
        }
        current = next;
        let objective = space.objective(&complement(n, &current));
        if best.as_ref().is_none_or(|(_, b)| objective < *b) {
            best = Some((current.clone(), objective));
        }
    }
    let best = best.expect("at least one heuristic iteration");
    let residuals = fit_residuals(&best.0);
    (best, residuals)
}

fn largest_k<T: Scalar>(values: &[T], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

struct Queued<T>(SearchNode<T>);

impl<T: Scalar> Ord for Queued<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap pops the maximum: smallest bound first, then deeper, then smaller outlier list
        other
            .0
            .lower_bound
            .partial_cmp(&self.0.lower_bound)
            .unwrap_or(Ordering::Equal)
            .then(self.0.next_index.cmp(&other.0.next_index))
            .then(other.0.decided_outliers.cmp(&self.0.decided_outliers))
    }
}

impl<T: Scalar> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> PartialEq for Queued<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Queued<T> {}

/// Exact optimum by best-first branch and bound, single-threaded.
pub fn branch_and_bound_outliers<T: Scalar>(p: &RpcaProblem<T>) -> Result<RpcaSolution<T>> {
    branch_and_bound_with(p, &SearchOptions::default())
}

pub fn branch_and_bound_with<T: Scalar>(p: &RpcaProblem<T>, options: &SearchOptions) -> Result<RpcaSolution<T>> {
    let tree = SearchTree::new(p)?;
    let n = p.data.len();
    let mut stats = SearchStats::default();

    if tree.space.rank >= tree.space.matrix.dim() {
        // every subset fits exactly; the tie rule picks the first k points
        let outliers: Vec<usize> = (0..p.num_outliers).collect();
        let objective = tree.space.objective(&complement(n, &outliers));
        stats.subsets_evaluated = 1;
        return finish(p, &tree.space, outliers, objective, stats);
    }

    let pool = if options.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.threads)
                .build()
                .map_err(|e| Error::InvalidProblem(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut candidates = Candidates::new();
    let (inc_outliers, inc_objective) = tree.incumbent();
    candidates.offer(inc_outliers.to_vec(), inc_objective);
    stats.subsets_evaluated += 1;

    let mut heap = BinaryHeap::new();
    match tree.root() {
        Child::Leaf { outliers, objective } => {
            stats.subsets_evaluated += 1;
            candidates.offer(outliers, objective);
        }
        Child::Inner(node) => heap.push(Queued(node)),
    }

    let mut batch = Vec::with_capacity(BATCH_SIZE);
    loop {
        batch.clear();
        while batch.len() < BATCH_SIZE {
            match heap.peek() {
                Some(top) if top.0.lower_bound <= candidates.threshold() => {
                    batch.push(heap.pop().expect("peeked").0);
                }
                _ => break,
            }
        }
        if batch.is_empty() {
            break;
        }
        stats.nodes_expanded += batch.len() as u64;
        let expanded: Vec<Vec<Child<T>>> = match &pool {
            Some(pool) => pool.install(|| batch.par_iter().map(|node| tree.children(node)).collect()),
            None => batch.iter().map(|node| tree.children(node)).collect(),
        };
        for child in expanded.into_iter().flatten() {
            match child {
                Child::Leaf { outliers, objective } => {
                    stats.subsets_evaluated += 1;
                    candidates.offer(outliers, objective);
                }
                Child::Inner(node) => {
                    if node.lower_bound <= candidates.threshold() {
                        heap.push(Queued(node));
                    }
                }
            }
        }
    }

    let (outliers, objective) = candidates.into_winner().expect("incumbent is always offered");
    finish(p, &tree.space, outliers, objective, stats)
}
