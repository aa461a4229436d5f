//! Dense symmetric linear algebra: data matrices, moment matrices and PCA.
//!
//! Every moment matrix uses the `1/n` convention; nothing in this crate
//! divides by `n - 1`.

mod jacobi;
mod matrix;

pub use jacobi::{normalize_sign, sym_eigendecomposition, CONVERGENCE_TOLERANCE, MAX_SWEEPS};
pub use matrix::Matrix;

use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

/// `m × n` data matrix whose columns are the data points.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix<T> {
    entries: Matrix<T>,
}

impl<T: Scalar> DataMatrix<T> {
    /// Wraps a matrix after checking it is non-empty and finite.
    pub fn new(entries: Matrix<T>) -> Result<Self> {
        if entries.rows() == 0 || entries.cols() == 0 {
            return Err(Error::InvalidData(format!(
                "data matrix must be non-empty, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        if let Some(pos) = entries.as_slice().iter().position(|x| !x.is_finite()) {
            let (row, col) = (pos % entries.rows(), pos / entries.rows());
            return Err(Error::InvalidData(format!(
                "non-finite entry at coordinate {row}, point {col}"
            )));
        }
        Ok(Self { entries })
    }

    /// Builds the matrix from data points, one point per column.
    pub fn from_points(points: &[Vec<T>]) -> Result<Self> {
        Self::new(Matrix::from_columns(points)?)
    }

    /// Builds the matrix from coordinate rows (`rows[j][i]` is coordinate `j` of point `i`).
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Dimension `m`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    /// Number of points `n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.entries.cols()
    }

    /// Always false: the invariant forbids empty data.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        self.entries.column(i)
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.entries.columns()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.entries
    }

    /// Returns `X + c·1ᵀ`.
    pub fn translated(&self, shift: &[T]) -> Result<Self> {
        check_len(shift.len(), self.dim())?;
        let mut entries = self.entries.clone();
        for i in 0..self.len() {
            for (x, &c) in entries.column_mut(i).iter_mut().zip(shift) {
                *x += c;
            }
        }
        Self::new(entries)
    }

    /// Keeps the listed points in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let columns: Vec<Vec<T>> = indices.iter().map(|&i| self.point(i).to_vec()).collect();
        Self::from_points(&columns)
    }
}

/// Dense symmetric `d × d` matrix, stored in full.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymmetricMatrix<T> {
    /// Checks `|a_ij − a_ji| ≤ 1e-12·max(1, |a_ij|)` before accepting `data` (row-major).
    pub fn new(dim: usize, data: Vec<T>) -> Result<Self> {
        check_len(data.len(), dim * dim)?;
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("non-finite matrix entry".into()));
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
        for row in 0..dim {
            for col in (row + 1)..dim {
                let a = data[row * dim + col];
                let b = data[col * dim + row];
                if (a - b).abs() > tol * T::one().max(a.abs()) {
                    return Err(Error::NotSymmetric { row, col });
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// `self += weight · x xᵀ`
    pub fn add_outer(&mut self, x: &[T], weight: T) {
        debug_assert_eq!(x.len(), self.dim);
        let d = self.dim;
        for i in 0..d {
            let wi = weight * x[i];
            for j in i..d {
                let v = wi * x[j];
                self.data[i * d + j] += v;
                if j != i {
                    self.data[j * d + i] += v;
                }
            }
        }
    }

    /// Rank-1 downdate `self −= x xᵀ`.
    pub fn sub_outer(&mut self, x: &[T]) {
        self.add_outer(x, -T::one());
    }

    pub fn scale(&mut self, factor: T) {
        self.data.iter_mut().for_each(|x| *x *= factor);
    }

    pub fn add_assign(&mut self, other: &SymmetricMatrix<T>) {
        assert_eq!(self.dim, other.dim);
        self.data.iter_mut().zip(&other.data).for_each(|(a, &b)| *a += b);
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| dot(&self.data[i * self.dim..(i + 1) * self.dim], x))
            .collect()
    }

    pub fn max_abs_diff(&self, other: &SymmetricMatrix<T>) -> T {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Matrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub(crate) fn from_parts(eigenvalues: Vec<T>, eigenvectors: Matrix<T>) -> Self {
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Column `j` pairs with `eigenvalues()[j]`.
    pub fn eigenvectors(&self) -> &Matrix<T> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, j: usize) -> &[T] {
        self.eigenvectors.column(j)
    }

    /// `Σ_{j ≥ skip} λ_j` (0-based), clamped at zero.
    pub fn tail_sum(&self, skip: usize) -> T {
        let s: T = self.eigenvalues.iter().skip(skip).copied().sum();
        s.max(T::zero())
    }

    /// `U · diag(λ) · Uᵀ`.
    pub fn reconstruct(&self) -> SymmetricMatrix<T> {
        let mut out = SymmetricMatrix::zeros(self.dim());
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            out.add_outer(self.eigenvector(j), l);
        }
        out
    }
}

/// Principal components with their eigenvalues and the center they were computed about.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel<T> {
    pub components: Matrix<T>,
    pub eigenvalues: Vec<T>,
    pub center: Vec<T>,
}

impl<T: Scalar> PcaModel<T> {
    pub fn rank(&self) -> usize {
        self.components.cols()
    }

    pub fn dim(&self) -> usize {
        self.components.rows()
    }

    /// Coordinates of `x − center` along each component.
    pub fn project(&self, x: &[T]) -> Vec<T> {
        let centered: Vec<T> = x.iter().zip(&self.center).map(|(&a, &c)| a - c).collect();
        self.components.columns().map(|v| dot(v, &centered)).collect()
    }

    /// `‖(x − c) − V Vᵀ (x − c)‖²`
    pub fn residual_sq(&self, x: &[T]) -> T {
        residual_sq(&self.components, &self.center, x)
    }
}

/// `‖(x − c) − V Vᵀ (x − c)‖²`; exactly zero when `V` spans the whole space.
pub(crate) fn residual_sq<T: Scalar>(basis: &Matrix<T>, center: &[T], x: &[T]) -> T {
    if basis.cols() >= x.len() {
        return T::zero();
    }
    let mut r: Vec<T> = x.iter().zip(center).map(|(&a, &c)| a - c).collect();
    for v in basis.columns() {
        let coef = dot(v, &r);
        r.iter_mut().zip(v).for_each(|(ri, &vi)| *ri -= coef * vi);
    }
    dot(&r, &r)
}

pub(crate) fn check_len(found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn check_rank(k: usize, available: usize) -> Result<()> {
    if k == 0 {
        Err(Error::ZeroRank)
    } else if k > available {
        Err(Error::RankRequestTooLarge {
            requested: k,
            available,
        })
    } else {
        Ok(())
    }
}

/// `μ = (1/n) Σ x_i`
pub fn column_mean<T: Scalar>(x: &DataMatrix<T>) -> Vec<T> {
    let mut mu = vec![T::zero(); x.dim()];
    for p in x.points() {
        mu.iter_mut().zip(p).for_each(|(m, &v)| *m += v);
    }
    let n = T::from_count(x.len());
    mu.iter_mut().for_each(|m| *m /= n);
    mu
}

/// Unnormalized scatter `Σ_{i ∈ indices} x_i x_iᵀ`, accumulated in the order given.
pub fn scatter_matrix<T: Scalar>(x: &DataMatrix<T>, indices: &[usize]) -> SymmetricMatrix<T> {
    let mut s = SymmetricMatrix::zeros(x.dim());
    for &i in indices {
        s.add_outer(x.point(i), T::one());
    }
    s
}

/// `B = (1/n) Σ x_i x_iᵀ`
pub fn second_moment_matrix<T: Scalar>(x: &DataMatrix<T>) -> SymmetricMatrix<T> {
    let all: Vec<usize> = (0..x.len()).collect();
    let mut b = scatter_matrix(x, &all);
    b.scale(T::one() / T::from_count(x.len()));
    b
}

/// `C = (1/n) Σ (x_i − μ)(x_i − μ)ᵀ`
pub fn covariance_matrix<T: Scalar>(x: &DataMatrix<T>) -> SymmetricMatrix<T> {
    let mu = column_mean(x);
    let mut c = SymmetricMatrix::zeros(x.dim());
    let mut centered = vec![T::zero(); x.dim()];
    for p in x.points() {
        centered
            .iter_mut()
            .zip(p.iter().zip(&mu))
            .for_each(|(d, (&v, &m))| *d = v - m);
        c.add_outer(&centered, T::one());
    }
    c.scale(T::one() / T::from_count(x.len()));
    c
}

/// Top-`k` eigenpairs of `a` packaged as a PCA model about `center`.
pub fn pca_from_matrix<T: Scalar>(a: &SymmetricMatrix<T>, k: usize, center: Vec<T>) -> Result<PcaModel<T>> {
    check_rank(k, a.dim())?;
    let eig = sym_eigendecomposition(a)?;
    Ok(PcaModel {
        components: eig.eigenvectors().leading_columns(k),
        eigenvalues: eig.eigenvalues()[..k].to_vec(),
        center,
    })
}

/// PCA of the second-moment matrix `B`; the center is the zero vector.
pub fn uncentered_pca<T: Scalar>(x: &DataMatrix<T>, k: usize) -> Result<PcaModel<T>> {
    check_rank(k, x.dim())?;
    pca_from_matrix(&second_moment_matrix(x), k, vec![T::zero(); x.dim()])
}

/// PCA of the covariance matrix `C`, centered at the column mean.
pub fn centered_pca_direct<T: Scalar>(x: &DataMatrix<T>, k: usize) -> Result<PcaModel<T>> {
    check_rank(k, x.dim())?;
    pca_from_matrix(&covariance_matrix(x), k, column_mean(x))
}
