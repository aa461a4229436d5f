//! Principal component analysis with the bias trick for implicit centering,
//! and exact outlier-based robust PCA built on it.
//!
//! Data are stored with one point per column (`m` features by `n` points).
//! Covariances always use the `1/n` normalization.

pub mod bias;
pub mod error;
pub mod evaluation;
pub mod linalg;
pub mod rpca;
pub mod scalar;

#[cfg(test)]
mod testutil;

pub use bias::{
    append_bias_row, bias_magnitude, centered_pca_via_bias, centered_pca_with_bias, BiasChoice, BiasConfig,
    BiasTrickOutcome, DEFAULT_EPSILON,
};
pub use error::{Error, Result};
pub use linalg::{
    centered_pca_direct, column_mean, covariance_matrix, scatter_matrix, second_moment_matrix, sym_eigendecomposition,
    uncentered_pca, DataMatrix, EigenDecomposition, Matrix, PcaModel, SymmetricMatrix,
};
pub use rpca::{
    branch_and_bound_outliers, copt, e_rpca, exhaustive_optimal_outliers, Centering, RpcaProblem, RpcaSolution,
};
pub use scalar::Scalar;

pub type MatrixF64 = Matrix<f64>;
pub type DataMatrixF64 = DataMatrix<f64>;
pub type SymmetricMatrixF64 = SymmetricMatrix<f64>;
pub type EigenDecompositionF64 = EigenDecomposition<f64>;
pub type PcaModelF64 = PcaModel<f64>;
pub type RpcaProblemF64 = RpcaProblem<f64>;
pub type RpcaSolutionF64 = RpcaSolution<f64>;

pub type MatrixF32 = Matrix<f32>;
pub type DataMatrixF32 = DataMatrix<f32>;
pub type SymmetricMatrixF32 = SymmetricMatrix<f32>;
pub type EigenDecompositionF32 = EigenDecomposition<f32>;
pub type PcaModelF32 = PcaModel<f32>;
