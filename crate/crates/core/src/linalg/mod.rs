//! Small dense-matrix kernel: just enough for singular value decomposition
//! of resident × item matrices, which are a handful of rows wide.

mod matrix;
mod svd;

pub use matrix::{l2_norm, DenseMatrix};
pub use svd::{svd, truncate, truncation_rank, SvdResult, TruncatedSvd, DEFAULT_SVD_TOLERANCE, MAX_SWEEPS};
