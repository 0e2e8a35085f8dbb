//! Singular value decomposition and rank truncation of a small matrix.

use iot_conflict::linalg::{svd, truncate, DenseMatrix, DEFAULT_SVD_TOLERANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = DenseMatrix::from_rows(&[
        [19.44, 14.48, 15.20, 11.04],
        [20.00, 17.20, 14.52, 20.00],
        [16.08, 14.12, 14.40, 20.00],
    ])?;
    let s = svd(&h, DEFAULT_SVD_TOLERANCE)?;
    println!("singular values {:.4?} after {} sweeps", s.singular_values, s.sweeps);
    println!("A = {:?}V = {:?}", s.a, s.v);
    let err = s.reconstruct().max_abs_diff(&h)?;
    println!("max reconstruction error {err:.2e}");
    for alpha in [0.5, 0.9, 0.97, 0.999] {
        println!("alpha {alpha}: keep {} features", truncate(&s, alpha)?.w);
    }
    Ok(())
}
