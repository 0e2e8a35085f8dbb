//! One-sided Jacobi SVD and rank truncation.

use serde::Serialize;

use super::matrix::{l2_norm, DenseMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_SVD_TOLERANCE: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100;

/// `M = A · diag(σ) · Vᵀ` with `A` m×m, `V` n×n and σ (length `min(m, n)`)
/// sorted descending.
///
/// Signs are fixed so that the largest-magnitude entry of every column of
/// `V` (the first such entry on ties) is nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult {
    pub a: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub v: DenseMatrix,
    pub sweeps: usize,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DenseMatrix {
        let (m, n) = (self.a.rows(), self.v.rows());
        let mut out = DenseMatrix::zeros(m, n);
        for (k, s) in self.singular_values.iter().enumerate() {
            for i in 0..m {
                let a = self.a.get(i, k) * s;
                for j in 0..n {
                    out.set(i, j, out.get(i, j) + a * self.v.get(j, k));
                }
            }
        }
        out
    }
}

/// Computes the full SVD of `m` by one-sided (Hestenes) Jacobi rotations,
/// sweeping until every column pair is orthogonal to relative tolerance
/// `tol`.
pub fn svd(m: &DenseMatrix, tol: f64) -> Result<SvdResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Config(format!("svd tolerance {tol} must be positive")));
    }
    let wide = m.rows() < m.cols();
    let work = if wide { m.transpose() } else { m.clone() };
    let (u, sigma, v, sweeps) = tall_svd(&work, tol)?;
    let (a, v) = if wide { (v, u) } else { (u, v) };
    let mut out = SvdResult { a, singular_values: sigma, v, sweeps };
    fix_signs(&mut out);
    Ok(out)
}

/// Jacobi on a matrix with rows ≥ cols. Returns full U (rows×rows), σ,
/// V (cols×cols) and the sweep count.
fn tall_svd(m: &DenseMatrix, tol: f64) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix, usize)> {
    let (rows, cols) = m.shape();
    // Column-major working copies.
    let mut u: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    // Columns this small are rounding noise; rotating them never settles.
    let floor = (1e-14 * m.frobenius_norm()).powi(2);
    let mut sweeps = 0;
    loop {
        let mut residual: f64 = 0.0;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if alpha <= floor || beta <= floor || gamma == 0.0 {
                    continue;
                }
                let off = gamma.abs() / (alpha * beta).sqrt();
                residual = residual.max(off);
                if off <= tol {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if residual <= tol {
            break;
        }
        sweeps += 1;
        if sweeps >= MAX_SWEEPS {
            return Err(Error::SvdNoConvergence { sweeps, residual });
        }
    }

    let norms: Vec<f64> = u.iter().map(|c| l2_norm(c)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let negligible = 1e-13 * m.frobenius_norm();

    let mut left: Vec<Vec<f64>> = Vec::with_capacity(rows);
    for (&j, &s) in order.iter().zip(&sigma) {
        if s > negligible {
            left.push(u[j].iter().map(|x| x / s).collect());
        }
    }
    // σ is sorted, so vectors for negligible values are completed in place.
    complete_basis(&mut left, rows);

    let mut a = DenseMatrix::zeros(rows, rows);
    for (k, col) in left.iter().enumerate() {
        for i in 0..rows {
            a.set(i, k, col[i]);
        }
    }
    let mut vm = DenseMatrix::zeros(cols, cols);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..cols {
            vm.set(i, k, v[j][i]);
        }
    }
    Ok((a, sigma, vm, sweeps))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Extends orthonormal `basis` to `dim` vectors, each time taking the
/// standard basis vector with the largest component outside the span
/// (Gram-Schmidt, applied twice).
fn complete_basis(basis: &mut Vec<Vec<f64>>, dim: usize) {
    while basis.len() < dim {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for e in 0..dim {
            let mut r: Vec<f64> = (0..dim).map(|i| if i == e { 1.0 } else { 0.0 }).collect();
            for _ in 0..2 {
                for b in basis.iter() {
                    let proj = dot(&r, b);
                    r.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
                }
            }
            let n = l2_norm(&r);
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, r));
            }
        }
        let (n, r) = best.expect("dim > 0");
        basis.push(r.into_iter().map(|x| x / n).collect());
    }
}

fn fix_signs(svd: &mut SvdResult) {
    let n = svd.v.rows();
    for k in 0..n {
        let col = svd.v.column(k);
        let mut pivot = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            for i in 0..n {
                svd.v.set(i, k, -svd.v.get(i, k));
            }
            if k < svd.singular_values.len() {
                for i in 0..svd.a.rows() {
                    svd.a.set(i, k, -svd.a.get(i, k));
                }
            }
        }
    }
}

/// Leading `w` factors of an SVD.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedSvd {
    /// m×w.
    #[serde(skip)]
    pub a_w: DenseMatrix,
    pub d_w: Vec<f64>,
    /// n×w.
    #[serde(skip)]
    pub v_w: DenseMatrix,
    pub w: usize,
}

/// Smallest `w` whose leading singular values carry more than `alpha` of
/// the total. All-zero spectra give 1.
pub fn truncation_rank(sigma: &[f64], alpha: f64) -> usize {
    let mut prefix = Vec::with_capacity(sigma.len());
    let mut acc = 0.0;
    for s in sigma {
        acc += s;
        prefix.push(acc);
    }
    let total = acc;
    if total <= 0.0 {
        return 1;
    }
    prefix
        .iter()
        .position(|c| c / total > alpha)
        .map_or(sigma.len(), |i| i + 1)
}

pub fn truncate(svd: &SvdResult, alpha: f64) -> Result<TruncatedSvd> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("alpha {alpha} must lie in (0, 1)")));
    }
    let w = truncation_rank(&svd.singular_values, alpha).max(1);
    Ok(TruncatedSvd {
        a_w: svd.a.leading_columns(w),
        d_w: svd.singular_values[..w].to_vec(),
        v_w: svd.v.leading_columns(w),
        w,
    })
}
