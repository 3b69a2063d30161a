//! Dense kernels: pivoted thin QR, a cyclic Jacobi eigensolver for the small
//! projected problem, a Lanczos baseline for ground-truth top eigenvalues,
//! and Haar-distributed orthogonal matrices.

mod eig;
mod lanczos;
mod qr;

pub use eig::{jacobi_eigh, SmallEig};
pub use lanczos::{lanczos_top, LanczosResult};
pub use qr::{householder_qr, range_basis, ThinQr};

use crate::error::{invalid, Result};
use crate::mat::Mat;
use crate::rng::GaussianStream;

/// Haar-distributed random orthogonal matrix: QR of a seeded standard
/// Gaussian matrix with the sign convention `R[i,i] > 0`.
pub fn random_orthogonal(n: usize, seed: u64) -> Result<Mat> {
    if n == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let mut g = GaussianStream::new(seed);
    let mut a = Mat::zeros(n, n);
    for j in 0..n {
        for v in a.col_mut(j) {
            *v = g.next();
        }
    }
    // Two-pass Gram-Schmidt normalizes each residual, so R[j,j] = ||residual||
    // is positive by construction and Q is Haar distributed.
    let mut q = Mat::zeros(n, n);
    for j in 0..n {
        let mut col = a.col(j).to_vec();
        for _ in 0..2 {
            for k in 0..j {
                let c = crate::mat::dot(&col, q.col(k));
                for (x, y) in col.iter_mut().zip(q.col(k)) {
                    *x -= c * y;
                }
            }
        }
        let norm = crate::mat::normalize(&mut col);
        if norm == 0.0 {
            // essentially impossible for Gaussian input; restart the column
            return random_orthogonal(n, seed.wrapping_add(0x9e37_79b9));
        }
        q.col_mut(j).copy_from_slice(&col);
    }
    Ok(q)
}
