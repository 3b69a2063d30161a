//! Thin Householder QR with column pivoting and rank detection.

use crate::error::{invalid, Error, Result};
use crate::mat::Mat;

/// Rank-revealing thin QR: `Y P = Q R` with `Q` n x r orthonormal and `R`
/// r x d upper trapezoidal in pivoted column order.
#[derive(Clone, Debug)]
pub struct ThinQr {
    pub q: Mat,
    pub r: Mat,
    /// Column permutation: pivoted column `k` is input column `perm[k]`.
    pub perm: Vec<usize>,
    pub rank: usize,
    pub drop_tolerance: f64,
}

impl ThinQr {
    /// `Q * R * P^T`, which reproduces the decomposed input.
    pub fn reconstruct(&self) -> Mat {
        let qr = self.q.mul_mat(&self.r);
        let mut out = Mat::zeros(qr.rows(), qr.cols());
        for (k, &j) in self.perm.iter().enumerate() {
            out.col_mut(j).copy_from_slice(qr.col(k));
        }
        out
    }
}

/// Householder QR of an n x d matrix (n >= d >= 1) with greedy column
/// pivoting. Columns whose pivoted diagonal falls at or below the drop
/// tolerance are discarded; a zero matrix is an error because no range
/// basis exists.
pub fn householder_qr(y: &Mat, drop_tolerance: Option<f64>) -> Result<ThinQr> {
    let (n, d) = (y.rows(), y.cols());
    if d == 0 || n < d {
        return Err(invalid(format!("qr needs n >= d >= 1, got {n} x {d}")));
    }
    if !y.is_finite() {
        return Err(Error::NonFinite("qr input"));
    }
    let ynorm = y.frobenius_norm();
    let tol = match drop_tolerance {
        Some(t) if t >= 0.0 => t,
        Some(_) => return Err(invalid("drop tolerance must be nonnegative")),
        None => 1e-12 * ynorm,
    };
    if ynorm == 0.0 {
        return Err(Error::EmptyRange);
    }

    // Factor in place on a working copy; v_k lives in column k below the diagonal.
    let mut a = y.clone();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut colnorm2: Vec<f64> = (0..d)
        .map(|j| a.col(j).iter().map(|v| v * v).sum())
        .collect();
    let mut betas = vec![0.0; d];
    let mut diag = vec![0.0; d];
    let steps = d.min(n);

    for k in 0..steps {
        // pivot: bring the column with the largest remaining norm to position k
        let (piv, _) = colnorm2[k..]
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
        let piv = piv + k;
        if piv != k {
            perm.swap(k, piv);
            colnorm2.swap(k, piv);
            for i in 0..n {
                let t = a[(i, k)];
                a[(i, k)] = a[(i, piv)];
                a[(i, piv)] = t;
            }
        }

        // Householder vector for column k, rows k..n
        let mut alpha = 0.0;
        for i in k..n {
            alpha += a[(i, k)] * a[(i, k)];
        }
        let alpha = alpha.sqrt();
        if alpha == 0.0 {
            betas[k] = 0.0;
            diag[k] = 0.0;
            continue;
        }
        let sign = if a[(k, k)] >= 0.0 { 1.0 } else { -1.0 };
        let akk = a[(k, k)] + sign * alpha;
        // v = (1, a[k+1..n]/akk); beta = sign*alpha*akk / alpha^2 simplifies below
        for i in (k + 1)..n {
            a[(i, k)] /= akk;
        }
        betas[k] = sign * akk / alpha;
        diag[k] = -sign * alpha;

        // apply the reflector to the remaining columns
        for j in (k + 1)..d {
            let mut s = a[(k, j)];
            for i in (k + 1)..n {
                s += a[(i, k)] * a[(i, j)];
            }
            s *= betas[k];
            a[(k, j)] -= s;
            for i in (k + 1)..n {
                a[(i, j)] -= s * a[(i, k)];
            }
            // norm downdate with a refresh guard against cancellation
            let t = a[(k, j)];
            colnorm2[j] -= t * t;
            if colnorm2[j] < 1e-12 * y.col(perm[j]).iter().map(|v| v * v).sum::<f64>() {
                colnorm2[j] = ((k + 1)..n).map(|i| a[(i, j)] * a[(i, j)]).sum();
            }
        }
        colnorm2[k] = 0.0;
    }

    let rank = (0..steps).take_while(|&k| diag[k].abs() > tol).count();
    if rank == 0 {
        return Err(Error::EmptyRange);
    }

    // R: first `rank` rows of the reduced matrix, in pivoted order
    let mut r = Mat::zeros(rank, d);
    for j in 0..d {
        for i in 0..rank.min(j + 1) {
            r[(i, j)] = if i == j { diag[i] } else { a[(i, j)] };
        }
    }

    // Q: apply the reflectors to the first `rank` identity columns
    let mut q = Mat::zeros(n, rank);
    for j in 0..rank {
        q[(j, j)] = 1.0;
        let col = q.col_mut(j);
        for k in (0..steps.min(j + 1)).rev() {
            if betas[k] == 0.0 {
                continue;
            }
            let mut s = col[k];
            for i in (k + 1)..n {
                s += a[(i, k)] * col[i];
            }
            s *= betas[k];
            col[k] -= s;
            for i in (k + 1)..n {
                col[i] -= s * a[(i, k)];
            }
        }
    }

    Ok(ThinQr {
        q,
        r,
        perm,
        rank,
        drop_tolerance: tol,
    })
}

/// Orthonormal basis of the range of `y`, dropping rank-deficient directions.
pub fn range_basis(y: &Mat) -> Result<Mat> {
    Ok(householder_qr(y, None)?.q)
}
