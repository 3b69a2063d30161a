//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use crate::error::{invalid, Error, Result};
use crate::mat::Mat;

/// All eigenpairs of a small symmetric matrix, values descending.
#[derive(Clone, Debug)]
pub struct SmallEig {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: Mat,
}

const MAX_SWEEPS: usize = 30;

/// Cyclic Jacobi on the symmetrized input `(B + B^T)/2`. Converges when the
/// off-diagonal Frobenius norm drops below `1e-12 * ||B||_F` or after 30
/// sweeps; for the d x d matrices this crate produces (d <= ~64) either
/// bound is reached in a handful of sweeps.
pub fn jacobi_eigh(b: &Mat) -> Result<SmallEig> {
    let r = b.rows();
    if r == 0 || b.cols() != r {
        return Err(invalid(format!(
            "jacobi needs a square matrix, got {} x {}",
            b.rows(),
            b.cols()
        )));
    }
    if !b.is_finite() {
        return Err(Error::NonFinite("jacobi input"));
    }
    let mut a = b.clone();
    for i in 0..r {
        for j in (i + 1)..r {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = Mat::identity(r);
    let fro = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-12 * fro;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..r {
            for j in (i + 1)..r {
                off += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..r {
            for q in (p + 1)..r {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..r {
                    if k != p && k != q {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(p, k)] = a[(k, p)];
                        a[(k, q)] = s * akp + c * akq;
                        a[(q, k)] = a[(k, q)];
                    }
                }
                for k in 0..r {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = v.select_columns(&order);
    Ok(SmallEig { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn residual(b: &Mat, e: &SmallEig) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..e.values.len() {
            let v = e.vectors.col(k);
            let bv = b.mul_vec(v);
            let r: f64 = bv
                .iter()
                .zip(v)
                .map(|(x, y)| (x - e.values[k] * y).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        worst
    }

    #[test]
    fn diagonal_sorts_descending() {
        let b = Mat::from_data(3, 3, vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let e = jacobi_eigh(&b).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        // eigenvectors are a permuted identity up to sign
        for k in 0..3 {
            let v = e.vectors.col(k);
            let big = v.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
            assert!((big - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_analytic() {
        let b = Mat::from_data(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = jacobi_eigh(&b).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vectors.col(0);
        assert!((v0[0].abs() - inv_sqrt2).abs() < 1e-12);
        assert!((v0[1].abs() - inv_sqrt2).abs() < 1e-12);
        assert!((v0[0] * v0[1]).signum() > 0.0); // (1,1)/sqrt(2) direction
    }

    #[test]
    fn trace_and_residual_random() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let r = 5;
            let mut b = Mat::zeros(r, r);
            for i in 0..r {
                for j in 0..=i {
                    let x = rng.next_f64() - 0.5;
                    b[(i, j)] = x;
                    b[(j, i)] = x;
                }
            }
            let e = jacobi_eigh(&b).unwrap();
            let trace: f64 = (0..r).map(|i| b[(i, i)]).sum();
            let sum: f64 = e.values.iter().sum();
            assert!((trace - sum).abs() <= 1e-10 * b.frobenius_norm().max(1.0));
            assert!(residual(&b, &e) <= 1e-9 * b.frobenius_norm().max(1.0));
            // orthonormality
            let g = e.vectors.gram_with(&e.vectors);
            for i in 0..r {
                for j in 0..r {
                    let t = if i == j { 1.0 } else { 0.0 };
                    assert!((g[(i, j)] - t).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        let b = Mat::from_data(1, 1, vec![f64::NAN]).unwrap();
        assert!(jacobi_eigh(&b).is_err());
    }

    /// Count eigenvalues of `b` below `x` through the inertia of the LDL^T
    /// factorization of `b - x I` (Sylvester's law); shares nothing with the
    /// rotation-based solver.
    fn count_below(b: &Mat, x: f64) -> usize {
        let r = b.rows();
        let mut a = b.clone();
        for i in 0..r {
            a[(i, i)] -= x;
        }
        let mut negatives = 0;
        for k in 0..r {
            let pivot = a[(k, k)];
            if pivot < 0.0 {
                negatives += 1;
            }
            if pivot == 0.0 {
                // x collides with an eigenvalue of a leading minor; nudge it
                return count_below(b, x + 1e-13 * (1.0 + x.abs()));
            }
            for i in (k + 1)..r {
                let f = a[(i, k)] / pivot;
                for j in (k + 1)..r {
                    a[(i, j)] -= f * a[(k, j)];
                }
            }
        }
        negatives
    }

    fn bisect_eigenvalue(b: &Mat, which: usize) -> f64 {
        let r = b.rows();
        let bound: f64 = (0..r)
            .map(|i| (0..r).map(|j| b[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
            + 1.0;
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            // descending index `which`: count of eigenvalues below must reach r - which
            if count_below(b, mid) >= r - which {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn matches_inertia_bisection_oracle() {
        let mut rng = SplitMix64::new(55);
        let r = 5;
        let mut b = Mat::zeros(r, r);
        for i in 0..r {
            for j in 0..=i {
                let x = rng.next_f64() * 2.0 - 1.0;
                b[(i, j)] = x;
                b[(j, i)] = x;
            }
        }
        let e = jacobi_eigh(&b).unwrap();
        for k in 0..r {
            let oracle = bisect_eigenvalue(&b, k);
            assert!(
                (e.values[k] - oracle).abs() <= 1e-8,
                "eigenvalue {k}: jacobi {} vs bisection {oracle}",
                e.values[k]
            );
        }
    }
}
