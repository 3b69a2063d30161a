//! Lanczos iteration with full reorthogonalization for the algebraically
//! largest eigenpair of a symmetric operator.

use crate::error::{invalid, Result};
use crate::linop::SymmetricOperator;
use crate::mat::{dot, normalize};
use crate::rng::{substream, SplitMix64};

#[derive(Clone, Debug)]
pub struct LanczosResult {
    pub lambda1: f64,
    /// Unit-norm Ritz vector for `lambda1`.
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// `||A v - lambda1 v||`, recomputed from scratch at exit.
    pub residual: f64,
    pub converged: bool,
}

const BREAKDOWN: f64 = 1e-14;
const MAX_RESTARTS: usize = 3;

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
fn tridiag_top_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let m = alpha.len();
    let count_below = |x: f64| -> usize {
        // negative pivots of T - xI counted through the Sturm recurrence
        let mut count = 0;
        let mut d = 1.0f64;
        for i in 0..m {
            let b2 = if i == 0 { 0.0 } else { beta[i - 1] * beta[i - 1] };
            d = alpha[i] - x - b2 / d;
            if d == 0.0 {
                d = f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let off = if i == 0 { 0.0 } else { beta[i - 1].abs() }
            + if i + 1 < m { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - off);
        hi = hi.max(alpha[i] + off);
    }
    let scale = hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE);
    let (mut lo, mut hi) = (lo - scale * 1e-12, hi + scale * 1e-12);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= m {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * scale {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector of a symmetric tridiagonal for a known eigenvalue, by inverse
/// iteration with a partially pivoted tridiagonal solve.
fn tridiag_eigenvector(alpha: &[f64], beta: &[f64], lambda: f64, seed: u64) -> Vec<f64> {
    let m = alpha.len();
    if m == 1 {
        return vec![1.0];
    }
    let scale = alpha
        .iter()
        .chain(beta.iter())
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(f64::MIN_POSITIVE);
    let shift = lambda + 1e-13 * scale;
    let mut rng = SplitMix64::new(seed);
    let mut x: Vec<f64> = (0..m).map(|_| rng.next_f64() - 0.5).collect();
    normalize(&mut x);
    for _ in 0..3 {
        x = solve_shifted_tridiag(alpha, beta, shift, &x);
        normalize(&mut x);
    }
    x
}

/// Gaussian elimination with partial pivoting on `T - shift I`; rows are kept
/// as (diagonal, first superdiagonal, second superdiagonal) with padding so a
/// row swap never indexes past the band.
fn solve_shifted_tridiag(alpha: &[f64], beta: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let m = alpha.len();
    let mut d: Vec<f64> = alpha.iter().map(|&a| a - shift).collect();
    let mut du = vec![0.0; m];
    du[..m - 1].copy_from_slice(beta);
    let mut du2 = vec![0.0; m];
    let mut b = rhs.to_vec();
    for i in 0..m - 1 {
        let sub = beta[i]; // A[i+1][i], untouched by earlier steps
        let f = if sub.abs() > d[i].abs() {
            // swap rows i and i+1 over columns i, i+1, i+2
            let old = (d[i], du[i], du2[i]);
            d[i] = sub;
            du[i] = d[i + 1];
            du2[i] = du[i + 1];
            d[i + 1] = old.1;
            du[i + 1] = old.2;
            b.swap(i, i + 1);
            old.0 / d[i]
        } else {
            if d[i] == 0.0 {
                d[i] = f64::MIN_POSITIVE;
            }
            sub / d[i]
        };
        d[i + 1] -= f * du[i];
        du[i + 1] -= f * du2[i];
        b[i + 1] -= f * b[i];
    }
    if d[m - 1] == 0.0 {
        d[m - 1] = f64::MIN_POSITIVE;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = b[m - 1] / d[m - 1];
    if m >= 2 {
        x[m - 2] = (b[m - 2] - du[m - 2] * x[m - 1]) / d[m - 2];
    }
    for i in (0..m.saturating_sub(2)).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    x
}

/// Approximate the algebraically largest eigenpair of `op`.
///
/// Runs at most `max_iter` steps from a seeded random start, reorthogonalizing
/// each new direction against the whole stored basis. Stops once the Ritz
/// residual estimate falls below `tol * |lambda1|`. A breakdown (invariant
/// subspace found early) triggers a restart from a fresh seeded vector; the
/// best Ritz pair across restarts is kept.
pub fn lanczos_top(
    op: &SymmetricOperator,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<LanczosResult> {
    if op.n() == 0 || max_iter == 0 {
        return Err(invalid("lanczos needs n >= 1 and max_iter >= 1"));
    }
    let n = op.n();
    let m_cap = max_iter.min(n);
    let mut best: Option<LanczosResult> = None;

    for attempt in 0..=MAX_RESTARTS {
        let run_seed = substream(seed, 0x4c43 + attempt as u64);
        let res = lanczos_run(op, m_cap, tol, run_seed)?;
        let better = match &best {
            None => true,
            Some(b) => res.lambda1 > b.lambda1,
        };
        if better {
            best = Some(res);
        }
        let b = best.as_ref().unwrap();
        if b.converged {
            break;
        }
        // only retry when the run ended in breakdown with iterations to spare
        if b.iterations >= m_cap {
            break;
        }
    }
    Ok(best.unwrap())
}

fn lanczos_run(op: &SymmetricOperator, m_cap: usize, tol: f64, seed: u64) -> Result<LanczosResult> {
    let n = op.n();
    let mut rng = SplitMix64::new(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
    normalize(&mut v);

    let mut basis: Vec<Vec<f64>> = vec![v.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    for _ in 0..m_cap {
        let vj = basis.last().unwrap().clone();
        let mut w = op.matvec(&vj)?;
        let a = dot(&w, &vj);
        alphas.push(a);
        // full reorthogonalization, twice for good measure
        for _ in 0..2 {
            for u in &basis {
                let c = dot(&w, u);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
        }
        let b = normalize(&mut w);
        let lambda = tridiag_top_eigenvalue(&alphas, &betas);
        let s = tridiag_eigenvector(&alphas, &betas, lambda, seed ^ 0x5eed);
        let est = if alphas.len() < n { b * s[s.len() - 1].abs() } else { 0.0 };
        let tol_abs = tol * lambda.abs().max(f64::MIN_POSITIVE);
        let done = est <= tol_abs || alphas.len() == n;
        let breakdown = b <= BREAKDOWN;
        if done || breakdown || alphas.len() == m_cap {
            let mut vec = vec![0.0; n];
            for (k, u) in basis.iter().enumerate() {
                for (vi, ui) in vec.iter_mut().zip(u) {
                    *vi += s[k] * ui;
                }
            }
            normalize(&mut vec);
            let av = op.matvec(&vec)?;
            let residual: f64 = av
                .iter()
                .zip(&vec)
                .map(|(x, y)| (x - lambda * y).powi(2))
                .sum::<f64>()
                .sqrt();
            let converged = residual <= tol_abs.max(1e-14);
            return Ok(LanczosResult {
                lambda1: lambda,
                vector: vec,
                iterations: alphas.len(),
                residual,
                converged,
            });
        }
        betas.push(b);
        basis.push(w);
    }
    unreachable!("loop always returns");
}
