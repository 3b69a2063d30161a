//! Randomized top-eigenvector approximation.
//!
//! `rsvd` projects with q power steps, orthonormalizes, and solves the small
//! projected eigenproblem; `randsum` feeds it the half-Gaussian half-Bernoulli
//! sketch. The returned Rayleigh quotient maximizes `v^T A v` over unit
//! vectors in the range of the projection.

use crate::densela::{householder_qr, jacobi_eigh};
use crate::error::{invalid, Error, Result};
use crate::linop::SymmetricOperator;
use crate::mat::{dot, normalize};
use crate::sketch::{randsum_sketch, Sketch};

/// Parameters for a solver invocation driven by configuration (CLI, FFI).
#[derive(Clone, Copy, Debug)]
pub struct RsvdConfig {
    /// Power steps; at least 1.
    pub q: u32,
    /// Sketch width, 1 <= d <= n.
    pub d: usize,
    /// Bernoulli mean for the randsum sketch.
    pub p: f64,
    pub seed: u64,
}

impl Default for RsvdConfig {
    fn default() -> Self {
        Self {
            q: 1,
            d: 10,
            p: 0.5,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxEigResult {
    /// Unit-norm estimate of the top eigenvector; its largest-magnitude entry
    /// is nonnegative.
    pub u_hat: Vec<f64>,
    /// `u_hat^T A u_hat`.
    pub rayleigh: f64,
    /// `rayleigh / lambda1` when the true top eigenvalue is known.
    pub ratio: Option<f64>,
    /// Pass complexity of the invocation: q when d = 1, q + 1 otherwise.
    pub passes: u32,
    /// Column applies actually performed, including the d = 1 evaluation.
    pub matvecs: u64,
    /// Number of range directions retained by the rank-revealing QR.
    pub effective_rank: usize,
}

impl ApproxEigResult {
    /// Attach the ratio against a known positive top eigenvalue.
    pub fn with_lambda1(mut self, lambda1: f64) -> Result<Self> {
        self.ratio = Some(ratio_of(&self, lambda1)?);
        Ok(self)
    }
}

/// `rayleigh / lambda1`. Defined for `lambda1 > 0`; for positive semidefinite
/// inputs the result lies in [0, 1], for indefinite inputs it may be negative.
pub fn ratio_of(result: &ApproxEigResult, lambda1: f64) -> Result<f64> {
    if !(lambda1 > 0.0) {
        return Err(invalid(format!(
            "ratio needs a positive top eigenvalue, got {lambda1}"
        )));
    }
    Ok(result.rayleigh / lambda1)
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    let mut mag = 0.0f64;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > mag {
            mag = x.abs();
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Power projection `Y = A^q S`, thin pivoted QR, small eigenproblem
/// `B = Q^T A Q`, and `u_hat = Q eig1(B)`.
///
/// Y is rescaled to unit Frobenius norm after each product; pure scaling
/// leaves its range, and therefore the output, unchanged while preventing
/// under- and overflow at large q. With d = 1 the QR and the small
/// eigenproblem are skipped and the normalized projection is returned
/// directly.
pub fn rsvd(op: &SymmetricOperator, sketch: &Sketch, q: u32) -> Result<ApproxEigResult> {
    if sketch.n() != op.n() {
        return Err(Error::DimensionMismatch {
            expected: op.n(),
            got: sketch.n(),
        });
    }
    if q == 0 {
        return Err(invalid("power step count q must be at least 1"));
    }
    if sketch.d() > op.n() {
        return Err(invalid("sketch width exceeds operator dimension"));
    }

    let mut matvecs = 0u64;
    let mut y = sketch.data.clone();
    for _ in 0..q {
        y = op.matmat(&y)?;
        matvecs += y.cols() as u64;
        let norm = y.frobenius_norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::EmptyRange);
        }
        y.scale(1.0 / norm);
    }

    if sketch.d() == 1 {
        let mut u = y.col(0).to_vec();
        if normalize(&mut u) == 0.0 {
            return Err(Error::EmptyRange);
        }
        fix_sign(&mut u);
        let au = op.matvec(&u)?; // evaluation only; not part of the pass budget
        matvecs += 1;
        let rayleigh = dot(&u, &au);
        return Ok(ApproxEigResult {
            u_hat: u,
            rayleigh,
            ratio: None,
            passes: q,
            matvecs,
            effective_rank: 1,
        });
    }

    let f = householder_qr(&y, None)?;
    let aq = op.matmat(&f.q)?;
    matvecs += f.q.cols() as u64;
    let mut b = f.q.gram_with(&aq);
    // Q^T A Q loses symmetry at roundoff
    for i in 0..b.rows() {
        for j in (i + 1)..b.cols() {
            let avg = 0.5 * (b[(i, j)] + b[(j, i)]);
            b[(i, j)] = avg;
            b[(j, i)] = avg;
        }
    }
    let eig = jacobi_eigh(&b)?;
    let mut u = f.q.mul_vec(eig.vectors.col(0));
    normalize(&mut u);
    fix_sign(&mut u);
    Ok(ApproxEigResult {
        u_hat: u,
        rayleigh: eig.values[0],
        ratio: None,
        passes: q + 1,
        matvecs,
        effective_rank: f.rank,
    })
}

/// Draw the concatenated Gaussian/Bernoulli sketch and run [`rsvd`] on it.
pub fn randsum(
    op: &SymmetricOperator,
    q: u32,
    d: usize,
    p: f64,
    seed: u64,
) -> Result<ApproxEigResult> {
    let sketch = randsum_sketch(op.n(), d, p, seed)?;
    rsvd(op, &sketch, q)
}
