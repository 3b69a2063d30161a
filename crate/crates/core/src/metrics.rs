//! Quality measurements: Rayleigh quotients, projection lengths, the signed
//! tail-mass diagnostics kappa and kappa', the absolute-power ratio variant,
//! and the power-law tail fit of a singular-value profile.

use crate::densela::householder_qr;
use crate::error::{invalid, Error, Result};
use crate::linop::SymmetricOperator;
use crate::mat::{dot, Mat};

/// An explicit eigenvalue list, descending by signed value with the top
/// eigenvalue first.
#[derive(Clone, Debug)]
pub struct SpectrumSpec {
    values: Vec<f64>,
}

impl SpectrumSpec {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("spectrum must contain at least one eigenvalue"));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("spectrum values"));
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lambda1(&self) -> f64 {
        self.values[0]
    }

    pub fn is_psd(&self) -> bool {
        *self.values.last().unwrap() >= 0.0
    }

    /// Magnitudes sorted descending, for tail fits.
    pub fn magnitudes(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        m.sort_by(|a, b| b.partial_cmp(a).unwrap());
        m
    }
}

/// `v^T (A v) / v^T v`.
pub fn rayleigh(op: &SymmetricOperator, v: &[f64]) -> Result<f64> {
    let vv = dot(v, v);
    if vv == 0.0 {
        return Err(invalid("rayleigh quotient of the zero vector"));
    }
    let av = op.matvec(v)?;
    Ok(dot(v, &av) / vv)
}

/// Squared cosine of the principal angle between `v` and the range of `s`,
/// computed as `||Q^T v||^2 / ||v||^2` with Q an orthonormal range basis.
pub fn cos2_theta(v: &[f64], s: &Mat) -> Result<f64> {
    let vv = dot(v, v);
    if vv == 0.0 {
        return Err(invalid("projection of the zero vector"));
    }
    if s.rows() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: s.rows(),
        });
    }
    let q = householder_qr(s, None)?.q;
    let coeffs = q.mul_transpose_vec(v);
    Ok(dot(&coeffs, &coeffs) / vv)
}

fn signed_abs_ratio(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for t in terms {
        num += t;
        den += t.abs();
    }
    if den == 0.0 {
        // empty tail mass: the dominance assumption is vacuously strongest
        1.0
    } else {
        num / den
    }
}

/// Ratio of signed to absolute (2q+1)-power sums over the tail eigenvalues
/// (all but the first). Equals 1 for any positive semidefinite spectrum.
pub fn kappa(spec: &SpectrumSpec, q: u32) -> Result<f64> {
    if spec.len() < 2 {
        return Err(invalid("kappa needs at least two eigenvalues"));
    }
    let e = 2 * q as i32 + 1;
    Ok(signed_abs_ratio(
        spec.values[1..].iter().map(|&l| l.powi(e)),
    ))
}

/// Weighted analogue of [`kappa`] with nonnegative weights `xi`.
pub fn kappa_prime(spec: &SpectrumSpec, xi: &[f64], q: u32) -> Result<f64> {
    if spec.len() < 2 {
        return Err(invalid("kappa' needs at least two eigenvalues"));
    }
    if xi.len() != spec.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.len(),
            got: xi.len(),
        });
    }
    if xi.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(invalid("xi weights must be nonnegative"));
    }
    let e = 2 * q as i32 + 1;
    Ok(signed_abs_ratio(
        spec.values[1..]
            .iter()
            .zip(&xi[1..])
            .map(|(&l, &w)| l.powi(e) * w),
    ))
}

/// Closed-form Bernoulli projection weights `p(1 - p + p d <u_i, 1_n>^2)`,
/// one per eigenvector column.
pub fn xi_weights(u_columns: &Mat, p: f64, d: usize) -> Result<Vec<f64>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("bernoulli mean must lie in (0,1), got {p}")));
    }
    if d == 0 {
        return Err(invalid("sketch width must be at least 1"));
    }
    Ok((0..u_columns.cols())
        .map(|j| {
            let s: f64 = u_columns.col(j).iter().sum();
            p * (1.0 - p + p * d as f64 * s * s)
        })
        .collect())
}

/// The absolute-power diagnostic
/// `sum |a_i|^{2q+1} w_i / sum a_i^{2q} w_i` over normalized eigenvalues
/// `a_i = lambda_i / lambda_1` and projection weights `w_i`.
pub fn rbar(spec: &SpectrumSpec, proj2: &[f64], q: u32) -> Result<f64> {
    if proj2.len() != spec.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.len(),
            got: proj2.len(),
        });
    }
    if proj2.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(invalid("projection weights must be nonnegative"));
    }
    let l1 = spec.lambda1();
    if !(l1 > 0.0) {
        return Err(invalid("top eigenvalue must be positive"));
    }
    let (num, den) = {
        let mut num = 0.0;
        let mut den = 0.0;
        for (&l, &w) in spec.values.iter().zip(proj2) {
            let a = l / l1;
            num += a.abs().powi(2 * q as i32 + 1) * w;
            den += a.powi(2 * q as i32) * w;
        }
        (num, den)
    };
    if den == 0.0 {
        return Err(invalid("all projection weight lies on zero eigenvalues"));
    }
    Ok(num / den)
}

/// Both sides of the power-sum chain inequality: with nonnegative entries
/// `alpha` and weights `w`,
/// `sum a_i^{2q+1} w_i / sum a_i^{2q} w_i >= (sum a_i^{2q} w_i / sum w_i)^{1/2q}`.
/// Returns whether the left side dominates within 1e-12.
pub fn hoelder_chain_check(alpha: &[f64], weights: &[f64], q: u32) -> Result<bool> {
    if alpha.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            got: weights.len(),
        });
    }
    if q == 0 {
        return Err(invalid("q must be at least 1"));
    }
    if alpha.iter().chain(weights).any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(invalid("alpha and weights must be nonnegative"));
    }
    let some_cross = alpha.iter().zip(weights).any(|(&a, &w)| a * w != 0.0);
    let some_weight = weights.iter().any(|&w| w != 0.0);
    if !some_cross || !some_weight {
        return Err(invalid("need some alpha_i * w_i != 0 and some w_i != 0"));
    }
    let e = 2 * q as i32;
    let (mut s_hi, mut s_mid, mut s_w) = (0.0, 0.0, 0.0);
    for (&a, &w) in alpha.iter().zip(weights) {
        s_hi += a.powi(e + 1) * w;
        s_mid += a.powi(e) * w;
        s_w += w;
    }
    let lhs = s_hi / s_mid;
    let rhs = (s_mid / s_w).powf(1.0 / (2.0 * q as f64));
    Ok(lhs >= rhs - 1e-12)
}

/// A fitted power-law tail `sigma_i / sigma_1 <= C i^{-gamma}` for `i >= i0`.
#[derive(Clone, Debug)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub i0: usize,
    pub c: f64,
    /// Kolmogorov-Smirnov distance between the tail's empirical value
    /// distribution and the fitted rank model; 1.0 marks a degenerate fit.
    pub ks_distance: f64,
    /// Set when the data shows no usable decay.
    pub poor: bool,
}

/// Fit `(gamma, i0)` on descending positive magnitudes.
///
/// Candidate tail starts are scanned on a logarithmic grid; for each
/// candidate the exponent is the maximum-likelihood slope of the log-linear
/// rank model (least squares in log-log coordinates), scored by the KS
/// distance between the empirical tail distribution and the fitted model.
/// The smallest candidate attaining the minimum distance wins, and the
/// envelope constant C is the smallest value that makes the bound hold on
/// every tail index.
pub fn fit_power_law(sigvals: &[f64]) -> Result<PowerLawFit> {
    let n = sigvals.len();
    if n < 10 {
        return Err(invalid("power-law fit needs at least 10 values"));
    }
    for w in sigvals.windows(2) {
        if w[1] > w[0] {
            return Err(invalid("magnitudes must be nonincreasing"));
        }
    }
    if sigvals.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(invalid("magnitudes must be positive and finite"));
    }

    let mut candidates: Vec<usize> = Vec::new();
    let mut e = 0.0f64;
    let limit = (n / 4).max(1);
    while 10f64.powf(e) <= limit as f64 {
        let c = 10f64.powf(e).round() as usize;
        if candidates.last() != Some(&c.max(1)) {
            candidates.push(c.max(1));
        }
        e += 0.05;
    }

    let mut best: Option<(f64, usize, f64, f64)> = None; // (ks, i0, gamma, intercept)
    for &i0 in &candidates {
        let tail = &sigvals[i0 - 1..];
        let m = tail.len();
        if m < 10 {
            continue;
        }
        // least-squares slope of ln sigma_i against ln i over the tail
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for (k, &s) in tail.iter().enumerate() {
            let x = ((i0 + k) as f64).ln();
            let y = s.ln();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let mf = m as f64;
        let denom = mf * sxx - sx * sx;
        if denom <= 0.0 {
            continue;
        }
        let slope = (mf * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / mf;
        let gamma = -slope;
        let ks = if gamma <= 1e-9 {
            1.0
        } else {
            // empirical CCDF of tail values vs the rank implied by the model
            let mut worst = 0.0f64;
            for (k, &s) in tail.iter().enumerate() {
                let emp = (k + 1) as f64 / mf;
                let model_rank = ((intercept - s.ln()) / gamma).exp();
                let model = ((model_rank - i0 as f64 + 1.0) / mf).clamp(0.0, 1.0);
                worst = worst.max((emp - model).abs());
            }
            worst
        };
        let better = match best {
            None => true,
            Some((bks, bi0, _, _)) => ks < bks - 1e-12 || (ks < bks + 1e-12 && i0 < bi0),
        };
        if better {
            best = Some((ks, i0, gamma, intercept));
        }
    }

    let (ks, i0, gamma, _) = best.ok_or_else(|| invalid("no usable tail candidate"))?;
    let gamma = gamma.max(0.0);
    let mut c = 0.0f64;
    for (k, &s) in sigvals[i0 - 1..].iter().enumerate() {
        let i = (i0 + k) as f64;
        c = c.max(s / sigvals[0] * i.powf(gamma));
    }
    let poor = gamma <= 1e-9 || ks > 0.5;
    // the envelope is tight by construction; re-assert it
    for (k, &s) in sigvals[i0 - 1..].iter().enumerate() {
        let i = (i0 + k) as f64;
        debug_assert!(s / sigvals[0] <= c * i.powf(-gamma) * (1.0 + 1e-12));
    }
    Ok(PowerLawFit {
        gamma,
        i0,
        c,
        ks_distance: ks,
        poor,
    })
}
