//! Monte-Carlo campaigns that check the solver's distributional guarantees at
//! desk scale: projection-length concentration for Gaussian and Bernoulli
//! sketches, the pathwise bound for positive semidefinite spectra, worst-case
//! tightness, and the power-law-tail guarantee.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::metrics::{cos2_theta, SpectrumSpec};
use crate::rng::{substream, GaussianStream};
use crate::rsvd::rsvd;
use crate::sketch::{bernoulli_sketch, gaussian_sketch};
use crate::synth::{realize, spectrum, Basis, SpectrumKind};

/// Order statistics of a campaign plus its verdict against the stated rule.
#[derive(Clone, Debug, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub mean: f64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
    /// The theoretical comparator the campaign checks against.
    pub target: f64,
    pub verdict: bool,
}

fn summarize(mut samples: Vec<f64>, target: f64, verdict: impl Fn(&TrialSummary) -> bool) -> TrialSummary {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let trials = samples.len();
    let mean = samples.iter().sum::<f64>() / trials as f64;
    let at = |p: f64| samples[((trials as f64 * p) as usize).min(trials - 1)];
    let mut s = TrialSummary {
        trials,
        mean,
        median: at(0.5),
        q05: at(0.05),
        q95: at(0.95),
        target,
        verdict: false,
    };
    s.verdict = verdict(&s);
    s
}

/// A serializable campaign report for the JSON interface.
#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub name: String,
    pub params: serde_json::Value,
    pub summary: TrialSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CosDist {
    Gaussian,
    Bernoulli { p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorSpec {
    /// First canonical basis vector.
    E1,
    /// Seeded uniform random unit vector.
    UniformUnit,
    /// `1_n / sqrt(n)`.
    OnesNormalized,
    /// Seeded random unit vector orthogonal to `1_n`.
    PerpOnes,
}

fn make_vector(spec: VectorSpec, n: usize, seed: u64) -> Vec<f64> {
    match spec {
        VectorSpec::E1 => {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            v
        }
        VectorSpec::OnesNormalized => vec![1.0 / (n as f64).sqrt(); n],
        VectorSpec::UniformUnit => {
            let mut g = GaussianStream::new(seed);
            let mut v: Vec<f64> = (0..n).map(|_| g.next()).collect();
            crate::mat::normalize(&mut v);
            v
        }
        VectorSpec::PerpOnes => {
            let mut g = GaussianStream::new(seed);
            let mut v: Vec<f64> = (0..n).map(|_| g.next()).collect();
            let mean = v.iter().sum::<f64>() / n as f64;
            for x in &mut v {
                *x -= mean;
            }
            crate::mat::normalize(&mut v);
            v
        }
    }
}

/// Sample `cos^2 theta(v, S)` over seeded sketches.
///
/// Gaussian target is the exact mean `d/n` (verdict: empirical mean within
/// 10% relative). Bernoulli target is `max(1, <v, 1_n>^2) / n` (verdict: the
/// 5th percentile exceeds 0.2 of it, the calibrated lower-bound regime).
pub fn empirical_cos2(
    n: usize,
    d: usize,
    dist: CosDist,
    v_spec: VectorSpec,
    trials: usize,
    seed: u64,
) -> Result<TrialSummary> {
    if n < d {
        return Err(invalid("need n >= d"));
    }
    if trials < 30 {
        return Err(invalid("need at least 30 trials for a verdict"));
    }
    let v = make_vector(v_spec, n, substream(seed, 0x76));
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = match dist {
                CosDist::Gaussian => gaussian_sketch(n, d, substream(seed, t as u64)),
                CosDist::Bernoulli { p } => bernoulli_sketch(n, d, p, substream(seed, t as u64)),
            }
            .expect("sketch parameters validated above");
            cos2_theta(&v, &s.data).expect("nonzero v")
        })
        .collect();
    let ones_overlap: f64 = v.iter().sum();
    let target = match dist {
        CosDist::Gaussian => d as f64 / n as f64,
        CosDist::Bernoulli { .. } => (ones_overlap * ones_overlap).max(1.0) / n as f64,
    };
    Ok(match dist {
        CosDist::Gaussian => summarize(samples, target, |s| {
            (s.mean - target).abs() <= 0.1 * target
        }),
        CosDist::Bernoulli { .. } => summarize(samples, target, |s| s.q05 >= 0.2 * target),
    })
}

/// Check `R^{2q+1} >= cos^2 theta(u_1, S) - 1e-9` on every trial of a
/// positive semidefinite spectrum; the statistic is the signed margin.
pub fn check_psd_pathwise(
    spec: &SpectrumSpec,
    q: u32,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<TrialSummary> {
    if !spec.is_psd() || !(spec.lambda1() > 0.0) {
        return Err(invalid("pathwise bound needs a PSD spectrum with lambda1 > 0"));
    }
    let realized = realize(spec, Basis::Canonical)?;
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = gaussian_sketch(spec.len(), d, substream(seed, t as u64))
                .expect("validated dims");
            let r = rsvd(&realized.op, &s, q).expect("rsvd on a realized spectrum");
            let ratio = r.rayleigh / realized.lambda1;
            let c2 = cos2_theta(&realized.top_vector, &s.data).expect("unit top vector");
            ratio.powi(2 * q as i32 + 1) - c2
        })
        .collect();
    Ok(summarize(samples, 0.0, |s| s.q05 >= -1e-9 && s.trials >= 30))
}

/// Median ratio on the flat worst-case spectrum must fall inside
/// `[0.3, 3] * (d/n)^{1/(2q+1)}`.
pub fn check_tightness(n: usize, d: usize, q: u32, trials: usize, seed: u64) -> Result<TrialSummary> {
    if n < 4 * d {
        return Err(invalid("tightness check needs n >= 4d"));
    }
    let spec = spectrum(&SpectrumKind::WorstCase { n, d, q })?;
    let realized = realize(&spec, Basis::Canonical)?;
    let target = (d as f64 / n as f64).powf(1.0 / (2.0 * q as f64 + 1.0));
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = gaussian_sketch(n, d, substream(seed, t as u64)).expect("validated dims");
            let r = rsvd(&realized.op, &s, q).expect("rsvd on worst case");
            r.rayleigh / realized.lambda1
        })
        .collect();
    Ok(summarize(samples, target, |s| {
        s.median >= 0.3 * target && s.median <= 3.0 * target
    }))
}

/// Lower-bound check for decaying spectra: the 5th percentile of the ratio
/// must exceed `0.1 (d/(d+i0))^{1/(2q+1)}`.
pub fn check_powerlaw_theorem(
    spec: &SpectrumSpec,
    i0: usize,
    q: u32,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<TrialSummary> {
    if !(spec.lambda1() > 0.0) {
        return Err(invalid("needs lambda1 > 0"));
    }
    let realized = realize(spec, Basis::Canonical)?;
    let target = (d as f64 / (d + i0) as f64).powf(1.0 / (2.0 * q as f64 + 1.0));
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s =
                gaussian_sketch(spec.len(), d, substream(seed, t as u64)).expect("validated dims");
            let r = rsvd(&realized.op, &s, q).expect("rsvd on realized spectrum");
            r.rayleigh / realized.lambda1
        })
        .collect();
    Ok(summarize(samples, target, |s| s.q05 >= 0.1 * target))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_order_statistics() {
        let s = summarize((1..=100).map(|i| i as f64).collect(), 0.0, |_| true);
        assert_eq!(s.trials, 100);
        assert!(s.q05 <= s.median && s.median <= s.q95);
        assert!((s.mean - 50.5).abs() < 1e-12);
    }

    #[test]
    fn gaussian_mean_matches_dimension_ratio() {
        let s = empirical_cos2(400, 8, CosDist::Gaussian, VectorSpec::UniformUnit, 200, 3).unwrap();
        assert!(s.verdict, "mean {} target {}", s.mean, s.target);
    }

    #[test]
    fn full_range_sketch_gives_one() {
        let s = empirical_cos2(16, 16, CosDist::Gaussian, VectorSpec::E1, 50, 1).unwrap();
        assert!((s.mean - 1.0).abs() <= 1e-9);
        assert!((s.q05 - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn bernoulli_ones_direction_advantage() {
        let s = empirical_cos2(
            300,
            4,
            CosDist::Bernoulli { p: 0.5 },
            VectorSpec::OnesNormalized,
            100,
            7,
        )
        .unwrap();
        assert!(s.verdict, "q05 {} target {}", s.q05, s.target);
        assert!(s.q05 >= 0.2);
    }

    #[test]
    fn pathwise_bound_small_case() {
        let spec = SpectrumSpec::new(vec![4.0, 2.0, 1.0, 0.0]).unwrap();
        let s = check_psd_pathwise(&spec, 1, 2, 60, 5).unwrap();
        assert!(s.verdict, "min margin {}", s.q05);
        let s3 = check_psd_pathwise(&spec, 3, 2, 60, 6).unwrap();
        assert!(s3.verdict);
    }

    #[test]
    fn rank_one_pathwise_trivial() {
        let spec = SpectrumSpec::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let s = check_psd_pathwise(&spec, 1, 2, 40, 2).unwrap();
        assert!(s.verdict);
    }

    #[test]
    fn indefinite_spectrum_rejected() {
        let spec = SpectrumSpec::new(vec![1.0, -0.5]).unwrap();
        assert!(check_psd_pathwise(&spec, 1, 1, 40, 0).is_err());
    }

    #[test]
    fn tightness_small_case() {
        let s = check_tightness(400, 4, 1, 60, 11).unwrap();
        assert!(s.verdict, "median {} target {}", s.median, s.target);
    }

    #[test]
    fn powerlaw_theorem_small_case() {
        let spec = spectrum(&SpectrumKind::Type1 { n: 500, i0: 50 }).unwrap();
        let s = check_powerlaw_theorem(&spec, 50, 1, 1, 60, 13).unwrap();
        assert!(s.verdict, "q05 {} threshold {}", s.q05, 0.1 * s.target);
    }

    #[test]
    fn report_serializes() {
        let spec = SpectrumSpec::new(vec![2.0, 1.0, 0.5, 0.0]).unwrap();
        let summary = check_psd_pathwise(&spec, 1, 2, 40, 1).unwrap();
        let report = CampaignReport {
            name: "psd-pathwise".into(),
            params: serde_json::json!({"q": 1, "d": 2, "trials": 40, "seed": 1}),
            summary,
            samples: None,
        };
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"verdict\":true"));
    }
}
