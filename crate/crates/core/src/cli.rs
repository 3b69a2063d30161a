//! Experiment harness behind the `spectral-sketch` binary.
//!
//! A run sweeps one axis (sketch width d at q = 1, or power steps q at
//! d = 10), repeats each setting with per-repetition sub-seeds, and emits a
//! CSV with one row per repetition plus a mean-ratio summary row per axis
//! value. Repetitions are distributed over a worker pool; output is identical
//! regardless of scheduling once the timing column is suppressed.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::apps::{self, DetectParams, Method};
use crate::densela::lanczos_top;
use crate::error::{invalid, Result};
use crate::graph::{Graph, LoadOptions};
use crate::linop::SymmetricOperator;
use crate::rng::substream;
use crate::rsvd::{ratio_of, rsvd};
use crate::sketch::{gaussian_sketch, randsum_sketch, Sketch};
use crate::synth::{realize, spectrum, Basis, SpectrumKind};

pub const D_SWEEP: [usize; 5] = [1, 5, 10, 25, 50];
pub const Q_SWEEP: [u32; 5] = [1, 2, 4, 8, 16];
pub const FIXED_Q_FOR_D_SWEEP: u32 = 1;
pub const FIXED_D_FOR_Q_SWEEP: usize = 10;

#[derive(Clone, Debug)]
pub enum MatrixSource {
    Synth {
        kind: SpectrumKind,
        basis: Basis,
    },
    Graph {
        path: PathBuf,
        signed: bool,
        modularity: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    D,
    Q,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub source: MatrixSource,
    pub method: Method,
    pub sweep: SweepAxis,
    pub reps: usize,
    pub p: f64,
    pub seed: u64,
    /// Emit the wall-clock column; suppressing it makes output byte-identical.
    pub timing: bool,
}

/// What the extra score column means for graph sources.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ScoreColumn {
    None,
    Polarity,
    Modularity,
}

struct Prepared {
    op: SymmetricOperator,
    lambda1: f64,
    graph: Option<Graph>,
    score: ScoreColumn,
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    match &config.source {
        MatrixSource::Synth { kind, basis } => {
            let spec = spectrum(kind)?;
            let realized = realize(&spec, *basis)?;
            if !(realized.lambda1 > 0.0) {
                return Err(invalid("synthetic spectrum must have lambda1 > 0"));
            }
            Ok(Prepared {
                op: realized.op,
                lambda1: realized.lambda1,
                graph: None,
                score: ScoreColumn::None,
            })
        }
        MatrixSource::Graph {
            path,
            signed,
            modularity,
        } => {
            let g = Graph::load_edge_list(path, LoadOptions { signed: *signed })?;
            let (op, score) = if *modularity {
                (
                    SymmetricOperator::modularity_from_graph(&g)?,
                    ScoreColumn::Modularity,
                )
            } else {
                (g.signed_adjacency()?, ScoreColumn::Polarity)
            };
            let n = op.n();
            let baseline = lanczos_top(&op, (5 * n).min(2000), 1e-10, substream(config.seed, 0x4c))?;
            if !baseline.converged {
                return Err(invalid(format!(
                    "lanczos did not converge on the input graph (residual {:.3e}); aborting run",
                    baseline.residual
                )));
            }
            if !(baseline.lambda1 > 0.0) {
                return Err(invalid(format!(
                    "ratio undefined: top eigenvalue {} is not positive",
                    baseline.lambda1
                )));
            }
            Ok(Prepared {
                op,
                lambda1: baseline.lambda1,
                graph: Some(g),
                score,
            })
        }
    }
}

struct Row {
    axis_value: String,
    rep: usize,
    r: f64,
    rayleigh: f64,
    passes: u32,
    matvecs: u64,
    score: Option<f64>,
    wall_ms: Option<f64>,
}

fn sketch_for(
    method: Method,
    n: usize,
    d: usize,
    p: f64,
    seed: u64,
) -> Result<Sketch> {
    match method {
        Method::Rsvd => gaussian_sketch(n, d, seed),
        // the bernoulli half is empty at d = 1, leaving a pure gaussian column
        Method::RandSum if d == 1 => gaussian_sketch(n, d, seed),
        Method::RandSum => randsum_sketch(n, d, p, seed),
    }
}

/// Run the configured sweep and stream the CSV report into `out`.
pub fn run_experiment(config: &ExperimentConfig, out: &mut impl Write) -> Result<()> {
    if config.reps == 0 {
        return Err(invalid("repetitions must be at least 1"));
    }
    let prepared = prepare(config)?;
    let n = prepared.op.n();

    let settings: Vec<(String, usize, u32)> = match config.sweep {
        SweepAxis::D => D_SWEEP
            .iter()
            .filter(|&&d| d <= n)
            .map(|&d| (d.to_string(), d, FIXED_Q_FOR_D_SWEEP))
            .collect(),
        SweepAxis::Q => Q_SWEEP
            .iter()
            .map(|&q| (q.to_string(), FIXED_D_FOR_Q_SWEEP.min(n), q))
            .collect(),
    };
    if settings.is_empty() {
        return Err(invalid("no sweep settings fit the operator dimension"));
    }

    let mut header = String::from("axis_value,rep,r,rayleigh,passes,matvecs");
    match prepared.score {
        ScoreColumn::None => {}
        ScoreColumn::Polarity => header.push_str(",p_x"),
        ScoreColumn::Modularity => header.push_str(",q_x"),
    }
    if config.timing {
        header.push_str(",wall_ms");
    }
    writeln!(out, "{header}")?;

    for (axis_idx, (label, d, q)) in settings.iter().enumerate() {
        let rows: Vec<Row> = (0..config.reps)
            .into_par_iter()
            .map(|rep| -> Result<Row> {
                let rep_seed = substream(config.seed, (axis_idx as u64) << 32 | rep as u64);
                let start = Instant::now();
                let s = sketch_for(config.method, n, *d, config.p, rep_seed)?;
                let result = rsvd(&prepared.op, &s, *q)?;
                let r = ratio_of(&result, prepared.lambda1)?;
                let score = match (&prepared.graph, prepared.score) {
                    (Some(g), ScoreColumn::Polarity) => {
                        let mut best = f64::NEG_INFINITY;
                        for t in 0..50u64 {
                            let x = apps::random_eigen_sign(
                                &result.u_hat,
                                substream(rep_seed, 0x70 + t),
                            )?;
                            best = best.max(apps::polarity(g, &x)?);
                        }
                        Some(best)
                    }
                    (Some(g), ScoreColumn::Modularity) => {
                        let x: Vec<i8> = result
                            .u_hat
                            .iter()
                            .map(|&v| if v < 0.0 { -1 } else { 1 })
                            .collect();
                        Some(apps::modularity_score(g, &x)?)
                    }
                    _ => None,
                };
                Ok(Row {
                    axis_value: label.clone(),
                    rep,
                    r,
                    rayleigh: result.rayleigh,
                    passes: result.passes,
                    matvecs: result.matvecs,
                    score,
                    wall_ms: config
                        .timing
                        .then(|| start.elapsed().as_secs_f64() * 1e3),
                })
            })
            .collect::<Result<Vec<Row>>>()?;

        let mean_r = rows.iter().map(|row| row.r).sum::<f64>() / rows.len() as f64;
        for row in &rows {
            write!(
                out,
                "{},{},{},{},{},{}",
                row.axis_value, row.rep, row.r, row.rayleigh, row.passes, row.matvecs
            )?;
            if let Some(s) = row.score {
                write!(out, ",{s}")?;
            } else if prepared.score != ScoreColumn::None {
                write!(out, ",")?;
            }
            if config.timing {
                write!(out, ",{}", row.wall_ms.unwrap_or(0.0))?;
            }
            writeln!(out)?;
        }
        write!(out, "{label},mean,{mean_r},,,")?;
        if prepared.score != ScoreColumn::None {
            write!(out, ",")?;
        }
        if config.timing {
            write!(out, ",")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Compute the signed tail-mass ratio of a synthetic spectrum, optionally the
/// weighted variant with closed-form Bernoulli weights from a realized basis.
pub struct KappaReport {
    pub kappa: f64,
    pub kappa_prime: Option<f64>,
    pub q: u32,
    pub n: usize,
}

pub fn kappa_report(
    kind: &SpectrumKind,
    q: u32,
    xi: Option<(f64, usize, Basis)>,
) -> Result<KappaReport> {
    let spec = spectrum(kind)?;
    let k = crate::metrics::kappa(&spec, q)?;
    let kp = match xi {
        None => None,
        Some((p, d, basis)) => {
            let n = spec.len();
            let u = match basis {
                Basis::Canonical => crate::mat::Mat::identity(n),
                Basis::Haar { seed } => crate::densela::random_orthogonal(n, seed)?,
            };
            let weights = crate::metrics::xi_weights(&u, p, d)?;
            Some(crate::metrics::kappa_prime(&spec, &weights, q)?)
        }
    };
    Ok(KappaReport {
        kappa: k,
        kappa_prime: kp,
        q,
        n: spec.len(),
    })
}

/// Fit a power-law tail to magnitudes taken from a file with one value per
/// line (a trailing CSV column also works).
pub fn fit_from_reader(reader: impl std::io::BufRead) -> Result<crate::metrics::PowerLawFit> {
    let mut values = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let tok = line.trim().rsplit(',').next().unwrap_or("").trim();
        if tok.is_empty() {
            continue;
        }
        match tok.parse::<f64>() {
            Ok(v) => values.push(v.abs()),
            Err(_) => continue, // header or comment
        }
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    crate::metrics::fit_power_law(&values)
}

/// Settings shared by the two application subcommands.
pub struct AppRun {
    pub graph: PathBuf,
    pub params: DetectParams,
    pub method: Method,
}

pub fn run_conflicting_groups(run: &AppRun, out: Option<&mut dyn Write>) -> Result<f64> {
    let g = Graph::load_edge_list(&run.graph, LoadOptions { signed: true })?;
    let a = apps::detect_conflicting_groups(&g, &run.params, run.method)?;
    if let Some(w) = out {
        apps::write_assignment(&a, w)?;
    }
    Ok(a.score)
}

pub fn run_communities(run: &AppRun, out: Option<&mut dyn Write>) -> Result<f64> {
    let g = Graph::load_edge_list(&run.graph, LoadOptions { signed: false })?;
    let a = apps::detect_communities(&g, &run.params, run.method)?;
    if let Some(w) = out {
        apps::write_assignment(&a, w)?;
    }
    Ok(a.score)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth_config(sweep: SweepAxis, reps: usize) -> ExperimentConfig {
        ExperimentConfig {
            source: MatrixSource::Synth {
                kind: SpectrumKind::Custom(
                    (1..=64).map(|i| 1.0 / i as f64).collect(),
                ),
                basis: Basis::Canonical,
            },
            method: Method::Rsvd,
            sweep,
            reps,
            p: 0.5,
            seed: 42,
            timing: false,
        }
    }

    #[test]
    fn csv_row_count_contract() {
        let config = synth_config(SweepAxis::D, 3);
        let mut buf = Vec::new();
        run_experiment(&config, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // d sweep at n = 64 keeps {1, 5, 10, 25, 50}: 5 axis values
        assert_eq!(lines[0], "axis_value,rep,r,rayleigh,passes,matvecs");
        assert_eq!(lines.len(), 1 + 5 * (3 + 1));
        assert_eq!(lines.iter().filter(|l| l.contains(",mean,")).count(), 5);
    }

    #[test]
    fn csv_deterministic_given_seed() {
        let config = synth_config(SweepAxis::Q, 2);
        let mut a = Vec::new();
        run_experiment(&config, &mut a).unwrap();
        let mut b = Vec::new();
        run_experiment(&config, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn d_one_rows_report_q_passes() {
        let config = synth_config(SweepAxis::D, 2);
        let mut buf = Vec::new();
        run_experiment(&config, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines().filter(|l| l.starts_with("1,") && !l.contains("mean")) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[4], "1", "d=1 must cost q passes: {line}");
        }
        for line in text.lines().filter(|l| l.starts_with("5,") && !l.contains("mean")) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[4], "2", "d=5 must cost q+1 passes: {line}");
        }
    }

    #[test]
    fn fit_reader_skips_headers() {
        let input = "index,value\n1,1.0\n2,0.5\n3,0.333333\n4,0.25\n5,0.2\n6,0.1666\n7,0.1428\n8,0.125\n9,0.1111\n10,0.1\n11,0.0909\n12,0.0833\n";
        let fit = fit_from_reader(input.as_bytes()).unwrap();
        assert!((fit.gamma - 1.0).abs() <= 0.1, "gamma {}", fit.gamma);
    }

    #[test]
    fn kappa_report_with_weights() {
        let report = kappa_report(
            &SpectrumKind::Custom(vec![1.0, 0.5, -0.5]),
            1,
            Some((0.5, 4, Basis::Canonical)),
        )
        .unwrap();
        assert_eq!(report.kappa, 0.0);
        // canonical basis gives every eigenvector the same weight, so the
        // weighted ratio collapses to the unweighted one
        assert_eq!(report.kappa_prime.unwrap(), 0.0);
    }
}
