use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spectral_sketch::apps::{DetectParams, Method};
use spectral_sketch::cli::{
    self, AppRun, ExperimentConfig, MatrixSource, SweepAxis,
};
use spectral_sketch::densela::lanczos_top;
use spectral_sketch::error::Result;
use spectral_sketch::graph::{Graph, LoadOptions};
use spectral_sketch::linop::SymmetricOperator;
use spectral_sketch::rng::substream;
use spectral_sketch::synth::{self, Basis, SpectrumKind};
use spectral_sketch::verify::{
    check_powerlaw_theorem, check_psd_pathwise, check_tightness, empirical_cos2, CampaignReport,
    CosDist, VectorSpec,
};

/// Randomized top-eigenvector approximation: experiment sweeps, diagnostics,
/// graph applications, and Monte-Carlo verification campaigns.
///
/// The worker count for repetitions honors SPECTRAL_SKETCH_THREADS.
#[derive(Parser)]
#[command(name = "spectral-sketch", version, about)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Type1,
    Type2,
    Type3,
    Type4,
    Worst,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rsvd,
    Randsum,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Rsvd => Method::Rsvd,
            MethodArg::Randsum => Method::RandSum,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Canonical,
    Haar,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Synthetic spectrum family.
    #[arg(long = "matrix", value_enum)]
    matrix: Option<KindArg>,
    /// Matrix dimension for synthetic spectra.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Head length of the synthetic spectra.
    #[arg(long, default_value_t = 100)]
    i0: usize,
    /// Sketch width baked into the worst-case spectrum.
    #[arg(long = "worst-d", default_value_t = 5)]
    worst_d: usize,
    /// Power steps baked into the worst-case spectrum.
    #[arg(long = "worst-q", default_value_t = 1)]
    worst_q: u32,
}

impl SpectrumArgs {
    fn kind(&self) -> Result<SpectrumKind> {
        let kind = match self.matrix {
            Some(KindArg::Type1) => SpectrumKind::Type1 { n: self.n, i0: self.i0 },
            Some(KindArg::Type2) => SpectrumKind::Type2 { n: self.n, i0: self.i0 },
            Some(KindArg::Type3) => SpectrumKind::Type3 { n: self.n, i0: self.i0 },
            Some(KindArg::Type4) => SpectrumKind::Type4 { n: self.n, i0: self.i0 },
            Some(KindArg::Worst) => SpectrumKind::WorstCase {
                n: self.n,
                d: self.worst_d,
                q: self.worst_q,
            },
            None => {
                return Err(spectral_sketch::error::Error::InvalidParam(
                    "--matrix is required for synthetic runs".into(),
                ))
            }
        };
        Ok(kind)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep d or q and report the ratio R per repetition as CSV.
    ///
    /// With d = 1 the randsum sketch's bernoulli half is empty, so the run
    /// uses the pure gaussian column that the concatenation layout implies.
    Run {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Edge-list file; overrides --matrix.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Parse a third edge-list column as a sign.
        #[arg(long, default_value_t = false)]
        signed: bool,
        /// Use the modularity operator instead of the adjacency.
        #[arg(long, default_value_t = false)]
        modularity: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Rsvd)]
        method: MethodArg,
        /// Sweep axis: d in {1,5,10,25,50} at q=1, or q in {1,2,4,8,16} at d=10.
        #[arg(long, value_parser = ["d", "q"], default_value = "d")]
        sweep: String,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// Bernoulli mean for randsum.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Eigenvector basis for synthetic matrices.
        #[arg(long, value_enum, default_value_t = BasisArg::Haar)]
        basis: BasisArg,
        /// Seed for the haar basis.
        #[arg(long = "basis-seed", default_value_t = 1)]
        basis_seed: u64,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress the wall-clock column for byte-identical output.
        #[arg(long = "no-timing", default_value_t = false)]
        no_timing: bool,
    },
    /// Emit a synthetic spectrum as `index,value` CSV.
    Synth {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the signed tail-mass ratio kappa (optionally kappa').
    Kappa {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, default_value_t = 1)]
        q: u32,
        /// Also compute kappa' with closed-form weights at this bernoulli mean.
        #[arg(long = "xi-p")]
        xi_p: Option<f64>,
        /// Sketch width for the kappa' weights.
        #[arg(long = "xi-d", default_value_t = 10)]
        xi_d: usize,
        #[arg(long, value_enum, default_value_t = BasisArg::Canonical)]
        basis: BasisArg,
        #[arg(long = "basis-seed", default_value_t = 1)]
        basis_seed: u64,
    },
    /// Fit a power-law tail to a spectrum or to magnitudes from a file.
    Fit {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// File with one magnitude per line (or a trailing CSV column).
        #[arg(long = "values", conflicts_with = "matrix")]
        values: Option<PathBuf>,
    },
    /// Detect two conflicting groups on a signed graph.
    Cg {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 10)]
        d: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Rsvd)]
        method: MethodArg,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent roundings; the best-scoring assignment wins.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Assignment output path, one `node value` line per node.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect two communities by modularity sign rounding.
    Communities {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        q: u32,
        #[arg(long, default_value_t = 10)]
        d: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Rsvd)]
        method: MethodArg,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte-Carlo verification campaign and emit a JSON report.
    Verify {
        #[arg(long, value_parser = ["cos2", "psd", "tightness", "powerlaw"])]
        campaign: String,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, default_value_t = 10)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bernoulli mean for cos2 campaigns (gaussian when omitted).
        #[arg(long)]
        p: Option<f64>,
        /// Probe vector for cos2: e1, uniform, ones, perp.
        #[arg(long, value_parser = ["e1", "uniform", "ones", "perp"], default_value = "uniform")]
        vector: String,
        /// Attach raw samples to the report.
        #[arg(long, default_value_t = false)]
        samples: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lanczos baseline: print lambda1, iterations, and the exit residual.
    Lambda1 {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        signed: bool,
        #[arg(long, default_value_t = false)]
        modularity: bool,
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BasisArg::Haar)]
        basis: BasisArg,
        #[arg(long = "basis-seed", default_value_t = 1)]
        basis_seed: u64,
    },
}

fn writer_for(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn basis_of(arg: BasisArg, seed: u64) -> Basis {
    match arg {
        BasisArg::Canonical => Basis::Canonical,
        BasisArg::Haar => Basis::Haar { seed },
    }
}

fn build_operator(
    spectrum_args: &SpectrumArgs,
    graph: &Option<PathBuf>,
    signed: bool,
    modularity: bool,
    basis: Basis,
) -> Result<SymmetricOperator> {
    match graph {
        Some(path) => {
            let g = Graph::load_edge_list(path, LoadOptions { signed })?;
            if modularity {
                SymmetricOperator::modularity_from_graph(&g)
            } else {
                g.signed_adjacency()
            }
        }
        None => {
            let spec = synth::spectrum(&spectrum_args.kind()?)?;
            Ok(synth::realize(&spec, basis)?.op)
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run {
            spectrum,
            graph,
            signed,
            modularity,
            method,
            sweep,
            reps,
            p,
            seed,
            basis,
            basis_seed,
            out,
            no_timing,
        } => {
            let source = match graph {
                Some(path) => MatrixSource::Graph {
                    path,
                    signed,
                    modularity,
                },
                None => MatrixSource::Synth {
                    kind: spectrum.kind()?,
                    basis: basis_of(basis, basis_seed),
                },
            };
            let config = ExperimentConfig {
                source,
                method: method.into(),
                sweep: if sweep == "d" { SweepAxis::D } else { SweepAxis::Q },
                reps,
                p,
                seed,
                timing: !no_timing,
            };
            let mut w = writer_for(&out)?;
            cli::run_experiment(&config, &mut w)?;
            w.flush()?;
        }
        Command::Synth { spectrum, out } => {
            let spec = synth::spectrum(&spectrum.kind()?)?;
            let mut w = writer_for(&out)?;
            synth::write_spectrum_csv(&spec, &mut w)?;
            w.flush()?;
        }
        Command::Kappa {
            spectrum,
            q,
            xi_p,
            xi_d,
            basis,
            basis_seed,
        } => {
            let xi = xi_p.map(|p| (p, xi_d, basis_of(basis, basis_seed)));
            let report = cli::kappa_report(&spectrum.kind()?, q, xi)?;
            println!("kappa = {:.6} (n = {}, q = {})", report.kappa, report.n, report.q);
            if let Some(kp) = report.kappa_prime {
                println!("kappa' = {kp:.6}");
            }
        }
        Command::Fit { spectrum, values } => {
            let fit = match values {
                Some(path) => cli::fit_from_reader(BufReader::new(File::open(path)?))?,
                None => {
                    let spec = synth::spectrum(&spectrum.kind()?)?;
                    spectral_sketch::metrics::fit_power_law(&spec.magnitudes())?
                }
            };
            println!(
                "gamma = {:.4}, i0 = {}, C = {:.4}, ks = {:.4}, poor = {}",
                fit.gamma, fit.i0, fit.c, fit.ks_distance, fit.poor
            );
        }
        Command::Cg {
            graph,
            q,
            d,
            method,
            p,
            seed,
            trials,
            out,
        } => {
            let run_args = AppRun {
                graph,
                params: DetectParams {
                    q,
                    d,
                    p,
                    seed,
                    rounding_trials: trials,
                },
                method: method.into(),
            };
            let score = match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    let s = cli::run_conflicting_groups(&run_args, Some(&mut w))?;
                    w.flush()?;
                    s
                }
                None => cli::run_conflicting_groups(&run_args, None)?,
            };
            println!("polarity = {score:.6}");
        }
        Command::Communities {
            graph,
            q,
            d,
            method,
            p,
            seed,
            out,
        } => {
            let run_args = AppRun {
                graph,
                params: DetectParams {
                    q,
                    d,
                    p,
                    seed,
                    rounding_trials: 1,
                },
                method: method.into(),
            };
            let score = match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    let s = cli::run_communities(&run_args, Some(&mut w))?;
                    w.flush()?;
                    s
                }
                None => cli::run_communities(&run_args, None)?,
            };
            println!("modularity = {score:.6}");
        }
        Command::Verify {
            campaign,
            spectrum,
            d,
            q,
            trials,
            seed,
            p,
            vector,
            samples: _,
            out,
        } => {
            let (name, summary) = match campaign.as_str() {
                "cos2" => {
                    let dist = match p {
                        Some(p) => CosDist::Bernoulli { p },
                        None => CosDist::Gaussian,
                    };
                    let v_spec = match vector.as_str() {
                        "e1" => VectorSpec::E1,
                        "ones" => VectorSpec::OnesNormalized,
                        "perp" => VectorSpec::PerpOnes,
                        _ => VectorSpec::UniformUnit,
                    };
                    (
                        "cos2",
                        empirical_cos2(spectrum.n, d, dist, v_spec, trials, seed)?,
                    )
                }
                "psd" => {
                    let spec = synth::spectrum(&spectrum.kind()?)?;
                    ("psd-pathwise", check_psd_pathwise(&spec, q, d, trials, seed)?)
                }
                "tightness" => (
                    "tightness",
                    check_tightness(spectrum.n, d, q, trials, seed)?,
                ),
                "powerlaw" => {
                    let spec = synth::spectrum(&spectrum.kind()?)?;
                    (
                        "powerlaw",
                        check_powerlaw_theorem(&spec, spectrum.i0, q, d, trials, seed)?,
                    )
                }
                other => {
                    return Err(spectral_sketch::error::Error::InvalidParam(format!(
                        "unknown campaign {other}"
                    )))
                }
            };
            let verdict = summary.verdict;
            let report = CampaignReport {
                name: name.into(),
                params: serde_json::json!({
                    "n": spectrum.n, "i0": spectrum.i0, "d": d, "q": q,
                    "trials": trials, "seed": seed, "p": p, "vector": vector,
                }),
                summary,
                samples: None,
            };
            let mut w = writer_for(&out)?;
            serde_json::to_writer_pretty(&mut w, &report)
                .map_err(|e| std::io::Error::other(e.to_string()))?;
            writeln!(w)?;
            w.flush()?;
            println!("{name}: verdict = {verdict}");
        }
        Command::Lambda1 {
            spectrum,
            graph,
            signed,
            modularity,
            max_iter,
            tol,
            seed,
            basis,
            basis_seed,
        } => {
            let op = build_operator(&spectrum, &graph, signed, modularity, basis_of(basis, basis_seed))?;
            let iters = max_iter.unwrap_or_else(|| (5 * op.n()).min(2000));
            let r = lanczos_top(&op, iters, tol, substream(seed, 0x4c))?;
            println!(
                "lambda1 = {:.12}, iterations = {}, residual = {:.3e}, converged = {}",
                r.lambda1, r.iterations, r.residual, r.converged
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SPECTRAL_SKETCH_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let args = CliArgs::parse();
    match run(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
