//! Seeded random test matrices: Gaussian, Bernoulli(p), and the half-and-half
//! concatenation that feeds the Bernoulli-augmented solver.
//!
//! A sketch is a pure function of `(kind, n, d, p, seed)`. Each column draws
//! from its own sub-stream, so the layout is reproducible bit for bit and
//! columns may be generated in any order.

use crate::error::{invalid, Result};
use crate::mat::Mat;
use crate::rng::{substream, GaussianStream, SplitMix64};

const GAUSS_TAG: u64 = 0x6761_7573_7300;
const BERN_TAG: u64 = 0x6265_726e_6900;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SketchKind {
    Gaussian,
    Bernoulli { p: f64 },
    /// First ceil(d/2) columns Gaussian, last floor(d/2) columns Bernoulli(p).
    RandSum { p: f64 },
}

#[derive(Clone, Debug)]
pub struct Sketch {
    pub data: Mat,
    pub kind: SketchKind,
    pub seed: u64,
}

impl Sketch {
    pub fn n(&self) -> usize {
        self.data.rows()
    }

    pub fn d(&self) -> usize {
        self.data.cols()
    }
}

fn check_shape(n: usize, d: usize, min_d: usize) -> Result<()> {
    if d < min_d {
        return Err(invalid(format!("sketch width must be at least {min_d}, got {d}")));
    }
    if n < d {
        return Err(invalid(format!("sketch needs n >= d, got n={n}, d={d}")));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("bernoulli mean must lie in (0,1), got {p}")));
    }
    Ok(())
}

fn fill_gaussian_column(col: &mut [f64], seed: u64, j: u64) {
    let mut g = GaussianStream::new(substream(seed, GAUSS_TAG ^ j));
    for v in col {
        *v = g.next();
    }
}

fn fill_bernoulli_column(col: &mut [f64], p: f64, seed: u64, j: u64) {
    let mut r = SplitMix64::new(substream(seed, BERN_TAG ^ j));
    for v in col {
        *v = if r.bernoulli(p) { 1.0 } else { 0.0 };
    }
}

/// i.i.d. standard normal entries.
pub fn gaussian_sketch(n: usize, d: usize, seed: u64) -> Result<Sketch> {
    check_shape(n, d, 1)?;
    let mut data = Mat::zeros(n, d);
    for j in 0..d {
        fill_gaussian_column(data.col_mut(j), seed, j as u64);
    }
    Ok(Sketch {
        data,
        kind: SketchKind::Gaussian,
        seed,
    })
}

/// i.i.d. entries equal to 1 with probability `p`, else 0.
pub fn bernoulli_sketch(n: usize, d: usize, p: f64, seed: u64) -> Result<Sketch> {
    check_shape(n, d, 1)?;
    check_p(p)?;
    let mut data = Mat::zeros(n, d);
    for j in 0..d {
        fill_bernoulli_column(data.col_mut(j), p, seed, j as u64);
    }
    Ok(Sketch {
        data,
        kind: SketchKind::Bernoulli { p },
        seed,
    })
}

/// `[Gaussian n x ceil(d/2) | Bernoulli(p) n x floor(d/2)]` with sub-seeds
/// derived deterministically from one seed.
pub fn randsum_sketch(n: usize, d: usize, p: f64, seed: u64) -> Result<Sketch> {
    check_shape(n, d, 2)?;
    check_p(p)?;
    let gauss_cols = d.div_ceil(2);
    let mut data = Mat::zeros(n, d);
    for j in 0..gauss_cols {
        fill_gaussian_column(data.col_mut(j), seed, j as u64);
    }
    for j in gauss_cols..d {
        fill_bernoulli_column(data.col_mut(j), p, seed, (j - gauss_cols) as u64);
    }
    Ok(Sketch {
        data,
        kind: SketchKind::RandSum { p },
        seed,
    })
}
