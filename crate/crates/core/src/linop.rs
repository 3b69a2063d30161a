//! Symmetric linear operators exposed through matrix-vector products.
//!
//! Three realizations: dense row-major storage, sparse CSR over the full
//! symmetric pattern, and the implicit modularity operator
//! `M x = A x - d (d^T x) / 2|E|` which is never densified.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::mat::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Dense,
    SparseSymmetric,
    Modularity,
}

#[derive(Clone, Copy, Debug)]
pub struct OperatorStats {
    pub n: usize,
    /// Stored nonzeros (dense: n^2).
    pub nnz: usize,
    /// Full sweeps over the matrix performed so far on this handle.
    pub passes_consumed: u64,
    /// Individual column applies performed so far.
    pub matvecs: u64,
}

#[derive(Debug)]
enum Storage {
    Dense {
        a: Vec<f64>, // row-major, n*n
    },
    Csr {
        row_ptr: Vec<usize>,
        col_idx: Vec<u32>,
        values: Vec<f64>,
    },
    Modularity {
        row_ptr: Vec<usize>,
        col_idx: Vec<u32>,
        degrees: Vec<f64>,
        two_m: f64,
    },
}

#[derive(Debug)]
pub struct SymmetricOperator {
    n: usize,
    storage: Storage,
    passes: AtomicU64,
    matvecs: AtomicU64,
}

impl SymmetricOperator {
    /// Dense operator from row-major entries; the payload is symmetrized by
    /// averaging so the symmetry invariant holds exactly.
    pub fn dense(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("operator dimension must be at least 1"));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("dense operator entries"));
        }
        let mut a = entries;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
                a[i * n + j] = avg;
                a[j * n + i] = avg;
            }
        }
        Ok(Self {
            n,
            storage: Storage::Dense { a },
            passes: AtomicU64::new(0),
            matvecs: AtomicU64::new(0),
        })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut a = vec![0.0; n * n];
        for (i, &v) in values.iter().enumerate() {
            a[i * n + i] = v;
        }
        Self::dense(n, a)
    }

    /// Sparse symmetric operator from undirected weighted edges; both
    /// triangles are stored so a matvec is a single row sweep.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("operator dimension must be at least 1"));
        }
        let mut triplets: Vec<(u32, u32, f64)> = Vec::new();
        for (u, v, w) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: u.max(v) as usize + 1,
                });
            }
            if !w.is_finite() {
                return Err(Error::NonFinite("edge weights"));
            }
            triplets.push((u, v, w));
            if u != v {
                triplets.push((v, u, w));
            }
        }
        // index-ascending order fixes the summation order of each row sweep
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        for &(r, c, w) in &triplets {
            row_ptr[r as usize + 1] += 1;
            col_idx.push(c);
            values.push(w);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            n,
            storage: Storage::Csr {
                row_ptr,
                col_idx,
                values,
            },
            passes: AtomicU64::new(0),
            matvecs: AtomicU64::new(0),
        })
    }

    /// The modularity operator of an unsigned graph, applied implicitly as
    /// `A x - d (d^T x) / 2|E|`. Rejects graphs without edges.
    pub fn modularity_from_graph(g: &Graph) -> Result<Self> {
        if g.edge_count() == 0 {
            return Err(invalid("modularity needs at least one edge"));
        }
        if g.is_signed() {
            return Err(invalid("modularity is defined for unsigned graphs"));
        }
        let n = g.node_count();
        let mut triplets: Vec<(u32, u32)> = Vec::new();
        for &(u, v, _) in g.edges() {
            triplets.push((u, v));
            triplets.push((v, u));
        }
        triplets.sort_unstable();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        for &(r, c) in &triplets {
            row_ptr[r as usize + 1] += 1;
            col_idx.push(c);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            n,
            storage: Storage::Modularity {
                row_ptr,
                col_idx,
                degrees: g.degrees().to_vec(),
                two_m: 2.0 * g.edge_count() as f64,
            },
            passes: AtomicU64::new(0),
            matvecs: AtomicU64::new(0),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> OperatorKind {
        match self.storage {
            Storage::Dense { .. } => OperatorKind::Dense,
            Storage::Csr { .. } => OperatorKind::SparseSymmetric,
            Storage::Modularity { .. } => OperatorKind::Modularity,
        }
    }

    pub fn stats(&self) -> OperatorStats {
        let nnz = match &self.storage {
            Storage::Dense { .. } => self.n * self.n,
            Storage::Csr { values, .. } => values.len(),
            Storage::Modularity { col_idx, .. } => col_idx.len(),
        };
        OperatorStats {
            n: self.n,
            nnz,
            passes_consumed: self.passes.load(Ordering::Relaxed),
            matvecs: self.matvecs.load(Ordering::Relaxed),
        }
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        match &self.storage {
            Storage::Dense { a } => {
                for (i, yi) in y.iter_mut().enumerate() {
                    let row = &a[i * self.n..(i + 1) * self.n];
                    *yi = row.iter().zip(x).map(|(aij, xj)| aij * xj).sum();
                }
            }
            Storage::Csr {
                row_ptr,
                col_idx,
                values,
            } => {
                for (i, yi) in y.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for k in row_ptr[i]..row_ptr[i + 1] {
                        s += values[k] * x[col_idx[k] as usize];
                    }
                    *yi = s;
                }
            }
            Storage::Modularity {
                row_ptr,
                col_idx,
                degrees,
                two_m,
            } => {
                let dx: f64 = degrees.iter().zip(x).map(|(d, xi)| d * xi).sum();
                let c = dx / two_m;
                for (i, yi) in y.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for k in row_ptr[i]..row_ptr[i + 1] {
                        s += x[col_idx[k] as usize];
                    }
                    *yi = s - degrees[i] * c;
                }
            }
        }
    }

    /// `A x`; counts one full sweep.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("matvec input"));
        }
        let mut y = vec![0.0; self.n];
        self.apply_into(x, &mut y);
        self.passes.fetch_add(1, Ordering::Relaxed);
        self.matvecs.fetch_add(1, Ordering::Relaxed);
        Ok(y)
    }

    /// `A X` column by column; counts one pass regardless of the width.
    pub fn matmat(&self, x: &Mat) -> Result<Mat> {
        if x.rows() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.rows(),
            });
        }
        if x.cols() == 0 {
            return Err(invalid("matmat needs at least one column"));
        }
        if !x.is_finite() {
            return Err(Error::NonFinite("matmat input"));
        }
        let mut out = Mat::zeros(self.n, x.cols());
        for j in 0..x.cols() {
            // same per-column summation order as matvec, so results agree exactly
            let mut y = vec![0.0; self.n];
            self.apply_into(x.col(j), &mut y);
            out.col_mut(j).copy_from_slice(&y);
        }
        self.passes.fetch_add(1, Ordering::Relaxed);
        self.matvecs.fetch_add(x.cols() as u64, Ordering::Relaxed);
        Ok(out)
    }

    /// Densify small operators (oracle and test use).
    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        let mut e = vec![0.0; self.n];
        for j in 0..self.n {
            e[j] = 1.0;
            let mut y = vec![0.0; self.n];
            self.apply_into(&e, &mut y);
            m.col_mut(j).copy_from_slice(&y);
            e[j] = 0.0;
        }
        m
    }
}
