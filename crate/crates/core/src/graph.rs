//! Edge-list ingestion and adjacency operators for signed and unsigned graphs.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::linop::SymmetricOperator;

/// An undirected graph with edge weights in {+1, -1}.
///
/// Nodes are densely labeled 0..n-1. Parallel edges are collapsed keeping the
/// last weight seen; self-loops are dropped on ingestion.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    /// Canonicalized as (min, max, w), sorted.
    edges: Vec<(u32, u32, i8)>,
    degrees: Vec<f64>,
    signed: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Parse a third column as an edge sign when present.
    pub signed: bool,
}

impl Graph {
    /// Build from an explicit edge list; node ids may be sparse and are kept as-is
    /// up to `n = max id + 1`.
    pub fn from_edges(edges: &[(u32, u32, i8)]) -> Result<Graph> {
        let mut n = 0usize;
        let mut dedup: HashMap<(u32, u32), i8> = HashMap::new();
        let mut order: Vec<(u32, u32)> = Vec::new();
        let mut signed = false;
        for &(u, v, w) in edges {
            if w != 1 && w != -1 {
                return Err(invalid(format!("edge weight must be +1 or -1, got {w}")));
            }
            n = n.max(u as usize + 1).max(v as usize + 1);
            if u == v {
                continue; // self-loop: the node stays, the edge goes
            }
            if w == -1 {
                signed = true;
            }
            let key = (u.min(v), u.max(v));
            if dedup.insert(key, w).is_none() {
                order.push(key);
            }
        }
        let mut list: Vec<(u32, u32, i8)> = order
            .into_iter()
            .map(|key| (key.0, key.1, dedup[&key]))
            .collect();
        list.sort_unstable();
        let mut degrees = vec![0.0; n];
        for &(u, v, _) in &list {
            degrees[u as usize] += 1.0;
            degrees[v as usize] += 1.0;
        }
        Ok(Graph {
            n,
            edges: list,
            degrees,
            signed,
        })
    }

    /// Load a whitespace-separated edge list (`u v [w]`); lines starting with
    /// '#' or '%' are skipped. Files ending in `.gz` are decompressed on the fly.
    pub fn load_edge_list(path: impl AsRef<Path>, opts: LoadOptions) -> Result<Graph> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        if path.extension().is_some_and(|e| e == "gz") {
            Self::read_edge_list(flate2::read::GzDecoder::new(file), opts)
        } else {
            Self::read_edge_list(file, opts)
        }
    }

    pub fn read_edge_list(reader: impl Read, opts: LoadOptions) -> Result<Graph> {
        let mut relabel: HashMap<u64, u32> = HashMap::new();
        let mut next_id = 0u32;
        let mut raw: Vec<(u32, u32, i8)> = Vec::new();
        let mut seen_any_line = false;
        for (lineno, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
                continue;
            }
            seen_any_line = true;
            let mut it = t.split_whitespace();
            let parse = |tok: Option<&str>, what: &str| -> Result<u64> {
                tok.ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    msg: format!("missing {what}"),
                })?
                .parse::<u64>()
                .map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad {what}"),
                })
            };
            let u = parse(it.next(), "source node")?;
            let v = parse(it.next(), "target node")?;
            let mut w = 1i8;
            if let Some(tok) = it.next() {
                if opts.signed {
                    let val: f64 = tok.parse().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: "bad edge weight".into(),
                    })?;
                    w = if val < 0.0 { -1 } else { 1 };
                }
            }
            // first-appearance relabeling keeps output deterministic
            let mut id_of = |node: u64| -> u32 {
                *relabel.entry(node).or_insert_with(|| {
                    let id = next_id;
                    next_id += 1;
                    id
                })
            };
            let ui = id_of(u);
            let vi = id_of(v);
            raw.push((ui, vi, w));
        }
        if !seen_any_line {
            return Err(invalid("edge list file is empty"));
        }
        Graph::from_edges(&raw)
    }

    /// One edge per line, "u v" or "u v w" for signed graphs.
    pub fn write_edge_list(&self, mut w: impl Write) -> Result<()> {
        for &(u, v, s) in &self.edges {
            if self.signed {
                writeln!(w, "{u} {v} {s}")?;
            } else {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32, i8)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    /// The signed adjacency as a CSR symmetric operator.
    pub fn signed_adjacency(&self) -> Result<SymmetricOperator> {
        if self.n == 0 {
            return Err(invalid("graph has no nodes"));
        }
        SymmetricOperator::from_edges(
            self.n,
            self.edges.iter().map(|&(u, v, w)| (u, v, w as f64)),
        )
    }
}
