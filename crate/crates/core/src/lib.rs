//! Pass-efficient randomized approximation of the top eigenvector of a
//! symmetric matrix, with the multiplicative quality ratio
//! `R(u) = u^T A u / lambda_1` as the figure of merit.
//!
//! The library provides:
//!
//! - matrix-free symmetric operators (dense, sparse signed adjacency, and an
//!   implicit modularity operator) with pass accounting ([`linop`]);
//! - seeded Gaussian, Bernoulli and concatenated sketches ([`sketch`]);
//! - the randomized solver and its Bernoulli-augmented variant ([`rsvd`]);
//! - dense kernels: pivoted thin QR, a Jacobi eigensolver, a Lanczos
//!   baseline for ground truth, Haar orthogonal sampling ([`densela`]);
//! - quality metrics and spectrum diagnostics, including the signed
//!   tail-mass ratios and a power-law tail fit ([`metrics`]);
//! - synthetic benchmark spectra and matrix assembly ([`synth`]);
//! - graph ingestion plus the two spectral applications: conflicting-group
//!   detection on signed networks and two-way community detection
//!   ([`graph`], [`apps`]);
//! - Monte-Carlo verification campaigns with JSON reports ([`verify`]);
//! - the experiment harness behind the `spectral-sketch` binary ([`cli`]).

pub mod apps;
pub mod cli;
pub mod densela;
pub mod error;
pub mod graph;
pub mod linop;
pub mod mat;
pub mod metrics;
pub mod rng;
pub mod rsvd;
pub mod sketch;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
