//! C ABI for the spectral-sketch library.
//!
//! Operators and solver results are opaque handles; every fallible call
//! returns an `SsStatus` code and the last error message is kept in
//! thread-local storage. The matching header lives at
//! `include/spectral_sketch.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spectral_sketch::apps::{self, DetectParams, Method};
use spectral_sketch::densela::lanczos_top;
use spectral_sketch::error::Error;
use spectral_sketch::graph::{Graph, LoadOptions};
use spectral_sketch::linop::SymmetricOperator;
use spectral_sketch::metrics::{kappa, SpectrumSpec};
use spectral_sketch::rsvd::{randsum, rsvd, ApproxEigResult};
use spectral_sketch::sketch::gaussian_sketch;
use spectral_sketch::synth::{realize, spectrum, Basis, SpectrumKind};

/// Status codes mirrored in the C header.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    EmptyRange = 5,
    ParseError = 6,
    IoError = 7,
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SsStatus {
    match err {
        Error::DimensionMismatch { .. } => SsStatus::DimensionMismatch,
        Error::NonFinite(_) => SsStatus::NonFinite,
        Error::InvalidParam(_) => SsStatus::InvalidArgument,
        Error::EmptyRange => SsStatus::EmptyRange,
        Error::Parse { .. } => SsStatus::ParseError,
        Error::Io(_) => SsStatus::IoError,
    }
}

fn guard(f: impl FnOnce() -> SsStatus) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            SsStatus::Panic
        }
    }
}

/// Opaque symmetric operator handle.
pub struct SsOperator(SymmetricOperator);

/// Opaque graph handle.
pub struct SsGraph(Graph);

/// Opaque solver result handle.
pub struct SsResult(ApproxEigResult);

/// Last error message for this thread, or NULL when no error is recorded.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.as_ptr(),
        None => ptr::null(),
    })
}

/// Dense symmetric operator from row-major entries (length n*n).
///
/// # Safety
/// `entries` must point to `n * n` readable doubles and `out` must be a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_operator_dense(
    n: usize,
    entries: *const f64,
    out: *mut *mut SsOperator,
) -> SsStatus {
    guard(|| {
        if entries.is_null() || out.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        let data = unsafe { std::slice::from_raw_parts(entries, n * n) }.to_vec();
        match SymmetricOperator::dense(n, data) {
            Ok(op) => {
                unsafe { *out = Box::into_raw(Box::new(SsOperator(op))) };
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Synthetic-spectrum operator in the canonical basis (`kind`: 1-4 for the
/// benchmark profiles, 0 for the flat worst case with the given d and q).
/// Returns the exact top eigenvalue through `out_lambda1`.
///
/// # Safety
/// `out` and `out_lambda1` must be valid destination pointers.
#[no_mangle]
pub unsafe extern "C" fn ss_operator_synthetic(
    kind: u32,
    n: usize,
    i0: usize,
    d: usize,
    q: u32,
    out: *mut *mut SsOperator,
    out_lambda1: *mut f64,
) -> SsStatus {
    guard(|| {
        if out.is_null() || out_lambda1.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        let result = (|| {
            let spec_kind = if kind == 0 {
                SpectrumKind::WorstCase { n, d, q }
            } else {
                SpectrumKind::type_n(kind, n, i0)?
            };
            let spec = spectrum(&spec_kind)?;
            realize(&spec, Basis::Canonical)
        })();
        match result {
            Ok(r) => {
                unsafe {
                    *out_lambda1 = r.lambda1;
                    *out = Box::into_raw(Box::new(SsOperator(r.op)));
                }
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `op` must be a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_operator_free(op: *mut SsOperator) {
    if !op.is_null() {
        drop(unsafe { Box::from_raw(op) });
    }
}

/// # Safety
/// `op` must be a live operator handle.
#[no_mangle]
pub unsafe extern "C" fn ss_operator_dim(op: *const SsOperator) -> usize {
    if op.is_null() {
        return 0;
    }
    unsafe { &*op }.0.n()
}

/// Load an edge list (`u v [w]`, '#'/'%' comments, `.gz` transparent).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_load(
    path: *const c_char,
    signed_weights: bool,
    out: *mut *mut SsGraph,
) -> SsStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        let path = match unsafe { CStr::from_ptr(path) }.to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("path is not valid utf-8".into());
                return SsStatus::InvalidArgument;
            }
        };
        match Graph::load_edge_list(path, LoadOptions { signed: signed_weights }) {
            Ok(g) => {
                unsafe { *out = Box::into_raw(Box::new(SsGraph(g))) };
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_free(g: *mut SsGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// # Safety
/// `g` must be a live graph handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_adjacency(
    g: *const SsGraph,
    out: *mut *mut SsOperator,
) -> SsStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        match unsafe { &*g }.0.signed_adjacency() {
            Ok(op) => {
                unsafe { *out = Box::into_raw(Box::new(SsOperator(op))) };
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `g` must be a live graph handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_modularity(
    g: *const SsGraph,
    out: *mut *mut SsOperator,
) -> SsStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        match SymmetricOperator::modularity_from_graph(&unsafe { &*g }.0) {
            Ok(op) => {
                unsafe { *out = Box::into_raw(Box::new(SsOperator(op))) };
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Gaussian-sketch solver run.
///
/// # Safety
/// `op` must be a live operator handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ss_rsvd(
    op: *const SsOperator,
    q: u32,
    d: usize,
    seed: u64,
    out: *mut *mut SsResult,
) -> SsStatus {
    guard(|| {
        if op.is_null() || out.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        let op = &unsafe { &*op }.0;
        let result = gaussian_sketch(op.n(), d, seed).and_then(|s| rsvd(op, &s, q));
        match result {
            Ok(r) => {
                unsafe { *out = Box::into_raw(Box::new(SsResult(r))) };
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Half-Gaussian half-Bernoulli solver run.
///
/// # Safety
/// `op` must be a live operator handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ss_randsum(
    op: *const SsOperator,
    q: u32,
    d: usize,
    p: f64,
    seed: u64,
    out: *mut *mut SsResult,
) -> SsStatus {
    guard(|| {
        if op.is_null() || out.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        match randsum(&unsafe { &*op }.0, q, d, p, seed) {
            Ok(r) => {
                unsafe { *out = Box::into_raw(Box::new(SsResult(r))) };
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn ss_result_free(r: *mut SsResult) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn ss_result_rayleigh(r: *const SsResult) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    unsafe { &*r }.0.rayleigh
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn ss_result_passes(r: *const SsResult) -> u32 {
    if r.is_null() {
        return 0;
    }
    unsafe { &*r }.0.passes
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn ss_result_rank(r: *const SsResult) -> usize {
    if r.is_null() {
        return 0;
    }
    unsafe { &*r }.0.effective_rank
}

/// Copy the unit eigenvector estimate into `buffer` (capacity `len >= n`);
/// returns the vector length, or 0 on a short buffer.
///
/// # Safety
/// `r` must be a live result handle and `buffer` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ss_result_vector(
    r: *const SsResult,
    buffer: *mut f64,
    len: usize,
) -> usize {
    if r.is_null() || buffer.is_null() {
        return 0;
    }
    let v = &unsafe { &*r }.0.u_hat;
    if len < v.len() {
        return 0;
    }
    unsafe { std::slice::from_raw_parts_mut(buffer, v.len()) }.copy_from_slice(v);
    v.len()
}

/// Signed tail-mass ratio of an explicit spectrum (descending not required;
/// values are ordered internally).
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ss_kappa(
    values: *const f64,
    len: usize,
    q: u32,
    out: *mut f64,
) -> SsStatus {
    guard(|| {
        if values.is_null() || out.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        let vals = unsafe { std::slice::from_raw_parts(values, len) }.to_vec();
        let result = SpectrumSpec::new(vals).and_then(|spec| kappa(&spec, q));
        match result {
            Ok(k) => {
                unsafe { *out = k };
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Lanczos baseline for the algebraically largest eigenvalue.
///
/// # Safety
/// `op` must be a live operator handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ss_lanczos_top(
    op: *const SsOperator,
    max_iter: usize,
    tol: f64,
    seed: u64,
    out_lambda1: *mut f64,
    out_converged: *mut bool,
) -> SsStatus {
    guard(|| {
        if op.is_null() || out_lambda1.is_null() || out_converged.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        match lanczos_top(&unsafe { &*op }.0, max_iter, tol, seed) {
            Ok(r) => {
                unsafe {
                    *out_lambda1 = r.lambda1;
                    *out_converged = r.converged;
                }
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Best-of-k conflicting-group detection on a signed graph; fills the
/// assignment buffer with {-1, 0, +1} and returns the polarity score.
///
/// # Safety
/// `g` must be a live graph handle and `assignment` writable for `len` bytes;
/// `out_score` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ss_conflicting_groups(
    g: *const SsGraph,
    q: u32,
    d: usize,
    p: f64,
    seed: u64,
    rounding_trials: usize,
    use_randsum: bool,
    assignment: *mut i8,
    len: usize,
    out_score: *mut f64,
) -> SsStatus {
    guard(|| {
        if g.is_null() || assignment.is_null() || out_score.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        let graph = &unsafe { &*g }.0;
        if len < graph.node_count() {
            set_error("assignment buffer is too short".into());
            return SsStatus::InvalidArgument;
        }
        let params = DetectParams {
            q,
            d,
            p,
            seed,
            rounding_trials,
        };
        let method = if use_randsum { Method::RandSum } else { Method::Rsvd };
        match apps::detect_conflicting_groups(graph, &params, method) {
            Ok(a) => {
                unsafe {
                    std::slice::from_raw_parts_mut(assignment, a.x.len())
                        .copy_from_slice(&a.x);
                    *out_score = a.score;
                }
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Two-way community detection on an unsigned graph; fills the +-1 assignment
/// buffer and returns the modularity score.
///
/// # Safety
/// Same contract as [`ss_conflicting_groups`].
#[no_mangle]
pub unsafe extern "C" fn ss_communities(
    g: *const SsGraph,
    q: u32,
    d: usize,
    p: f64,
    seed: u64,
    use_randsum: bool,
    assignment: *mut i8,
    len: usize,
    out_score: *mut f64,
) -> SsStatus {
    guard(|| {
        if g.is_null() || assignment.is_null() || out_score.is_null() {
            set_error("null pointer".into());
            return SsStatus::NullPointer;
        }
        let graph = &unsafe { &*g }.0;
        if len < graph.node_count() {
            set_error("assignment buffer is too short".into());
            return SsStatus::InvalidArgument;
        }
        let params = DetectParams {
            q,
            d,
            p,
            seed,
            rounding_trials: 1,
        };
        let method = if use_randsum { Method::RandSum } else { Method::Rsvd };
        match apps::detect_communities(graph, &params, method) {
            Ok(a) => {
                unsafe {
                    std::slice::from_raw_parts_mut(assignment, a.x.len())
                        .copy_from_slice(&a.x);
                    *out_score = a.score;
                }
                SsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}
