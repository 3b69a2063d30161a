//! Exercise the C ABI end to end through the exported symbols.

use std::ffi::CString;
use std::io::Write;
use std::ptr;

use spectral_sketch_capi::*;

#[test]
fn dense_operator_rsvd_roundtrip() {
    let n = 4usize;
    // diag(4, 2, 1, 0) row-major
    let mut entries = vec![0.0f64; n * n];
    entries[0] = 4.0;
    entries[5] = 2.0;
    entries[10] = 1.0;

    unsafe {
        let mut op: *mut SsOperator = ptr::null_mut();
        assert_eq!(ss_operator_dense(n, entries.as_ptr(), &mut op), SsStatus::Ok);
        assert_eq!(ss_operator_dim(op), 4);

        let mut result: *mut SsResult = ptr::null_mut();
        assert_eq!(ss_rsvd(op, 3, 2, 42, &mut result), SsStatus::Ok);
        let rayleigh = ss_result_rayleigh(result);
        assert!(rayleigh > 3.9 && rayleigh <= 4.0 + 1e-9, "rayleigh {rayleigh}");
        assert_eq!(ss_result_passes(result), 4);
        assert_eq!(ss_result_rank(result), 2);

        let mut buf = vec![0.0f64; n];
        assert_eq!(ss_result_vector(result, buf.as_mut_ptr(), n), n);
        let norm: f64 = buf.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9);

        let mut lambda1 = 0.0f64;
        let mut converged = false;
        assert_eq!(
            ss_lanczos_top(op, 50, 1e-10, 1, &mut lambda1, &mut converged),
            SsStatus::Ok
        );
        assert!((lambda1 - 4.0).abs() < 1e-8);
        assert!(converged);

        ss_result_free(result);
        ss_operator_free(op);
    }
}

#[test]
fn synthetic_operator_and_kappa() {
    unsafe {
        let mut op: *mut SsOperator = ptr::null_mut();
        let mut lambda1 = 0.0f64;
        assert_eq!(
            ss_operator_synthetic(3, 1000, 100, 0, 1, &mut op, &mut lambda1),
            SsStatus::Ok
        );
        assert_eq!(lambda1, 1.0);
        assert_eq!(ss_operator_dim(op), 1000);
        ss_operator_free(op);

        let values = [1.0f64, 0.5, -0.5];
        let mut k = f64::NAN;
        assert_eq!(ss_kappa(values.as_ptr(), 3, 1, &mut k), SsStatus::Ok);
        assert_eq!(k, 0.0);
    }
}

#[test]
fn error_paths_set_messages() {
    unsafe {
        let mut op: *mut SsOperator = ptr::null_mut();
        // 3 entries cannot fill a 2x2 dense operator through the ABI contract,
        // but the length is taken from n, so force a validation error instead
        let status = ss_operator_dense(0, [0.0].as_ptr(), &mut op);
        assert_eq!(status, SsStatus::InvalidArgument);
        let msg = ss_last_error();
        assert!(!msg.is_null());

        let mut out = f64::NAN;
        let status = ss_kappa([1.0].as_ptr(), 1, 1, &mut out);
        assert_eq!(status, SsStatus::InvalidArgument);

        assert_eq!(
            ss_operator_dense(2, ptr::null(), &mut op),
            SsStatus::NullPointer
        );
    }
}

#[test]
fn graph_applications_through_abi() {
    let dir = tempfile_dir();
    let path = dir.join("tri.txt");
    std::fs::File::create(&path)
        .unwrap()
        .write_all(b"0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3\n")
        .unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        let mut g: *mut SsGraph = ptr::null_mut();
        assert_eq!(ss_graph_load(cpath.as_ptr(), false, &mut g), SsStatus::Ok);

        let mut op: *mut SsOperator = ptr::null_mut();
        assert_eq!(ss_graph_modularity(g, &mut op), SsStatus::Ok);
        assert_eq!(ss_operator_dim(op), 6);
        ss_operator_free(op);

        let mut assignment = vec![0i8; 6];
        let mut score = f64::NAN;
        assert_eq!(
            ss_communities(g, 4, 4, 0.5, 1, false, assignment.as_mut_ptr(), 6, &mut score),
            SsStatus::Ok
        );
        assert!(score > 0.35, "modularity {score}");
        assert_eq!(assignment[0], assignment[1]);
        assert_ne!(assignment[0], assignment[3]);

        ss_graph_free(g);
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ss-capi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
