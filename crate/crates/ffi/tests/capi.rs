use std::ffi::{CStr, CString};
use std::ptr;

use qrep_ffi::*;

fn last_error() -> String {
    let p = qrep_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qrep.h")).unwrap();
    for name in [
        "typedef struct QrepMatrix QrepMatrix;",
        "typedef struct QrepQuasiRep QrepQuasiRep;",
        "QREP_STATUS_NUMERICAL = 2",
        "qrep_matrix_new(",
        "qrep_kappa(",
        "qrep_winding_number(",
        "qrep_k_invariant(",
        "qrep_exel_homotopy_gap(",
        "qrep_voiculescu_pair(",
        "qrep_quasirep_from_json(",
        "qrep_evaluate_word(",
        "qrep_string_free(",
        "qrep_last_error_message(",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn clock_and_shift_through_the_c_api() {
    unsafe {
        let (mut u, mut v) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qrep_voiculescu_pair(64, &mut u, &mut v), QrepStatus::Ok);
        assert_eq!(qrep_matrix_dim(u), 64);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qrep_matrix_get(u, 1, 0, &mut re, &mut im), QrepStatus::Ok);
        assert_eq!((re, im), (1.0, 0.0));
        assert_eq!(qrep_matrix_get(u, 64, 0, &mut re, &mut im), QrepStatus::Precondition);

        let mut k = 0;
        let mut defect = 0.0;
        assert_eq!(qrep_k_invariant(u, v, &mut k, &mut defect), QrepStatus::Ok);
        assert_eq!(k, 1);
        assert!(defect < 0.125);

        let mut q = ptr::null_mut();
        assert_eq!(qrep_quasirep_voiculescu(64, &mut q), QrepStatus::Ok);
        let word = CString::new("[a,b]").unwrap();
        let mut w = ptr::null_mut();
        assert_eq!(qrep_evaluate_word(q, word.as_ptr(), &mut w), QrepStatus::Ok);

        let (mut value, mut rounded) = (0.0, 0);
        assert_eq!(qrep_kappa(w, false, &mut value, &mut rounded), QrepStatus::Ok);
        assert_eq!(rounded, -1);
        assert_eq!(qrep_kappa(w, true, &mut value, ptr::null_mut()), QrepStatus::Ok);
        assert!((value + 1.0 / 64.0).abs() < 1e-12);
        assert_eq!(qrep_winding_number(w, &mut value, &mut rounded), QrepStatus::Ok);
        assert_eq!(rounded, -1);
        let mut gap = 0.0;
        assert_eq!(qrep_exel_homotopy_gap(w, &mut gap), QrepStatus::Ok);
        assert!(gap < 1.0);

        let json = qrep_quasirep_to_json(q);
        assert!(!json.is_null());
        let mut q2 = ptr::null_mut();
        assert_eq!(qrep_quasirep_from_json(json, &mut q2), QrepStatus::Ok);
        qrep_string_free(json);

        qrep_matrix_free(w);
        qrep_matrix_free(u);
        qrep_matrix_free(v);
        qrep_quasirep_free(q);
        qrep_quasirep_free(q2);
    }
}

#[test]
fn matrices_from_raw_parts() {
    unsafe {
        let re = [0.0, 1.0, 1.0, 0.0];
        let im = [0.0; 4];
        let mut m = ptr::null_mut();
        assert_eq!(qrep_matrix_new(2, re.as_ptr(), im.as_ptr(), &mut m), QrepStatus::Ok);
        // det = -1: not a loop
        let (mut value, mut rounded) = (0.0, 0);
        assert_eq!(qrep_winding_number(m, &mut value, &mut rounded), QrepStatus::Precondition);
        qrep_matrix_free(m);

        let re = [-1.0, 0.0, 0.0, -1.0];
        assert_eq!(qrep_matrix_new(2, re.as_ptr(), im.as_ptr(), &mut m), QrepStatus::Ok);
        assert_eq!(qrep_kappa(m, false, &mut value, &mut rounded), QrepStatus::Numerical);
        assert!(last_error().contains("-1"));
        qrep_matrix_free(m);

        let bad = [f64::NAN, 0.0, 0.0, 1.0];
        assert_eq!(qrep_matrix_new(2, bad.as_ptr(), im.as_ptr(), &mut m), QrepStatus::Input);
    }
}

#[test]
fn error_paths() {
    unsafe {
        assert_eq!(qrep_kappa(ptr::null(), false, ptr::null_mut(), ptr::null_mut()), QrepStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert_eq!(qrep_matrix_dim(ptr::null()), 0);
        qrep_matrix_free(ptr::null_mut());
        qrep_quasirep_free(ptr::null_mut());
        qrep_string_free(ptr::null_mut());

        let mut q = ptr::null_mut();
        let junk = CString::new("{not json").unwrap();
        assert_eq!(qrep_quasirep_from_json(junk.as_ptr(), &mut q), QrepStatus::Input);
        assert!(q.is_null());

        let (mut u, mut v) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qrep_voiculescu_pair(1, &mut u, &mut v), QrepStatus::Precondition);
        assert_eq!(qrep_voiculescu_pair(4, &mut u, &mut v), QrepStatus::Ok);
        let mut k = 0;
        assert_eq!(qrep_k_invariant(u, v, &mut k, ptr::null_mut()), QrepStatus::Precondition);
        assert!(last_error().contains("defect"));
        qrep_matrix_free(u);
        qrep_matrix_free(v);

        assert_eq!(qrep_quasirep_voiculescu(8, &mut q), QrepStatus::Ok);
        let mut w = ptr::null_mut();
        let bad = CString::new("[a,").unwrap();
        assert_eq!(qrep_evaluate_word(q, bad.as_ptr(), &mut w), QrepStatus::Input);
        let unknown = CString::new("c").unwrap();
        assert_eq!(qrep_evaluate_word(q, unknown.as_ptr(), &mut w), QrepStatus::Precondition);
        qrep_quasirep_free(q);

        let v = CStr::from_ptr(qrep_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}
