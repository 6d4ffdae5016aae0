//! C interface to `qrep`.
//!
//! Matrices and quasi-representations cross the boundary as opaque handles
//! that the caller releases with the matching `_free` function. Every
//! fallible call returns a [`QrepStatus`]; on failure the message is
//! available from [`qrep_last_error_message`] on the same thread.
//! All computations use the default tolerances.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qrep::bott::k_invariant;
use qrep::families::voiculescu_pair;
use qrep::invariants::{exel_homotopy_gap, kappa, winding_number_det_segment, TraceMode};
use qrep::words::{parse_word, QuasiRep, QuasiRepJson};
use qrep::{CMatrix, Error, Tolerances, Unitary};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrepStatus {
    Ok = 0,
    /// A hypothesis or precondition failed (defect too large, not unitary, ...).
    Precondition = 1,
    /// Branch cut, missing spectral gap or a singular determinant path.
    Numerical = 2,
    /// Malformed matrix, word or JSON.
    Input = 3,
    NullPointer = 4,
    /// A string argument is not valid UTF-8.
    Utf8 = 5,
    /// Internal panic caught at the boundary.
    Panic = 6,
}

/// Dense square complex matrix.
pub struct QrepMatrix {
    inner: CMatrix,
}

/// Quasi-representation of a finitely presented group.
pub struct QrepQuasiRep {
    inner: QuasiRep,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QrepStatus {
    match e.exit_code() {
        1 => QrepStatus::Precondition,
        2 => QrepStatus::Numerical,
        _ => QrepStatus::Input,
    }
}

fn guard(f: impl FnOnce() -> Result<(), QrepStatus>) -> QrepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrepStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            QrepStatus::Panic
        }
    }
}

fn fail(e: Error) -> QrepStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> QrepStatus {
    set_error(format!("`{what}` is null"));
    QrepStatus::NullPointer
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, QrepStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, QrepStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("`{what}` is not valid UTF-8"));
        QrepStatus::Utf8
    })
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), QrepStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn unitary(m: &QrepMatrix, tol: &Tolerances) -> Result<Unitary, QrepStatus> {
    Unitary::new(m.inner.clone(), tol.unitarity).map_err(fail)
}

fn boxed(m: CMatrix) -> *mut QrepMatrix {
    Box::into_raw(Box::new(QrepMatrix { inner: m }))
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qrep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build a `dim × dim` matrix from row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to `dim * dim` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_matrix_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QrepMatrix,
) -> QrepStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let len = dim.checked_mul(dim).ok_or_else(|| fail(Error::InvalidArgument("dimension overflow".into())))?;
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let m = CMatrix::from_parts(dim, re, im).map_err(fail)?;
        write(out, boxed(m), "out")
    })
}

/// # Safety
/// `m` must be NULL or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrep_matrix_free(m: *mut QrepMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of `m`, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrep_matrix_dim(m: *const QrepMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// Entry `(i, j)` of `m`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_matrix_get(
    m: *const QrepMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> QrepStatus {
    guard(|| {
        let m = as_ref(m, "m")?;
        let n = m.inner.dim();
        if i >= n || j >= n {
            return Err(fail(Error::InvalidArgument(format!("index ({i}, {j}) out of range for dim {n}"))));
        }
        let z = m.inner.get(i, j);
        write(re, z.re, "re")?;
        write(im, z.im, "im")
    })
}

/// `κ(w)`, with the normalised trace when `normalized` is true. `rounded`
/// receives the nearest integer (standard trace only) and may be NULL.
///
/// # Safety
/// `w` must be a live handle; `value` must be writable; `rounded` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qrep_kappa(
    w: *const QrepMatrix,
    normalized: bool,
    value: *mut f64,
    rounded: *mut i64,
) -> QrepStatus {
    guard(|| {
        let tol = Tolerances::default();
        let w = unitary(as_ref(w, "w")?, &tol)?;
        let mode = if normalized { TraceMode::Normalized } else { TraceMode::Standard };
        let r = kappa(&w, mode, &tol).map_err(fail)?;
        write(value, r.value, "value")?;
        if !rounded.is_null() {
            rounded.write(r.rounded.unwrap_or(0));
        }
        Ok(())
    })
}

/// Winding number of `t ↦ det((1-t)·1 + t·w)`.
///
/// # Safety
/// `w` must be a live handle; `value` and `rounded` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_winding_number(w: *const QrepMatrix, value: *mut f64, rounded: *mut i64) -> QrepStatus {
    guard(|| {
        let tol = Tolerances::default();
        let w = unitary(as_ref(w, "w")?, &tol)?;
        let r = winding_number_det_segment(&w, &tol).map_err(fail)?;
        write(value, r.value, "value")?;
        write(rounded, r.rounded.unwrap_or(0), "rounded")
    })
}

/// Bott pushforward `k(u, v)`; `defect` receives `|e² - e|` and may be NULL.
///
/// # Safety
/// `u`, `v` must be live handles; `k` must be writable; `defect` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qrep_k_invariant(
    u: *const QrepMatrix,
    v: *const QrepMatrix,
    k: *mut i64,
    defect: *mut f64,
) -> QrepStatus {
    guard(|| {
        let tol = Tolerances::default();
        let u = unitary(as_ref(u, "u")?, &tol)?;
        let v = unitary(as_ref(v, "v")?, &tol)?;
        let r = k_invariant(&u, &v, &tol).map_err(fail)?;
        write(k, r.rounded.unwrap_or(0), "k")?;
        if !defect.is_null() {
            defect.write(r.defect_data["e_defect"]);
        }
        Ok(())
    })
}

/// `max_t |(1-t)·1 + t·w - exp(t·log w)|`.
///
/// # Safety
/// `w` must be a live handle; `gap` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_exel_homotopy_gap(w: *const QrepMatrix, gap: *mut f64) -> QrepStatus {
    guard(|| {
        let tol = Tolerances::default();
        let w = unitary(as_ref(w, "w")?, &tol)?;
        let g = exel_homotopy_gap(&w, &tol).map_err(fail)?;
        write(gap, g, "gap")
    })
}

/// Clock and shift unitaries of size `n`.
///
/// # Safety
/// `u` and `v` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_voiculescu_pair(n: usize, u: *mut *mut QrepMatrix, v: *mut *mut QrepMatrix) -> QrepStatus {
    guard(|| {
        if u.is_null() || v.is_null() {
            return Err(null("u/v"));
        }
        let (a, b) = voiculescu_pair(n).map_err(fail)?;
        u.write(boxed(a.into_matrix()));
        v.write(boxed(b.into_matrix()));
        Ok(())
    })
}

/// Parse a quasi-representation from its JSON form. File references in
/// images resolve against the current directory.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_quasirep_from_json(json: *const c_char, out: *mut *mut QrepQuasiRep) -> QrepStatus {
    guard(|| {
        let text = as_str(json, "json")?;
        let qj: QuasiRepJson = serde_json::from_str(text).map_err(|e| fail(e.into()))?;
        let qr = qj.resolve(None, &Tolerances::default()).map_err(fail)?;
        write(out, Box::into_raw(Box::new(QrepQuasiRep { inner: qr })), "out")
    })
}

/// Clock/shift quasi-representation of ℤ² of size `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_quasirep_voiculescu(n: usize, out: *mut *mut QrepQuasiRep) -> QrepStatus {
    guard(|| {
        let qr = qrep::families::voiculescu_quasirep(n).map_err(fail)?;
        write(out, Box::into_raw(Box::new(QrepQuasiRep { inner: qr })), "out")
    })
}

/// # Safety
/// `q` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrep_quasirep_free(q: *mut QrepQuasiRep) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Letter-by-letter image of `word` under `q`.
///
/// # Safety
/// `q` must be a live handle, `word` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrep_evaluate_word(
    q: *const QrepQuasiRep,
    word: *const c_char,
    out: *mut *mut QrepMatrix,
) -> QrepStatus {
    guard(|| {
        let q = as_ref(q, "q")?;
        let w = parse_word(as_str(word, "word")?).map_err(fail)?;
        q.inner.presentation().check_words([&w]).map_err(fail)?;
        let m = q.inner.evaluate(&w).map_err(fail)?;
        write(out, boxed(m.into_matrix()), "out")
    })
}

/// JSON form of `q`, or NULL on failure. Release with [`qrep_string_free`].
///
/// # Safety
/// `q` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrep_quasirep_to_json(q: *const QrepQuasiRep) -> *mut c_char {
    let mut result = ptr::null_mut();
    let status = guard(|| {
        let q = as_ref(q, "q")?;
        let text = serde_json::to_string(&q.inner).map_err(|e| fail(e.into()))?;
        result = CString::new(text).map_err(|_| fail(Error::InvalidArgument("NUL in JSON".into())))?.into_raw();
        Ok(())
    });
    if status == QrepStatus::Ok {
        result
    } else {
        ptr::null_mut()
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
