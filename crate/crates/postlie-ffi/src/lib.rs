//! C ABI over the postlie toolkit.
//!
//! Conventions: every function returns a `PlStatus`; results come back
//! through out-pointers. Handles (`PlContext`, `PlPoly`) are opaque and must
//! be released with the matching `_free` function; strings returned through
//! `char **` out-parameters are UTF-8, NUL-terminated, and released with
//! `pl_string_free`. On any status other than `PL_STATUS_OK` the
//! out-parameter is left untouched and `pl_last_error` carries a message
//! (thread-local, valid until the next failing call on that thread).
//!
//! Structure-level entry points exchange JSON documents in the same formats
//! the `postlie` CLI reads and writes.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::{c_char, size_t};

use postlie::error::Error;
use postlie::lie::generic_vector;
use postlie::parse::parse_poly;
use postlie::poly::MultiPoly;
use postlie::rational::{format_rational, parse_rational};
use postlie::symbols::{Context, SymbolContext};

/// Status code returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// Malformed input: bad UTF-8, parse error, unknown name, wrong shape.
    InvalidArgument = 2,
    /// A mathematical check failed or a precondition does not hold.
    MathError = 3,
    /// Internal invariant violation (a bug; never expected).
    InternalError = 4,
}

/// Opaque symbol context handle.
pub struct PlContext(Context);

/// Opaque polynomial handle.
pub struct PlPoly(MultiPoly);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> PlStatus {
    match e {
        Error::Parse { .. }
        | Error::InvalidInput(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::UnknownCatalogEntry(_)
        | Error::UndeclaredSymbol(_)
        | Error::UnboundSymbol(_)
        | Error::DuplicateSymbol(_)
        | Error::InvalidSymbolName(_)
        | Error::Dimension(_)
        | Error::NotSquare { .. }
        | Error::SymbolicEntries { .. }
        | Error::ContextMismatch { .. }
        | Error::RequiresInstantiation(_) => PlStatus::InvalidArgument,
        Error::Internal(_) => PlStatus::InternalError,
        _ => PlStatus::MathError,
    }
}

fn fail(e: &Error) -> PlStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Runs a closure, converting panics into `PL_STATUS_INTERNAL_ERROR`.
fn guarded(f: impl FnOnce() -> PlStatus) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PlStatus::InternalError
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, PlStatus> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(PlStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        PlStatus::InvalidArgument
    })
}

unsafe fn read_str_array<'a>(
    ptr: *const *const c_char,
    len: size_t,
) -> Result<Vec<&'a str>, PlStatus> {
    if len > 0 && ptr.is_null() {
        set_error("NULL array argument");
        return Err(PlStatus::NullArgument);
    }
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        out.push(read_str(*ptr.add(i))?);
    }
    Ok(out)
}

fn give_string(out: *mut *mut c_char, s: String) -> PlStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            PlStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            PlStatus::InternalError
        }
    }
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Frees a string returned by any `pl_*` function.
///
/// # Safety
/// `s` must be a pointer previously handed out by this library through a
/// `char **` out-parameter, or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a symbol context from `len` symbol names.
///
/// # Safety
/// `names` must point to `len` valid NUL-terminated strings; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_context_new(
    names: *const *const c_char,
    len: size_t,
    out: *mut *mut PlContext,
) -> PlStatus {
    guarded(|| {
        if out.is_null() {
            set_error("NULL out pointer");
            return PlStatus::NullArgument;
        }
        let names = match read_str_array(names, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        match SymbolContext::new(&names) {
            Ok(ctx) => {
                *out = Box::into_raw(Box::new(PlContext(ctx)));
                PlStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `ctx` must be a pointer from `pl_context_new`, or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_context_free(ctx: *mut PlContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Parses a polynomial in the text grammar over the given context.
///
/// # Safety
/// `ctx` must be a live context handle; `text` a valid string; `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_poly_parse(
    ctx: *const PlContext,
    text: *const c_char,
    out: *mut *mut PlPoly,
) -> PlStatus {
    guarded(|| {
        if ctx.is_null() || out.is_null() {
            set_error("NULL argument");
            return PlStatus::NullArgument;
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_poly(text, &(*ctx).0) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(PlPoly(p)));
                PlStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `poly` must be a pointer from this library, or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_poly_free(poly: *mut PlPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Formats a polynomial canonically (graded-lex term order).
///
/// # Safety
/// `poly` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_poly_format(poly: *const PlPoly, out: *mut *mut c_char) -> PlStatus {
    guarded(|| {
        if poly.is_null() || out.is_null() {
            set_error("NULL argument");
            return PlStatus::NullArgument;
        }
        give_string(out, (*poly).0.to_string())
    })
}

macro_rules! poly_binop {
    ($(#[$doc:meta])* $name:ident, $method:ident) => {
        $(#[$doc])*
        /// # Safety
        /// `a` and `b` must be live handles over the same context; `out`
        /// must be a valid pointer.
        #[no_mangle]
        pub unsafe extern "C" fn $name(
            a: *const PlPoly,
            b: *const PlPoly,
            out: *mut *mut PlPoly,
        ) -> PlStatus {
            guarded(|| {
                if a.is_null() || b.is_null() || out.is_null() {
                    set_error("NULL argument");
                    return PlStatus::NullArgument;
                }
                match (*a).0.$method(&(*b).0) {
                    Ok(p) => {
                        *out = Box::into_raw(Box::new(PlPoly(p)));
                        PlStatus::Ok
                    }
                    Err(e) => fail(&e),
                }
            })
        }
    };
}

poly_binop!(
    /// Exact sum of two polynomials.
    pl_poly_add,
    checked_add
);
poly_binop!(
    /// Exact difference of two polynomials.
    pl_poly_sub,
    checked_sub
);
poly_binop!(
    /// Exact product of two polynomials.
    pl_poly_mul,
    checked_mul
);

/// Additive inverse.
///
/// # Safety
/// `a` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_poly_neg(a: *const PlPoly, out: *mut *mut PlPoly) -> PlStatus {
    guarded(|| {
        if a.is_null() || out.is_null() {
            set_error("NULL argument");
            return PlStatus::NullArgument;
        }
        *out = Box::into_raw(Box::new(PlPoly(-&(*a).0)));
        PlStatus::Ok
    })
}

/// Evaluates a polynomial at rational values given as "p/q" strings; the
/// exact result is returned in the same notation.
///
/// # Safety
/// `poly` must be a live handle; `names`/`values` must point to `len`
/// valid strings each; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_poly_eval(
    poly: *const PlPoly,
    names: *const *const c_char,
    values: *const *const c_char,
    len: size_t,
    out: *mut *mut c_char,
) -> PlStatus {
    guarded(|| {
        if poly.is_null() || out.is_null() {
            set_error("NULL argument");
            return PlStatus::NullArgument;
        }
        let names = match read_str_array(names, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let values = match read_str_array(values, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let mut assignment = BTreeMap::new();
        for (n, v) in names.iter().zip(&values) {
            match parse_rational(v) {
                Ok(r) => {
                    assignment.insert((*n).to_owned(), r);
                }
                Err(e) => return fail(&e),
            }
        }
        match (*poly).0.eval(&assignment) {
            Ok(r) => give_string(out, format_rational(&r)),
            Err(e) => fail(&e),
        }
    })
}

fn json_report<T: FnOnce() -> postlie::Result<serde_json::Value>>(
    out: *mut *mut c_char,
    build: T,
) -> PlStatus {
    if out.is_null() {
        set_error("NULL out pointer");
        return PlStatus::NullArgument;
    }
    match build() {
        Ok(value) => give_string(out, value.to_string()),
        Err(e) => fail(&e),
    }
}

/// Checks an embedding document (CLI embedding format): morphism property
/// and t-bijectivity. The report is a JSON object with `morphism_ok`,
/// `t_bijective` and `t_det` fields.
///
/// # Safety
/// `embedding_json` must be a valid string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_verify_embedding(
    embedding_json: *const c_char,
    out: *mut *mut c_char,
) -> PlStatus {
    guarded(|| {
        let text = match read_str(embedding_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        json_report(out, || {
            let file: postlie::io::EmbeddingFile = serde_json::from_str(text)?;
            let embedding = postlie::io::embedding_from_file(&file)?;
            let morphism = embedding.check_morphism()?;
            let tb = embedding.t_bijective(&[])?;
            Ok(serde_json::json!({
                "morphism_ok": morphism.ok,
                "morphism_defect": morphism.defect.map(|d| d.describe()),
                "t_det": tb.det.to_string(),
                "t_bijective": tb.bijective(),
            }))
        })
    })
}

/// Induces the product structure of an embedding; the output is a structure
/// document in the CLI format, ready for `pl_verify_structure`.
///
/// # Safety
/// `embedding_json` must be a valid string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_induce(
    embedding_json: *const c_char,
    out: *mut *mut c_char,
) -> PlStatus {
    guarded(|| {
        let text = match read_str(embedding_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        json_report(out, || {
            let file: postlie::io::EmbeddingFile = serde_json::from_str(text)?;
            let embedding = postlie::io::embedding_from_file(&file)?;
            let plas = postlie::plas::induce_plas(&embedding)?;
            Ok(serde_json::to_value(postlie::io::plas_to_file(&plas))?)
        })
    })
}

/// Verifies the three product axioms of a structure document; the report
/// carries one boolean and optional witness per condition.
///
/// # Safety
/// `structure_json` must be a valid string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_verify_structure(
    structure_json: *const c_char,
    out: *mut *mut c_char,
) -> PlStatus {
    guarded(|| {
        let text = match read_str(structure_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        json_report(out, || {
            let file: postlie::io::PlasFile = serde_json::from_str(text)?;
            let plas = postlie::io::plas_from_file(&file)?;
            let report = plas.verify()?;
            Ok(serde_json::json!({
                "condition1": { "ok": report.condition1.ok, "witness": report.condition1.witness },
                "condition2": { "ok": report.condition2.ok, "witness": report.condition2.witness },
                "condition3": { "ok": report.condition3.ok, "witness": report.condition3.witness },
            }))
        })
    })
}

/// Evaluates the completeness criteria of a structure document. The report
/// carries `right_nilpotent`, `left_nilpotent`, `shifted_nilpotent`, the
/// caveat flag, and `unit_shift_det`.
///
/// # Safety
/// `structure_json` must be a valid string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_completeness(
    structure_json: *const c_char,
    out: *mut *mut c_char,
) -> PlStatus {
    guarded(|| {
        let text = match read_str(structure_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        json_report(out, || {
            let file: postlie::io::PlasFile = serde_json::from_str(text)?;
            let plas = postlie::io::plas_from_file(&file)?;
            let report = plas.completeness_report()?;
            Ok(serde_json::json!({
                "right_nilpotent": report.right_nilpotent,
                "left_nilpotent": report.left_nilpotent,
                "shifted_nilpotent": report.shifted_nilpotent,
                "shifted_caveat": report.shifted_caveat,
                "unit_shift_det": report.unit_shift_det.to_string(),
                "h_class": report.h_class,
            }))
        })
    })
}

/// Characteristic polynomial of a multiplication map ("left", "right",
/// "shifted" or "ad") of a structure document, as a display string.
///
/// # Safety
/// `structure_json` and `map` must be valid strings; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_charpoly(
    structure_json: *const c_char,
    map: *const c_char,
    out: *mut *mut c_char,
) -> PlStatus {
    guarded(|| {
        let text = match read_str(structure_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let map = match read_str(map) {
            Ok(t) => t,
            Err(s) => return s,
        };
        json_report(out, || {
            let file: postlie::io::PlasFile = serde_json::from_str(text)?;
            let plas = postlie::io::plas_from_file(&file)?;
            let n = plas.dim();
            let m = match map {
                "left" => {
                    let (_, x) = generic_vector(plas.context(), "x", n)?;
                    plas.left_mult(&x)?
                }
                "right" => {
                    let (_, y) = generic_vector(plas.context(), "y", n)?;
                    plas.right_mult(&y)?
                }
                "shifted" => {
                    let (_, y) = generic_vector(plas.context(), "y", n)?;
                    let r = plas.right_mult(&y)?;
                    let ad = plas.h.ad_matrix(&y)?;
                    r.sub(&ad.scale_rat(&postlie::rational::rat(1, 2)))?
                }
                "ad" => {
                    let (_, y) = generic_vector(plas.context(), "y", n)?;
                    plas.h.ad_matrix(&y)?
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown map `{other}` (expected left, right, shifted, ad)"
                    )))
                }
            };
            let cp = m.char_poly()?;
            Ok(serde_json::json!({
                "variable": cp.variable_name(),
                "display": cp.to_string(),
            }))
        })
    })
}

/// Jordan decomposition of a constant rational matrix document
/// (array of rows of "p/q" strings).
///
/// # Safety
/// `matrix_json` must be a valid string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_jordan(matrix_json: *const c_char, out: *mut *mut c_char) -> PlStatus {
    guarded(|| {
        let text = match read_str(matrix_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        json_report(out, || {
            let rows: Vec<Vec<String>> = serde_json::from_str(text)?;
            let ctx = SymbolContext::empty();
            let m = postlie::io::matrix_from_rows(&rows, &ctx)?;
            let pair = postlie::jordan::jordan_chevalley(&m)?;
            let kind = postlie::jordan::element_type(&m)?;
            Ok(serde_json::json!({
                "element_type": kind.to_string(),
                "semisimple": postlie::io::matrix_to_rows(&pair.semisimple),
                "nilpotent": postlie::io::matrix_to_rows(&pair.nilpotent),
            }))
        })
    })
}

/// Verifies one bundled catalog row by id at its default parameters and
/// returns the row report as JSON. A clean row yields `PL_STATUS_OK`; a row
/// with mismatches yields `PL_STATUS_MATH_ERROR` (report still written).
///
/// # Safety
/// `row_id` must be a valid string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_catalog_verify_row(
    row_id: *const c_char,
    out: *mut *mut c_char,
) -> PlStatus {
    guarded(|| {
        let id = match read_str(row_id) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("NULL out pointer");
            return PlStatus::NullArgument;
        }
        let report = (|| -> postlie::Result<postlie::catalog::RowReport> {
            let catalog = postlie::catalog::load_catalog()?;
            let row = catalog.row(id)?;
            postlie::catalog::verify_row(row, &BTreeMap::new())
        })();
        match report {
            Ok(r) => {
                let clean = r.clean();
                let value = serde_json::json!({
                    "id": r.id,
                    "morphism_ok": r.morphism_ok,
                    "t_bijective_ok": r.t_bijective_ok,
                    "R_nilpotent_actual": r.r_nilpotent_actual,
                    "complete_actual": r.complete_actual,
                    "mismatches": r.mismatches,
                });
                let status = give_string(out, value.to_string());
                if status != PlStatus::Ok {
                    return status;
                }
                if clean {
                    PlStatus::Ok
                } else {
                    set_error("catalog row has mismatches");
                    PlStatus::MathError
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Verifies the whole bundled catalog at default parameters; the report is
/// the number of rows and mismatches plus per-row verdicts.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_catalog_verify_all(out: *mut *mut c_char) -> PlStatus {
    guarded(|| {
        if out.is_null() {
            set_error("NULL out pointer");
            return PlStatus::NullArgument;
        }
        match postlie::catalog::verify_all(&BTreeMap::new()) {
            Ok(summary) => {
                let rows: Vec<serde_json::Value> = summary
                    .reports
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "id": r.id,
                            "clean": r.clean(),
                            "R_nilpotent_actual": r.r_nilpotent_actual,
                            "complete_actual": r.complete_actual,
                        })
                    })
                    .collect();
                let value = serde_json::json!({
                    "rows_checked": summary.reports.len(),
                    "mismatch_rows": summary.mismatch_rows,
                    "rows": rows,
                });
                let status = give_string(out, value.to_string());
                if status != PlStatus::Ok {
                    return status;
                }
                if summary.mismatch_rows == 0 {
                    PlStatus::Ok
                } else {
                    set_error("catalog has mismatching rows");
                    PlStatus::MathError
                }
            }
            Err(e) => fail(&e),
        }
    })
}
