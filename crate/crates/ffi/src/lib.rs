//! C ABI over the extraspecial library.
//!
//! Conventions: every fallible call returns an [`ExspStatus`]; results are
//! written through out-pointers. Strings returned through `char**` are
//! NUL-terminated, allocated by Rust, and must be released with
//! [`exsp_string_free`]. Group handles are opaque and released with
//! [`exsp_group_free`]. On failure, [`exsp_last_error_message`] returns a
//! thread-local description of the most recent error.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use extraspecial::cdeg::{self, ApproxError};
use extraspecial::families::FamilySpec;
use extraspecial::group_model::GroupModel;
use extraspecial::{arith, oracle, order_stats};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExspStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Unparseable input or parameters outside their documented range.
    InvalidArgument = 2,
    /// A budget or prime limit was exhausted.
    ResourceLimit = 3,
    /// The request is provably unsatisfiable (target cyclicity degree 0).
    Unreachable = 4,
    Internal = 5,
}

/// Opaque handle to a realized group model.
pub struct ExspGroup {
    model: GroupModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: impl std::fmt::Display) {
    let owned = CString::new(message.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn fail(status: ExspStatus, message: impl std::fmt::Display) -> ExspStatus {
    set_error(message);
    status
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn exsp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string allocated by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through one of the `char**`
/// out-parameters here, not yet freed; NULL is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn exsp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ExspStatus> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(ExspStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        ExspStatus::InvalidArgument
    })
}

fn write_string(out: *mut *mut c_char, value: String) -> ExspStatus {
    if out.is_null() {
        return fail(ExspStatus::NullPointer, "NULL output pointer");
    }
    match CString::new(value) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            ExspStatus::Ok
        }
        Err(_) => fail(ExspStatus::Internal, "result contained a NUL byte"),
    }
}

fn parse_spec(text: &str) -> Result<FamilySpec, ExspStatus> {
    text.parse::<FamilySpec>().map_err(|e| {
        set_error(e);
        ExspStatus::InvalidArgument
    })
}

/// Realizes the family member named by `spec` (grammar
/// `<kind>:p=<p>,n=<n>[,k=<k>]`) as an explicit group, subject to `budget`
/// (0 means the default of 100000 elements).
///
/// # Safety
/// `spec` must point to a NUL-terminated string and `out` to a writable
/// `ExspGroup*` slot.
#[no_mangle]
pub unsafe extern "C" fn exsp_group_build(
    spec: *const c_char,
    budget: u64,
    out: *mut *mut ExspGroup,
) -> ExspStatus {
    if out.is_null() {
        return fail(ExspStatus::NullPointer, "NULL output pointer");
    }
    let text = match read_str(spec) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let parsed = match parse_spec(text) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let budget = if budget == 0 { oracle::DEFAULT_CENSUS_BUDGET } else { budget };
    match parsed.realize(budget) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(ExspGroup { model }));
            ExspStatus::Ok
        }
        Err(e @ extraspecial::families::FamilyError::BudgetExceeded { .. }) => {
            fail(ExspStatus::ResourceLimit, e)
        }
        Err(e) => fail(ExspStatus::InvalidArgument, e),
    }
}

/// Releases a group handle.
///
/// # Safety
/// `group` must come from [`exsp_group_build`] and not be freed twice; NULL
/// is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn exsp_group_free(group: *mut ExspGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Number of elements, or 0 for NULL.
///
/// # Safety
/// `group` must be a live handle from [`exsp_group_build`] or NULL.
#[no_mangle]
pub unsafe extern "C" fn exsp_group_order(group: *const ExspGroup) -> u64 {
    group.as_ref().map_or(0, |g| g.model.order())
}

/// Human-readable construction label of the group.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable. Free the result
/// with [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_group_label(
    group: *const ExspGroup,
    out: *mut *mut c_char,
) -> ExspStatus {
    match group.as_ref() {
        Some(g) => write_string(out, g.model.label().to_string()),
        None => fail(ExspStatus::NullPointer, "NULL group handle"),
    }
}

/// Brute-force element-order census of the group as JSON
/// `{"order": "...", "census": {"<d>": "<count>", ...}}`.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable. Free the result
/// with [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_group_census_json(
    group: *const ExspGroup,
    out: *mut *mut c_char,
) -> ExspStatus {
    let g = match group.as_ref() {
        Some(g) => g,
        None => return fail(ExspStatus::NullPointer, "NULL group handle"),
    };
    match oracle::census_bruteforce(&g.model, g.model.order()) {
        Ok(census) => {
            let mut obj = serde_json::Map::new();
            obj.insert("order".into(), g.model.order().to_string().into());
            let mut entries = serde_json::Map::new();
            for (d, count) in census.entries() {
                entries.insert(d.to_string(), count.to_string().into());
            }
            obj.insert("census".into(), entries.into());
            write_string(out, serde_json::Value::Object(obj).to_string())
        }
        Err(e) => fail(ExspStatus::ResourceLimit, e),
    }
}

/// Closed-form statistics for a family member, as the canonical stats JSON.
///
/// # Safety
/// `spec` must point to a NUL-terminated string; `out` must be writable.
/// Free the result with [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_stats_json(spec: *const c_char, out: *mut *mut c_char) -> ExspStatus {
    let text = match read_str(spec) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let parsed = match parse_spec(text) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match order_stats::group_stats(&parsed) {
        Ok(stats) => write_string(out, stats.to_json().to_string()),
        Err(e) => fail(ExspStatus::Internal, e),
    }
}

/// Verifies one family member against brute force. Writes the verdict rows
/// as a JSON array and stores the overall flag in `pass`.
///
/// # Safety
/// `spec` must point to a NUL-terminated string; `out` and `pass` must be
/// writable. Free the string with [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_verify_json(
    spec: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
    pass: *mut bool,
) -> ExspStatus {
    if pass.is_null() {
        return fail(ExspStatus::NullPointer, "NULL pass pointer");
    }
    let text = match read_str(spec) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let parsed = match parse_spec(text) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let budget = if budget == 0 { oracle::DEFAULT_CENSUS_BUDGET } else { budget };
    match oracle::verify_family(&parsed, budget) {
        Ok(verdict) => {
            *pass = verdict.pass();
            write_string(out, serde_json::Value::Array(verdict.to_json_lines()).to_string())
        }
        Err(e @ oracle::OracleError::BudgetExceeded { .. }) => fail(ExspStatus::ResourceLimit, e),
        Err(e) => fail(ExspStatus::InvalidArgument, e),
    }
}

/// cdeg(M_{p^n}) as a "num/den" string.
///
/// # Safety
/// `out` must be writable. Free the result with [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_cdeg_modular(p: u64, n: u32, out: *mut *mut c_char) -> ExspStatus {
    match cdeg::cdeg_modular(p, n) {
        Ok(value) => write_string(out, arith::fraction_string(&value)),
        Err(e) => fail(ExspStatus::InvalidArgument, e),
    }
}

/// cdeg of the product of M_{p^3} over `len` distinct odd primes, as a
/// "num/den" string.
///
/// # Safety
/// `primes` must point to `len` readable u64 values (it may be NULL when
/// `len` is 0); `out` must be writable. Free the result with
/// [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_cdeg_product(
    primes: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> ExspStatus {
    let slice: &[u64] = if len == 0 {
        &[]
    } else {
        if primes.is_null() {
            return fail(ExspStatus::NullPointer, "NULL primes pointer");
        }
        std::slice::from_raw_parts(primes, len)
    };
    match cdeg::cdeg_product(slice) {
        Ok(value) => write_string(out, arith::fraction_string(&value)),
        Err(e) => fail(ExspStatus::InvalidArgument, e),
    }
}

/// Greedy approximation of a target cyclicity degree. `target` and
/// `epsilon` accept fractions (`a/b`) or decimals; `prime_limit` 0 selects
/// the default. On success writes the selection JSON; on prime-limit
/// exhaustion returns `RESOURCE_LIMIT` and still writes the best selection.
///
/// # Safety
/// `target` and `epsilon` must point to NUL-terminated strings; `out` must
/// be writable. Free the result with [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_approx_json(
    target: *const c_char,
    epsilon: *const c_char,
    prime_limit: u64,
    out: *mut *mut c_char,
) -> ExspStatus {
    let target_text = match read_str(target) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let epsilon_text = match read_str(epsilon) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let target = match arith::parse_rational(target_text) {
        Ok(t) => t,
        Err(e) => return fail(ExspStatus::InvalidArgument, e),
    };
    let epsilon = match arith::parse_rational(epsilon_text) {
        Ok(e) => e,
        Err(e) => return fail(ExspStatus::InvalidArgument, e),
    };
    let limit = if prime_limit == 0 { cdeg::DEFAULT_PRIME_LIMIT } else { prime_limit };
    match cdeg::approximate_cdeg(&target, &epsilon, limit) {
        Ok(selection) => write_string(out, selection.to_json().to_string()),
        Err(ApproxError::ZeroTarget) => fail(ExspStatus::Unreachable, ApproxError::ZeroTarget),
        Err(ApproxError::LimitExhausted { limit, gap, best }) => {
            let status = write_string(out, best.to_json().to_string());
            if status != ExspStatus::Ok {
                return status;
            }
            fail(
                ExspStatus::ResourceLimit,
                format!("prime limit {limit} exhausted; best gap {gap}"),
            )
        }
        Err(e) => fail(ExspStatus::InvalidArgument, e),
    }
}

/// The bundled reference table, recomputed and flagged, as a JSON array.
///
/// # Safety
/// `out` must be writable. Free the result with [`exsp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn exsp_table_json(out: *mut *mut c_char) -> ExspStatus {
    let fixtures = extraspecial::fixtures::load();
    let mut rows = Vec::new();
    for row in &fixtures.census_rows {
        let spec = row.family_spec();
        let census = order_stats::closed_form_census(&spec);
        let p = spec.p();
        let np2 = census.count(p * p).to_string();
        let ok = spec.group_order().to_string() == row.order
            && census.count(p).to_string() == row.n_p
            && np2 == row.n_p2.clone().unwrap_or_else(|| "0".into())
            && order_stats::psi_closed_form(&spec).to_string() == row.psi;
        let mut obj = serde_json::Map::new();
        obj.insert("label".into(), row.label.clone().into());
        obj.insert("spec".into(), row.spec.clone().into());
        obj.insert("gap_id".into(), row.gap_id.clone().into());
        obj.insert("order".into(), row.order.clone().into());
        obj.insert("n_p".into(), row.n_p.clone().into());
        obj.insert(
            "n_p2".into(),
            row.n_p2.clone().map(Into::into).unwrap_or(serde_json::Value::Null),
        );
        obj.insert("psi".into(), row.psi.clone().into());
        obj.insert("ok".into(), ok.into());
        rows.push(serde_json::Value::Object(obj));
    }
    write_string(out, serde_json::Value::Array(rows).to_string())
}
