//! C interface to `orbicyclic-core`.
//!
//! Every function returns an [`OrbStatus`]. Results come back through out
//! pointers; counts are NUL-terminated decimal strings owned by the caller and
//! released with [`orb_string_free`]. Handles are released with their own
//! `*_free` function. After a non-OK status, [`orb_last_error`] describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbicyclic_core::epi::count_epi;
use orbicyclic_core::mapcount::{theta, RootedMapTable};
use orbicyclic_core::orbicyclic::{e_closed, vanishes, PeriodTuple};
use orbicyclic_core::orbifold::{census, harvey_admissible, OrbifoldSignature};
use orbicyclic_core::subgroups::{free_group_conjugacy_classes, free_group_subgroups};
use orbicyclic_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GuardExceeded = 3,
    MissingData = 4,
    TableError = 5,
    Internal = 6,
    Panic = 7,
}

/// Opaque period tuple.
pub struct OrbTuple(PeriodTuple);

/// Opaque orbifold signature.
pub struct OrbSignature(OrbifoldSignature);

/// Opaque rooted map table.
pub struct OrbTable(RootedMapTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &Error) -> OrbStatus {
    match err {
        Error::NonPositive(_) | Error::InvalidArgument(_) | Error::NotDivisible { .. } => {
            OrbStatus::InvalidArgument
        }
        Error::GuardExceeded { .. } => OrbStatus::GuardExceeded,
        Error::MissingData { .. } => OrbStatus::MissingData,
        Error::Table(_) => OrbStatus::TableError,
        Error::Internal(_) => OrbStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guarded(body: impl FnOnce() -> Result<(), Fail>) -> OrbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => OrbStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("{what} is null"));
            OrbStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside orbicyclic");
            OrbStatus::Panic
        }
    }
}

unsafe fn slice<'a>(values: *const u64, len: usize) -> Result<&'a [u64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if values.is_null() {
        return Err(Fail::Null("values"));
    }
    Ok(std::slice::from_raw_parts(values, len))
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("decimal digits have no NUL")
        .into_raw()
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn orb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn orb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `values` must point to `len` readable integers (or be null with `len == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orb_tuple_new(
    values: *const u64,
    len: usize,
    out: *mut *mut OrbTuple,
) -> OrbStatus {
    guarded(|| {
        let t = PeriodTuple::new(slice(values, len)?.iter().copied())?;
        put(out, Box::into_raw(Box::new(OrbTuple(t))), "out")
    })
}

/// # Safety
/// `t` must come from [`orb_tuple_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn orb_tuple_free(t: *mut OrbTuple) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// `E` of the tuple as a decimal string.
///
/// # Safety
/// `t` must be a live tuple handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orb_tuple_e(t: *const OrbTuple, out: *mut *mut c_char) -> OrbStatus {
    guarded(|| {
        let t = deref(t, "tuple")?;
        put(out, c_string(e_closed(&t.0).to_string()), "out")
    })
}

/// # Safety
/// `t` must be a live tuple handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orb_tuple_vanishes(t: *const OrbTuple, out: *mut bool) -> OrbStatus {
    guarded(|| {
        let t = deref(t, "tuple")?;
        put(out, vanishes(&t.0), "out")
    })
}

/// # Safety
/// As for [`orb_tuple_new`].
#[no_mangle]
pub unsafe extern "C" fn orb_signature_new(
    genus: u64,
    periods: *const u64,
    len: usize,
    out: *mut *mut OrbSignature,
) -> OrbStatus {
    guarded(|| {
        let sig = OrbifoldSignature::new(genus, slice(periods, len)?.iter().copied())?;
        put(out, Box::into_raw(Box::new(OrbSignature(sig))), "out")
    })
}

/// # Safety
/// `s` must come from [`orb_signature_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn orb_signature_free(s: *mut OrbSignature) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Order-preserving epimorphisms onto `Z_ell`, as a decimal string.
///
/// # Safety
/// `s` must be a live signature handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orb_signature_count_epi(
    s: *const OrbSignature,
    ell: u64,
    out: *mut *mut c_char,
) -> OrbStatus {
    guarded(|| {
        let s = deref(s, "signature")?;
        put(out, c_string(count_epi(&s.0, ell)?.to_string()), "out")
    })
}

/// Whether a `Z_ell` action on a genus-`gamma` surface with this quotient exists.
///
/// # Safety
/// `s` must be a live signature handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orb_signature_admissible(
    s: *const OrbSignature,
    ell: u64,
    gamma: u64,
    out: *mut bool,
) -> OrbStatus {
    guarded(|| {
        let s = deref(s, "signature")?;
        put(out, harvey_admissible(&s.0, ell, gamma).admissible(), "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orb_table_bundled(out: *mut *mut OrbTable) -> OrbStatus {
    guarded(|| {
        put(
            out,
            Box::into_raw(Box::new(OrbTable(RootedMapTable::bundled()))),
            "out",
        )
    })
}

/// Loads a `genus,edges,count` CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orb_table_load(path: *const c_char, out: *mut *mut OrbTable) -> OrbStatus {
    guarded(|| {
        if path.is_null() {
            return Err(Fail::Null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Error::InvalidArgument("path is not UTF-8".into()))?;
        let table = RootedMapTable::from_path(path)?;
        put(out, Box::into_raw(Box::new(OrbTable(table))), "out")
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn orb_table_free(t: *mut OrbTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Unrooted maps with `edges` edges on the genus-`gamma` surface.
///
/// # Safety
/// `table` must be a live table handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orb_theta(
    table: *const OrbTable,
    gamma: u64,
    edges: u64,
    out: *mut *mut c_char,
) -> OrbStatus {
    guarded(|| {
        let table = deref(table, "table")?;
        let th = theta(gamma, edges, &table.0)?;
        put(out, c_string(th.value.to_string()), "out")
    })
}

/// `A(gamma)` and `A_0(gamma)`.
///
/// # Safety
/// `total` and `planar` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orb_census(gamma: u64, total: *mut u64, planar: *mut u64) -> OrbStatus {
    guarded(|| {
        if total.is_null() || planar.is_null() {
            return Err(Fail::Null("out"));
        }
        let c = census(gamma)?;
        put(total, c.total, "total")?;
        put(planar, c.by_genus.get(&0).copied().unwrap_or(0), "planar")
    })
}

/// Subgroups of index `index` in the free group of rank `rank` and their
/// conjugacy classes.
///
/// # Safety
/// `subgroups` and `classes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orb_free_group(
    rank: u64,
    index: u64,
    subgroups: *mut *mut c_char,
    classes: *mut *mut c_char,
) -> OrbStatus {
    guarded(|| {
        if subgroups.is_null() || classes.is_null() {
            return Err(Fail::Null("out"));
        }
        let m = free_group_subgroups(rank, index)?;
        let n = free_group_conjugacy_classes(rank, index)?;
        put(subgroups, c_string(m.to_string()), "subgroups")?;
        put(classes, c_string(n.to_string()), "classes")
    })
}
