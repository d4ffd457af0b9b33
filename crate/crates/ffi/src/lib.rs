//! C ABI over `ewatts`. Objects cross the boundary as opaque handles that the
//! caller releases with the matching `_free` function. Every call returns an
//! [`EwattsStatus`]; on failure the message is available from
//! [`ewatts_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use ewatts::cli::{parse_job, parse_sheaf, run_job, JobSpec, Options};
use ewatts::exactfield::Field;
use ewatts::sheafp1::{cech_h0, cech_h1, split_classify, GluedSheaf};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EwattsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// A coherent sheaf on the projective line.
pub struct EwattsSheaf {
    inner: Arc<GluedSheaf>,
}

/// A parsed job, ready to run.
pub struct EwattsJob {
    spec: JobSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

struct Fail(EwattsStatus, String);

impl From<ewatts::Error> for Fail {
    fn from(e: ewatts::Error) -> Fail {
        Fail(EwattsStatus::Domain, e.to_string())
    }
}

impl From<ewatts::cli::ParseError> for Fail {
    fn from(e: ewatts::cli::ParseError) -> Fail {
        Fail(EwattsStatus::Parse, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EwattsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EwattsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside ewatts");
            EwattsStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(EwattsStatus::NullArgument, "null argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(EwattsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn field_of(characteristic: u64) -> Result<Field, Fail> {
    if characteristic == 0 {
        Ok(Field::Rational)
    } else {
        Ok(Field::prime(characteristic)?)
    }
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ewatts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a sheaf literal such as `O(-1) + sky(t - 2, 1)`. The field is Q
/// when `characteristic` is 0 and GF(p) otherwise. `seed` feeds `random`
/// and `scramble(..)` terms.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ewatts_sheaf_parse(
    characteristic: u64,
    text: *const c_char,
    seed: u64,
    out: *mut *mut EwattsSheaf,
) -> EwattsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let field = field_of(characteristic)?;
        let lit = parse_sheaf(field, read_str(text)?)?;
        let sheaf = EwattsSheaf { inner: Arc::new(lit.build(field, seed)?) };
        write_out(out, Box::into_raw(Box::new(sheaf)))
    })
}

/// # Safety
/// `sheaf` must come from `ewatts_sheaf_parse` or be null.
#[no_mangle]
pub unsafe extern "C" fn ewatts_sheaf_free(sheaf: *mut EwattsSheaf) {
    if !sheaf.is_null() {
        drop(Box::from_raw(sheaf));
    }
}

/// # Safety
/// `sheaf` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ewatts_sheaf_h0(sheaf: *const EwattsSheaf, out: *mut usize) -> EwattsStatus {
    guard(|| {
        let s = sheaf.as_ref().ok_or_else(null)?;
        write_out(out, cech_h0(&s.inner).dim)
    })
}

/// # Safety
/// `sheaf` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ewatts_sheaf_h1(sheaf: *const EwattsSheaf, out: *mut usize) -> EwattsStatus {
    guard(|| {
        let s = sheaf.as_ref().ok_or_else(null)?;
        write_out(out, cech_h1(&s.inner)?.dim)
    })
}

/// Writes the splitting type in the form `splitting: (1, -2)\ntorsion: none\n`.
/// Release the string with `ewatts_string_free`.
///
/// # Safety
/// `sheaf` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ewatts_sheaf_classify(sheaf: *const EwattsSheaf, out: *mut *mut c_char) -> EwattsStatus {
    guard(|| {
        let s = sheaf.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let st = split_classify(&s.inner)?;
        write_out(out, to_c_string(format!("splitting: {}\ntorsion: {}\n", st.render_degrees(), st.render_torsion())))
    })
}

/// Parses exactly one job in the command-line grammar, e.g.
/// `field GF(5); cohomology O(3);`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ewatts_job_parse(text: *const c_char, out: *mut *mut EwattsJob) -> EwattsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = parse_job(read_str(text)?)?;
        write_out(out, Box::into_raw(Box::new(EwattsJob { spec })))
    })
}

/// # Safety
/// `job` must come from `ewatts_job_parse` or be null.
#[no_mangle]
pub unsafe extern "C" fn ewatts_job_free(job: *mut EwattsJob) {
    if !job.is_null() {
        drop(Box::from_raw(job));
    }
}

/// Canonical text of the job. Release with `ewatts_string_free`.
///
/// # Safety
/// `job` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ewatts_job_render(job: *const EwattsJob, out: *mut *mut c_char) -> EwattsStatus {
    guard(|| {
        let j = job.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        write_out(out, to_c_string(j.spec.render()))
    })
}

/// Runs the job and writes its report, as text lines or as one JSON object
/// when `json` is true. Release with `ewatts_string_free`.
///
/// # Safety
/// `job` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ewatts_job_run(
    job: *const EwattsJob,
    seed: u64,
    json: bool,
    out: *mut *mut c_char,
) -> EwattsStatus {
    guard(|| {
        let j = job.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let report = run_job(&j.spec, &Options { window: None, seed })?;
        let text = if json { report.to_json(&j.spec).to_string() } else { report.render() };
        write_out(out, to_c_string(text))
    })
}

/// # Safety
/// `s` must be a string returned by this library or null.
#[no_mangle]
pub unsafe extern "C" fn ewatts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
