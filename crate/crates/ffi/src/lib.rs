//! C ABI for the `plbc` library.
//!
//! Codes live behind an opaque [`PlbcCodeHandle`]; every call returns a
//! [`PlbcStatus`] and, on failure, leaves a message readable through
//! [`plbc_last_error`] on the calling thread. Bit vectors cross the boundary
//! as arrays of bytes holding 0 or 1.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use plbc::analysis::{
    checked_code_distribution, masking_failure_piecewise, ratio_to_f64, weight_distribution_approx,
    BoundKind,
};
use plbc::code::{CodeSpecFile, LoadedCode};
use plbc::codec::{decode_plbc, encode_one_step, encode_optimal, encode_two_step, DefectVector};
use plbc::sim::{run_masking_trials, DefectMode, Scheme, SimConfig};
use plbc::{BitVector, Error, PbchSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlbcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSpec = 3,
    Unsupported = 4,
    DecodeFailure = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlbcEncoder {
    Optimal = 0,
    OneStep = 1,
    TwoStep = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlbcBoundKind {
    ExactZero = 0,
    Estimate = 1,
    UpperBound = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlbcParams {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub r: usize,
    pub d1: usize,
    pub d0: usize,
    pub t0: usize,
}

/// Opaque code object.
pub struct PlbcCodeHandle {
    loaded: LoadedCode,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(e: &Error) -> PlbcStatus {
    match e {
        Error::InvalidCode(_) | Error::InvalidSpec(_) | Error::Parse(_) | Error::Json(_) => {
            PlbcStatus::InvalidSpec
        }
        Error::Unsupported { .. } => PlbcStatus::Unsupported,
        Error::DecodeFailure(_) => PlbcStatus::DecodeFailure,
        Error::DimensionMismatch(_) | Error::Domain(_) | Error::Io(_) => {
            PlbcStatus::InvalidArgument
        }
        Error::DivisionByZero | Error::InvariantViolation(_) => PlbcStatus::Internal,
    }
}

struct Failure(PlbcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard<F>(body: F) -> PlbcStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PlbcStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PlbcStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PlbcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PlbcStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn bits_arg(p: *const u8, len: usize, what: &str) -> Result<BitVector, Failure> {
    if len == 0 {
        return Ok(BitVector::zeros(0));
    }
    if p.is_null() {
        return Err(null(what));
    }
    let bytes = slice::from_raw_parts(p, len);
    if let Some(b) = bytes.iter().find(|&&b| b > 1) {
        return Err(Failure(
            PlbcStatus::InvalidArgument,
            format!("{what} holds byte {b}, expected 0 or 1"),
        ));
    }
    let bools: Vec<bool> = bytes.iter().map(|&b| b == 1).collect();
    Ok(BitVector::from_bools(&bools))
}

unsafe fn write_bits(v: &BitVector, out: *mut u8) {
    for (i, bit) in v.iter().enumerate() {
        *out.add(i) = u8::from(bit);
    }
}

unsafe fn handle_arg<'a>(h: *const PlbcCodeHandle) -> Result<&'a PlbcCodeHandle, Failure> {
    h.as_ref().ok_or_else(|| null("code handle"))
}

unsafe fn store_handle(loaded: LoadedCode, out: *mut *mut PlbcCodeHandle) {
    *out = Box::into_raw(Box::new(PlbcCodeHandle { loaded }));
}

/// Message describing the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn plbc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a code from a JSON code-spec document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn plbc_code_from_json(
    json: *const c_char,
    out: *mut *mut PlbcCodeHandle,
) -> PlbcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(json, "json")?;
        let loaded = CodeSpecFile::from_json(text)?.build()?;
        store_handle(loaded, out);
        Ok(())
    })
}

/// Builds a partitioned cyclic code from hex generator polynomials such as
/// `"0xb"`, with the default primitive polynomial for `n`.
///
/// # Safety
/// `g1` and `g0` must be nul-terminated strings and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn plbc_code_pbch(
    n: usize,
    g1: *const c_char,
    g0: *const c_char,
    out: *mut *mut PlbcCodeHandle,
) -> PlbcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g1 = str_arg(g1, "g1")?.parse()?;
        let g0 = str_arg(g0, "g0")?.parse()?;
        let spec = PbchSpec::new(n, None, g1, g0)?;
        let code = spec.build()?;
        store_handle(
            LoadedCode {
                code,
                pbch: Some(spec),
            },
            out,
        );
        Ok(())
    })
}

/// Builds the `r = 0` family member of length `n` whose masking code has
/// designed distance `delta`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn plbc_code_family(
    n: usize,
    delta: usize,
    out: *mut *mut PlbcCodeHandle,
) -> PlbcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = PbchSpec::family_member(n, delta, None)?;
        let code = spec.build()?;
        store_handle(
            LoadedCode {
                code,
                pbch: Some(spec),
            },
            out,
        );
        Ok(())
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `handle` must come from one of the constructors and not be used again.
#[no_mangle]
pub unsafe extern "C" fn plbc_code_free(handle: *mut PlbcCodeHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plbc_code_params(
    handle: *const PlbcCodeHandle,
    out: *mut PlbcParams,
) -> PlbcStatus {
    guard(|| {
        let code = &handle_arg(handle)?.loaded.code;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = PlbcParams {
            n: code.n(),
            k: code.k(),
            l: code.l(),
            r: code.r(),
            d1: code.d1(),
            d0: code.d0(),
            t0: code.t0(),
        };
        Ok(())
    })
}

/// Encodes the `k` message bits `w` over `u` defects at `positions` with
/// stuck values `stuck`. Writes `n` codeword bytes and the number of
/// defects left unmasked.
///
/// # Safety
/// `w` holds `k` bytes, `positions` and `stuck` hold `u` entries each,
/// `codeword` has room for `n` bytes and `unmasked` is writable.
#[no_mangle]
pub unsafe extern "C" fn plbc_encode(
    handle: *const PlbcCodeHandle,
    encoder: PlbcEncoder,
    w: *const u8,
    positions: *const usize,
    stuck: *const u8,
    u: usize,
    codeword: *mut u8,
    unmasked: *mut usize,
) -> PlbcStatus {
    guard(|| {
        let code = &handle_arg(handle)?.loaded.code;
        if codeword.is_null() || unmasked.is_null() {
            return Err(null("output buffer"));
        }
        let w = bits_arg(w, code.k(), "w")?;
        let values = bits_arg(stuck, u, "stuck")?;
        let pairs: Vec<(usize, bool)> = if u == 0 {
            Vec::new()
        } else {
            if positions.is_null() {
                return Err(null("positions"));
            }
            slice::from_raw_parts(positions, u)
                .iter()
                .zip(values.iter())
                .map(|(&i, v)| (i, v))
                .collect()
        };
        let s = DefectVector::from_pairs(code.n(), &pairs)?;
        let result = match encoder {
            PlbcEncoder::Optimal => encode_optimal(code, &w, &s)?,
            PlbcEncoder::OneStep => encode_one_step(code, &w, &s)?,
            PlbcEncoder::TwoStep => encode_two_step(code, &w, &s)?,
        };
        write_bits(&result.codeword, codeword);
        *unmasked = result.unmasked;
        Ok(())
    })
}

/// Syndrome-decodes the `n` bytes of `y` and writes `k` message bytes.
///
/// # Safety
/// `y` holds `n` bytes and `w_out` has room for `k` bytes.
#[no_mangle]
pub unsafe extern "C" fn plbc_decode(
    handle: *const PlbcCodeHandle,
    y: *const u8,
    w_out: *mut u8,
) -> PlbcStatus {
    guard(|| {
        let code = &handle_arg(handle)?.loaded.code;
        if w_out.is_null() {
            return Err(null("w_out"));
        }
        let y = bits_arg(y, code.n(), "y")?;
        let (w, _) = decode_plbc(code, &y)?;
        write_bits(&w, w_out);
        Ok(())
    })
}

/// Masking-failure value at `u` defects: zero below `d0`, the estimate up
/// to `d0 + t0`, the upper bound beyond. With `approx` the weight
/// distribution is the binomial approximation instead of the exact one.
///
/// # Safety
/// `value` and `kind` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plbc_bound(
    handle: *const PlbcCodeHandle,
    u: usize,
    approx: bool,
    value: *mut f64,
    kind: *mut PlbcBoundKind,
) -> PlbcStatus {
    guard(|| {
        let code = &handle_arg(handle)?.loaded.code;
        if value.is_null() || kind.is_null() {
            return Err(null("output"));
        }
        let wd = if approx {
            weight_distribution_approx(code.n(), code.n() - code.l(), code.d0())?
        } else {
            checked_code_distribution(code.g0())?
        };
        let report = masking_failure_piecewise(&wd, u, code.d0())?;
        *value = ratio_to_f64(&report.value);
        *kind = match report.kind {
            BoundKind::ExactZero => PlbcBoundKind::ExactZero,
            BoundKind::Estimate => PlbcBoundKind::Estimate,
            BoundKind::UpperBound => PlbcBoundKind::UpperBound,
        };
        Ok(())
    })
}

/// Counts masking failures over `trials` random messages and `u`-defect
/// patterns. The count depends only on the arguments.
///
/// # Safety
/// `failures` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plbc_simulate(
    handle: *const PlbcCodeHandle,
    encoder: PlbcEncoder,
    u: usize,
    trials: u64,
    seed: u64,
    failures: *mut u64,
) -> PlbcStatus {
    guard(|| {
        let code = &handle_arg(handle)?.loaded.code;
        let failures = failures.as_mut().ok_or_else(|| null("failures"))?;
        let scheme = match encoder {
            PlbcEncoder::Optimal => Scheme::Optimal,
            PlbcEncoder::OneStep => Scheme::OneStep,
            PlbcEncoder::TwoStep => Scheme::TwoStep,
        };
        let config = SimConfig::new(trials, seed, DefectMode::FixedCount(u), scheme);
        *failures = run_masking_trials(code, &config)?.failures;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn last_error() -> String {
        let p = plbc_last_error();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn params_of_seven_three_four() {
        unsafe {
            let mut h = ptr::null_mut();
            let (g1, g0) = (cstr("0x1"), cstr("0xb"));
            assert_eq!(
                plbc_code_pbch(7, g1.as_ptr(), g0.as_ptr(), &mut h),
                PlbcStatus::Ok
            );
            let mut p = PlbcParams::default();
            assert_eq!(plbc_code_params(h, &mut p), PlbcStatus::Ok);
            assert_eq!(
                p,
                PlbcParams {
                    n: 7,
                    k: 3,
                    l: 4,
                    r: 0,
                    d1: 0,
                    d0: 4,
                    t0: 1
                }
            );
            plbc_code_free(h);
        }
    }

    #[test]
    fn invalid_spec_sets_error() {
        unsafe {
            let mut h = ptr::null_mut();
            let (g1, g0) = (cstr("0x7"), cstr("0xb"));
            assert_eq!(
                plbc_code_pbch(7, g1.as_ptr(), g0.as_ptr(), &mut h),
                PlbcStatus::InvalidSpec
            );
            assert!(h.is_null());
            assert!(last_error().contains("does not divide"));
            assert_eq!(
                plbc_code_params(ptr::null(), &mut PlbcParams::default()),
                PlbcStatus::NullPointer
            );
        }
    }

    #[test]
    fn encode_demo_code() {
        unsafe {
            let mut h = ptr::null_mut();
            let json = cstr(r#"{"type":"plbc","g1_rows":["10"],"g0_rows":["11"]}"#);
            assert_eq!(plbc_code_from_json(json.as_ptr(), &mut h), PlbcStatus::Ok);
            let w = [1u8];
            let positions = [0usize, 1];
            let stuck = [1u8, 1];
            let mut c = [9u8; 2];
            let mut unmasked = 99;
            let status = plbc_encode(
                h,
                PlbcEncoder::TwoStep,
                w.as_ptr(),
                positions.as_ptr(),
                stuck.as_ptr(),
                2,
                c.as_mut_ptr(),
                &mut unmasked,
            );
            assert_eq!(status, PlbcStatus::Ok);
            assert_eq!((c, unmasked), ([0, 1], 1));
            let bad = [2u8];
            let status = plbc_encode(
                h,
                PlbcEncoder::TwoStep,
                bad.as_ptr(),
                ptr::null(),
                ptr::null(),
                0,
                c.as_mut_ptr(),
                &mut unmasked,
            );
            assert_eq!(status, PlbcStatus::InvalidArgument);
            plbc_code_free(h);
        }
    }

    #[test]
    fn bound_and_simulate() {
        unsafe {
            let mut h = ptr::null_mut();
            let (g1, g0) = (cstr("0x1"), cstr("0xb"));
            assert_eq!(
                plbc_code_pbch(7, g1.as_ptr(), g0.as_ptr(), &mut h),
                PlbcStatus::Ok
            );
            let mut value = -1.0;
            let mut kind = PlbcBoundKind::ExactZero;
            assert_eq!(
                plbc_bound(h, 4, false, &mut value, &mut kind),
                PlbcStatus::Ok
            );
            assert_eq!((value, kind), (0.1, PlbcBoundKind::Estimate));
            let mut failures = 1;
            assert_eq!(
                plbc_simulate(h, PlbcEncoder::OneStep, 3, 1000, 5, &mut failures),
                PlbcStatus::Ok
            );
            assert_eq!(failures, 0);
            assert_eq!(
                plbc_simulate(h, PlbcEncoder::OneStep, 9, 10, 5, &mut failures),
                PlbcStatus::InvalidSpec
            );
            plbc_code_free(h);
        }
    }

    #[test]
    fn decode_round_trip() {
        unsafe {
            let mut h = ptr::null_mut();
            let (g1, g0) = (cstr("0xb"), cstr("0x1d"));
            assert_eq!(
                plbc_code_pbch(7, g1.as_ptr(), g0.as_ptr(), &mut h),
                PlbcStatus::Ok
            );
            // g1 itself is the codeword of w = 1; flip one bit
            let y = [1u8, 1, 0, 1, 0, 0, 1];
            let mut w = [7u8];
            assert_eq!(plbc_decode(h, y.as_ptr(), w.as_mut_ptr()), PlbcStatus::Ok);
            assert_eq!(w, [1]);
            plbc_code_free(h);
        }
    }
}
