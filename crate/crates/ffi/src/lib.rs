//! C ABI over `anm-core`.
//!
//! Conventions:
//! - Every fallible function returns an [`AnmStatus`] and writes its result
//!   through an out-pointer. On failure the out-pointer is left untouched and
//!   [`anm_last_error`] describes the problem (per thread).
//! - Objects cross the boundary as opaque handles ([`AnmFrame`],
//!   [`AnmProgram`], [`AnmWitness`]) created by `*_new`/`*_parse` functions
//!   and released by the matching `*_free`. Passing null to a `*_free` is a
//!   no-op.
//! - Strings returned to the caller are NUL-terminated UTF-8 owned by the
//!   caller and released with [`anm_string_free`].
//! - Panics never unwind across the boundary; they become
//!   [`AnmStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use anm_core::decide::{decide_checker, CheckerVerdict, DecideBounds};
use anm_core::frames::{
    cot, enumerate_nuclei, frame_to_json, is_nucleus, nucleus, nucleus_table_json, parse_frame, CotMethod, FiniteFrame,
};
use anm_core::game::GameVerdict;
use anm_core::oracles::PromiseProblem;
use anm_core::vm::{nat, run, Budget, NoOracle, Outcome, Program};
use anm_core::witnesses::programs::membership_program;
use anm_core::witnesses::{registry_entry, witness_promise, PromiseWitness, StrategyPair};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A text or JSON argument did not parse.
    Parse = 3,
    /// The arguments parsed but violate a precondition.
    Invalid = 4,
    /// The request exceeds a size limit.
    TooLarge = 5,
    /// An internal error; the message is in [`anm_last_error`].
    Panic = 6,
}

/// Verdict of an exhaustive verification.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnmVerdict {
    Win = 0,
    Lose = 1,
    Unknown = 2,
}

/// Classification of a pair by the checker decider.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnmChecker {
    /// `(x, y)` lies in `P × Q`.
    InPTimesQ = 0,
    /// `(x, y)` lies in `Q × P`.
    InQTimesP = 1,
    Unknown = 2,
}

/// How a budgeted run ended.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnmOutcome {
    Halts = 0,
    OutOfBudget = 1,
    OracleFault = 2,
    /// Halted with a value too large for 64 bits.
    HaltsLarge = 3,
}

/// Which construction of the cotopology to use.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnmCotMethod {
    Formula = 0,
    Brute = 1,
}

/// A finite frame.
pub struct AnmFrame(FiniteFrame);

/// A machine program.
pub struct AnmProgram(Program);

/// A built-in witness strategy with the reduction it wins.
pub struct AnmWitness(StrategyPair);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(AnmStatus, String);

impl Fail {
    fn new(status: AnmStatus, msg: impl ToString) -> Fail {
        Fail(status, msg.to_string())
    }
}

/// Run `body`, translating failures and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> AnmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AnmStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            AnmStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to a valid `T`.
unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::new(AnmStatus::NullPointer, "null handle"))
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::new(AnmStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail::new(AnmStatus::InvalidUtf8, e))
}

/// # Safety
/// `p` must be null or valid for `len` reads.
unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    match (p.is_null(), len) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(Fail::new(AnmStatus::NullPointer, "null array")),
        (false, _) => Ok(std::slice::from_raw_parts(p, len)),
    }
}

/// # Safety
/// `out` must be null or valid for one write.
unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::new(AnmStatus::NullPointer, "null out-pointer"));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn anm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failed call on this thread, or null.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn anm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn anm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- frames ----

/// Parse a frame from JSON (`{"elements", "leq", "names"?}` or `{"poset": covers}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_parse(json: *const c_char, out: *mut *mut AnmFrame) -> AnmStatus {
    guard(|| {
        let f = parse_frame(text(json)?).map_err(|e| Fail::new(AnmStatus::Parse, e))?;
        put(out, Box::into_raw(Box::new(AnmFrame(f))))
    })
}

/// The five-element frame of down-sets of `{p, q < t}`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_five_element(out: *mut *mut AnmFrame) -> AnmStatus {
    guard(|| put(out, Box::into_raw(Box::new(AnmFrame(FiniteFrame::five_element())))))
}

/// Release a frame.
///
/// # Safety
/// `frame` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_free(frame: *mut AnmFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Number of elements of the frame.
///
/// # Safety
/// `frame` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_len(frame: *const AnmFrame, out: *mut usize) -> AnmStatus {
    guard(|| put(out, get(frame)?.0.len()))
}

/// The frame as JSON.
///
/// # Safety
/// `frame` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_to_json(frame: *const AnmFrame, out: *mut *mut c_char) -> AnmStatus {
    guard(|| put(out, owned_string(frame_to_json(&get(frame)?.0).to_string())))
}

/// Whether the element map `map[0..len]` is a nucleus. `len` must equal the
/// frame size; on `false` the violated law is in [`anm_last_error`].
///
/// # Safety
/// `frame` must be a live handle; `map` valid for `len` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_is_nucleus(
    frame: *const AnmFrame,
    map: *const usize,
    len: usize,
    out: *mut bool,
) -> AnmStatus {
    let mut violation = None;
    let status = guard(|| {
        let verdict = is_nucleus(&get(frame)?.0, slice(map, len)?).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        put(out, verdict.is_ok())?;
        violation = verdict.err();
        Ok(())
    });
    if let Some(v) = violation {
        set_error(v.to_string());
    }
    status
}

/// Number of nuclei on the frame (frames of at most 16 elements).
///
/// # Safety
/// `frame` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_nucleus_count(frame: *const AnmFrame, out: *mut usize) -> AnmStatus {
    guard(|| {
        let all = enumerate_nuclei(&get(frame)?.0).map_err(|e| Fail::new(AnmStatus::TooLarge, e))?;
        put(out, all.len())
    })
}

/// The cotopology of the nucleus `j[0..len]`, written to `out[0..len]`.
///
/// # Safety
/// `frame` must be a live handle; `j` valid for `len` reads; `out` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_cot(
    frame: *const AnmFrame,
    j: *const usize,
    len: usize,
    method: AnmCotMethod,
    out: *mut usize,
) -> AnmStatus {
    guard(|| {
        let f = &get(frame)?.0;
        let j = nucleus(f, slice(j, len)?.to_vec()).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        let method = match method {
            AnmCotMethod::Formula => CotMethod::Formula,
            AnmCotMethod::Brute => CotMethod::Brute,
        };
        let c = cot(f, &j, method).map_err(|e| Fail::new(AnmStatus::TooLarge, e))?;
        if out.is_null() {
            return Err(Fail::new(AnmStatus::NullPointer, "null out-pointer"));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&c.map);
        Ok(())
    })
}

/// A nucleus `j[0..len]` as a JSON table keyed by element names.
///
/// # Safety
/// `frame` must be a live handle; `j` valid for `len` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_frame_nucleus_json(
    frame: *const AnmFrame,
    j: *const usize,
    len: usize,
    out: *mut *mut c_char,
) -> AnmStatus {
    guard(|| {
        let f = &get(frame)?.0;
        let j = nucleus(f, slice(j, len)?.to_vec()).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        put(out, owned_string(nucleus_table_json(f, &j).to_string()))
    })
}

// ---- programs ----

/// Parse a program from assembly text or a decimal code.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_program_parse(source: *const c_char, out: *mut *mut AnmProgram) -> AnmStatus {
    guard(|| {
        let p = anm_core::vm::asm::parse_program_or_code(text(source)?).map_err(|e| Fail::new(AnmStatus::Parse, e))?;
        put(out, Box::into_raw(Box::new(AnmProgram(p))))
    })
}

/// Release a program.
///
/// # Safety
/// `program` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn anm_program_free(program: *mut AnmProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// The program's code as a decimal string.
///
/// # Safety
/// `program` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_program_code(program: *const AnmProgram, out: *mut *mut c_char) -> AnmStatus {
    guard(|| put(out, owned_string(get(program)?.0.code().to_string())))
}

/// Run the program without an oracle on `input` for at most `budget` steps.
/// `value` receives the result when the outcome is [`AnmOutcome::Halts`].
///
/// # Safety
/// `program` must be a live handle; `outcome` and `value` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_program_run(
    program: *const AnmProgram,
    input: u64,
    budget: u64,
    outcome: *mut AnmOutcome,
    value: *mut u64,
) -> AnmStatus {
    guard(|| {
        let p = &get(program)?.0;
        let budget = Budget::new(budget).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        let (o, v) = match run(p, &nat(input), &NoOracle, budget) {
            Outcome::Halts(v) => match u64::try_from(&v) {
                Ok(v) => (AnmOutcome::Halts, v),
                Err(_) => (AnmOutcome::HaltsLarge, 0),
            },
            Outcome::OutOfBudget => (AnmOutcome::OutOfBudget, 0),
            Outcome::OracleFault(_) => (AnmOutcome::OracleFault, 0),
        };
        put(value, v)?;
        put(outcome, o)
    })
}

// ---- witnesses and games ----

/// Build the registry witness `name` at the given universe size.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_witness_new(name: *const c_char, universe: u64, out: *mut *mut AnmWitness) -> AnmStatus {
    guard(|| {
        let entry = registry_entry(text(name)?).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        let w = entry.build(universe).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        put(out, Box::into_raw(Box::new(AnmWitness(w))))
    })
}

/// Release a witness.
///
/// # Safety
/// `witness` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn anm_witness_free(witness: *mut AnmWitness) {
    if !witness.is_null() {
        drop(Box::from_raw(witness));
    }
}

/// Exhaustively verify the witness at its recommended bounds.
///
/// # Safety
/// `witness` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_witness_verify(witness: *const AnmWitness, out: *mut AnmVerdict) -> AnmStatus {
    guard(|| {
        let v = match get(witness)?.0.verify() {
            GameVerdict::Win => AnmVerdict::Win,
            GameVerdict::Lose(_) => AnmVerdict::Lose,
            GameVerdict::Unknown(_) => AnmVerdict::Unknown,
        };
        put(out, v)
    })
}

/// A description of the construction the witness implements.
///
/// # Safety
/// `witness` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_witness_provenance(witness: *const AnmWitness, out: *mut *mut c_char) -> AnmStatus {
    guard(|| put(out, owned_string(get(witness)?.0.provenance.to_string())))
}

// ---- the checker decider ----

/// Classify `(x, y)` for the checker problem of `(P, Q)` with the
/// decided-coding strategy, trying fragments up to `fragment_max`.
///
/// # Safety
/// `p` and `q` must be valid for `p_len`/`q_len` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn anm_decide_checker(
    p: *const u64,
    p_len: usize,
    q: *const u64,
    q_len: usize,
    x: u64,
    y: u64,
    fragment_max: usize,
    budget: u64,
    out: *mut AnmChecker,
) -> AnmStatus {
    guard(|| {
        let (ps, qs) = (slice(p, p_len)?, slice(q, q_len)?);
        let pp = PromiseProblem::from_u64(ps, qs).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        let (p0, q0) = match (ps.iter().min(), qs.iter().min()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Fail::new(AnmStatus::Invalid, "P and Q must be inhabited")),
        };
        let sigma = witness_promise(&PromiseWitness::DecidedCoding { pp: pp.clone(), decoder: membership_program(ps) })
            .map_err(|e| Fail::new(AnmStatus::Invalid, e))?
            .arthur;
        let budget = Budget::new(budget).map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        let d =
            decide_checker(&sigma, &pp, &nat(p0), &nat(q0), (&nat(x), &nat(y)), DecideBounds { fragment_max, budget })
                .map_err(|e| Fail::new(AnmStatus::Invalid, e))?;
        put(
            out,
            match d.verdict {
                CheckerVerdict::InPxQ => AnmChecker::InPTimesQ,
                CheckerVerdict::InQxP => AnmChecker::InQTimesP,
                CheckerVerdict::Unknown => AnmChecker::Unknown,
            },
        )
    })
}
