//! C ABI over `tandem-core`.
//!
//! Every function returns a [`TdcStatus`]. On failure the message is kept
//! per thread and read with [`tdc_last_error_message`]. Words cross the
//! boundary as arrays of `uint32_t` symbols. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tandem_core::capacity::{build_irr_graph, capacity_irr_graph, capacity_rll};
use tandem_core::classify::classify;
use tandem_core::codes::{build_fixed_all, build_fixed_t, build_le2, build_le3, Codebook};
use tandem_core::roots::{roots_general, unique_root};
use tandem_core::{Error, LengthSet, Word};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdcStatus {
    Ok = 0,
    InvalidArgument = 1,
    Parse = 2,
    Budget = 3,
    Decode = 4,
    Incompatible = 5,
    /// The word has several roots.
    NotUnique = 6,
    /// The output buffer is too small; the required length is still reported.
    BufferTooSmall = 7,
    NullPointer = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdcMode {
    FixedAll = 0,
    FixedT = 1,
    Le2 = 2,
    Le3 = 3,
}

/// Opaque codebook handle.
pub struct TdcCodebook(Codebook);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> TdcStatus {
    match err {
        Error::Parse(_) | Error::InvalidSymbol { .. } | Error::InvalidLengthSet(_) => TdcStatus::Parse,
        Error::BudgetExceeded(_) => TdcStatus::Budget,
        Error::Decode(_) => TdcStatus::Decode,
        Error::Incompatible(_) | Error::NotCongruent | Error::AlphabetMismatch { .. } => TdcStatus::Incompatible,
        _ => TdcStatus::InvalidArgument,
    }
}

struct Fail(TdcStatus, String);

impl From<Error> for Fail {
    fn from(err: Error) -> Self {
        Fail(status_of(&err), err.to_string())
    }
}

fn fail<T>(status: TdcStatus, msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(status, msg.into()))
}

/// Runs `f`, records its error, and turns panics into [`TdcStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TdcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TdcStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TdcStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        return fail(TdcStatus::NullPointer, format!("{name} is null"));
    }
    Ok(())
}

/// # Safety
/// `ptr` is null only when `len` is 0, otherwise it points to `len` readable values.
unsafe fn slice<'a, T>(ptr: *const T, len: usize, name: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(ptr, name)?;
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn read_word(q: u32, ptr: *const u32, len: usize) -> Result<Word, Fail> {
    Ok(Word::new(slice(ptr, len, "word")?.to_vec(), q)?)
}

unsafe fn read_lengths(ptr: *const usize, count: usize) -> Result<LengthSet, Fail> {
    Ok(LengthSet::explicit(slice(ptr, count, "lengths")?.iter().copied())?)
}

/// Writes `w` into `out[..cap]` and its length into `*out_len`.
unsafe fn write_word(w: &Word, out: *mut u32, cap: usize, out_len: *mut usize) -> Result<(), Fail> {
    non_null(out_len, "out_len")?;
    *out_len = w.len();
    if w.len() > cap {
        return fail(TdcStatus::BufferTooSmall, format!("need room for {} symbols, have {cap}", w.len()));
    }
    if !w.is_empty() {
        non_null(out, "out")?;
        std::ptr::copy_nonoverlapping(w.symbols().as_ptr(), out, w.len());
    }
    Ok(())
}

unsafe fn handle<'a>(code: *const TdcCodebook) -> Result<&'a Codebook, Fail> {
    non_null(code, "codebook")?;
    Ok(&(*code).0)
}

/// The message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tdc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a codebook. `mode` is a [`TdcMode`] value; `k` is ignored by the
/// bounded modes and `t` by all but [`TdcMode::FixedT`]. Free the handle
/// with [`tdc_codebook_free`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tdc_codebook_build(
    q: u32,
    n: usize,
    mode: u32,
    k: usize,
    t: usize,
    out: *mut *mut TdcCodebook,
) -> TdcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = std::ptr::null_mut();
        let code = match mode {
            m if m == TdcMode::FixedAll as u32 => build_fixed_all(q, n, k)?,
            m if m == TdcMode::FixedT as u32 => build_fixed_t(q, n, k, t)?,
            m if m == TdcMode::Le2 as u32 => build_le2(q, n)?,
            m if m == TdcMode::Le3 as u32 => build_le3(q, n)?,
            m => return fail(TdcStatus::InvalidArgument, format!("unknown mode {m}")),
        };
        *out = Box::into_raw(Box::new(TdcCodebook(code)));
        Ok(())
    })
}

/// # Safety
/// `code` is null or a handle from [`tdc_codebook_build`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tdc_codebook_free(code: *mut TdcCodebook) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of codewords, or 0 for a null handle.
///
/// # Safety
/// `code` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tdc_codebook_size(code: *const TdcCodebook) -> usize {
    code.as_ref().map_or(0, |c| c.0.len())
}

/// Codeword length `n`, or 0 for a null handle.
///
/// # Safety
/// `code` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tdc_codebook_length(code: *const TdcCodebook) -> usize {
    code.as_ref().map_or(0, |c| c.0.n())
}

/// Copies codeword `index` (in lexicographic order) into `out`.
///
/// # Safety
/// `code` is a live handle, `out` has room for `cap` symbols and `out_len` is writable.
#[no_mangle]
pub unsafe extern "C" fn tdc_codebook_codeword(
    code: *const TdcCodebook,
    index: usize,
    out: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> TdcStatus {
    guard(|| {
        let c = handle(code)?;
        let Some(w) = c.codewords().get(index) else {
            return fail(TdcStatus::InvalidArgument, format!("index {index} out of range for {} codewords", c.len()));
        };
        write_word(w, out, cap, out_len)
    })
}

/// Decodes a received word into `out`.
///
/// # Safety
/// `received` holds `len` symbols, `out` has room for `cap` symbols and `out_len` is writable.
#[no_mangle]
pub unsafe extern "C" fn tdc_codebook_decode(
    code: *const TdcCodebook,
    received: *const u32,
    len: usize,
    out: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> TdcStatus {
    guard(|| {
        let c = handle(code)?;
        let r = read_word(c.q(), received, len)?;
        write_word(&c.decode(&r)?, out, cap, out_len)
    })
}

/// The root of a word under the given duplication lengths, when it is
/// unique; [`TdcStatus::NotUnique`] otherwise.
///
/// # Safety
/// `word` holds `len` symbols, `lengths` holds `count` values, `out` has
/// room for `cap` symbols and `out_len` is writable.
#[no_mangle]
pub unsafe extern "C" fn tdc_root_unique(
    q: u32,
    lengths: *const usize,
    count: usize,
    word: *const u32,
    len: usize,
    out: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> TdcStatus {
    guard(|| {
        let lengths = read_lengths(lengths, count)?;
        let x = read_word(q, word, len)?;
        let root = match unique_root(&x, &lengths) {
            Some(r) => r,
            None => {
                let mut roots = roots_general(&x, &lengths)?.roots;
                if roots.len() != 1 {
                    return fail(TdcStatus::NotUnique, format!("{x} has {} roots", roots.len()));
                }
                roots.remove(0)
            }
        };
        write_word(&root, out, cap, out_len)
    })
}

/// Base-`q` capacity of the RLL system with zero runs of length at most `d`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tdc_rll_capacity(q: u32, d: usize, tol: f64, out: *mut f64) -> TdcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = capacity_rll(q, d, tol)?.value;
        Ok(())
    })
}

/// Base-`q` capacity of the words with no square of half-length at most
/// `k_bound` (1, 2 or 3).
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tdc_irr_capacity(q: u32, k_bound: usize, tol: f64, out: *mut f64) -> TdcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = capacity_irr_graph(&build_irr_graph(q, k_bound)?, tol)?.value;
        Ok(())
    })
}

/// Whether every word over `sigma` letters has a unique root under the
/// lengths. When not, a word with several roots is written to `witness`
/// and its length to `witness_len`; otherwise `witness_len` is set to 0.
///
/// # Safety
/// `lengths` holds `count` values, `unique` and `witness_len` are writable
/// and `witness` has room for `cap` symbols.
#[no_mangle]
pub unsafe extern "C" fn tdc_classify(
    sigma: u32,
    lengths: *const usize,
    count: usize,
    unique: *mut bool,
    witness: *mut u32,
    cap: usize,
    witness_len: *mut usize,
) -> TdcStatus {
    guard(|| {
        non_null(unique, "unique")?;
        non_null(witness_len, "witness_len")?;
        let v = classify(sigma, &read_lengths(lengths, count)?)?;
        *unique = v.unique;
        *witness_len = 0;
        match &v.witness {
            Some(w) => write_word(w, witness, cap, witness_len),
            None => Ok(()),
        }
    })
}
