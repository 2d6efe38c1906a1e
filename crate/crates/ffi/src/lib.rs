//! C ABI over `cfduplex-core`.
//!
//! Every fallible function returns a [`CfdStatus`]; on failure the message is
//! available from [`cfd_last_error`] on the same thread. Protocol runs return
//! an opaque [`CfdOutcome`] handle released with [`cfd_outcome_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};

use cfduplex_core::channels::{
    bec_capacity, duplex_capacity, optimize_duplex_k, optimize_telex, telex_capacity, AsymmetricBec, MessageWeights,
    Strategy,
};
use cfduplex_core::hilbert::LossCause;
use cfduplex_core::protocols::{
    duplex_run, telex_run, Announcement, DuplexMessage, ProtocolOutcome, QubitState, Status, TelexMessage,
};
use cfduplex_core::zeno::{lambda0, lambda1, lambda2, lambda3, lambda4, zeta_c, zeta_q, Mode, ZenoParams};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfdStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Unavailable = 3,
    Internal = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfdMode {
    Analytic = 0,
    Cycle = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfdLossCause {
    AbsorbedByAo = 0,
    DiscardedAtDetector = 1,
    RedirectedNoncounterfactual = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CfdTelexOptimum {
    pub m_star: u32,
    pub k_star: u32,
    pub zeta_q: f64,
    pub q: f64,
}

/// Opaque protocol result.
pub struct CfdOutcome(ProtocolOutcome);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), (CfdStatus, String)> + UnwindSafe) -> CfdStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => CfdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CfdStatus::Internal
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> (CfdStatus, String) {
    (CfdStatus::InvalidArgument, e.to_string())
}

/// Writes through `out`, rejecting null.
fn store<T>(out: *mut T, value: T) -> Result<(), (CfdStatus, String)> {
    if out.is_null() {
        return Err((CfdStatus::NullPointer, "output pointer is null".into()));
    }
    // SAFETY: non-null; the caller guarantees it points to writable storage for `T`.
    unsafe { out.write(value) };
    Ok(())
}

fn outcome_ref<'a>(o: *const CfdOutcome) -> Result<&'a ProtocolOutcome, (CfdStatus, String)> {
    // SAFETY: the caller guarantees `o` is null or a live handle from this library.
    unsafe { o.as_ref() }.map(|o| &o.0).ok_or((CfdStatus::NullPointer, "outcome handle is null".into()))
}

fn mode(m: CfdMode) -> Mode {
    match m {
        CfdMode::Analytic => Mode::Analytic,
        CfdMode::Cycle => Mode::Cycle,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cfd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cfd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `cos^{2M}(π/2M)`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_lambda0(m: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, lambda0(m).map_err(invalid)?))
}

/// CQZ herald with the object present.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_lambda1(m: u32, n: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, lambda1(m, n).map_err(invalid)?))
}

/// Per-cycle duplex success factor.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_lambda2(n: u32, k: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, lambda2(n, k).map_err(invalid)?))
}

/// DCQZ entangling herald.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_lambda3(alpha_sq: f64, m: u32, n: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, lambda3(alpha_sq, m, n).map_err(invalid)?))
}

/// Per-cycle DMQZ success factor.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_lambda4(delta1: f64, n: u32, k: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, lambda4(delta1, n, k).map_err(invalid)?))
}

/// Duplex efficiency `λ₂^K`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_zeta_c(n: u32, k: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, zeta_c(n, k).map_err(invalid)?))
}

/// Telex efficiency `λ₃ λ₄^K`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_zeta_q(alpha_sq: f64, gamma_sq: f64, m: u32, n: u32, k: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, zeta_q(alpha_sq, gamma_sq, m, n, k).map_err(invalid)?))
}

/// Duplex capacity in bits per Bell pair.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_duplex_capacity(n: u32, k: u32, out: *mut f64) -> CfdStatus {
    guard(move || store(out, duplex_capacity(n, k).map(|r| r.capacity).map_err(invalid)?))
}

/// Telex quantum capacity `2·max(0, 2ζ − 1)`.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cfd_telex_capacity(zeta: f64, out: *mut f64) -> CfdStatus {
    guard(move || store(out, telex_capacity(zeta).map_err(invalid)?))
}

/// Asymmetric erasure-channel capacity and optimal input probability.
///
/// # Safety
/// `capacity` and `p_star` must be null or point to writable `double`s.
#[no_mangle]
pub unsafe extern "C" fn cfd_bec_capacity(
    lambda0: f64,
    lambda1: f64,
    capacity: *mut f64,
    p_star: *mut f64,
) -> CfdStatus {
    guard(move || {
        let r = bec_capacity(&AsymmetricBec::new(lambda0, lambda1).map_err(invalid)?);
        store(capacity, r.capacity)?;
        store(p_star, r.p_star.unwrap_or(f64::NAN))
    })
}

/// Optimal duplex `K` for fixed `N` and the resulting capacity.
///
/// # Safety
/// `k_star` and `capacity` must be null or point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cfd_optimize_duplex_k(n: u32, k_star: *mut u32, capacity: *mut f64) -> CfdStatus {
    guard(move || {
        let (k, r) = optimize_duplex_k(n).map_err(invalid)?;
        store(k_star, k)?;
        store(capacity, r.capacity)
    })
}

/// Telex `(M★, K★)` search over `[1, 4N]`; `joint != 0` scans the full grid.
///
/// # Safety
/// `out` must be null or point to a writable `CfdTelexOptimum`.
#[no_mangle]
pub unsafe extern "C" fn cfd_optimize_telex(
    n: u32,
    alpha_sq: f64,
    gamma_sq: f64,
    joint: i32,
    out: *mut CfdTelexOptimum,
) -> CfdStatus {
    guard(move || {
        let strategy = if joint != 0 { Strategy::Joint } else { Strategy::Separable };
        let o =
            optimize_telex(n, MessageWeights::new(alpha_sq, gamma_sq).map_err(invalid)?, strategy).map_err(invalid)?;
        store(out, CfdTelexOptimum { m_star: o.m_star, k_star: o.k_star, zeta_q: o.zeta_q, q: o.q })
    })
}

fn boxed(o: ProtocolOutcome) -> *mut CfdOutcome {
    Box::into_raw(Box::new(CfdOutcome(o)))
}

/// Runs duplex coding for bits `(b1, b2)`. With `use_seed == 0` the most likely
/// decode outcome is reported; otherwise measurements are sampled from `seed`.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cfd_duplex_run(
    b1: u8,
    b2: u8,
    n: u32,
    k: u32,
    run_mode: CfdMode,
    use_seed: i32,
    seed: u64,
    out: *mut *mut CfdOutcome,
) -> CfdStatus {
    guard(move || {
        let msg = DuplexMessage::new(b1, b2).map_err(invalid)?;
        let p = ZenoParams::new(n, 1, k).map_err(invalid)?;
        let o = if use_seed != 0 {
            duplex_run(msg, &p, mode(run_mode), Some(&mut ChaCha8Rng::seed_from_u64(seed)))
        } else {
            duplex_run(msg, &p, mode(run_mode), None)
        }
        .map_err(invalid)?;
        if out.is_null() {
            return Err((CfdStatus::NullPointer, "output pointer is null".into()));
        }
        store(out, boxed(o))
    })
}

/// Qubit amplitudes as interleaved `(re, im)` pairs: `[α.re, α.im, β.re, β.im]`.
fn qubit(a: &[f64; 4]) -> Result<QubitState, (CfdStatus, String)> {
    QubitState::normalized(Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3])).map_err(invalid)
}

/// Runs telexchange of `eta1` (Alice) and `eta2` (Bob), each given as four
/// doubles `[a.re, a.im, b.re, b.im]`. `mu` of 0 or 1 forces the
/// announcement; any other value samples it from `seed`.
///
/// # Safety
/// `eta1` and `eta2` must point to four readable doubles each; `out` must be
/// null or point to writable storage for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cfd_telex_run(
    eta1: *const f64,
    eta2: *const f64,
    m: u32,
    n: u32,
    k: u32,
    run_mode: CfdMode,
    mu: i32,
    seed: u64,
    out: *mut *mut CfdOutcome,
) -> CfdStatus {
    guard(move || {
        if eta1.is_null() || eta2.is_null() {
            return Err((CfdStatus::NullPointer, "amplitude pointer is null".into()));
        }
        // SAFETY: non-null and, per the contract, four readable doubles each.
        let (a, b) = unsafe { (eta1.cast::<[f64; 4]>().read(), eta2.cast::<[f64; 4]>().read()) };
        let msg = TelexMessage { eta1: qubit(&a)?, eta2: qubit(&b)? };
        let p = ZenoParams::new(n, m, k).map_err(invalid)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ann = match mu {
            0 | 1 => Announcement::Forced(mu as u8),
            _ => Announcement::Random(&mut rng),
        };
        let o = telex_run(&msg, &p, mode(run_mode), ann).map_err(invalid)?;
        if out.is_null() {
            return Err((CfdStatus::NullPointer, "output pointer is null".into()));
        }
        store(out, boxed(o))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `o` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cfd_outcome_free(o: *mut CfdOutcome) {
    if !o.is_null() {
        // SAFETY: per the contract, `o` came from `Box::into_raw` and is freed once.
        drop(unsafe { Box::from_raw(o) });
    }
}

/// Writes 1 for a decoded run, 0 for an erasure.
///
/// # Safety
/// `o` must be null or a live handle; `decoded` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_outcome_decoded(o: *const CfdOutcome, decoded: *mut i32) -> CfdStatus {
    guard(move || store(decoded, (outcome_ref(o)?.status == Status::Decoded) as i32))
}

/// Heralded success probability and its closed-form counterpart.
///
/// # Safety
/// `o` must be null or a live handle; outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_outcome_herald(
    o: *const CfdOutcome,
    herald: *mut f64,
    closed_form: *mut f64,
) -> CfdStatus {
    guard(move || {
        let r = outcome_ref(o)?;
        store(herald, r.herald_probability)?;
        store(closed_form, r.closed_form_herald)
    })
}

/// Decoded duplex bits; `CFD_STATUS_UNAVAILABLE` for telex runs or erasures.
///
/// # Safety
/// `o` must be null or a live handle; outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_outcome_bits(o: *const CfdOutcome, b1: *mut u8, b2: *mut u8) -> CfdStatus {
    guard(move || {
        let (x, y) = outcome_ref(o)?.decoded_bits.ok_or((CfdStatus::Unavailable, "no decoded bits".into()))?;
        store(b1, x)?;
        store(b2, y)
    })
}

/// Telex fidelities of Alice's output with `eta2` and Bob's with `eta1`.
///
/// # Safety
/// `o` must be null or a live handle; outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_outcome_fidelities(o: *const CfdOutcome, alice: *mut f64, bob: *mut f64) -> CfdStatus {
    guard(move || {
        let (a, b) = outcome_ref(o)?.fidelities.ok_or((CfdStatus::Unavailable, "no fidelities".into()))?;
        store(alice, a)?;
        store(bob, b)
    })
}

/// Telex announcement bit.
///
/// # Safety
/// `o` must be null or a live handle; `mu` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_outcome_announcement(o: *const CfdOutcome, mu: *mut u8) -> CfdStatus {
    guard(move || store(mu, outcome_ref(o)?.announcement.ok_or((CfdStatus::Unavailable, "no announcement".into()))?))
}

/// Probability booked to one loss cause.
///
/// # Safety
/// `o` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cfd_outcome_loss(o: *const CfdOutcome, cause: CfdLossCause, out: *mut f64) -> CfdStatus {
    guard(move || {
        let c = match cause {
            CfdLossCause::AbsorbedByAo => LossCause::AbsorbedByAo,
            CfdLossCause::DiscardedAtDetector => LossCause::DiscardedAtDetector,
            CfdLossCause::RedirectedNoncounterfactual => LossCause::RedirectedNoncounterfactual,
        };
        store(out, outcome_ref(o)?.ledger.get(c))
    })
}

/// Copies the last error into `buf` (NUL-terminated, truncated to `len`).
/// Returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cfd_last_error_copy(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: `buf` has `len` writable bytes and `n < len`.
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}
