//! C ABI for the hyperpolar decomposition.
//!
//! Every entry point returns an [`HpStatus`]. On failure the message and,
//! for sample-level failures, the offending index are kept per thread and
//! can be read with [`hp_last_error_message`] and [`hp_last_error_index`].
//! Decompositions live behind an opaque [`HpDecomposition`] handle that the
//! caller releases with [`hp_free`]. Series are passed as separate arrays of
//! `double`; outputs are copied into caller-owned buffers of at least
//! [`hp_len`] elements.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use hyperpolar::error::PolarError;
use hyperpolar::{
    decompose, hyperanalytic, ComplexSeries, DecomposeError, InstFrequencySeries, PhaseRange, PolarConfig,
    PolarDecomposition, Quaternion, QuaternionSeries, SeriesError,
};
use num_complex::Complex64;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// Bad length, interval, non-finite sample or configuration.
    InvalidArgument = 2,
    /// The signal has no well-defined polar form, e.g. a vanishing sample.
    DecompositionFailed = 3,
    /// The output buffer holds fewer elements than [`hp_len`].
    BufferTooSmall = 4,
    /// The requested quantity was not computed for this signal.
    NotAvailable = 5,
    /// An internal panic was caught at the boundary.
    Internal = 6,
}

/// Decomposition settings; start from [`hp_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpConfig {
    /// Interval for the initial envelope phase, radians, inside one quarter-plane.
    pub phase_init_low: f64,
    pub phase_init_high: f64,
    /// Degeneracy threshold relative to the largest `‖s‖`.
    pub eps_mag: f64,
    /// Zero-crossing guard relative to the neighbouring half-period peaks.
    pub eta: f64,
    /// Interpolate through degenerate samples instead of failing.
    pub mask_degenerate: bool,
    /// Compute the envelope frequency when the envelope is analytic.
    pub envelope_frequency: bool,
}

impl From<PolarConfig> for HpConfig {
    fn from(c: PolarConfig) -> Self {
        Self {
            phase_init_low: c.phase_init_range.low,
            phase_init_high: c.phase_init_range.high,
            eps_mag: c.eps_mag,
            eta: c.eta,
            mask_degenerate: c.mask_degenerate,
            envelope_frequency: c.envelope_frequency,
        }
    }
}

/// Opaque decomposition result.
pub struct HpDecomposition {
    polar: PolarDecomposition,
    frequency: InstFrequencySeries,
}

struct Failure {
    status: HpStatus,
    message: String,
    index: Option<usize>,
}

impl Failure {
    fn new(status: HpStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into(), index: None }
    }

    fn null(name: &str) -> Self {
        Self::new(HpStatus::NullPointer, format!("`{name}` is null"))
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        let index = match e {
            SeriesError::NonFinite(n) => Some(n),
            _ => None,
        };
        Self { status: HpStatus::InvalidArgument, message: e.to_string(), index }
    }
}

impl From<DecomposeError> for Failure {
    fn from(e: DecomposeError) -> Self {
        let status = match e.source {
            PolarError::Series(_) | PolarError::InvalidConfig(_) => HpStatus::InvalidArgument,
            _ => HpStatus::DecompositionFailed,
        };
        Self { status, message: e.to_string(), index: e.source.index() }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(String, Option<usize>)>> = const { RefCell::new(None) };
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HpStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure::new(HpStatus::Internal, message))
    });
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HpStatus::Ok
        }
        Err(f) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = Some((f.message, f.index)));
            f.status
        }
    }
}

fn polar_config(config: *const HpConfig) -> Result<PolarConfig, Failure> {
    // SAFETY: a non-null `config` points to a valid HpConfig per the caller contract.
    let Some(c) = (unsafe { config.as_ref() }) else {
        return Ok(PolarConfig::default());
    };
    let range = PhaseRange::new(c.phase_init_low, c.phase_init_high)
        .map_err(|e| Failure::new(HpStatus::InvalidArgument, e.to_string()))?;
    let cfg = PolarConfig {
        phase_init_range: range,
        eps_mag: c.eps_mag,
        eta: c.eta,
        mask_degenerate: c.mask_degenerate,
        envelope_frequency: c.envelope_frequency,
    };
    cfg.validate().map_err(|e| Failure::new(HpStatus::InvalidArgument, e.to_string()))?;
    Ok(cfg)
}

/// # Safety
/// `p` is null or valid for `len` reads.
unsafe fn input<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(Failure::null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` is null or valid for `len` writes.
unsafe fn output<'a>(p: *mut f64, len: usize, name: &str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(Failure::null(name));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

fn complex_series(t0: f64, dt: f64, re: &[f64], im: &[f64]) -> Result<ComplexSeries, Failure> {
    let z = re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect();
    Ok(ComplexSeries::new(t0, dt, z)?)
}

fn finish(s: &QuaternionSeries, config: *const HpConfig, out: *mut *mut HpDecomposition) -> Result<(), Failure> {
    let cfg = polar_config(config)?;
    let (polar, frequency) = decompose(s, &cfg)?;
    let handle = Box::new(HpDecomposition { polar, frequency });
    // SAFETY: `out` was checked non-null by the caller of `finish`.
    unsafe { *out = Box::into_raw(handle) };
    Ok(())
}

/// Default settings: initial envelope phase in `[0, π/2]`, `eps_mag = 1e-12`,
/// `eta = 0.5`, no masking, envelope frequency on.
#[no_mangle]
pub extern "C" fn hp_config_default() -> HpConfig {
    PolarConfig::default().into()
}

/// Hyperanalytic signal `s = z + qht(z)·j` of `z = re + i·im`. Writes `4·len`
/// values to `s_out` as consecutive `(r, i, j, k)` tuples.
///
/// # Safety
/// `re` and `im` are valid for `len` reads; `s_out` is valid for `4·len` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_hyperanalytic(
    re: *const f64,
    im: *const f64,
    len: usize,
    dt: f64,
    s_out: *mut f64,
) -> HpStatus {
    guard(|| {
        let (re, im) = (input(re, len, "re")?, input(im, len, "im")?);
        let s_out = output(s_out, 4 * len, "s_out")?;
        let s = hyperanalytic(&complex_series(0.0, dt, re, im)?)?;
        for (chunk, q) in s_out.chunks_exact_mut(4).zip(s.values()) {
            chunk.copy_from_slice(&[q.r, q.i, q.j, q.k]);
        }
        Ok(())
    })
}

/// Decomposes the hyperanalytic signal of `z = re + i·im` sampled at
/// `t0 + n·dt`. `config` may be null for the defaults. On success `*out`
/// holds a new handle.
///
/// # Safety
/// `re` and `im` are valid for `len` reads, `config` is null or valid and
/// `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hp_decompose_complex(
    re: *const f64,
    im: *const f64,
    len: usize,
    t0: f64,
    dt: f64,
    config: *const HpConfig,
    out: *mut *mut HpDecomposition,
) -> HpStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let (re, im) = (input(re, len, "re")?, input(im, len, "im")?);
        let s = hyperanalytic(&complex_series(t0, dt, re, im)?)?;
        finish(&s, config, out)
    })
}

/// Decomposes a quaternion series given as `4·len` values in `(r, i, j, k)`
/// order.
///
/// # Safety
/// `q` is valid for `4·len` reads, `config` is null or valid and `out` is
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hp_decompose_quaternion(
    q: *const f64,
    len: usize,
    t0: f64,
    dt: f64,
    config: *const HpConfig,
    out: *mut *mut HpDecomposition,
) -> HpStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let q = input(q, 4 * len, "q")?;
        let values = q.chunks_exact(4).map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect();
        let s = QuaternionSeries::new(t0, dt, values)?;
        finish(&s, config, out)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hp_free(h: *mut HpDecomposition) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `h` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hp_len(h: *const HpDecomposition) -> usize {
    h.as_ref().map_or(0, |d| d.polar.len())
}

/// Samples where the sign-corrected phase axis had to be forced into the
/// first quadrant.
///
/// # Safety
/// `h` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hp_canonical_violations(h: *const HpDecomposition) -> usize {
    h.as_ref().map_or(0, |d| d.polar.canonical_violations)
}

/// # Safety
/// `h` is null or a live handle; every pointer in `outs` is null or valid
/// for `cap` writes.
unsafe fn copy_columns(
    h: *const HpDecomposition,
    cap: usize,
    outs: &[(*mut f64, &str)],
    fill: impl Fn(&HpDecomposition, usize, usize) -> Result<f64, Failure>,
) -> HpStatus {
    guard(|| {
        let d = h.as_ref().ok_or_else(|| Failure::null("h"))?;
        let len = d.polar.len();
        if cap < len {
            return Err(Failure::new(HpStatus::BufferTooSmall, format!("buffer holds {cap}, need {len}")));
        }
        let mut columns = Vec::with_capacity(outs.len());
        for &(p, name) in outs {
            columns.push(output(p, len, name)?);
        }
        for (col, dst) in columns.into_iter().enumerate() {
            for (n, v) in dst.iter_mut().enumerate() {
                *v = fill(d, col, n)?;
            }
        }
        Ok(())
    })
}

/// Complex envelope `A = a + i·b`.
///
/// # Safety
/// `h` is a live handle; `a` and `b` are valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_envelope(h: *const HpDecomposition, a: *mut f64, b: *mut f64, cap: usize) -> HpStatus {
    copy_columns(h, cap, &[(a, "a"), (b, "b")], |d, col, n| {
        let v = d.polar.envelope[n];
        Ok(if col == 0 { v.re } else { v.im })
    })
}

/// Unwrapped envelope phase `φ_A`, radians.
///
/// # Safety
/// `h` is a live handle; `phi` is valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_envelope_phase(h: *const HpDecomposition, phi: *mut f64, cap: usize) -> HpStatus {
    copy_columns(h, cap, &[(phi, "phi")], |d, _, n| Ok(d.polar.envelope_phase[n]))
}

/// Unwrapped complex phase `B = c + i·d`, radians.
///
/// # Safety
/// `h` is a live handle; `c` and `d` are valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_phase(h: *const HpDecomposition, c: *mut f64, d: *mut f64, cap: usize) -> HpStatus {
    copy_columns(h, cap, &[(c, "c"), (d, "d")], |h, col, n| {
        let v = h.polar.phase[n];
        Ok(if col == 0 { v.re } else { v.im })
    })
}

/// Carrier `e^{Bj} = α + β·j + γ·k`.
///
/// # Safety
/// `h` is a live handle; `alpha`, `beta` and `gamma` are valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_carrier(
    h: *const HpDecomposition,
    alpha: *mut f64,
    beta: *mut f64,
    gamma: *mut f64,
    cap: usize,
) -> HpStatus {
    copy_columns(h, cap, &[(alpha, "alpha"), (beta, "beta"), (gamma, "gamma")], |d, col, n| {
        let c = d.polar.carrier[n];
        Ok([c.alpha, c.beta, c.gamma][col])
    })
}

/// Instantaneous complex frequency `f_B = f_Br + i·f_Bi`, Hz.
///
/// # Safety
/// `h` is a live handle; `f_br` and `f_bi` are valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_frequency(
    h: *const HpDecomposition,
    f_br: *mut f64,
    f_bi: *mut f64,
    cap: usize,
) -> HpStatus {
    copy_columns(h, cap, &[(f_br, "f_br"), (f_bi, "f_bi")], |d, col, n| {
        let v = d.frequency.f_b[n];
        Ok(if col == 0 { v.re } else { v.im })
    })
}

/// Envelope frequency `f_A`, Hz. Returns `NOT_AVAILABLE` when the envelope
/// is not analytic or the quantity was switched off.
///
/// # Safety
/// `h` is a live handle; `f_a` is valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_envelope_frequency(h: *const HpDecomposition, f_a: *mut f64, cap: usize) -> HpStatus {
    copy_columns(h, cap, &[(f_a, "f_a")], |d, _, n| match &d.frequency.f_a {
        Some(v) => Ok(v[n]),
        None => Err(Failure::new(HpStatus::NotAvailable, "envelope frequency not available for this signal")),
    })
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string, truncated to `cap - 1` bytes. Returns the full
/// message length in bytes, 0 when the last call succeeded. `buf` may be
/// null to query the length.
///
/// # Safety
/// `buf` is null or valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hp_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let msg = e.as_ref().map_or("", |(m, _)| m.as_str());
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Sample index of the last failure on this thread, or -1.
#[no_mangle]
pub extern "C" fn hp_last_error_index() -> i64 {
    LAST_ERROR.with(|e| e.borrow().as_ref().and_then(|(_, i)| *i).map_or(-1, |i| i as i64))
}
