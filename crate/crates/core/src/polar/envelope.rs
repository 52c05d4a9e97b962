//! Complex-envelope recovery.
//!
//! The complex part of `s = A·e^{Bj}` is `α·A` with `α = cos‖B‖`, so its axis
//! gives `A` only up to the unknown sign of `α`. Each envelope channel is
//! therefore recovered from its modulus: the sign of every half-period (the
//! stretch between two adjacent local minima of the modulus) is carried over
//! from the previous one, and flipped only when the minimum between them is
//! a genuine zero crossing. Crossings are told apart from positive dips by
//! linear zero-crossing prediction on the samples around each minimum.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::PolarError;
use crate::series::QuaternionSeries;

/// Sign of a recovered half-period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

/// Whether a local minimum of the modulus is a zero crossing of the signed
/// channel (`ZeroCrossing`) or a positive dip (`PositiveMinimum`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinimumClass {
    ZeroCrossing,
    PositiveMinimum,
}

/// Where the sampled minimum sits relative to the crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SamplingCase {
    /// The minimum is the last sample of the former half-period.
    LastOfFormer,
    /// The minimum is the first sample of the following half-period.
    FirstOfFollowing,
}

/// Classification of one local minimum: one of the eight combinations of
/// class, former half-period sign and sampling case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HalfPeriodCase {
    pub class: MinimumClass,
    pub former_sign: Sign,
    pub sampling_case: SamplingCase,
    pub minimum_index: usize,
}

impl HalfPeriodCase {
    /// Sign of the half-period following the minimum.
    pub fn following_sign(&self) -> Sign {
        match self.class {
            MinimumClass::ZeroCrossing => self.former_sign.flipped(),
            MinimumClass::PositiveMinimum => self.former_sign,
        }
    }

    /// First sample carrying the following half-period's sign.
    pub fn boundary(&self) -> usize {
        match self.sampling_case {
            SamplingCase::LastOfFormer => self.minimum_index + 1,
            SamplingCase::FirstOfFollowing => self.minimum_index,
        }
    }
}

/// Quarter-plane interval for the initial envelope phase `φ_A(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseRange {
    pub low: f64,
    pub high: f64,
}

impl Default for PhaseRange {
    fn default() -> Self {
        Self { low: 0.0, high: FRAC_PI_2 }
    }
}

impl PhaseRange {
    pub fn new(low: f64, high: f64) -> Result<Self, PolarError> {
        let range = Self { low, high };
        range.initial_signs()?;
        Ok(range)
    }

    /// Signs of `(cos φ_A(0), sin φ_A(0))`. The interval has to stay inside
    /// one quarter-plane so both signs are fixed.
    pub fn initial_signs(&self) -> Result<(Sign, Sign), PolarError> {
        let (low, high) = (self.low, self.high);
        if !(low.is_finite() && high.is_finite()) || high < low {
            return Err(PolarError::InvalidConfig(format!("phase init range [{low}, {high}] is not an interval")));
        }
        let quarter = (low / FRAC_PI_2).floor();
        let tol = 1e-9;
        if high > (quarter + 1.0) * FRAC_PI_2 + tol {
            return Err(PolarError::InvalidConfig(format!(
                "phase init range [{low}, {high}] spans more than one quarter-plane"
            )));
        }
        let mid = 0.5 * (quarter + 0.5) * std::f64::consts::PI;
        Ok((Sign::of(mid.cos()), Sign::of(mid.sin())))
    }
}

/// Magnitude and normalized complex axis of each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSeries {
    pub magnitude: Vec<f64>,
    /// `(q_r + i·q_i) / |q_r + i·q_i|`.
    pub axis: Vec<Complex64>,
    /// Samples whose axis was interpolated because it was undefined.
    pub masked: Vec<usize>,
    /// The masked samples whose magnitude is near zero as well.
    pub vanishing: Vec<usize>,
}

impl AxisSeries {
    /// Moduli of the two envelope channels, `‖s‖·|q̃_r|` and `‖s‖·|q̃_i|`.
    pub fn channel_moduli(&self) -> (Vec<f64>, Vec<f64>) {
        self.magnitude.iter().zip(&self.axis).map(|(m, a)| (m * a.re.abs(), m * a.im.abs())).unzip()
    }
}

/// Splits each sample into `‖s‖` and the unit axis of its complex part.
///
/// `eps_rel` scales with the largest magnitude in the series. A sample at
/// or below that threshold, in magnitude or in complex part, is an error
/// unless `mask` is set, in which case its axis is interpolated linearly
/// from the nearest valid neighbours.
pub fn axis_normalize(s: &QuaternionSeries, eps_rel: f64, mask: bool) -> Result<AxisSeries, PolarError> {
    let values = s.values();
    let magnitude: Vec<f64> = values.iter().map(|q| q.norm()).collect();
    let peak = magnitude.iter().cloned().fold(0.0, f64::max);
    let eps = eps_rel * peak;
    let mut axis = vec![Complex64::new(0.0, 0.0); values.len()];
    let mut valid = vec![true; values.len()];
    let mut masked = Vec::new();
    let mut vanishing = Vec::new();
    for (n, q) in values.iter().enumerate() {
        let c = q.complex_part();
        let cn = c.norm();
        let fault = if magnitude[n] <= eps {
            Some(PolarError::NearZeroMagnitude { index: n, magnitude: magnitude[n] })
        } else if cn <= eps {
            Some(PolarError::DegenerateAxis { index: n })
        } else {
            None
        };
        match fault {
            Some(err) if !mask => return Err(err),
            Some(err) => {
                valid[n] = false;
                masked.push(n);
                if matches!(err, PolarError::NearZeroMagnitude { .. }) {
                    vanishing.push(n);
                }
            }
            None => axis[n] = c / cn,
        }
    }
    if !masked.is_empty() {
        if masked.len() == values.len() {
            return Err(PolarError::NearZeroMagnitude { index: 0, magnitude: magnitude[0] });
        }
        interpolate_axes(&mut axis, &valid);
    }
    Ok(AxisSeries { magnitude, axis, masked, vanishing })
}

/// Fills invalid entries by linear interpolation between the neighbouring
/// valid axes. The right neighbour is sign-aligned with the left one first,
/// since the axis may legitimately flip across a masked gap.
fn interpolate_axes(axis: &mut [Complex64], valid: &[bool]) {
    let n = axis.len();
    let mut k = 0;
    while k < n {
        if valid[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < n && !valid[k] {
            k += 1;
        }
        let left = start.checked_sub(1).map(|i| axis[i]);
        let right = (k < n).then(|| axis[k]);
        match (left, right) {
            (Some(l), Some(r)) => {
                let r = if (l.conj() * r).re < 0.0 { -r } else { r };
                let span = (k - start + 1) as f64;
                for (m, slot) in axis[start..k].iter_mut().enumerate() {
                    let w = (m + 1) as f64 / span;
                    let v = l * (1.0 - w) + r * w;
                    *slot = if v.norm() > 0.0 { v / v.norm() } else { l };
                }
            }
            (Some(edge), None) | (None, Some(edge)) => {
                for slot in &mut axis[start..k] {
                    *slot = edge;
                }
            }
            (None, None) => {}
        }
    }
}

/// Zero of the line through `(t_n, v_n)` and `(t_n1, v_n1)`:
/// `T = t_n1 - v_n1 (t_n1 - t_n) / (v_n1 - v_n)`.
///
/// Returns `None` for a horizontal line. The zero may fall outside
/// `[t_n, t_n1]`; callers decide what that means.
pub fn predict_zero_crossing(t_n: f64, t_n1: f64, v_n: f64, v_n1: f64) -> Option<f64> {
    if v_n1 == v_n {
        return None;
    }
    Some(t_n1 - v_n1 * (t_n1 - t_n) / (v_n1 - v_n))
}

/// Local minima of a modulus channel: `m[n-1] > m[n] <= m[n+1]`, interior
/// samples only. A plateau reports its leftmost index.
pub fn detect_minima(channel: &[f64]) -> Vec<usize> {
    if channel.len() < 3 {
        return Vec::new();
    }
    (1..channel.len() - 1).filter(|&n| channel[n - 1] > channel[n] && channel[n] <= channel[n + 1]).collect()
}

/// For a zero crossing at minimum `n`: `Some(true)` when the interpolated
/// signed value at `n` keeps the former sign, `Some(false)` when it takes the
/// following one, `None` when it is undecided or the neighbours do not
/// belong to the two adjacent half-periods.
fn cubic_side(channel: &[f64], n: usize) -> Option<bool> {
    if n < 2 || n + 2 >= channel.len() || channel[n] == 0.0 {
        return None;
    }
    let (m2, m1, p1, p2) = (channel[n - 2], channel[n - 1], channel[n + 1], channel[n + 2]);
    if m2 < m1 || p2 < p1 {
        return None;
    }
    // former side positive, following side negative
    let at_n = (-m2 + 4.0 * m1 - 4.0 * p1 + p2) / 6.0;
    if at_n > 0.0 {
        Some(true)
    } else if at_n < 0.0 {
        Some(false)
    } else {
        None
    }
}

/// Classifies the local minimum at `n` of the modulus `channel`.
///
/// Two zero-crossing estimates are formed around the minimum: one from the
/// descending pair `(n-1, n)` extrapolated forward, valid inside
/// `[t_n, t_{n+1}]`, and one from the ascending pair `(n, n+1)` extrapolated
/// backward, valid inside `[t_{n-1}, t_n]`. The minimum is a zero crossing if
/// either estimate is valid. When only one is valid it fixes the side of the
/// crossing. When both are, the signed value at `n` is interpolated from the
/// two samples on each side (cubic through `n-2, n-1, n+1, n+2`) and its sign
/// places the minimum sample; without those neighbours the estimate closer to
/// `t_n` decides, ties going to `LastOfFormer`. A minimum higher than `eta`
/// times the smaller of its two neighbouring half-period peaks is always a
/// positive minimum.
pub fn classify_minimum(
    channel: &[f64],
    n: usize,
    dt: f64,
    former_sign: Sign,
    eta: f64,
    local_peak: f64,
) -> Result<HalfPeriodCase, PolarError> {
    if n == 0 || n + 1 >= channel.len() {
        return Err(PolarError::BoundaryMinimum { index: n });
    }
    let (prev, here, next) = (channel[n - 1], channel[n], channel[n + 1]);
    // local time axis centred on the minimum
    let forward = predict_zero_crossing(-dt, 0.0, prev, here).filter(|t| (0.0..=dt).contains(t));
    let backward = predict_zero_crossing(0.0, dt, here, next).filter(|t| (-dt..=0.0).contains(t));

    let guarded = here > eta * local_peak;
    let (class, sampling_case) = match (forward, backward) {
        _ if guarded => (MinimumClass::PositiveMinimum, SamplingCase::LastOfFormer),
        (None, None) => (MinimumClass::PositiveMinimum, SamplingCase::LastOfFormer),
        (Some(_), None) => (MinimumClass::ZeroCrossing, SamplingCase::LastOfFormer),
        (None, Some(_)) => (MinimumClass::ZeroCrossing, SamplingCase::FirstOfFollowing),
        (Some(f), Some(b)) => {
            let linear = if f <= -b { SamplingCase::LastOfFormer } else { SamplingCase::FirstOfFollowing };
            let case = match cubic_side(channel, n) {
                Some(true) => SamplingCase::LastOfFormer,
                Some(false) => SamplingCase::FirstOfFollowing,
                None => linear,
            };
            (MinimumClass::ZeroCrossing, case)
        }
    };
    Ok(HalfPeriodCase { class, former_sign, sampling_case, minimum_index: n })
}

/// Signed channel and the classification of each of its minima.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRecovery {
    pub signed: Vec<f64>,
    pub cases: Vec<HalfPeriodCase>,
}

/// Recovers the sign of one modulus channel, half-period by half-period.
pub fn recover_channel(channel: &[f64], dt: f64, initial: Sign, eta: f64) -> ChannelRecovery {
    let len = channel.len();
    let minima = detect_minima(channel);

    // peak of each half-period; half-period k ends at minima[k]
    let mut bounds = Vec::with_capacity(minima.len() + 2);
    bounds.push(0);
    bounds.extend(&minima);
    bounds.push(len.saturating_sub(1));
    let peaks: Vec<f64> = bounds.windows(2).map(|w| channel[w[0]..=w[1]].iter().cloned().fold(0.0, f64::max)).collect();

    let mut signs = vec![initial; len];
    let mut cases = Vec::with_capacity(minima.len());
    let mut sign = initial;
    let mut filled = 0;
    for (k, &n) in minima.iter().enumerate() {
        let local_peak = peaks[k].min(peaks[k + 1]);
        let case = classify_minimum(channel, n, dt, sign, eta, local_peak)
            .expect("detect_minima only reports interior samples");
        if case.class == MinimumClass::ZeroCrossing {
            let boundary = case.boundary();
            for s in &mut signs[filled..boundary] {
                *s = sign;
            }
            filled = boundary;
            sign = case.following_sign();
        }
        cases.push(case);
    }
    for s in &mut signs[filled..] {
        *s = sign;
    }
    let signed = channel.iter().zip(&signs).map(|(m, s)| s.value() * m).collect();
    ChannelRecovery { signed, cases }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRecovery {
    /// `A[n] = ã[n] + i·b̃[n]`, with `|A[n]| = ‖s[n]‖`.
    pub envelope: Vec<Complex64>,
    pub axis: AxisSeries,
    pub real_cases: Vec<HalfPeriodCase>,
    pub imag_cases: Vec<HalfPeriodCase>,
}

/// Recovers the continuous complex envelope of `s`.
///
/// The two channels `‖s‖·|q̃_r|` and `‖s‖·|q̃_i|` are signed independently.
/// Their first half-periods take the signs implied by `range`; every later
/// half-period keeps the sign of the one before it unless the separating
/// minimum is a zero crossing.
pub fn recover_envelope(
    s: &QuaternionSeries,
    range: PhaseRange,
    eps_rel: f64,
    eta: f64,
    mask: bool,
) -> Result<EnvelopeRecovery, PolarError> {
    let (sign_re, sign_im) = range.initial_signs()?;
    let axis = axis_normalize(s, eps_rel, mask)?;
    let (mod_re, mod_im) = axis.channel_moduli();
    let re = recover_channel(&mod_re, s.dt(), sign_re, eta);
    let im = recover_channel(&mod_im, s.dt(), sign_im, eta);
    let envelope = re.signed.iter().zip(&im.signed).map(|(&a, &b)| Complex64::new(a, b)).collect();
    Ok(EnvelopeRecovery { envelope, axis, real_cases: re.cases, imag_cases: im.cases })
}
