//! Quaternionic carrier and complex phase.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::PolarError;
use crate::quaternion::Quaternion;
use crate::series::QuaternionSeries;

/// Largest tolerated departure of the carrier from the `{1, j, k}` unit
/// sphere, and of the envelope magnitude from the signal magnitude.
pub const CARRIER_TOLERANCE: f64 = 1e-9;

/// Axis norms at or below this are treated as undefined.
const AXIS_EPS: f64 = 1e-14;

/// `e^{Bj} = α + jβ + kγ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Carrier {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Carrier {
    pub fn quaternion(self) -> Quaternion {
        Quaternion::new(self.alpha, 0.0, self.beta, self.gamma)
    }
}

/// `e^{Bj} = conj(A)·s / ‖s‖²` per sample.
///
/// Samples listed in `masked` are not evaluated; their carrier is
/// interpolated from the neighbouring samples. Everywhere else the envelope
/// must have the signal's magnitude and the product must have no `i` part.
pub fn extract_carrier(
    s: &QuaternionSeries,
    envelope: &[Complex64],
    masked: &[usize],
) -> Result<Vec<Carrier>, PolarError> {
    let values = s.values();
    if envelope.len() != values.len() {
        return Err(crate::error::SeriesError::LengthMismatch { expected: values.len(), found: envelope.len() }.into());
    }
    let mut skip = vec![false; values.len()];
    for &m in masked {
        skip[m] = true;
    }
    let mut carrier = vec![Carrier { alpha: 1.0, beta: 0.0, gamma: 0.0 }; values.len()];
    for (n, (q, a)) in values.iter().zip(envelope).enumerate() {
        if skip[n] {
            continue;
        }
        let n2 = q.norm_sqr();
        let mag = n2.sqrt();
        let relative = (a.norm() - mag).abs() / mag;
        if !(relative <= CARRIER_TOLERANCE) {
            return Err(PolarError::EnvelopeMagnitude { index: n, relative });
        }
        let c = (Quaternion::from_complex(a.conj()) * *q).scale(1.0 / n2);
        if !(c.i.abs() < CARRIER_TOLERANCE) {
            return Err(PolarError::InconsistentEnvelope { index: n, residual: c.i });
        }
        if !((c.norm() - 1.0).abs() < CARRIER_TOLERANCE) {
            return Err(PolarError::CarrierNormalization { index: n, alpha: c.r });
        }
        carrier[n] = Carrier { alpha: c.r, beta: c.j, gamma: c.k };
    }
    if masked.len() == values.len() {
        return Ok(carrier);
    }
    let mut k = 0;
    while k < skip.len() {
        if !skip[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < skip.len() && skip[k] {
            k += 1;
        }
        let left = start.checked_sub(1).map(|i| carrier[i].quaternion());
        let right = (k < skip.len()).then(|| carrier[k].quaternion());
        let span = (k - start + 1) as f64;
        for (m, idx) in (start..k).enumerate() {
            let q = match (left, right) {
                (Some(l), Some(r)) => {
                    let w = (m + 1) as f64 / span;
                    l.scale(1.0 - w) + r.scale(w)
                }
                (Some(e), None) | (None, Some(e)) => e,
                (None, None) => Quaternion::ONE,
            };
            let q = if q.norm() > 0.0 { q.scale(1.0 / q.norm()) } else { Quaternion::ONE };
            carrier[idx] = Carrier { alpha: q.r, beta: q.j, gamma: q.k };
        }
    }
    Ok(carrier)
}

/// Unwrapped complex phase and its by-products.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecovery {
    /// `B̃ = c̃ + i·d̃`, unwrapped and canonical.
    pub phase: Vec<Complex64>,
    /// `B̆ = arccos(α)·A(β + iγ)`, computed sample-wise without unwrapping.
    pub wrapped: Vec<Complex64>,
    /// Unwrapped `‖B‖`, non-decreasing on clean input.
    pub norm: Vec<f64>,
    /// Samples whose sign-corrected axis left the closed first quadrant by
    /// more than the carrier tolerance, i.e. where `c ≥ 0, d ≥ 0` had to be
    /// imposed.
    pub canonical_violations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    /// `Θ = 2πm + θ`
    Rising,
    /// `Θ = 2πm + 2π - θ`
    Falling,
}

/// Unwraps the cosine phase `θ = arccos(α) ∈ [0, π]` into a non-decreasing
/// `Θ` with `Θ[0] ∈ [0, 2π)`.
///
/// `θ` folds at 0 and π. Within `10·max|Δθ|` of the boundary the current
/// branch is heading for, each sample is placed on whichever side of the fold
/// lies closer to the linear extrapolation of the two previous `Θ` values. A
/// reversal of `θ` there always lands on the far side; extrapolation also
/// places the first sample past the fold, before `θ` has turned around.
pub fn unwrap_cosine_phase(theta: &[f64]) -> Vec<f64> {
    if theta.is_empty() {
        return Vec::new();
    }
    let max_step = theta.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let window = 10.0 * max_step;
    let mut branch = theta
        .windows(2)
        .find(|w| w[1] != w[0])
        .map(|w| if w[1] > w[0] { Branch::Rising } else { Branch::Falling })
        .unwrap_or(Branch::Rising);
    let mut turns = 0.0;
    let value = |branch: Branch, turns: f64, th: f64| match branch {
        Branch::Rising => turns * TAU + th,
        Branch::Falling => turns * TAU + TAU - th,
    };
    let mut out = Vec::with_capacity(theta.len());
    out.push(value(branch, turns, theta[0]));
    for n in 1..theta.len() {
        let (prev, th) = (theta[n - 1], theta[n]);
        let (next, next_turns, near) = match branch {
            Branch::Rising => (Branch::Falling, turns, prev.max(th) >= PI - window),
            Branch::Falling => (Branch::Rising, turns + 1.0, prev.min(th) <= window),
        };
        if near {
            let last = out[n - 1];
            let slope = if n >= 2 { last - out[n - 2] } else { 0.0 };
            let predicted = last + slope;
            let stay = value(branch, turns, th);
            let fold = value(next, next_turns, th);
            if (fold - predicted).abs() < (stay - predicted).abs() {
                branch = next;
                turns = next_turns;
            }
        }
        out.push(value(branch, turns, th));
    }
    out
}

/// Recovers `B(t) = c(t) + i·d(t)` from the carrier.
///
/// `θ = arccos(α)` is evaluated as `atan2(|β + iγ|, α)`, which is the same
/// angle on the unit sphere but keeps full precision near 0 and π. After
/// unwrapping, the axis of `β + iγ` is multiplied by `sgn(sin Θ)` to undo the
/// flip that a negative `sin‖B‖` introduces, and `B = Θ·axis`.
pub fn recover_phase(carrier: &[Carrier]) -> Result<PhaseRecovery, PolarError> {
    let mut theta = Vec::with_capacity(carrier.len());
    for (n, c) in carrier.iter().enumerate() {
        if !(c.alpha.abs() <= 1.0 + CARRIER_TOLERANCE) {
            return Err(PolarError::CarrierNormalization { index: n, alpha: c.alpha });
        }
        theta.push(c.beta.hypot(c.gamma).atan2(c.alpha.clamp(-1.0, 1.0)));
    }
    let norm = unwrap_cosine_phase(&theta);

    let raw: Vec<Option<Complex64>> = carrier
        .iter()
        .map(|c| {
            let h = c.beta.hypot(c.gamma);
            (h > AXIS_EPS).then(|| Complex64::new(c.beta / h, c.gamma / h))
        })
        .collect();
    let fallback = raw.iter().flatten().next().copied().unwrap_or(Complex64::new(1.0, 0.0));

    let mut phase = Vec::with_capacity(carrier.len());
    let mut wrapped = Vec::with_capacity(carrier.len());
    let mut canonical_violations = 0;
    let mut last = fallback;
    for ((axis, &th), &big) in raw.iter().zip(&theta).zip(&norm) {
        wrapped.push(axis.unwrap_or(Complex64::new(0.0, 0.0)) * th);
        let u = match axis {
            Some(a) => {
                let sigma = if big.sin() < 0.0 { -1.0 } else { 1.0 };
                let u = a * sigma;
                if u.re < -CARRIER_TOLERANCE || u.im < -CARRIER_TOLERANCE {
                    canonical_violations += 1;
                }
                Complex64::new(u.re.abs(), u.im.abs())
            }
            None => last,
        };
        last = u;
        phase.push(u * big);
    }
    Ok(PhaseRecovery { phase, wrapped, norm, canonical_violations })
}
