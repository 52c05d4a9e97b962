//! Instantaneous complex frequency.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{PolarError, SeriesError};

#[derive(Debug, Clone, PartialEq)]
pub struct InstFrequencySeries {
    pub t0: f64,
    pub dt: f64,
    /// `f_B = (dc/dt + i·dd/dt) / 2π`, Hz.
    pub f_b: Vec<Complex64>,
    /// `f_A = (dφ_A/dt) / 2π`, Hz; only when the envelope is analytic.
    pub f_a: Option<Vec<f64>>,
    /// Relative negative-frequency energy of the envelope, when measured.
    pub envelope_negative_energy: Option<f64>,
}

/// Derivative by 3-point central differences, 2-point one-sided at the ends.
pub fn differentiate(x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    out.push((x[1] - x[0]) / dt);
    for k in 1..n - 1 {
        out.push((x[k + 1] - x[k - 1]) / (2.0 * dt));
    }
    out.push((x[n - 1] - x[n - 2]) / dt);
    out
}

/// `f_B` from the complex phase, and `f_A` when an envelope phase is given.
pub fn instantaneous_frequency(
    t0: f64,
    dt: f64,
    phase: &[Complex64],
    envelope_phase: Option<&[f64]>,
) -> Result<InstFrequencySeries, PolarError> {
    if phase.len() < 3 {
        return Err(SeriesError::TooShort { len: phase.len(), min: 3 }.into());
    }
    let c: Vec<f64> = phase.iter().map(|b| b.re).collect();
    let d: Vec<f64> = phase.iter().map(|b| b.im).collect();
    let f_b = differentiate(&c, dt)
        .into_iter()
        .zip(differentiate(&d, dt))
        .map(|(dc, dd)| Complex64::new(dc, dd) / TAU)
        .collect();
    let f_a = match envelope_phase {
        Some(phi) => {
            if phi.len() != phase.len() {
                return Err(SeriesError::LengthMismatch { expected: phase.len(), found: phi.len() }.into());
            }
            Some(differentiate(phi, dt).into_iter().map(|v| v / TAU).collect())
        }
        None => None,
    };
    Ok(InstFrequencySeries { t0, dt, f_b, f_a, envelope_negative_energy: None })
}

/// Continuous phase of a complex series, starting in `[0, 2π)`.
pub fn unwrap_argument(values: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev_raw = 0.0;
    let mut acc = 0.0;
    for (n, v) in values.iter().enumerate() {
        let raw = v.arg();
        if n == 0 {
            acc = raw.rem_euclid(TAU);
        } else {
            let mut step = raw - prev_raw;
            if step > PI {
                step -= TAU;
            } else if step < -PI {
                step += TAU;
            }
            acc += step;
        }
        prev_raw = raw;
        out.push(acc);
    }
    out
}
