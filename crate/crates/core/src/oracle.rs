//! Brute-force reference for envelope sign recovery.
//!
//! Not used by the pipeline. For each modulus channel it enumerates every
//! sign assignment of the half-periods (the first one is pinned by the
//! initial phase range) and keeps the assignment whose signed channel is
//! smoothest across the half-period boundaries. Smoothness at a boundary is
//! the squared second difference centred on the boundary minimum; the
//! minimum sample itself may take the sign of either neighbour.

use num_complex::Complex64;

use crate::error::PolarError;
use crate::polar::{axis_normalize, PhaseRange, Sign};
use crate::series::QuaternionSeries;

/// Half-period count above which enumeration gives way to a greedy sweep.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleChannel {
    pub signed: Vec<f64>,
    /// Sign of each half-period, first to last.
    pub half_period_signs: Vec<Sign>,
    /// True when the greedy fallback was used.
    pub greedy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEnvelope {
    pub envelope: Vec<Complex64>,
    pub real: OracleChannel,
    pub imag: OracleChannel,
}

fn local_minima(m: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    for n in 1..m.len().saturating_sub(1) {
        if m[n - 1] > m[n] && m[n] <= m[n + 1] {
            out.push(n);
        }
    }
    out
}

/// Best cost at boundary `n` given the signs on either side, and whether
/// the minimum sample goes with the left side.
fn boundary_cost(m: &[f64], n: usize, left: f64, right: f64) -> (f64, bool) {
    let with_left = left * m[n - 1] - 2.0 * left * m[n] + right * m[n + 1];
    let with_right = left * m[n - 1] - 2.0 * right * m[n] + right * m[n + 1];
    let (a, b) = (with_left * with_left, with_right * with_right);
    if a <= b {
        (a, true)
    } else {
        (b, false)
    }
}

/// Reference sign recovery for a single modulus channel.
pub fn oracle_channel(m: &[f64], initial: Sign) -> OracleChannel {
    let minima = local_minima(m);
    let hp = minima.len() + 1;
    let first = initial.value();

    let signs_for = |flips: &dyn Fn(usize) -> bool| -> Vec<f64> {
        let mut s = vec![first; hp];
        for k in 1..hp {
            s[k] = if flips(k - 1) { -s[k - 1] } else { s[k - 1] };
        }
        s
    };
    let total =
        |s: &[f64]| -> f64 { minima.iter().enumerate().map(|(k, &n)| boundary_cost(m, n, s[k], s[k + 1]).0).sum() };

    let greedy = hp > EXHAUSTIVE_LIMIT;
    let signs = if !greedy {
        let mut best = (f64::INFINITY, 0u64);
        for mask in 0u64..(1u64 << minima.len()) {
            let s = signs_for(&|k| mask >> k & 1 == 1);
            let c = total(&s);
            if c < best.0 {
                best = (c, mask);
            }
        }
        signs_for(&|k| best.1 >> k & 1 == 1)
    } else {
        let mut s = vec![first; hp];
        for (k, &n) in minima.iter().enumerate() {
            let keep = boundary_cost(m, n, s[k], s[k]).0;
            let flip = boundary_cost(m, n, s[k], -s[k]).0;
            s[k + 1] = if flip < keep { -s[k] } else { s[k] };
        }
        s
    };

    let mut sample_sign = vec![0.0; m.len()];
    let mut start = 0;
    for (k, &n) in minima.iter().enumerate() {
        for v in &mut sample_sign[start..n] {
            *v = signs[k];
        }
        let (_, left) = boundary_cost(m, n, signs[k], signs[k + 1]);
        sample_sign[n] = if left { signs[k] } else { signs[k + 1] };
        start = n + 1;
    }
    for v in &mut sample_sign[start..] {
        *v = signs[hp - 1];
    }
    OracleChannel {
        signed: m.iter().zip(&sample_sign).map(|(a, s)| a * s).collect(),
        half_period_signs: signs.iter().map(|&s| if s < 0.0 { Sign::Negative } else { Sign::Positive }).collect(),
        greedy,
    }
}

/// Reference envelope for `s`, built from the same channel moduli the
/// pipeline uses.
pub fn oracle_sign_assignment(
    s: &QuaternionSeries,
    range: PhaseRange,
    eps_rel: f64,
) -> Result<OracleEnvelope, PolarError> {
    let (sr, si) = range.initial_signs()?;
    let axis = axis_normalize(s, eps_rel, false)?;
    let (mr, mi) = axis.channel_moduli();
    let real = oracle_channel(&mr, sr);
    let imag = oracle_channel(&mi, si);
    let envelope = real.signed.iter().zip(&imag.signed).map(|(&a, &b)| Complex64::new(a, b)).collect();
    Ok(OracleEnvelope { envelope, real, imag })
}
