//! Unique polar form `s(t) = A(t)·e^{B(t)j}` of a quaternion series.
//!
//! The decomposition runs in four stages: envelope recovery from the
//! complex axis, carrier extraction `e^{Bj} = conj(A)·s/‖s‖²`, cosine-phase
//! unwrapping of the carrier, and central-difference frequencies. The result
//! is canonical: `φ_A(0)` lies in the configured quarter-plane (by default
//! `[0, π/2]`), `c, d ≥ 0` and `‖B(0)‖ ∈ [0, 2π)`.

pub mod envelope;
pub mod frequency;
pub mod phase;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DecomposeError, PolarError, Stage};
use crate::series::QuaternionSeries;
use crate::transform::complex_negative_energy_ratio;

pub use envelope::{
    axis_normalize, classify_minimum, detect_minima, predict_zero_crossing, recover_channel, recover_envelope,
    AxisSeries, ChannelRecovery, EnvelopeRecovery, HalfPeriodCase, MinimumClass, PhaseRange, SamplingCase, Sign,
};
pub use frequency::{differentiate, instantaneous_frequency, unwrap_argument, InstFrequencySeries};
pub use phase::{extract_carrier, recover_phase, unwrap_cosine_phase, Carrier, PhaseRecovery};

/// Envelopes whose negative-frequency energy ratio stays below this count as
/// analytic, which is what `f_A` requires.
pub const ANALYTIC_ENVELOPE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarConfig {
    pub phase_init_range: PhaseRange,
    /// Degeneracy threshold relative to the largest `‖s‖`.
    pub eps_mag: f64,
    /// Minima above `eta` times the smaller neighbouring half-period peak are
    /// never treated as zero crossings.
    pub eta: f64,
    /// Interpolate through degenerate samples instead of failing.
    pub mask_degenerate: bool,
    /// Compute `f_A` when the recovered envelope is analytic.
    pub envelope_frequency: bool,
}

impl Default for PolarConfig {
    fn default() -> Self {
        Self {
            phase_init_range: PhaseRange::default(),
            eps_mag: 1e-12,
            eta: 0.5,
            mask_degenerate: false,
            envelope_frequency: true,
        }
    }
}

impl PolarConfig {
    pub fn validate(&self) -> Result<(), PolarError> {
        self.phase_init_range.initial_signs()?;
        if !(self.eps_mag.is_finite() && self.eps_mag >= 0.0) {
            return Err(PolarError::InvalidConfig(format!("eps_mag must be >= 0, got {}", self.eps_mag)));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(PolarError::InvalidConfig(format!("eta must be > 0, got {}", self.eta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarDecomposition {
    pub t0: f64,
    pub dt: f64,
    /// `‖s[n]‖`.
    pub magnitude: Vec<f64>,
    /// Normalized complex part `q̃_r + i·q̃_i` of each sample.
    pub axis: Vec<Complex64>,
    /// Recovered envelope `A = a + i·b`.
    pub envelope: Vec<Complex64>,
    /// Unwrapped `φ_A`, starting in `[0, 2π)`.
    pub envelope_phase: Vec<f64>,
    pub carrier: Vec<Carrier>,
    /// Unwrapped complex phase `B = c + i·d`.
    pub phase: Vec<Complex64>,
    /// Complex phase computed without unwrapping.
    pub wrapped_phase: Vec<Complex64>,
    pub real_cases: Vec<HalfPeriodCase>,
    pub imag_cases: Vec<HalfPeriodCase>,
    pub masked: Vec<usize>,
    pub canonical_violations: usize,
}

impl PolarDecomposition {
    pub fn len(&self) -> usize {
        self.envelope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envelope.is_empty()
    }

    /// `A[n]·e^{B[n]j}`.
    pub fn reconstruct(&self, n: usize) -> crate::Quaternion {
        let b = self.phase[n];
        crate::Quaternion::from_complex(self.envelope[n]) * crate::Quaternion::new(0.0, 0.0, b.re, b.im).exp()
    }

    /// The sign-ambiguous envelope `‖s‖·A(q_r + i·q_i)`.
    pub fn ambiguous_envelope(&self) -> Vec<Complex64> {
        self.magnitude.iter().zip(&self.axis).map(|(m, a)| a * *m).collect()
    }
}

/// Full polar decomposition of `s`.
pub fn decompose(
    s: &QuaternionSeries,
    config: &PolarConfig,
) -> Result<(PolarDecomposition, InstFrequencySeries), DecomposeError> {
    config.validate().map_err(DecomposeError::at(Stage::AxisNormalize))?;
    let env = recover_envelope(s, config.phase_init_range, config.eps_mag, config.eta, config.mask_degenerate)
        .map_err(|e| {
            let stage = match e {
                PolarError::NearZeroMagnitude { .. } | PolarError::DegenerateAxis { .. } => Stage::AxisNormalize,
                _ => Stage::RecoverEnvelope,
            };
            DecomposeError { stage, source: e }
        })?;

    let carrier =
        extract_carrier(s, &env.envelope, &env.axis.vanishing).map_err(DecomposeError::at(Stage::ExtractCarrier))?;
    let phase = recover_phase(&carrier).map_err(DecomposeError::at(Stage::RecoverPhase))?;
    let envelope_phase = unwrap_argument(&env.envelope);

    let ratio = config.envelope_frequency.then(|| complex_negative_energy_ratio(&env.envelope));
    let analytic = ratio.is_some_and(|r| r < ANALYTIC_ENVELOPE_THRESHOLD);
    let mut freq = instantaneous_frequency(s.t0(), s.dt(), &phase.phase, analytic.then_some(envelope_phase.as_slice()))
        .map_err(DecomposeError::at(Stage::InstantaneousFrequency))?;
    freq.envelope_negative_energy = ratio;

    let decomposition = PolarDecomposition {
        t0: s.t0(),
        dt: s.dt(),
        magnitude: env.axis.magnitude,
        axis: env.axis.axis,
        envelope: env.envelope,
        envelope_phase,
        carrier,
        phase: phase.phase,
        wrapped_phase: phase.wrapped,
        real_cases: env.real_cases,
        imag_cases: env.imag_cases,
        masked: env.axis.masked,
        canonical_violations: phase.canonical_violations,
    };
    Ok((decomposition, freq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Quaternion;
    use std::f64::consts::PI;

    #[test]
    fn positive_constant_has_trivial_form() {
        let s = QuaternionSeries::new(0.0, 0.1, vec![Quaternion::from_real(2.0); 16]).unwrap();
        let (p, f) = decompose(&s, &PolarConfig::default()).unwrap();
        assert!(p.envelope.iter().all(|a| *a == Complex64::new(2.0, 0.0)));
        assert!(p.phase.iter().all(|b| *b == Complex64::new(0.0, 0.0)));
        assert!(f.f_b.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        // a constant envelope is trivially one-sided
        assert!(f.f_a.is_some());
    }

    #[test]
    fn errors_carry_stage_and_index() {
        let mut v = vec![Quaternion::new(1.0, 0.2, 0.3, 0.0); 10];
        v[6] = Quaternion::new(0.0, 0.0, 1.0, 1.0);
        let s = QuaternionSeries::new(0.0, 0.1, v).unwrap();
        let err = decompose(&s, &PolarConfig::default()).unwrap_err();
        assert_eq!(err.stage, Stage::AxisNormalize);
        assert_eq!(err.source.index(), Some(6));
        let cfg = PolarConfig { eta: -1.0, ..PolarConfig::default() };
        assert!(matches!(decompose(&s, &cfg).unwrap_err().source, PolarError::InvalidConfig(_)));
    }

    #[test]
    fn am_envelope_with_masking() {
        // s = cos(2π·2t)·e^{2π·20t j}; the envelope zeros fall on the grid
        let fs = 2000.0;
        let vals: Vec<Quaternion> = (0..2000)
            .map(|n| {
                let t = n as f64 / fs;
                Quaternion::new(0.0, 0.0, 2.0 * PI * 20.0 * t + 0.3, 0.0).exp().scale((2.0 * PI * 2.0 * t).cos())
            })
            .collect();
        let s = QuaternionSeries::new(0.0, 1.0 / fs, vals).unwrap();
        assert!(decompose(&s, &PolarConfig::default()).is_err());
        let cfg = PolarConfig { mask_degenerate: true, ..PolarConfig::default() };
        let (p, _) = decompose(&s, &cfg).unwrap();
        assert_eq!(p.masked.len(), 4);
        for (n, a) in p.envelope.iter().enumerate() {
            let t = n as f64 / fs;
            assert!((a.re - (2.0 * PI * 2.0 * t).cos()).abs() < 1e-12);
            assert!(a.im.abs() < 1e-12);
        }
        for (n, b) in p.phase.iter().enumerate() {
            let t = n as f64 / fs;
            assert!((b.re - (2.0 * PI * 20.0 * t + 0.3)).abs() < 1e-6, "n={n} {b}");
        }
    }
}
