//! Synthetic hyperanalytic models with known ground truth.
//!
//! A model is `s(t) = A(t)·e^{B(t)j}` with `A = m(t)·e^{iφ(t)}` and
//! `B = c(t) + i·d(t)`, where each of `m, φ, c, d` is a sum of elementary
//! terms. The complex signal handed to the analysis is the `{1, i}` half of
//! `s`, i.e. `z = cos‖B‖ · A`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::ModelError;
use crate::quaternion::Quaternion;
use crate::series::{ComplexSeries, QuaternionSeries};

/// One additive term of a [`Profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Term {
    /// `v`
    Const(f64),
    /// `slope·t`
    Linear(f64),
    /// `scale·e^{rate·t}`
    Exp { scale: f64, rate: f64 },
    /// `amp·sin(2π·freq·t + phase)`
    Sin { amp: f64, freq: f64, phase: f64 },
    /// `amp·cos(2π·freq·t + phase)`
    Cos { amp: f64, freq: f64, phase: f64 },
}

impl Term {
    fn value(&self, t: f64) -> f64 {
        match *self {
            Term::Const(v) => v,
            Term::Linear(s) => s * t,
            Term::Exp { scale, rate } => scale * (rate * t).exp(),
            Term::Sin { amp, freq, phase } => amp * (TAU * freq * t + phase).sin(),
            Term::Cos { amp, freq, phase } => amp * (TAU * freq * t + phase).cos(),
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match *self {
            Term::Const(_) => 0.0,
            Term::Linear(s) => s,
            Term::Exp { scale, rate } => scale * rate * (rate * t).exp(),
            Term::Sin { amp, freq, phase } => amp * TAU * freq * (TAU * freq * t + phase).cos(),
            Term::Cos { amp, freq, phase } => -amp * TAU * freq * (TAU * freq * t + phase).sin(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Term::Const(v) => write!(f, "const:{v}"),
            Term::Linear(s) => write!(f, "lin:{s}"),
            Term::Exp { scale, rate } => write!(f, "exp:{scale},{rate}"),
            Term::Sin { amp, freq, phase } => write!(f, "sin:{amp},{freq},{phase}"),
            Term::Cos { amp, freq, phase } => write!(f, "cos:{amp},{freq},{phase}"),
        }
    }
}

/// Sum of terms, written as `kind:params` joined by `+`, for example
/// `lin:62.83+cos:4,1,0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Profile(pub Vec<Term>);

impl Profile {
    pub fn constant(v: f64) -> Self {
        Profile(vec![Term::Const(v)])
    }

    pub fn value(&self, t: f64) -> f64 {
        self.0.iter().map(|term| term.value(t)).sum()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.0.iter().map(|term| term.derivative(t)).sum()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("const:0");
        }
        for (k, term) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

impl FromStr for Profile {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| ModelError::Config(format!("profile `{s}`: {msg}"));
        let mut terms = Vec::new();
        for part in s.split('+').map(str::trim).filter(|p| !p.is_empty()) {
            let (kind, args) = part.split_once(':').ok_or_else(|| bad(format!("term `{part}` lacks `kind:`")))?;
            let nums = args
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|e| bad(format!("`{a}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let want = |n: usize| {
                if nums.len() == n {
                    Ok(())
                } else {
                    Err(bad(format!("`{kind}` takes {n} parameter(s), got {}", nums.len())))
                }
            };
            let term = match kind.trim() {
                "const" => want(1).map(|_| Term::Const(nums[0]))?,
                "lin" => want(1).map(|_| Term::Linear(nums[0]))?,
                "exp" => want(2).map(|_| Term::Exp { scale: nums[0], rate: nums[1] })?,
                "sin" => want(3).map(|_| Term::Sin { amp: nums[0], freq: nums[1], phase: nums[2] })?,
                "cos" => want(3).map(|_| Term::Cos { amp: nums[0], freq: nums[1], phase: nums[2] })?,
                other => return Err(bad(format!("unknown term kind `{other}`"))),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return Err(bad("no terms".into()));
        }
        Ok(Profile(terms))
    }
}

/// Envelope and phase functions of an AM-FM model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmFmModel {
    /// `|A|` (may change sign, which makes the envelope cross zero).
    pub magnitude: Profile,
    /// `φ_A`.
    pub envelope_phase: Profile,
    pub c: Profile,
    pub d: Profile,
}

impl AmFmModel {
    /// `A = e^{-t} e^{7 sin(2πt) i}`, `B = 40πt + i(20πt + 4 cos 2πt)`.
    pub fn reference() -> Self {
        Self {
            magnitude: Profile(vec![Term::Exp { scale: 1.0, rate: -1.0 }]),
            envelope_phase: Profile(vec![Term::Sin { amp: 7.0, freq: 1.0, phase: 0.0 }]),
            c: Profile(vec![Term::Linear(40.0 * PI)]),
            d: Profile(vec![Term::Linear(20.0 * PI), Term::Cos { amp: 4.0, freq: 1.0, phase: 0.0 }]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ModelKind {
    Reference,
    AmFm(AmFmModel),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Seconds; the grid covers `[0, duration]`.
    pub duration: f64,
    /// Hz.
    pub fs: f64,
}

impl ModelSpec {
    /// The reference model on `[0, 0.4]` s.
    pub fn reference(fs: f64) -> Self {
        Self { kind: ModelKind::Reference, duration: 0.4, fs }
    }

    pub fn functions(&self) -> AmFmModel {
        match &self.kind {
            ModelKind::Reference => AmFmModel::reference(),
            ModelKind::AmFm(m) => m.clone(),
        }
    }

    /// `floor(duration·fs) + 1`.
    pub fn sample_count(&self) -> usize {
        (self.duration * self.fs + 1e-9).floor() as usize + 1
    }
}

/// Analytic ground truth on the sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub s: QuaternionSeries,
    pub envelope: Vec<Complex64>,
    pub envelope_phase: Vec<f64>,
    pub phase: Vec<Complex64>,
    /// `f_B`, Hz.
    pub frequency: Vec<Complex64>,
    /// `f_A`, Hz.
    pub envelope_frequency: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedModel {
    pub z: ComplexSeries,
    pub truth: GroundTruth,
    /// Non-fatal findings, e.g. a sampling rate below ten times the highest
    /// instantaneous frequency.
    pub warnings: Vec<String>,
}

/// Evaluates the model on its grid and extracts `z` from `s`.
pub fn generate(spec: &ModelSpec) -> Result<GeneratedModel, ModelError> {
    if !(spec.duration.is_finite() && spec.duration > 0.0) {
        return Err(ModelError::Config(format!("duration must be > 0, got {}", spec.duration)));
    }
    if !(spec.fs.is_finite() && spec.fs > 0.0) {
        return Err(ModelError::Config(format!("fs must be > 0, got {}", spec.fs)));
    }
    let n = spec.sample_count();
    if n < crate::series::MIN_LEN {
        return Err(ModelError::Config(format!("{n} samples; duration·fs too small")));
    }
    let f = spec.functions();
    let dt = 1.0 / spec.fs;

    let mut values = Vec::with_capacity(n);
    let mut envelope = Vec::with_capacity(n);
    let mut envelope_phase = Vec::with_capacity(n);
    let mut phase = Vec::with_capacity(n);
    let mut frequency = Vec::with_capacity(n);
    let mut envelope_frequency = Vec::with_capacity(n);
    let mut peak_rate: f64 = 0.0;
    for k in 0..n {
        let t = k as f64 * dt;
        let phi = f.envelope_phase.value(t);
        let a = Complex64::from_polar(1.0, phi) * f.magnitude.value(t);
        let b = Complex64::new(f.c.value(t), f.d.value(t));
        let carrier = Quaternion::new(0.0, 0.0, b.re, b.im).exp();
        values.push(Quaternion::from_complex(a) * carrier);

        let (dc, dd, dphi) = (f.c.derivative(t), f.d.derivative(t), f.envelope_phase.derivative(t));
        let dnorm = if b.norm() > 0.0 { (b.re * dc + b.im * dd) / b.norm() } else { dc.hypot(dd) };
        peak_rate = peak_rate.max(dc.abs()).max(dd.abs()).max(dphi.abs()).max(dnorm.abs());

        envelope.push(a);
        envelope_phase.push(phi);
        phase.push(b);
        frequency.push(Complex64::new(dc, dd) / TAU);
        envelope_frequency.push(dphi / TAU);
    }
    let s = QuaternionSeries::new(0.0, dt, values)
        .map_err(|e| ModelError::Config(format!("model evaluation failed: {e}")))?;
    let z = s.complex_part();

    let mut warnings = Vec::new();
    let max_freq = peak_rate / TAU;
    if spec.fs < 10.0 * max_freq {
        warnings
            .push(format!("fs = {} Hz is below 10x the highest instantaneous frequency ({max_freq:.3} Hz)", spec.fs));
    }
    Ok(GeneratedModel {
        z,
        truth: GroundTruth { s, envelope, envelope_phase, phase, frequency, envelope_frequency },
        warnings,
    })
}
