//! Error metrics against ground truth and the run report.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::io::fmt_num;
use crate::model::GroundTruth;
use crate::polar::{InstFrequencySeries, PolarDecomposition};

/// Default fraction of samples dropped at each end for interior statistics.
pub const DEFAULT_EDGE_EXCLUDE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorStats {
    pub max: f64,
    pub median: f64,
    pub interior_max: f64,
    pub interior_median: f64,
}

/// Index range kept after dropping `floor(edge·len)` samples per side.
pub fn interior_range(len: usize, edge: f64) -> std::ops::Range<usize> {
    let cut = ((edge * len as f64).floor() as usize).min(len / 2);
    cut..len - cut
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn max(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NAN, f64::max)
}

impl ErrorStats {
    pub fn of(errors: &[f64], edge: f64) -> Self {
        let inner = &errors[interior_range(errors.len(), edge)];
        Self { max: max(errors), median: median(errors), interior_max: max(inner), interior_median: median(inner) }
    }
}

/// Pointwise errors of a decomposition against ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub edge_exclude: f64,
    /// `|f_Br − f̃_Br|`, Hz.
    #[serde(skip)]
    pub df_br: Vec<f64>,
    /// `|f_Bi − f̃_Bi|`, Hz.
    #[serde(skip)]
    pub df_bi: Vec<f64>,
    /// `|Ã − A| / |A|`.
    #[serde(skip)]
    pub envelope_rel: Vec<f64>,
    /// `|Ã − A|`.
    #[serde(skip)]
    pub envelope_abs: Vec<f64>,
    /// `|B̃ − B|`, rad.
    #[serde(skip)]
    pub phase_abs: Vec<f64>,
    /// `|B̆ − B|` for the phase computed without unwrapping, rad.
    #[serde(skip)]
    pub wrapped_phase_abs: Vec<f64>,
    /// `|f_A − f̃_A|`, Hz, when `f̃_A` was computed.
    #[serde(skip)]
    pub df_a: Option<Vec<f64>>,
    pub f_br: ErrorStats,
    pub f_bi: ErrorStats,
    pub envelope: ErrorStats,
    pub envelope_abs_error: ErrorStats,
    pub phase: ErrorStats,
    pub wrapped_phase: ErrorStats,
    pub f_a: Option<ErrorStats>,
}

/// Compares a decomposition with the truth sampled on the same grid.
pub fn compute_metrics(p: &PolarDecomposition, f: &InstFrequencySeries, truth: &GroundTruth, edge: f64) -> Metrics {
    let peak = truth.envelope.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let floor = peak * 1e-12;
    let df_br: Vec<f64> = f.f_b.iter().zip(&truth.frequency).map(|(e, t)| (e.re - t.re).abs()).collect();
    let df_bi: Vec<f64> = f.f_b.iter().zip(&truth.frequency).map(|(e, t)| (e.im - t.im).abs()).collect();
    let envelope_abs: Vec<f64> = p.envelope.iter().zip(&truth.envelope).map(|(e, t)| (e - t).norm()).collect();
    let envelope_rel: Vec<f64> =
        envelope_abs.iter().zip(&truth.envelope).map(|(e, t)| e / t.norm().max(floor)).collect();
    let diff = |x: &[Complex64]| -> Vec<f64> { x.iter().zip(&truth.phase).map(|(e, t)| (e - t).norm()).collect() };
    let phase_abs = diff(&p.phase);
    let wrapped_phase_abs = diff(&p.wrapped_phase);
    let df_a: Option<Vec<f64>> =
        f.f_a.as_ref().map(|fa| fa.iter().zip(&truth.envelope_frequency).map(|(e, t)| (e - t).abs()).collect());
    Metrics {
        edge_exclude: edge,
        f_br: ErrorStats::of(&df_br, edge),
        f_bi: ErrorStats::of(&df_bi, edge),
        envelope: ErrorStats::of(&envelope_rel, edge),
        envelope_abs_error: ErrorStats::of(&envelope_abs, edge),
        phase: ErrorStats::of(&phase_abs, edge),
        wrapped_phase: ErrorStats::of(&wrapped_phase_abs, edge),
        f_a: df_a.as_deref().map(|v| ErrorStats::of(v, edge)),
        df_br,
        df_bi,
        envelope_rel,
        envelope_abs,
        phase_abs,
        wrapped_phase_abs,
        df_a,
    }
}

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value < threshold`.
    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, passed: value < threshold }
    }

    /// Passes when `value > threshold`.
    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, passed: value > threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub samples: usize,
    pub t0: f64,
    pub dt: f64,
    pub masked: usize,
    pub canonical_violations: usize,
    pub real_half_periods: usize,
    pub imag_half_periods: usize,
    pub envelope_negative_energy: Option<f64>,
    pub f_a_available: bool,
}

impl Diagnostics {
    pub fn of(p: &PolarDecomposition, f: &InstFrequencySeries) -> Self {
        Self {
            samples: p.len(),
            t0: p.t0,
            dt: p.dt,
            masked: p.masked.len(),
            canonical_violations: p.canonical_violations,
            real_half_periods: p.real_cases.len() + 1,
            imag_half_periods: p.imag_cases.len() + 1,
            envelope_negative_energy: f.envelope_negative_energy,
            f_a_available: f.f_a.is_some(),
        }
    }
}

/// Everything a run reports, in insertion order.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RunReport {
    /// Effective configuration, defaults included.
    pub config: Vec<(String, String)>,
    pub warnings: Vec<String>,
    pub sections: Vec<(String, Diagnostics)>,
    pub metrics: Vec<(String, Metrics)>,
    pub checks: Vec<Check>,
    /// Stage wall times in seconds; empty unless requested, so that reports
    /// stay reproducible.
    pub timings: Vec<(String, f64)>,
    /// SHA-256 of each output artifact.
    pub checksums: Vec<(String, String)>,
}

fn stats_lines(out: &mut String, prefix: &str, s: &ErrorStats) {
    for (k, v) in
        [("max", s.max), ("median", s.median), ("interior_max", s.interior_max), ("interior_median", s.interior_median)]
    {
        let _ = writeln!(out, "{prefix}.{k} = {}", fmt_num(v));
    }
}

impl RunReport {
    pub fn set_config(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.into(), value.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `key = value`, one entry per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.config {
            let _ = writeln!(out, "config.{k} = {v}");
        }
        for (n, w) in self.warnings.iter().enumerate() {
            let _ = writeln!(out, "warning.{n} = {w}");
        }
        for (name, d) in &self.sections {
            let p = format!("{name}.diagnostics");
            let _ = writeln!(out, "{p}.samples = {}", d.samples);
            let _ = writeln!(out, "{p}.t0 = {}", fmt_num(d.t0));
            let _ = writeln!(out, "{p}.dt = {}", fmt_num(d.dt));
            let _ = writeln!(out, "{p}.masked = {}", d.masked);
            let _ = writeln!(out, "{p}.canonical_violations = {}", d.canonical_violations);
            let _ = writeln!(out, "{p}.real_half_periods = {}", d.real_half_periods);
            let _ = writeln!(out, "{p}.imag_half_periods = {}", d.imag_half_periods);
            match d.envelope_negative_energy {
                Some(v) => {
                    let _ = writeln!(out, "{p}.envelope_negative_energy = {}", fmt_num(v));
                }
                None => {
                    let _ = writeln!(out, "{p}.envelope_negative_energy = n/a");
                }
            }
            let _ = writeln!(out, "{p}.f_a_available = {}", d.f_a_available);
        }
        for (name, m) in &self.metrics {
            let p = format!("{name}.metrics");
            let _ = writeln!(out, "{p}.edge_exclude = {}", m.edge_exclude);
            stats_lines(&mut out, &format!("{p}.df_br_hz"), &m.f_br);
            stats_lines(&mut out, &format!("{p}.df_bi_hz"), &m.f_bi);
            stats_lines(&mut out, &format!("{p}.envelope_rel"), &m.envelope);
            stats_lines(&mut out, &format!("{p}.envelope_abs"), &m.envelope_abs_error);
            stats_lines(&mut out, &format!("{p}.phase_rad"), &m.phase);
            stats_lines(&mut out, &format!("{p}.wrapped_phase_rad"), &m.wrapped_phase);
            if let Some(fa) = &m.f_a {
                stats_lines(&mut out, &format!("{p}.df_a_hz"), fa);
            }
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "fail" };
            let _ = writeln!(
                out,
                "check.{} = {verdict} (value {}, threshold {})",
                c.name,
                fmt_num(c.value),
                fmt_num(c.threshold)
            );
        }
        for (stage, secs) in &self.timings {
            let _ = writeln!(out, "timing.{stage}_s = {secs:.6}");
        }
        for (name, sum) in &self.checksums {
            let _ = writeln!(out, "sha256.{name} = {sum}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
