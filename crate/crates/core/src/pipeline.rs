//! End-to-end driver: input, hyperanalytic signal, decomposition, metrics.

use std::time::Instant;

use crate::error::{DecomposeError, Error, Stage};
use crate::io::{complex_csv, polar_csv};
use crate::model::{generate, GroundTruth, ModelSpec};
use crate::polar::{decompose, InstFrequencySeries, PolarConfig, PolarDecomposition};
use crate::report::{compute_metrics, sha256_hex, Diagnostics, RunReport, DEFAULT_EDGE_EXCLUDE};
use crate::series::{ComplexSeries, QuaternionSeries};
use crate::transform::hyperanalytic;

#[derive(Debug, Clone)]
pub enum PipelineInput {
    Series(ComplexSeries),
    Model(ModelSpec),
}

/// Which quaternion series is decomposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalPath {
    /// `s = z + qht(z)·j` built from the complex input.
    Full,
    /// The model's own `s`; only meaningful for generated inputs.
    Exact,
}

impl SignalPath {
    pub fn name(self) -> &'static str {
        match self {
            SignalPath::Full => "full",
            SignalPath::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub polar: PolarConfig,
    /// Fraction of samples excluded at each end for interior statistics.
    pub edge_exclude: f64,
    /// Expected sampling rate for file inputs; checked against the time column.
    pub fs: Option<f64>,
    /// Include `phi_A`, `f_A` and the carrier in the output CSV.
    pub extended_output: bool,
    pub record_timings: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            polar: PolarConfig::default(),
            edge_exclude: DEFAULT_EDGE_EXCLUDE,
            fs: None,
            extended_output: false,
            record_timings: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), Error> {
        self.polar.validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(0.0..0.5).contains(&self.edge_exclude) {
            return Err(Error::Config(format!("edge_exclude must be in [0, 0.5), got {}", self.edge_exclude)));
        }
        if let Some(fs) = self.fs {
            if !(fs.is_finite() && fs > 0.0) {
                return Err(Error::Config(format!("fs must be > 0, got {fs}")));
            }
        }
        Ok(())
    }

    /// Writes every effective setting into `report`.
    pub fn echo(&self, report: &mut RunReport) {
        let p = &self.polar;
        report.set_config("phase_init_low", p.phase_init_range.low);
        report.set_config("phase_init_high", p.phase_init_range.high);
        report.set_config("eps_mag", p.eps_mag);
        report.set_config("eta", p.eta);
        report.set_config("mask_degenerate", p.mask_degenerate);
        report.set_config("envelope_frequency", p.envelope_frequency);
        report.set_config("edge_exclude", self.edge_exclude);
        report.set_config("fs", self.fs.map_or("from input".to_string(), |v| v.to_string()));
        report.set_config("extended_output", self.extended_output);
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub z: ComplexSeries,
    pub s: QuaternionSeries,
    pub truth: Option<GroundTruth>,
    pub decomposition: PolarDecomposition,
    pub frequency: InstFrequencySeries,
    /// Output CSV as written by the CLI.
    pub polar_csv: String,
    pub report: RunReport,
}

struct Clock {
    enabled: bool,
    last: Instant,
}

impl Clock {
    fn lap(&mut self, report: &mut RunReport, stage: &str) {
        if self.enabled {
            let now = Instant::now();
            report.timings.push((stage.into(), (now - self.last).as_secs_f64()));
            self.last = now;
        }
    }
}

/// Runs the pipeline on `input`. `SignalPath::Exact` requires a model input.
pub fn run_pipeline(input: PipelineInput, config: &PipelineConfig, path: SignalPath) -> Result<PipelineOutput, Error> {
    config.validate()?;
    let mut report = RunReport::default();
    config.echo(&mut report);
    report.set_config("path", path.name());
    let mut clock = Clock { enabled: config.record_timings, last: Instant::now() };

    let (z, truth) = match input {
        PipelineInput::Series(z) => {
            if let Some(fs) = config.fs {
                if ((1.0 / z.dt()) - fs).abs() > 1e-6 * fs {
                    return Err(Error::Config(format!(
                        "fs = {fs} Hz disagrees with the input grid ({} Hz)",
                        1.0 / z.dt()
                    )));
                }
            }
            report.set_config("source", "file");
            (z, None)
        }
        PipelineInput::Model(spec) => {
            report.set_config("source", "model");
            report.set_config("model.duration", spec.duration);
            report.set_config("model.fs", spec.fs);
            match &spec.kind {
                crate::model::ModelKind::Reference => report.set_config("model.kind", "reference"),
                crate::model::ModelKind::AmFm(m) => {
                    report.set_config("model.kind", "am_fm");
                    report.set_config("model.magnitude", &m.magnitude);
                    report.set_config("model.envelope_phase", &m.envelope_phase);
                    report.set_config("model.c", &m.c);
                    report.set_config("model.d", &m.d);
                }
            }
            let g = generate(&spec)?;
            report.warnings.extend(g.warnings);
            clock.lap(&mut report, "generate");
            (g.z, Some(g.truth))
        }
    };

    let s = match (path, &truth) {
        (SignalPath::Full, _) => {
            hyperanalytic(&z).map_err(|e| DecomposeError { stage: Stage::Transform, source: e.into() })?
        }
        (SignalPath::Exact, Some(t)) => t.s.clone(),
        (SignalPath::Exact, None) => {
            return Err(Error::Config("the exact path needs a generated model".into()));
        }
    };
    clock.lap(&mut report, "hyperanalytic");

    let (decomposition, frequency) = decompose(&s, &config.polar)?;
    clock.lap(&mut report, "decompose");

    report.sections.push((path.name().into(), Diagnostics::of(&decomposition, &frequency)));
    if let Some(t) = &truth {
        report.metrics.push((path.name().into(), compute_metrics(&decomposition, &frequency, t, config.edge_exclude)));
        clock.lap(&mut report, "metrics");
    }

    let polar_csv = polar_csv(&decomposition, &frequency, config.extended_output);
    if truth.is_some() {
        report.checksums.push((format!("{}.input_csv", path.name()), sha256_hex(complex_csv(&z).as_bytes())));
    }
    report.checksums.push((format!("{}.polar_csv", path.name()), sha256_hex(polar_csv.as_bytes())));

    Ok(PipelineOutput { z, s, truth, decomposition, frequency, polar_csv, report })
}
