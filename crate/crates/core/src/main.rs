use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperpolar::io::{self, fmt_num};
use hyperpolar::model::{AmFmModel, ModelKind, Profile};
use hyperpolar::report::{compute_metrics, sha256_hex, Check, RunReport};
use hyperpolar::{
    run_pipeline, Error, ModelSpec, PhaseRange, PipelineConfig, PipelineInput, PipelineOutput, SignalPath,
};

const EXIT_THRESHOLD: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hyperpolar",
    version,
    about = "Hyperanalytic signal and unique polar decomposition of complex signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic model and write `z` (and optionally its ground truth).
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        /// Output CSV with columns `t,z_r,z_i`.
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth CSV.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Decompose a complex signal read from CSV.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Ground truth for error metrics, as written by `generate --truth`.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Directory for per-panel plot data.
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generate a model, decompose it along both paths and check the error
    /// thresholds. Exits with status 4 when a threshold is missed.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        /// Directory for `z.csv`, `truth.csv`, `polar_exact.csv`, `polar_full.csv`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    Reference,
    AmFm,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "reference")]
    model: ModelName,
    /// Sampling rate, Hz.
    #[arg(long, default_value_t = 10_000.0)]
    fs: f64,
    /// Duration, s (default 0.4 for the reference model, 1 otherwise).
    #[arg(long)]
    duration: Option<f64>,
    /// Envelope magnitude profile for `am-fm`, e.g. `cos:1,2,0`.
    #[arg(long, default_value = "const:1")]
    magnitude: String,
    /// Envelope phase profile for `am-fm`.
    #[arg(long, default_value = "const:0.5")]
    envelope_phase: String,
    /// `c(t)` profile for `am-fm`.
    #[arg(long, default_value = "lin:125.66370614359172")]
    c: String,
    /// `d(t)` profile for `am-fm`.
    #[arg(long, default_value = "lin:62.83185307179586")]
    d: String,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec, Error> {
        Ok(match self.model {
            ModelName::Reference => ModelSpec { duration: self.duration.unwrap_or(0.4), ..ModelSpec::reference(self.fs) },
            ModelName::AmFm => ModelSpec {
                kind: ModelKind::AmFm(AmFmModel {
                    magnitude: self.magnitude.parse::<Profile>()?,
                    envelope_phase: self.envelope_phase.parse()?,
                    c: self.c.parse()?,
                    d: self.d.parse()?,
                }),
                duration: self.duration.unwrap_or(1.0),
                fs: self.fs,
            },
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// Text report (`key = value` per line).
    #[arg(long)]
    report: Option<PathBuf>,
    /// JSON report.
    #[arg(long)]
    report_json: Option<PathBuf>,
    /// `key=value` file; its settings override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    phase_init_low: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    phase_init_high: f64,
    /// Fraction of samples excluded at each end for interior metrics.
    #[arg(long, default_value_t = 0.05)]
    edge_exclude: f64,
    #[arg(long, default_value_t = 1e-12)]
    eps_mag: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    /// Interpolate through degenerate samples instead of failing.
    #[arg(long)]
    mask_degenerate: bool,
    /// Skip the envelope frequency.
    #[arg(long)]
    no_envelope_frequency: bool,
    /// Expected sampling rate of the input file, Hz.
    #[arg(long = "input-fs")]
    input_fs: Option<f64>,
    /// Add `phi_A,f_A,alpha,beta,gamma` columns.
    #[arg(long)]
    extended: bool,
    /// Record stage timings in the report.
    #[arg(long)]
    timings: bool,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Error> {
    value.parse().map_err(|_| Error::Config(format!("config key `{key}`: invalid value `{value}`")))
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(e.into()))?;
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

impl RunArgs {
    fn config(&self) -> Result<PipelineConfig, Error> {
        let mut low = self.phase_init_low;
        let mut high = self.phase_init_high;
        let mut cfg = PipelineConfig {
            edge_exclude: self.edge_exclude,
            fs: self.input_fs,
            extended_output: self.extended,
            record_timings: self.timings,
            ..PipelineConfig::default()
        };
        cfg.polar.eps_mag = self.eps_mag;
        cfg.polar.eta = self.eta;
        cfg.polar.mask_degenerate = self.mask_degenerate;
        cfg.polar.envelope_frequency = !self.no_envelope_frequency;
        if let Some(path) = &self.config {
            for (k, v) in read_config_file(path)? {
                match k.as_str() {
                    "phase_init_low" => low = parse_value(&k, &v)?,
                    "phase_init_high" => high = parse_value(&k, &v)?,
                    "edge_exclude" => cfg.edge_exclude = parse_value(&k, &v)?,
                    "eps_mag" => cfg.polar.eps_mag = parse_value(&k, &v)?,
                    "eta" => cfg.polar.eta = parse_value(&k, &v)?,
                    "mask_degenerate" => cfg.polar.mask_degenerate = parse_value(&k, &v)?,
                    "envelope_frequency" => cfg.polar.envelope_frequency = parse_value(&k, &v)?,
                    "input_fs" | "fs" => cfg.fs = Some(parse_value(&k, &v)?),
                    "extended" => cfg.extended_output = parse_value(&k, &v)?,
                    "timings" => cfg.record_timings = parse_value(&k, &v)?,
                    other => return Err(Error::Config(format!("unknown config key `{other}`"))),
                }
            }
        }
        cfg.polar.phase_init_range = PhaseRange::new(low, high).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    fn write_reports(&self, report: &RunReport) -> Result<(), Error> {
        if let Some(p) = &self.report {
            io::write_file(p, &report.to_text())?;
        }
        if let Some(p) = &self.report_json {
            io::write_file(p, &report.to_json())?;
        }
        Ok(())
    }
}

fn write_plot_data(dir: &Path, out: &PipelineOutput) -> Result<(), Error> {
    let p = &out.decomposition;
    let f = &out.frequency;
    let truth = out.truth.as_ref();
    let metrics = truth.map(|t| compute_metrics(p, f, t, 0.0));
    let t = |n: usize| p.t0 + n as f64 * p.dt;

    let mut panels: Vec<(&str, String)> = Vec::new();
    for (name, part) in [("panel_a_envelope_real.csv", 0), ("panel_b_envelope_imag.csv", 1)] {
        let mut s = String::from(if truth.is_some() { "t,recovered,truth\n" } else { "t,recovered\n" });
        for n in 0..p.len() {
            let pick = |z: num_complex::Complex64| if part == 0 { z.re } else { z.im };
            let _ = write!(s, "{},{}", fmt_num(t(n)), fmt_num(pick(p.envelope[n])));
            if let Some(tr) = truth {
                let _ = write!(s, ",{}", fmt_num(pick(tr.envelope[n])));
            }
            s.push('\n');
        }
        panels.push((name, s));
    }
    for (name, part) in [("panel_c_phase_real.csv", 0), ("panel_d_phase_imag.csv", 1)] {
        let mut s = String::from(if truth.is_some() { "t,unwrapped,wrapped,truth\n" } else { "t,unwrapped,wrapped\n" });
        for n in 0..p.len() {
            let pick = |z: num_complex::Complex64| if part == 0 { z.re } else { z.im };
            let _ = write!(s, "{},{},{}", fmt_num(t(n)), fmt_num(pick(p.phase[n])), fmt_num(pick(p.wrapped_phase[n])));
            if let Some(tr) = truth {
                let _ = write!(s, ",{}", fmt_num(pick(tr.phase[n])));
            }
            s.push('\n');
        }
        panels.push((name, s));
    }
    for (name, part) in [("panel_e_frequency_real.csv", 0), ("panel_f_frequency_imag.csv", 1)] {
        let mut s = String::from(if truth.is_some() { "t,recovered,truth,abs_error\n" } else { "t,recovered\n" });
        for n in 0..p.len() {
            let pick = |z: num_complex::Complex64| if part == 0 { z.re } else { z.im };
            let _ = write!(s, "{},{}", fmt_num(t(n)), fmt_num(pick(f.f_b[n])));
            if let (Some(tr), Some(m)) = (truth, &metrics) {
                let err = if part == 0 { m.df_br[n] } else { m.df_bi[n] };
                let _ = write!(s, ",{},{}", fmt_num(pick(tr.frequency[n])), fmt_num(err));
            }
            s.push('\n');
        }
        panels.push((name, s));
    }
    for (name, contents) in panels {
        io::write_file(&dir.join(name), &contents)?;
    }
    Ok(())
}

fn analyze(
    input: &Path,
    out_path: &Path,
    truth: Option<&Path>,
    plot_dir: Option<&Path>,
    run: &RunArgs,
) -> Result<ExitCode, Error> {
    let cfg = run.config()?;
    let z = io::read_csv_file(input)?;
    let mut out = run_pipeline(PipelineInput::Series(z), &cfg, SignalPath::Full)?;
    if let Some(path) = truth {
        let t = io::read_truth_csv_file(path)?;
        if t.s.len() != out.decomposition.len() {
            return Err(Error::Config(format!(
                "truth has {} samples, input has {}",
                t.s.len(),
                out.decomposition.len()
            )));
        }
        out.report
            .metrics
            .push(("full".into(), compute_metrics(&out.decomposition, &out.frequency, &t, cfg.edge_exclude)));
        out.truth = Some(t);
    }
    io::write_file(out_path, &out.polar_csv)?;
    if let Some(dir) = plot_dir {
        write_plot_data(dir, &out)?;
    }
    run.write_reports(&out.report)?;
    Ok(ExitCode::SUCCESS)
}

/// Error thresholds checked by `verify`.
fn threshold_checks(exact: &PipelineOutput, full: &PipelineOutput) -> Vec<Check> {
    let e = &exact.report.metrics[0].1;
    let f = &full.report.metrics[0].1;
    vec![
        Check::below("exact.envelope_max_abs", e.envelope_abs_error.max, 1e-6),
        Check::below("exact.df_br_interior_max_hz", e.f_br.interior_max, 1e-6),
        Check::below("exact.df_bi_interior_max_hz", e.f_bi.interior_max, 0.01),
        Check::below("exact.phase_interior_max_rad", e.phase.interior_max, 0.05),
        Check::above("exact.wrapped_phase_max_rad", e.wrapped_phase.max, 1.0),
        Check::below("full.envelope_rel_interior_max", f.envelope.interior_max, 0.01),
        Check::below("full.df_br_interior_median_hz", f.f_br.interior_median, 0.05),
        Check::below("full.df_bi_interior_max_hz", f.f_bi.interior_max, 0.5),
    ]
}

fn verify(model: &ModelArgs, out_dir: Option<&Path>, run: &RunArgs) -> Result<ExitCode, Error> {
    let cfg = run.config()?;
    let spec = model.spec()?;
    let exact = run_pipeline(PipelineInput::Model(spec.clone()), &cfg, SignalPath::Exact)?;
    let full = run_pipeline(PipelineInput::Model(spec), &cfg, SignalPath::Full)?;

    let mut report = exact.report.clone();
    report.config.retain(|(k, _)| k != "path");
    report.set_config("paths", "exact,full");
    report.sections.extend(full.report.sections.iter().cloned());
    report.metrics.extend(full.report.metrics.iter().cloned());
    report.timings.extend(full.report.timings.iter().map(|(k, v)| (format!("full.{k}"), *v)));
    report.checks = threshold_checks(&exact, &full);

    if let Some(dir) = out_dir {
        let truth = exact.truth.as_ref().expect("generated input has truth");
        let files = [
            ("z.csv", io::complex_csv(&exact.z)),
            ("truth.csv", io::truth_csv(truth)),
            ("polar_exact.csv", exact.polar_csv.clone()),
            ("polar_full.csv", full.polar_csv.clone()),
        ];
        report.checksums.clear();
        for (name, contents) in files {
            io::write_file(&dir.join(name), &contents)?;
            report.checksums.push((name.into(), sha256_hex(contents.as_bytes())));
        }
    } else {
        report.checksums.extend(full.report.checksums.iter().cloned());
    }

    run.write_reports(&report)?;
    for c in &report.checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        println!("{verdict} {} = {} (threshold {})", c.name, fmt_num(c.value), fmt_num(c.threshold));
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_THRESHOLD) })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Generate { model, out, truth } => {
            let g = hyperpolar::generate(&model.spec()?)?;
            for w in &g.warnings {
                eprintln!("warning: {w}");
            }
            io::write_csv(&out, &g.z)?;
            if let Some(path) = truth {
                io::write_file(&path, &io::truth_csv(&g.truth))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { input, out, truth, emit_plot_data, run } => {
            analyze(&input, &out, truth.as_deref(), emit_plot_data.as_deref(), &run)
        }
        Command::Verify { model, out_dir, run } => verify(&model, out_dir.as_deref(), &run),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
