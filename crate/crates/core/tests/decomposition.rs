mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use hyperpolar::model::{AmFmModel, ModelKind, Profile};
use hyperpolar::polar::MinimumClass;
use hyperpolar::report::interior_range;
use hyperpolar::{
    decompose, generate, hyperanalytic, run_pipeline, ComplexSeries, ModelSpec, PipelineConfig, PipelineInput,
    PolarConfig, Quaternion, QuaternionSeries, SignalPath,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn am_real_signal_through_full_path() {
    let fs = 2000.0;
    let z: Vec<Complex64> = (0..2000)
        .map(|n| {
            let t = n as f64 / fs;
            Complex64::new((TAU * 20.0 * t).cos() * (TAU * 2.0 * t).cos(), 0.0)
        })
        .collect();
    let z = ComplexSeries::new(0.0, 1.0 / fs, z).unwrap();
    let s = hyperanalytic(&z).unwrap();
    // zeros of both factors fall on the grid, where the axis is undefined
    assert!(decompose(&s, &PolarConfig::default()).is_err());
    let cfg = PolarConfig { mask_degenerate: true, ..PolarConfig::default() };
    let (p, f) = decompose(&s, &cfg).unwrap();
    assert!(p.masked.contains(&250) && p.masked.contains(&25));
    let mut flips = 0;
    for (n, a) in p.envelope.iter().enumerate() {
        let t = n as f64 / fs;
        assert!((a.re - (TAU * 2.0 * t).cos()).abs() < 1e-9, "n={n}: {a}");
        assert!(a.im.abs() < 1e-9);
        if n > 0 && a.re.signum() != p.envelope[n - 1].re.signum() {
            flips += 1;
        }
    }
    assert_eq!(flips, 4);
    for n in interior_range(p.len(), 0.05) {
        assert!((f.f_b[n] - Complex64::new(20.0, 0.0)).norm() < 1e-6, "n={n}: {}", f.f_b[n]);
    }
}

#[test]
fn reference_model_exact_path() {
    let g = generate(&ModelSpec::reference(10_000.0)).unwrap();
    let (p, f) = decompose(&g.truth.s, &PolarConfig::default()).unwrap();
    for n in 0..p.len() {
        let s = g.truth.s.values()[n];
        // reconstruction and magnitude
        assert!((p.reconstruct(n) - s).norm() <= 1e-6 * s.norm());
        assert!((p.envelope[n].norm() - s.norm()).abs() <= 1e-12 * s.norm());
        // carrier against e^{Bj}
        let b = g.truth.phase[n];
        let want = Quaternion::new(0.0, 0.0, b.re, b.im).exp();
        assert!((p.carrier[n].quaternion() - want).norm() < 1e-10);
    }
    assert!((p.phase[0] - Complex64::new(0.0, 4.0)).norm() < 1e-15);
    assert_eq!(p.envelope_phase[0], 0.0);
    assert!((f.f_b[2500] - Complex64::new(20.0, 6.0)).norm() < 1e-6);
    assert_eq!(p.canonical_violations, 0);
}

#[test]
fn constant_envelope_has_no_flips() {
    let a = Complex64::new(0.3, 0.4).exp();
    let fs = 1000.0;
    let vals: Vec<Quaternion> = (0..500)
        .map(|n| {
            let t = n as f64 / fs;
            Quaternion::from_complex(a) * Quaternion::new(0.0, 0.0, TAU * 15.0 * t, TAU * 5.0 * t + 0.2).exp()
        })
        .collect();
    let s = QuaternionSeries::new(0.0, 1.0 / fs, vals).unwrap();
    let (p, f) = decompose(&s, &PolarConfig::default()).unwrap();
    // rounding ripple may produce minima, never zero crossings
    assert!(p.real_cases.iter().chain(&p.imag_cases).all(|c| c.class == MinimumClass::PositiveMinimum));
    assert!(p.envelope.iter().all(|e| (e - a).norm() < 1e-12));
    assert!(f.f_a.is_some());
    for v in f.f_b.iter().skip(1).take(498) {
        assert!((v - Complex64::new(15.0, 5.0)).norm() < 1e-9);
    }
}

#[test]
fn identical_inputs_give_identical_outputs() {
    let g = generate(&ModelSpec::reference(4000.0)).unwrap();
    let s = hyperanalytic(&g.z).unwrap();
    let a = decompose(&s, &PolarConfig::default()).unwrap();
    let b = decompose(&s, &PolarConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn errors_name_stage_and_sample() {
    let mut v = vec![Quaternion::new(1.0, 0.5, 0.2, 0.1); 32];
    v[17] = Quaternion::ZERO;
    let s = QuaternionSeries::new(0.0, 0.01, v).unwrap();
    let err = decompose(&s, &PolarConfig::default()).unwrap_err();
    assert_eq!(err.source.index(), Some(17));
    let msg = err.to_string();
    assert!(msg.starts_with("axis_normalize:"), "{msg}");
    assert!(msg.contains("17"));
}

#[test]
fn am_fm_model_is_a_real_cosine() {
    let spec = ModelSpec {
        kind: ModelKind::AmFm(AmFmModel {
            magnitude: Profile::constant(1.0),
            envelope_phase: Profile::constant(0.0),
            c: "lin:125.66370614359172".parse().unwrap(),
            d: Profile::constant(0.0),
        }),
        // 2000 samples, whole periods
        duration: 1999.0 / 2000.0,
        fs: 2000.0,
    };
    // cos‖B‖ vanishes on the grid, so the axis needs masking there
    let mut cfg = PipelineConfig::default();
    cfg.polar.mask_degenerate = true;
    let out = run_pipeline(PipelineInput::Model(spec), &cfg, SignalPath::Full).unwrap();
    for (n, z) in out.z.values().iter().enumerate() {
        assert!((z.re - (TAU * 20.0 * n as f64 / 2000.0).cos()).abs() < 1e-12);
        assert_eq!(z.im, 0.0);
    }
    // a real cosine over whole periods lifts to a pure j rotation
    let m = &out.report.metrics[0].1;
    assert!(m.f_br.interior_max < 1e-6, "{}", m.f_br.interior_max);
    assert!(m.envelope.max < 1e-9);
}

#[test]
fn full_path_report_has_metrics() {
    let out =
        run_pipeline(PipelineInput::Model(ModelSpec::reference(10_000.0)), &PipelineConfig::default(), SignalPath::Full)
            .unwrap();
    let text = out.report.to_text();
    assert!(text.contains("full.metrics.df_br_hz.interior_median = "));
    assert!(text.contains("config.edge_exclude = 0.05"));
    assert_eq!(out.decomposition.len(), 4001);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_models_decompose_exactly(seed in any::<u64>(), zeros in 0usize..=12, dips in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = common::random_model(&mut rng, zeros, dips);
        let g = generate(&spec).unwrap();
        let (p, f) = decompose(&g.truth.s, &PolarConfig::default()).unwrap();
        for n in interior_range(p.len(), 0.05) {
            prop_assert!((p.envelope[n] - g.truth.envelope[n]).norm() < 1e-6);
            prop_assert!((p.phase[n] - g.truth.phase[n]).norm() < 1e-6, "n={} {} vs {}", n, p.phase[n], g.truth.phase[n]);
        }
        prop_assert!((0.0..=FRAC_PI_2).contains(&p.envelope_phase[0]));
        prop_assert!(p.phase[0].norm() < 2.0 * PI);
        for w in p.phase.windows(2) {
            prop_assert!(w[1].re >= w[0].re && w[1].im >= w[0].im);
        }
        prop_assert!(f.f_b.len() == p.len());
    }
}
