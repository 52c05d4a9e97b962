use std::f64::consts::TAU;
use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hyperpolar::model::ModelSpec;
use hyperpolar::{decompose, generate, PolarConfig};
use hyperpolar_ffi::*;

fn reference() -> (Vec<f64>, Vec<f64>, f64) {
    let g = generate(&ModelSpec::reference(2000.0)).unwrap();
    let re = g.z.values().iter().map(|z| z.re).collect();
    let im = g.z.values().iter().map(|z| z.im).collect();
    (re, im, g.z.dt())
}

fn last_message() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe { hp_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn complex_input_matches_the_library() {
    let (re, im, dt) = reference();
    let mut h = ptr::null_mut();
    let cfg = hp_config_default();
    let st = unsafe { hp_decompose_complex(re.as_ptr(), im.as_ptr(), re.len(), 0.0, dt, &cfg, &mut h) };
    assert_eq!(st, HpStatus::Ok);
    let n = unsafe { hp_len(h) };
    assert_eq!(n, re.len());

    let g = generate(&ModelSpec::reference(2000.0)).unwrap();
    let s = hyperpolar::hyperanalytic(&g.z).unwrap();
    let (p, f) = decompose(&s, &PolarConfig::default()).unwrap();

    let (mut a, mut b, mut c, mut d) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut fr, mut fi) = (vec![0.0; n], vec![0.0; n]);
    let (mut al, mut be, mut ga) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    unsafe {
        assert_eq!(hp_envelope(h, a.as_mut_ptr(), b.as_mut_ptr(), n), HpStatus::Ok);
        assert_eq!(hp_phase(h, c.as_mut_ptr(), d.as_mut_ptr(), n), HpStatus::Ok);
        assert_eq!(hp_frequency(h, fr.as_mut_ptr(), fi.as_mut_ptr(), n), HpStatus::Ok);
        assert_eq!(hp_carrier(h, al.as_mut_ptr(), be.as_mut_ptr(), ga.as_mut_ptr(), n), HpStatus::Ok);
    }
    for k in 0..n {
        assert_eq!((a[k], b[k]), (p.envelope[k].re, p.envelope[k].im));
        assert_eq!((c[k], d[k]), (p.phase[k].re, p.phase[k].im));
        assert_eq!((fr[k], fi[k]), (f.f_b[k].re, f.f_b[k].im));
        assert_eq!((al[k], be[k], ga[k]), (p.carrier[k].alpha, p.carrier[k].beta, p.carrier[k].gamma));
    }
    assert_eq!(unsafe { hp_canonical_violations(h) }, p.canonical_violations);
    unsafe { hp_free(h) };
}

#[test]
fn quaternion_input_recovers_a_constant_envelope() {
    let fs = 1000.0;
    let mut q = Vec::new();
    for n in 0..400 {
        let t = n as f64 / fs;
        let s = hyperpolar::Quaternion::from_complex(num_complex::Complex64::new(0.6, 0.8))
            * hyperpolar::Quaternion::new(0.0, 0.0, TAU * 15.0 * t, TAU * 5.0 * t + 0.2).exp();
        q.extend([s.r, s.i, s.j, s.k]);
    }
    let mut h = ptr::null_mut();
    let st = unsafe { hp_decompose_quaternion(q.as_ptr(), 400, 0.0, 1.0 / fs, ptr::null(), &mut h) };
    assert_eq!(st, HpStatus::Ok);
    let (mut a, mut b, mut fa, mut phi) = (vec![0.0; 400], vec![0.0; 400], vec![0.0; 400], vec![0.0; 400]);
    unsafe {
        assert_eq!(hp_envelope(h, a.as_mut_ptr(), b.as_mut_ptr(), 400), HpStatus::Ok);
        assert_eq!(hp_envelope_phase(h, phi.as_mut_ptr(), 400), HpStatus::Ok);
        assert_eq!(hp_envelope_frequency(h, fa.as_mut_ptr(), 400), HpStatus::Ok);
        hp_free(h);
    }
    assert!(a.iter().all(|v| (v - 0.6).abs() < 1e-12));
    assert!(b.iter().all(|v| (v - 0.8).abs() < 1e-12));
    assert!(phi.iter().all(|v| (v - 0.8f64.atan2(0.6)).abs() < 1e-12));
    assert!(fa.iter().all(|v| v.abs() < 1e-9));
}

#[test]
fn hyperanalytic_matches_the_library() {
    let (re, im, dt) = reference();
    let mut out = vec![0.0; 4 * re.len()];
    let st = unsafe { hp_hyperanalytic(re.as_ptr(), im.as_ptr(), re.len(), dt, out.as_mut_ptr()) };
    assert_eq!(st, HpStatus::Ok);
    let g = generate(&ModelSpec::reference(2000.0)).unwrap();
    let s = hyperpolar::hyperanalytic(&g.z).unwrap();
    for (chunk, q) in out.chunks_exact(4).zip(s.values()) {
        assert_eq!(chunk, [q.r, q.i, q.j, q.k]);
    }
}

#[test]
fn errors_have_codes_messages_and_indices() {
    let mut h = ptr::null_mut();
    let mut q = [1.0, 0.5, 0.2, 0.1].repeat(32);
    q[4 * 17..4 * 18].fill(0.0);
    let st = unsafe { hp_decompose_quaternion(q.as_ptr(), 32, 0.0, 0.01, ptr::null(), &mut h) };
    assert_eq!(st, HpStatus::DecompositionFailed);
    assert!(h.is_null());
    assert_eq!(hp_last_error_index(), 17);
    assert!(last_message().starts_with("axis_normalize:"), "{}", last_message());
    assert_eq!(unsafe { hp_last_error_message(ptr::null_mut(), 0) }, last_message().len());

    let mut cfg = hp_config_default();
    cfg.mask_degenerate = true;
    cfg.phase_init_low = 1.0;
    cfg.phase_init_high = 2.0;
    let st = unsafe { hp_decompose_quaternion(q.as_ptr(), 32, 0.0, 0.01, &cfg, &mut h) };
    assert_eq!(st, HpStatus::InvalidArgument);
    assert_eq!(hp_last_error_index(), -1);

    let st = unsafe { hp_decompose_quaternion(q.as_ptr(), 3, 0.0, 0.01, ptr::null(), &mut h) };
    assert_eq!(st, HpStatus::InvalidArgument);
    let st = unsafe { hp_decompose_quaternion(ptr::null(), 32, 0.0, 0.01, ptr::null(), &mut h) };
    assert_eq!(st, HpStatus::NullPointer);
    let st = unsafe { hp_decompose_quaternion(q.as_ptr(), 32, 0.0, 0.01, ptr::null(), ptr::null_mut()) };
    assert_eq!(st, HpStatus::NullPointer);
    let mut bad = q.clone();
    bad[4 * 5 + 2] = f64::NAN;
    let st = unsafe { hp_decompose_quaternion(bad.as_ptr(), 32, 0.0, 0.01, ptr::null(), &mut h) };
    assert_eq!(st, HpStatus::InvalidArgument);
    assert_eq!(hp_last_error_index(), 5);

    // success clears the error
    cfg = hp_config_default();
    cfg.mask_degenerate = true;
    let st = unsafe { hp_decompose_quaternion(q.as_ptr(), 32, 0.0, 0.01, &cfg, &mut h) };
    assert_eq!(st, HpStatus::Ok);
    assert_eq!(unsafe { hp_last_error_message(ptr::null_mut(), 0) }, 0);
    let mut small = vec![0.0; 31];
    let st = unsafe { hp_envelope(h, small.as_mut_ptr(), small.as_mut_ptr(), 31) };
    assert_eq!(st, HpStatus::BufferTooSmall);
    // nothing is written when any output is null
    let mut full = vec![7.0; 32];
    let st = unsafe { hp_envelope(h, full.as_mut_ptr(), ptr::null_mut(), 32) };
    assert_eq!(st, HpStatus::NullPointer);
    assert!(full.iter().all(|&v| v == 7.0));
    unsafe { hp_free(h) };
    unsafe { hp_free(ptr::null_mut()) };
    assert_eq!(unsafe { hp_len(ptr::null()) }, 0);
}

#[test]
fn envelope_frequency_can_be_unavailable() {
    let (re, im, dt) = reference();
    let mut cfg = hp_config_default();
    cfg.envelope_frequency = false;
    let mut h = ptr::null_mut();
    let st = unsafe { hp_decompose_complex(re.as_ptr(), im.as_ptr(), re.len(), 0.0, dt, &cfg, &mut h) };
    assert_eq!(st, HpStatus::Ok);
    let mut fa = vec![0.0; re.len()];
    assert_eq!(unsafe { hp_envelope_frequency(h, fa.as_mut_ptr(), re.len()) }, HpStatus::NotAvailable);
    unsafe { hp_free(h) };
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target.join("libhyperpolar_ffi.a");
    assert!(lib.is_file(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(manifest.join("tests").join("smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .status()
        .expect("cc runs");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
