//! Right quaternionic Fourier transform, quaternionic Hilbert transform and
//! hyperanalytic-signal construction, all along the `j` axis.
//!
//! Along `j` the right QFT of `z = z_r + i·z_i` splits into two ordinary
//! DFTs, `F_j[z_r] + i·F_j[z_i]`, with `j` playing the imaginary unit of each
//! DFT. The discrete convention is the usual one: the forward transform is
//! unnormalized with kernel `e^{-j ω_k n dt}` (time measured from the first
//! sample), the inverse carries the `1/N` factor, and bins follow the
//! standard DFT layout with negative frequencies in the upper half.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::SeriesError;
use crate::quaternion::Quaternion;
use crate::series::{ComplexSeries, QuaternionSeries, MIN_LEN};

/// Spectrum of the right QFT along `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSpectrum {
    /// Angular frequency of each bin, rad/s.
    pub frequencies: Vec<f64>,
    pub coefficients: Vec<Quaternion>,
    /// Grid of the series the spectrum came from.
    pub t0: f64,
    pub dt: f64,
}

impl QSpectrum {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Fraction of spectral energy in strictly negative bins. DC and the
    /// Nyquist bin of an even-length spectrum count as neither side.
    pub fn negative_energy_ratio(&self) -> f64 {
        let n = self.len();
        let mut neg = 0.0;
        let mut total = 0.0;
        for (k, c) in self.coefficients.iter().enumerate() {
            let e = c.norm_sqr();
            total += e;
            if bin_sign(k, n) < 0 {
                neg += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            neg / total
        }
    }
}

/// `+1` for positive-frequency bins, `-1` for negative ones, `0` for DC and
/// (even `n`) Nyquist.
pub fn bin_sign(k: usize, n: usize) -> i8 {
    if k == 0 || 2 * k == n {
        0
    } else if 2 * k < n {
        1
    } else {
        -1
    }
}

/// Angular frequency of bin `k` for an `n`-point grid with spacing `dt`.
/// The Nyquist bin of an even `n` is reported as negative.
pub fn bin_frequency(k: usize, n: usize, dt: f64) -> f64 {
    let signed = if 2 * k < n { k as f64 } else { k as f64 - n as f64 };
    2.0 * PI * signed / (n as f64 * dt)
}

fn check_len(n: usize) -> Result<(), SeriesError> {
    if n < MIN_LEN {
        return Err(SeriesError::TooShort { len: n, min: MIN_LEN });
    }
    Ok(())
}

fn fft_forward(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

fn fft_inverse(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Right QFT of a quaternion series `q = (w + y·j) + i·(x + z·j)`.
///
/// Each `{1, j}` half is an ordinary complex signal with `j` as its unit, so
/// the transform is `F_j[w + y·j] + i·F_j[x + z·j]`.
pub fn qft_j_quaternion(s: &QuaternionSeries) -> Result<QSpectrum, SeriesError> {
    let n = s.len();
    check_len(n)?;
    let mut first: Vec<Complex64> = s.values().iter().map(|q| Complex64::new(q.r, q.j)).collect();
    let mut second: Vec<Complex64> = s.values().iter().map(|q| Complex64::new(q.i, q.k)).collect();
    fft_forward(&mut first);
    fft_forward(&mut second);
    let coefficients = first.iter().zip(&second).map(|(p, r)| Quaternion::new(p.re, r.re, p.im, r.im)).collect();
    Ok(QSpectrum {
        frequencies: (0..n).map(|k| bin_frequency(k, n, s.dt())).collect(),
        coefficients,
        t0: s.t0(),
        dt: s.dt(),
    })
}

/// Right QFT of a complex series: `F_j[z_r] + i·F_j[z_i]`.
pub fn qft_j(z: &ComplexSeries) -> Result<QSpectrum, SeriesError> {
    check_len(z.len())?;
    let embedded =
        QuaternionSeries::new(z.t0(), z.dt(), z.values().iter().map(|&v| Quaternion::from_complex(v)).collect())?;
    qft_j_quaternion(&embedded)
}

/// Inverse right QFT. For the spectrum of a complex series the `j` and `k`
/// parts of the result vanish up to rounding.
pub fn qft_j_inv(spec: &QSpectrum) -> Result<QuaternionSeries, SeriesError> {
    let n = spec.len();
    check_len(n)?;
    let mut first: Vec<Complex64> = spec.coefficients.iter().map(|q| Complex64::new(q.r, q.j)).collect();
    let mut second: Vec<Complex64> = spec.coefficients.iter().map(|q| Complex64::new(q.i, q.k)).collect();
    fft_inverse(&mut first);
    fft_inverse(&mut second);
    let values = first.iter().zip(&second).map(|(p, r)| Quaternion::new(p.re, r.re, p.im, r.im)).collect();
    QuaternionSeries::new(spec.t0, spec.dt, values)
}

/// Discrete Hilbert transform of a real sequence via the multiplier
/// `-j·sgn(ω)`: positive bins times `-j`, negative bins times `+j`, DC and
/// Nyquist zeroed.
pub fn hilbert_real(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_forward(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        *c = match bin_sign(k, n) {
            1 => Complex64::new(c.im, -c.re),
            -1 => Complex64::new(-c.im, c.re),
            _ => Complex64::new(0.0, 0.0),
        };
    }
    fft_inverse(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Quaternionic Hilbert transform along `j`: `H[z_r] + i·H[z_i]`.
pub fn qht_j(z: &ComplexSeries) -> Result<ComplexSeries, SeriesError> {
    check_len(z.len())?;
    let hr = hilbert_real(&z.real());
    let hi = hilbert_real(&z.imag());
    ComplexSeries::from_parts(z.t0(), z.dt(), &hr, &hi)
}

/// Hyperanalytic signal `s = z + qht_j(z)·j`. The `{1, i}` half of the
/// result is the input, bit for bit.
pub fn hyperanalytic(z: &ComplexSeries) -> Result<QuaternionSeries, SeriesError> {
    let o = qht_j(z)?;
    let values = z.values().iter().zip(o.values()).map(|(&zn, &on)| Quaternion::cayley_join(zn, on)).collect();
    QuaternionSeries::new(z.t0(), z.dt(), values)
}

/// Fraction of energy in strictly negative bins of the ordinary DFT of a
/// complex sequence (imaginary unit `i`).
pub fn complex_negative_energy_ratio(values: &[Complex64]) -> f64 {
    let n = values.len();
    let mut buf = values.to_vec();
    fft_forward(&mut buf);
    let mut neg = 0.0;
    let mut total = 0.0;
    for (k, c) in buf.iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        if bin_sign(k, n) < 0 {
            neg += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        neg / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: Vec<Complex64>, dt: f64) -> ComplexSeries {
        ComplexSeries::new(0.0, dt, values).unwrap()
    }

    /// Direct evaluation of `Σ z[n] e^{-j ω_k n dt}` with quaternion products.
    fn brute_qft(z: &ComplexSeries) -> Vec<Quaternion> {
        let n = z.len();
        (0..n)
            .map(|k| {
                let w = 2.0 * PI * k as f64 / n as f64;
                z.values().iter().enumerate().fold(Quaternion::ZERO, |acc, (m, &v)| {
                    let kernel = Quaternion::J.scale(-w * m as f64).exp();
                    acc + Quaternion::from_complex(v) * kernel
                })
            })
            .collect()
    }

    #[test]
    fn dc_signal_concentrates_in_zero_bin() {
        let z = series(vec![Complex64::new(1.0, 0.0); 8], 1.0);
        let spec = qft_j(&z).unwrap();
        assert!((spec.coefficients[0].r - 8.0).abs() < 1e-12);
        for c in &spec.coefficients[1..] {
            assert!(c.norm() < 1e-12);
        }
        assert_eq!(spec.frequencies[0], 0.0);
    }

    #[test]
    fn real_input_is_classical_dft_with_j() {
        let x: Vec<f64> = (0..10).map(|n| (n as f64 * 0.7).sin() + 0.1 * n as f64).collect();
        let z = ComplexSeries::from_parts(0.0, 0.1, &x, &[0.0; 10]).unwrap();
        let spec = qft_j(&z).unwrap();
        for (k, c) in spec.coefficients.iter().enumerate() {
            let mut re = 0.0;
            let mut im = 0.0;
            for (m, &v) in x.iter().enumerate() {
                let a = -2.0 * PI * (k * m) as f64 / 10.0;
                re += v * a.cos();
                im += v * a.sin();
            }
            assert!((c.r - re).abs() < 1e-12 && (c.j - im).abs() < 1e-12);
            assert!(c.i.abs() < 1e-12 && c.k.abs() < 1e-12);
        }
    }

    #[test]
    fn matches_brute_force_quaternion_sum() {
        let n = 16;
        let vals: Vec<Complex64> = (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect();
        let z = series(vals, 1.0);
        let fast = qft_j(&z).unwrap();
        let slow = brute_qft(&z);
        for (a, b) in fast.coefficients.iter().zip(&slow) {
            assert!((*a - *b).norm() < 1e-12, "{a} vs {b}");
        }
        // odd length as well
        let z = series((0..9).map(|m| Complex64::new(m as f64, (m * m) as f64 * 0.1)).collect(), 1.0);
        for (a, b) in qft_j(&z).unwrap().coefficients.iter().zip(&brute_qft(&z)) {
            assert!((*a - *b).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let z = series((0..37).map(|m| Complex64::new((m as f64).cos(), (m as f64 * 0.3).sin())).collect(), 0.01);
        let back = qft_j_inv(&qft_j(&z).unwrap()).unwrap();
        for (q, v) in back.values().iter().zip(z.values()) {
            assert!((q.complex_part() - v).norm() < 1e-13);
            assert!(q.j.abs() < 1e-13 && q.k.abs() < 1e-13);
        }
    }

    #[test]
    fn hilbert_of_cosine_is_sine() {
        let dt = 1e-3;
        let x: Vec<f64> = (0..1000).map(|n| (2.0 * PI * 5.0 * n as f64 * dt).cos()).collect();
        let h = hilbert_real(&x);
        for (n, v) in h.iter().enumerate() {
            assert!((v - (2.0 * PI * 5.0 * n as f64 * dt).sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn qht_of_complex_exponential() {
        let dt = 1e-3;
        let vals: Vec<Complex64> =
            (0..1000).map(|n| Complex64::from_polar(1.0, 2.0 * PI * 5.0 * n as f64 * dt)).collect();
        let o = qht_j(&series(vals.clone(), dt)).unwrap();
        for (a, z) in o.values().iter().zip(&vals) {
            let expect = Complex64::new(0.0, -1.0) * z;
            assert!((a - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_is_annihilated() {
        let o = qht_j(&series(vec![Complex64::new(2.5, -1.0); 12], 1.0)).unwrap();
        assert!(o.values().iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn hyperanalytic_of_cosine_is_j_carrier() {
        let dt = 1e-3;
        let x: Vec<f64> = (0..1000).map(|n| (2.0 * PI * 5.0 * n as f64 * dt).cos()).collect();
        let z = ComplexSeries::from_parts(0.0, dt, &x, &[0.0; 1000]).unwrap();
        let s = hyperanalytic(&z).unwrap();
        for (n, q) in s.values().iter().enumerate() {
            let expect = Quaternion::J.scale(2.0 * PI * 5.0 * n as f64 * dt).exp();
            assert!((*q - expect).norm() < 1e-10);
            assert_eq!(q.complex_part(), z.values()[n]);
        }
        let zero = hyperanalytic(&series(vec![Complex64::new(0.0, 0.0); 6], 1.0)).unwrap();
        assert!(zero.values().iter().all(|q| *q == Quaternion::ZERO));
    }

    #[test]
    fn too_short_rejected() {
        let z = ComplexSeries::new(0.0, 1.0, vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        assert!(qft_j(&z).is_ok());
        let spec = QSpectrum { frequencies: vec![0.0; 3], coefficients: vec![Quaternion::ONE; 3], t0: 0.0, dt: 1.0 };
        assert!(matches!(qft_j_inv(&spec), Err(SeriesError::TooShort { len: 3, .. })));
    }

    #[test]
    fn bin_layout() {
        assert_eq!(bin_sign(0, 8), 0);
        assert_eq!(bin_sign(3, 8), 1);
        assert_eq!(bin_sign(4, 8), 0);
        assert_eq!(bin_sign(5, 8), -1);
        assert_eq!(bin_sign(4, 9), 1);
        assert_eq!(bin_sign(5, 9), -1);
        assert!(bin_frequency(5, 8, 1.0) < 0.0);
    }
}
