//! CSV input and output.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which is
//! enough for `f64` values to round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::IoError;
use crate::model::GroundTruth;
use crate::polar::{InstFrequencySeries, PolarDecomposition};
use crate::series::ComplexSeries;

pub const INPUT_HEADER: &str = "t,z_r,z_i";
pub const POLAR_HEADER: &str = "t,a,b,c,d,f_Br,f_Bi";
pub const POLAR_EXTENDED_HEADER: &str = "t,a,b,c,d,f_Br,f_Bi,phi_A,f_A,alpha,beta,gamma";
pub const TRUTH_HEADER: &str = "t,s_r,s_i,s_j,s_k,a,b,c,d,f_Br,f_Bi,phi_A,f_A";

/// Relative tolerance on the spacing of the time column.
pub const GRID_TOLERANCE: f64 = 1e-9;

/// Formats `v` with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_row(out: &mut String, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:.16e}");
    }
    out.push('\n');
}

/// Parses `t,z_r,z_i` CSV. Blank lines are skipped; the time column must be
/// uniform within [`GRID_TOLERANCE`] of the first interval.
pub fn read_csv<R: Read>(reader: R) -> Result<ComplexSeries, IoError> {
    let mut lines = BufReader::new(reader).lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Err(IoError::Header { expected: INPUT_HEADER.into(), found: String::new() }),
    };
    let found: String = header.trim().trim_start_matches('\u{feff}').chars().filter(|c| !c.is_whitespace()).collect();
    if found != INPUT_HEADER {
        return Err(IoError::Header { expected: INPUT_HEADER.into(), found: header.trim().into() });
    }

    let mut times = Vec::new();
    let mut lines_of = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line_no = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(IoError::Malformed {
                line: line_no,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let mut nums = [0.0; 3];
        for (slot, field) in nums.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| IoError::Malformed { line: line_no, message: format!("invalid number `{field}`") })?;
        }
        times.push(nums[0]);
        lines_of.push(line_no);
        values.push(Complex64::new(nums[1], nums[2]));
    }

    if times.len() < 2 {
        return Ok(ComplexSeries::new(times.first().copied().unwrap_or(0.0), 1.0, values)?);
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(IoError::NonUniform { row: 1, line: lines_of[1] });
    }
    let t0 = times[0];
    for (row, &t) in times.iter().enumerate().skip(2) {
        let interval = t - times[row - 1];
        if (interval - dt).abs() > GRID_TOLERANCE * dt {
            return Err(IoError::NonUniform { row, line: lines_of[row] });
        }
    }
    // the mean interval is more accurate than the first difference alone
    let dt = (times[times.len() - 1] - t0) / (times.len() - 1) as f64;
    Ok(ComplexSeries::new(t0, dt, values)?)
}

pub fn read_csv_file(path: &Path) -> Result<ComplexSeries, IoError> {
    read_csv(fs::File::open(path)?)
}

/// Serializes a complex series as `t,z_r,z_i`.
pub fn complex_csv(z: &ComplexSeries) -> String {
    let mut out = String::with_capacity(z.len() * 72);
    out.push_str(INPUT_HEADER);
    out.push('\n');
    for (n, v) in z.values().iter().enumerate() {
        push_row(&mut out, &[z.time(n), v.re, v.im]);
    }
    out
}

/// Serializes a decomposition. With `extended`, adds `phi_A`, `f_A` (NaN when
/// not available) and the carrier components.
pub fn polar_csv(p: &PolarDecomposition, f: &InstFrequencySeries, extended: bool) -> String {
    let mut out = String::with_capacity(p.len() * if extended { 270 } else { 160 });
    out.push_str(if extended { POLAR_EXTENDED_HEADER } else { POLAR_HEADER });
    out.push('\n');
    let mut row = Vec::with_capacity(12);
    for n in 0..p.len() {
        row.clear();
        let (a, b, fb) = (p.envelope[n], p.phase[n], f.f_b[n]);
        row.extend([p.t0 + n as f64 * p.dt, a.re, a.im, b.re, b.im, fb.re, fb.im]);
        if extended {
            let fa = f.f_a.as_ref().map_or(f64::NAN, |v| v[n]);
            let c = p.carrier[n];
            row.extend([p.envelope_phase[n], fa, c.alpha, c.beta, c.gamma]);
        }
        push_row(&mut out, &row);
    }
    out
}

/// Serializes ground truth on the grid of `truth.s`.
pub fn truth_csv(truth: &GroundTruth) -> String {
    let s = &truth.s;
    let mut out = String::with_capacity(s.len() * 300);
    out.push_str(TRUTH_HEADER);
    out.push('\n');
    for (n, q) in s.values().iter().enumerate() {
        let (a, b, fb) = (truth.envelope[n], truth.phase[n], truth.frequency[n]);
        push_row(
            &mut out,
            &[
                s.time(n),
                q.r,
                q.i,
                q.j,
                q.k,
                a.re,
                a.im,
                b.re,
                b.im,
                fb.re,
                fb.im,
                truth.envelope_phase[n],
                truth.envelope_frequency[n],
            ],
        );
    }
    out
}

/// Parses ground truth written by [`truth_csv`].
pub fn read_truth_csv<R: Read>(reader: R) -> Result<GroundTruth, IoError> {
    let mut lines = BufReader::new(reader).lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != TRUTH_HEADER {
        return Err(IoError::Header { expected: TRUTH_HEADER.into(), found: header.trim().into() });
    }
    let mut rows: Vec<[f64; 13]> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line_no = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut row = [0.0; 13];
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != row.len() {
            return Err(IoError::Malformed {
                line: line_no,
                message: format!("expected {} fields, found {}", row.len(), fields.len()),
            });
        }
        for (slot, field) in row.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|_| IoError::Malformed { line: line_no, message: format!("invalid number `{field}`") })?;
        }
        rows.push(row);
    }
    let (t0, dt) = match rows.as_slice() {
        [first, .., last] => (first[0], (last[0] - first[0]) / (rows.len() - 1) as f64),
        _ => (0.0, 1.0),
    };
    let s = rows.iter().map(|r| crate::Quaternion::new(r[1], r[2], r[3], r[4])).collect();
    Ok(GroundTruth {
        s: crate::series::QuaternionSeries::new(t0, dt, s)?,
        envelope: rows.iter().map(|r| Complex64::new(r[5], r[6])).collect(),
        phase: rows.iter().map(|r| Complex64::new(r[7], r[8])).collect(),
        frequency: rows.iter().map(|r| Complex64::new(r[9], r[10])).collect(),
        envelope_phase: rows.iter().map(|r| r[11]).collect(),
        envelope_frequency: rows.iter().map(|r| r[12]).collect(),
    })
}

pub fn read_truth_csv_file(path: &Path) -> Result<GroundTruth, IoError> {
    read_truth_csv(fs::File::open(path)?)
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

pub fn write_csv(path: &Path, z: &ComplexSeries) -> Result<(), IoError> {
    write_file(path, &complex_csv(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series() -> ComplexSeries {
        let v = (0..9).map(|n| Complex64::new((n as f64 * 0.7).sin() / 3.0, -(n as f64).sqrt() * 1e-7)).collect();
        ComplexSeries::new(0.0, 1e-4, v).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let z = series();
        let back = read_csv(complex_csv(&z).as_bytes()).unwrap();
        assert_eq!(back.values(), z.values());
        assert_eq!(back.t0(), z.t0());
        assert!((back.dt() - z.dt()).abs() < 1e-18);
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-0.6536436208636119), "-6.5364362086361194e-1");
    }

    #[test]
    fn header_mismatch_names_expected() {
        let err = read_csv("time,re,im\n0,1,0\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains(INPUT_HEADER));
        assert!(matches!(read_csv("".as_bytes()), Err(IoError::Header { .. })));
    }

    #[test]
    fn malformed_row_reports_line() {
        let err = read_csv("t,z_r,z_i\n0,1,0\n0.1,x,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, IoError::Malformed { line: 3, .. }), "{err}");
        let err = read_csv("t,z_r,z_i\n0,1,0\n0.1,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, IoError::Malformed { line: 3, .. }));
    }

    #[test]
    fn non_uniform_grid_names_row() {
        let err = read_csv("t,z_r,z_i\n0,1,0\n0.1,1,0\n0.2,1,0\n0.35,1,0\n0.4,1,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, IoError::NonUniform { row: 3, line: 5 }), "{err}");
    }

    #[test]
    fn three_samples_are_too_short() {
        let err = read_csv("t,z_r,z_i\n0,1,0\n0.1,1,0\n0.2,1,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, IoError::Series(_)));
    }

    #[test]
    fn truth_round_trip() {
        let g = crate::model::generate(&crate::model::ModelSpec::reference(100.0)).unwrap();
        let back = read_truth_csv(truth_csv(&g.truth).as_bytes()).unwrap();
        assert_eq!(back.s.values(), g.truth.s.values());
        assert_eq!(back.phase, g.truth.phase);
        assert_eq!(back.frequency, g.truth.frequency);
    }

    #[test]
    fn decimal_grid_within_tolerance() {
        let mut text = String::from("t,z_r,z_i\n");
        for n in 0..50 {
            text.push_str(&format!("{},{},0\n", n as f64 * 0.1, n));
        }
        let z = read_csv(text.as_bytes()).unwrap();
        assert_eq!(z.len(), 50);
        assert!((z.dt() - 0.1).abs() < 1e-15);
    }
}
