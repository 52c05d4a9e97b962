//! Uniformly sampled signals.

use num_complex::Complex64;

use crate::error::SeriesError;
use crate::quaternion::Quaternion;

/// Shortest series any transform accepts.
pub const MIN_LEN: usize = 4;

fn check_grid(dt: f64, len: usize) -> Result<(), SeriesError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SeriesError::InvalidInterval(dt));
    }
    if len < MIN_LEN {
        return Err(SeriesError::TooShort { len, min: MIN_LEN });
    }
    Ok(())
}

/// Complex signal `z[n] = z_r[n] + i·z_i[n]` sampled at `t0 + n·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    t0: f64,
    dt: f64,
    values: Vec<Complex64>,
}

impl ComplexSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<Complex64>) -> Result<Self, SeriesError> {
        check_grid(dt, values.len())?;
        if let Some(n) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(SeriesError::NonFinite(n));
        }
        Ok(Self { t0, dt, values })
    }

    pub fn from_parts(t0: f64, dt: f64, re: &[f64], im: &[f64]) -> Result<Self, SeriesError> {
        if re.len() != im.len() {
            return Err(SeriesError::LengthMismatch { expected: re.len(), found: im.len() });
        }
        let values = re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Self::new(t0, dt, values)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.time(n)).collect()
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn imag(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.im).collect()
    }
}

/// Quaternion signal on the same kind of uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionSeries {
    t0: f64,
    dt: f64,
    values: Vec<Quaternion>,
}

impl QuaternionSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<Quaternion>) -> Result<Self, SeriesError> {
        check_grid(dt, values.len())?;
        if let Some(n) = values.iter().position(|q| !q.is_finite()) {
            return Err(SeriesError::NonFinite(n));
        }
        Ok(Self { t0, dt, values })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.time(n)).collect()
    }

    /// The `{1, i}` half, i.e. `z` when this is `z + o·j`.
    pub fn complex_part(&self) -> ComplexSeries {
        ComplexSeries { t0: self.t0, dt: self.dt, values: self.values.iter().map(|q| q.complex_part()).collect() }
    }

    /// The `{j, k}` half, i.e. `o` when this is `z + o·j`.
    pub fn j_part(&self) -> ComplexSeries {
        ComplexSeries { t0: self.t0, dt: self.dt, values: self.values.iter().map(|q| q.cayley_split().z2).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_bad_grid() {
        let v = vec![Complex64::new(1.0, 0.0); 3];
        assert_eq!(ComplexSeries::new(0.0, 1.0, v.clone()), Err(SeriesError::TooShort { len: 3, min: 4 }));
        let v4 = vec![Complex64::new(1.0, 0.0); 4];
        assert_eq!(ComplexSeries::new(0.0, 0.0, v4.clone()), Err(SeriesError::InvalidInterval(0.0)));
        let mut bad = v4;
        bad[2].im = f64::NAN;
        assert_eq!(ComplexSeries::new(0.0, 1.0, bad), Err(SeriesError::NonFinite(2)));
    }

    #[test]
    fn halves_split_cleanly() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let s = QuaternionSeries::new(0.5, 0.25, vec![q; 4]).unwrap();
        assert_eq!(s.complex_part().values()[0], Complex64::new(1.0, 2.0));
        assert_eq!(s.j_part().values()[3], Complex64::new(3.0, 4.0));
        assert_eq!(s.time(2), 1.0);
    }
}
