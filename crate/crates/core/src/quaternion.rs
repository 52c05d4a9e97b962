//! Hamilton quaternions with the exponential and logarithm used by the polar
//! decomposition.
//!
//! The basis products follow `i² = j² = k² = ijk = -1`, so `ij = k`,
//! `jk = i`, `ki = j` and each product anticommutes. A quaternion is also
//! available in its Cayley-Dickson form `q = z1 + z2·j` with
//! `z1 = r + i·i` and `z2 = j + i·k`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::QuaternionError;

/// Below this vector norm `exp` switches to the series for `sin(x)/x`.
const EXP_SERIES_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub r: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

/// Cayley-Dickson pair `(z1, z2)` with `q = z1 + z2·j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPair {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(r: f64, i: f64, j: f64, k: f64) -> Self {
        Self { r, i, j, k }
    }

    pub const fn from_real(r: f64) -> Self {
        Self::new(r, 0.0, 0.0, 0.0)
    }

    /// Embeds `re + i·im` into the `{1, i}` plane.
    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im, 0.0, 0.0)
    }

    /// Builds `z1 + z2·j`.
    pub fn cayley_join(z1: Complex64, z2: Complex64) -> Self {
        Self::new(z1.re, z1.im, z2.re, z2.im)
    }

    pub fn cayley_split(self) -> ComplexPair {
        ComplexPair { z1: Complex64::new(self.r, self.i), z2: Complex64::new(self.j, self.k) }
    }

    /// The `{1, i}` half of the Cayley-Dickson form.
    pub fn complex_part(self) -> Complex64 {
        Complex64::new(self.r, self.i)
    }

    pub fn scalar_part(self) -> f64 {
        self.r
    }

    pub fn vector_part(self) -> Quaternion {
        Self::new(0.0, self.i, self.j, self.k)
    }

    pub fn conj(self) -> Self {
        Self::new(self.r, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn vector_norm(self) -> f64 {
        (self.i * self.i + self.j * self.j + self.k * self.k).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.r * s, self.i * s, self.j * s, self.k * s)
    }

    /// `conj(q) / ‖q‖²`.
    pub fn inverse(self) -> Result<Self, QuaternionError> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(QuaternionError::ZeroInverse);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// `e^q = e^{S(q)} (cos‖V‖ + V/‖V‖ · sin‖V‖)`.
    ///
    /// For a vanishing vector part the removable singularity of `sin(x)/x` is
    /// handled with its Taylor series, so `exp` of a real quaternion is the
    /// real exponential.
    pub fn exp(self) -> Self {
        let scale = self.r.exp();
        let theta = self.vector_norm();
        let sinc = if theta < EXP_SERIES_THRESHOLD { 1.0 - theta * theta / 6.0 } else { theta.sin() / theta };
        let v = scale * sinc;
        Self::new(scale * theta.cos(), self.i * v, self.j * v, self.k * v)
    }

    /// `ln q = ln‖q‖ + V/‖V‖ · arccos(S/‖q‖)`.
    ///
    /// The angle is evaluated as `atan2(‖V‖, S)`, which equals the arccos form
    /// and keeps full precision near the real axis. Zero and negative reals
    /// have no defined axis and are rejected.
    pub fn ln(self) -> Result<Self, QuaternionError> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(QuaternionError::ZeroLog);
        }
        let theta_v = self.vector_norm();
        if theta_v == 0.0 {
            if self.r > 0.0 {
                return Ok(Self::from_real(self.r.ln()));
            }
            return Err(QuaternionError::LogAxisUndefined { value: self.r });
        }
        let angle = theta_v.atan2(self.r);
        let f = angle / theta_v;
        Ok(Self::new(norm.ln(), self.i * f, self.j * f, self.k * f))
    }

    pub fn is_finite(self) -> bool {
        self.r.is_finite() && self.i.is_finite() && self.j.is_finite() && self.k.is_finite()
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.r + o.r, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.r - o.r, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.r, -self.i, -self.j, -self.k)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.r * q.r - p.i * q.i - p.j * q.j - p.k * q.k,
            p.r * q.i + p.i * q.r + p.j * q.k - p.k * q.j,
            p.r * q.j - p.i * q.k + p.j * q.r + p.k * q.i,
            p.r * q.k + p.i * q.j - p.j * q.i + p.k * q.r,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        self.scale(1.0 / s)
    }
}

impl From<Complex64> for Quaternion {
    fn from(z: Complex64) -> Self {
        Quaternion::from_complex(z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.r, self.i, self.j, self.k)
    }
}
