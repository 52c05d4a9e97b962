#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use hyperpolar::model::{AmFmModel, ModelKind, Profile, Term};
use hyperpolar::ModelSpec;
use rand::Rng;

pub const RANDOM_FS: f64 = 2000.0;

/// Random AM-FM model on `[0, 1]` s with roughly `zeros` envelope zero
/// crossings. With `dips`, a second, strictly positive factor adds local
/// minima of the envelope modulus that are not zero crossings. The model is
/// canonical: `|A|(0)` positive and well clear of zero, `φ_A(0) ∈ (0, π/2)`,
/// `c, d ≥ 0` and increasing.
pub fn random_model<R: Rng>(rng: &mut R, zeros: usize, dips: bool) -> ModelSpec {
    // keeps the first zero crossing away from the first samples
    let p = rng.gen_range(-(FRAC_PI_2 - 0.3)..FRAC_PI_2 - 0.3) + if rng.gen_bool(0.5) { PI } else { 0.0 };
    let f = zeros as f64 / 2.0;
    let magnitude = match (zeros, dips) {
        (0, false) => Profile(vec![Term::Const(rng.gen_range(0.5..2.0))]),
        (0, true) => Profile(vec![
            Term::Const(rng.gen_range(1.3..2.0)),
            Term::Cos { amp: 1.0, freq: rng.gen_range(1.0..5.0), phase: p },
        ]),
        (_, false) => Profile(vec![Term::Cos { amp: 1.0, freq: f, phase: p }]),
        (_, true) => {
            // cos(x)·(1.4 + cos(y)) written as a sum
            let g = rng.gen_range(0.5..3.0);
            let q = rng.gen_range(0.0..TAU);
            Profile(vec![
                Term::Cos { amp: 1.4, freq: f, phase: p },
                Term::Cos { amp: 0.5, freq: f + g, phase: p + q },
                Term::Cos { amp: 0.5, freq: f - g, phase: p - q },
            ])
        }
    };
    // canonical models start with a positive envelope magnitude
    let magnitude = if magnitude.value(0.0) < 0.0 {
        Profile(
            magnitude
                .0
                .into_iter()
                .map(|t| match t {
                    Term::Const(v) => Term::Const(-v),
                    Term::Cos { amp, freq, phase } => Term::Cos { amp: -amp, freq, phase },
                    other => other,
                })
                .collect(),
        )
    } else {
        magnitude
    };
    let phi0 = rng.gen_range(0.2..FRAC_PI_2 - 0.2);
    let envelope_phase =
        Profile(vec![Term::Const(phi0), Term::Sin { amp: 0.1, freq: rng.gen_range(0.2..2.0), phase: 0.0 }]);
    let c = Profile(vec![Term::Linear(TAU * rng.gen_range(20.0..60.0))]);
    let d = Profile(vec![Term::Const(rng.gen_range(0.0..2.0)), Term::Linear(TAU * rng.gen_range(5.0..30.0))]);
    ModelSpec { kind: ModelKind::AmFm(AmFmModel { magnitude, envelope_phase, c, d }), duration: 1.0, fs: RANDOM_FS }
}
