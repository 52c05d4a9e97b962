//! Hyperanalytic signals of complex series and their unique polar form.
//!
//! A complex signal `z` is lifted to the quaternion series
//! `s = z + qht(z)·j` and factored as `s = A·e^{Bj}` with a complex envelope
//! `A` and a complex phase `B`. The derivative of `B` gives the instantaneous
//! complex frequency `f_B`.
//!
//! ```
//! use hyperpolar::{decompose, ModelSpec, PolarConfig};
//!
//! let model = hyperpolar::model::generate(&ModelSpec::reference(2000.0)).unwrap();
//! let (polar, freq) = decompose(&model.truth.s, &PolarConfig::default()).unwrap();
//! assert!((polar.envelope[0].re - 1.0).abs() < 1e-9);
//! assert!((freq.f_b[400].re - 20.0).abs() < 1e-6);
//! ```

// `!(x < tol)` forms are deliberate: NaN has to fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod polar;
pub mod quaternion;
pub mod report;
pub mod series;
pub mod transform;

pub use error::{DecomposeError, Error, PolarError, QuaternionError, SeriesError, Stage};
pub use model::{generate, GroundTruth, ModelSpec};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineInput, PipelineOutput, SignalPath};
pub use polar::{decompose, InstFrequencySeries, PhaseRange, PolarConfig, PolarDecomposition};
pub use quaternion::Quaternion;
pub use series::{ComplexSeries, QuaternionSeries};
pub use transform::{hyperanalytic, qft_j, qft_j_inv, qht_j};
