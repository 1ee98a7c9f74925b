//! Performance, power and energy models for two-cluster heterogeneous
//! multiprocessors (big.LITTLE-style), fitted from a small set of
//! Halton-sampled measurements and used to pick the Pareto-optimal
//! time/energy configurations out of the full core-count × frequency space.
//!
//! The pipeline, one module per step:
//!
//! 1. [`sampling`] draws well-spread configurations to measure,
//! 2. [`harness`] ingests measurements (or simulates them from known
//!    parameters),
//! 3. [`fitting`] recovers the chip power constants, the big-core speedup and
//!    an application's parallel fraction,
//! 4. [`models`] evaluates time and energy for every configuration of a
//!    [`platform`],
//! 5. [`pareto`] keeps the non-dominated configurations.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.
//!
//! ```
//! use hmpareto::{models, pareto, PerfParams, PlatformSpec, PowerParams};
//!
//! let platform = PlatformSpec::odroid_xu3();
//! let power = PowerParams::for_platform(&platform, 2.914e-28, 9.342e-11, 5.953e-29, 1.033e-10);
//! let app = PerfParams::new(0.6381, 1.897, 100.0, 800e6);
//! let all = models::predict_all(&app, &power, &platform).unwrap();
//! let frontier = pareto::pareto_frontier(&all).unwrap();
//! assert_eq!(all.len(), 6384);
//! assert!(frontier.iter().all(|e| e.config.big_cores == 4 && e.config.little_cores == 4));
//! ```

pub mod error;
pub mod fitting;
pub mod formats;
pub mod harness;
pub mod models;
pub mod optimize;
pub mod pareto;
pub mod platform;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ClusterSpec = platform::ClusterSpec<f64>;
pub type PlatformSpec = platform::PlatformSpec<f64>;
pub type Configuration = platform::Configuration<f64>;
pub type PerfParams = models::PerfParams<f64>;
pub type PowerParams = models::PowerParams<f64>;
pub type Estimate = models::Estimate<f64>;
pub type MeasurementRecord = fitting::MeasurementRecord<f64>;
pub type SpeedupPair = fitting::SpeedupPair<f64>;
pub type ParetoPoint = pareto::ParetoPoint<f64>;
pub type ReferencePoint = pareto::ReferencePoint<f64>;
pub type SyntheticGroundTruth = harness::SyntheticGroundTruth<f64>;
pub type Campaign = harness::Campaign<f64>;

pub type PlatformSpecF32 = platform::PlatformSpec<f32>;
pub type ConfigurationF32 = platform::Configuration<f32>;
pub type PerfParamsF32 = models::PerfParams<f32>;
pub type PowerParamsF32 = models::PowerParams<f32>;
pub type EstimateF32 = models::Estimate<f32>;

pub use sampling::SamplePlan;
