//! Selection-function models of publication bias.
//!
//! The crate is organised around the probability `p` that a study gets
//! published and the ratio `r = (1 - p) / p` of unpublished to published
//! studies that follows from it:
//!
//! - [`model`]: the two-parameter step selection function `(alpha, beta)`,
//!   its ratio, contour solving and the large / very-large classification.
//! - [`piecewise`]: selection functions that are constant on each cell of an
//!   `m`-interval partition of the z-line.
//! - [`gaussian`]: the standard normal CDF and quantile, used to move
//!   between a tail mass `alpha` and a threshold `z0`.
//! - [`failsafe`]: Stouffer combination, the fail-safe number and the
//!   all-nulls-true total-study count.
//! - [`simulate`]: a seeded Monte Carlo check of the analytic results.

pub mod error;
pub mod failsafe;
pub mod gaussian;
pub mod model;
mod numeric;
pub mod piecewise;
pub mod simulate;

pub use error::{Error, Result};
pub use failsafe::{FsnReport, StudySet, UnpublishedEstimate};
pub use gaussian::{DensitySpec, TailConvention};
pub use model::{PublicationStats, Ratio, RatioClass, StepSelectionModel};
pub use piecewise::PiecewiseSelectionModel;
pub use simulate::{Selection, SimulationConfig, SimulationOutcome};
