//! Reliability analysis of a hybrid bit/semantic cellular downlink.
//!
//! Users are dropped uniformly in a disc around the base station and see
//! Rayleigh fading. Each user is served either by conventional bit
//! transmission or by semantic transmission, whichever gives the higher rate
//! while meeting a similarity threshold. The crate evaluates the resulting
//! per-user and network outage probabilities in closed form, solves for cell
//! radii that meet outage or utilization targets, and provides a Monte Carlo
//! simulator that checks every closed form independently.

pub mod design;
pub mod error;
pub mod linkmodel;
pub mod montecarlo;
pub mod outage;
pub mod ratemodel;
pub mod specfun;

#[cfg(test)]
mod testutil;

pub use design::{
    radius_for_outage_threshold, DesignTarget, RadiusSolution, SolveMethod, UtilDesign, UtilRoot, UtilRootKind,
};
pub use error::{Error, Result};
pub use linkmodel::{snr_cdf, snr_scale, NetworkParams};
pub use montecarlo::{McEstimate, McEvent, McScenario};
pub use outage::{NetOutageMode, OutageReport};
pub use ratemodel::{thresholds, RateBand, RateConfig, RateThresholds, Regime, SimilarityFit};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
