//! Finite privacy channels and the information they leak about individuals.
//!
//! A dataset is a tuple of records, one per individual, each from a finite
//! domain; a privacy channel is a column-stochastic matrix releasing a noisy
//! output for every dataset. This crate builds such channels (randomized
//! response, discrete exponential release, discretized Gaussian release),
//! measures what they disclose (entropy, mutual information, per-individual
//! channel capacity via a finite reduction over adversarial priors), and
//! audits them against differential-privacy budgets by exact transition-ratio
//! extraction.
//!
//! All information quantities are computed in nats internally; [`InfoUnit`]
//! converts at the interfaces. Datasets, records, and outputs are indexed
//! from 0, with joint indices in mixed-radix order (coordinate 0 varying
//! fastest).

pub mod capacity;
pub mod channel;
pub mod dist;
pub mod dp;
pub mod error;
pub mod info;
pub mod mechanisms;
pub mod universe;

pub use capacity::{
    balance_delta_bound, blahut_arimoto, brute_force_capacity_oracle, enumerate_selections,
    individual_channel_capacity, reduce_channel, restricted_capacity_lower_bound, BalancePoint,
    BalanceReport, CapacityOptions, CapacityResult, IndividualCapacityReport, IndividualSummary,
    ReducedChannel, SelectionMap,
};
pub use channel::{validate_channel, ChannelMatrix, QueryTable, StochasticMatrix, ValidationReport};
pub use dist::{Distribution, InfoUnit};
pub use dp::{
    check_dp, crosscheck_independent_priors, dp_epsilon, CrosscheckReport, DpAuditReport,
    DpWitness, LeakageViolation,
};
pub use error::{Error, Result};
pub use info::{max_mutual_information, mutual_information, output_distribution};
pub use mechanisms::{
    data_independent_capacity_bound, discretize_gaussian, exponential_calibrate,
    exponential_channel, exponential_entropy, gaussian_calibrate, gaussian_capacity_bound,
    is_data_independent, is_weakly_symmetric, noise_scale_report, randomized_response_channel,
    rank_ordering, rr_calibrate, DistortionTable, GaussianSpec, Grid, NoiseScaleInputs,
    NoiseScaleReport, RankOrdering, RrCalibration,
};
pub use universe::RecordUniverse;
