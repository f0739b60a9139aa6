//! Referee register auditing for research-proposal evaluation.
//!
//! * [`audit`]: SDS coverage, concentration index and cross-colonization of
//!   an expert register against the national staff roster.
//! * [`baseline`], [`weights`], [`fss`]: field-normalized, fractionally
//!   credited productivity (Fractional Scientific Strength) and its
//!   percentile ranking within each SDS.
//! * [`call_match`]: referee coverage and performance for a single call.
//!
//! Inputs are loaded through [`ingest`]; [`cli`] wires the pipelines behind
//! the `refaudit` binary.

pub mod audit;
pub mod baseline;
pub mod call_match;
pub mod cli;
pub mod error;
pub mod fss;
pub mod ingest;
pub mod model;
pub mod par;
pub mod report;
pub mod synth;
pub mod weights;

pub use error::{Error, Result};
