//! Normal numbers for generalized Lüroth series (GLS).
//!
//! A digit system assigns each digit `d` an exact rational measure `λ_d`;
//! a word's cylinder measure is the product of its digit measures. The
//! constructed number concatenates every finite word in order of
//! non-increasing measure. This crate enumerates that expansion, counts
//! block frequencies in it, and checks the counting identities and
//! asymptotics behind its normality.

pub mod asymptotics;
pub mod enumerator;
pub mod error;
pub mod fibred_system;
pub mod normality_stats;
pub mod numeric;
pub mod report;
pub mod simplex_sums;

pub use enumerator::{
    digit_stream, enumerate_prefix, threshold_counts, threshold_scan, ACounts, DigitStream, Emitted, Enumeration,
    EnumerationOptions, Expansion, ThresholdCounts, TieBreak,
};
pub use error::{Error, Result};
pub use fibred_system::{
    cylinder_measure, log_measure, make_system, parse_rational, Digit, DigitSystem, MeasureKey, SystemConfig, Threshold,
    Weight, Word,
};
pub use normality_stats::{block_counts, convergence_table, hot_spot_report, BlockCensus, CensusCounter, HotSpotReport};
pub use report::{ScanReport, ScanRow};
pub use simplex_sums::{lattice_points_t, lattice_sums, s_eps, s_for_string, s_sharp_eps, CountVector, EvalMode, SumResult};
