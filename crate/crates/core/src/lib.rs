// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Deterministic constructions of splitters, bisectors, mapping families and
//! uniform universal sets, each paired with a brute-force certifier.
//!
//! Every builder is deterministic: identical parameters and [`BuildConfig`]
//! produce identical families, independent of the rayon thread count.

pub mod bisector;
pub mod bounds;
pub mod config;
pub mod error;
pub mod family;
pub mod format;
pub mod function;
pub mod greedy;
pub mod interval;
pub mod mapping;
pub mod precise;
pub mod primes;
pub mod ratio;
pub mod smooth;
pub mod splitter;
pub mod verify;

mod certify;
mod combin;

pub use config::{BuildConfig, MappingStrategy, PoolBudget};
pub use error::{Error, Result};
pub use family::{Family, FamilyKind, Provenance, Uniformity};
pub use function::{compose, make_function, Function};
pub use ratio::Fraction;
pub use verify::{VerifyReport, Witness};

/// Decay-profile sums evaluated in double precision.
pub type DecayProfile64 = bounds::DecayProfile<f64>;
/// Decay-profile sums evaluated in single precision.
pub type DecayProfile32 = bounds::DecayProfile<f32>;
