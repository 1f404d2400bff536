// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

use crate::family::Family;
use crate::verify::VerifyReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("image vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("image {value} at position {index} is outside codomain [0, {ell})")]
    ImageOutOfRange { index: usize, value: u32, ell: usize },

    #[error("inner codomain {inner_ell} does not match outer domain {outer_n}")]
    CodomainMismatch { inner_ell: usize, outer_n: usize },

    #[error("sieve limit {0} is below 2")]
    LimitTooSmall(usize),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("primes below {ell} cannot reach n^C(k,2) for n={n}, k={k}")]
    InsufficientPrimes { n: usize, k: usize, ell: usize },

    #[error("candidate pool exhausted with {remaining} targets uncovered")]
    PoolExhausted { remaining: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("measured nonuniformity {measured} exceeds allowed {allowed}")]
    NonuniformityExceeded { measured: usize, allowed: usize },

    #[error("{guesses} interval guesses exceed the budget of {budget}")]
    GuessSpaceTooLarge { guesses: u128, budget: usize },

    #[error("splitter is not uniform")]
    UniformityRequired,

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("oracle rejected the {} family built by {}", .family.kind(), .family.provenance().builder)]
    Uncertified {
        family: Box<Family>,
        report: Box<VerifyReport>,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("checksum mismatch: file says {expected}, body hashes to {found}")]
    ChecksumMismatch { expected: u32, found: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn bad(msg: impl Into<String>) -> Self {
        Error::BadParams(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::PreconditionFailed(msg.into())
    }
}
