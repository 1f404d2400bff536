// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Exact rational parameters (`alpha`, `beta`) and their ceilings.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::Error;

/// Nonnegative reduced fraction `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction(Ratio<u64>);

impl Fraction {
    pub fn new(numer: u64, denom: u64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::bad("fraction with zero denominator"));
        }
        Ok(Fraction(Ratio::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Fraction(Ratio::from_integer(0))
    }

    pub fn one() -> Self {
        Fraction(Ratio::from_integer(1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    /// `ceil(self * m)`.
    pub fn ceil_mul(&self, m: usize) -> usize {
        let p = self.numer() as u128;
        let q = self.denom() as u128;
        ((p * m as u128).div_ceil(q)) as usize
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        self.0
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `p/q` or a bare integer.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::bad(format!("not a fraction: {s:?}")))
        };
        match s.split_once('/') {
            Some((p, q)) => Fraction::new(parse(p)?, parse(q)?),
            None => Fraction::new(parse(s)?, 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_mul_rounds_up() {
        let a: Fraction = "1/3".parse().unwrap();
        assert_eq!(a.ceil_mul(9), 3);
        assert_eq!(a.ceil_mul(10), 4);
        assert_eq!(Fraction::zero().ceil_mul(10), 0);
    }

    #[test]
    fn parse_reduces_and_rejects() {
        let a: Fraction = "4/8".parse().unwrap();
        assert_eq!(a.to_string(), "1/2");
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("x".parse::<Fraction>().is_err());
        assert_eq!("3".parse::<Fraction>().unwrap(), Fraction::new(3, 1).unwrap());
    }
}
