// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Fixed-point arithmetic on `BigInt` for ceilings that land near integers.
//!
//! Values are stored as `round(x * 2^FRAC_BITS)`. Every routine here carries
//! an absolute error far below `2^-200`, which is what the integer-boundary
//! re-checks rely on.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub const FRAC_BITS: u32 = 320;

/// Fixed-point real with `FRAC_BITS` fractional bits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << FRAC_BITS)
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Fixed((BigInt::from(p) << FRAC_BITS) / BigInt::from(q))
    }

    fn one_raw() -> BigInt {
        BigInt::one() << FRAC_BITS
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC_BITS)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &o.0)
    }

    pub fn neg(&self) -> Fixed {
        Fixed(-&self.0)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_positive_or_zero(&self) -> bool {
        !self.0.is_negative()
    }

    /// `sqrt(self)` for nonnegative values.
    pub fn sqrt(&self) -> Fixed {
        assert!(!self.0.is_negative(), "sqrt of negative value");
        Fixed((&self.0 << FRAC_BITS).sqrt())
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Fixed {
        assert!(self.0.is_positive(), "ln of nonpositive value");
        // self = m * 2^e with m in [1, 2).
        let bits = self.0.bits() as i64;
        let e = bits - 1 - FRAC_BITS as i64;
        let m = if e >= 0 {
            &self.0 >> e as u32
        } else {
            &self.0 << (-e) as u32
        };
        let one = Fixed::from_int(1);
        let m = Fixed(m);
        let z = m.sub(&one).div(&m.add(&one));
        let ln_m = atanh_series(&z).add(&atanh_series(&z));
        ln_m.add(&ln2().mul(&Fixed::from_int(e)))
    }

    /// `e^self`.
    pub fn exp(&self) -> Fixed {
        // exp(x) = exp(x / 2^s)^(2^s) with |x / 2^s| < 1/2.
        let mut s = 0u32;
        let half = Fixed::one_raw() >> 1;
        let mut r = self.0.clone();
        while r.abs() >= half {
            r >>= 1;
            s += 1;
        }
        let r = Fixed(r);
        let mut term = Fixed::from_int(1);
        let mut sum = term.clone();
        let mut i = 1i64;
        loop {
            term = Fixed(term.mul(&r).0 / BigInt::from(i));
            if term.0.is_zero() {
                break;
            }
            sum = sum.add(&term);
            i += 1;
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }

    pub fn to_f64(&self) -> f64 {
        let sign = self.0.sign();
        let mag = self.0.abs();
        let shift = mag.bits().saturating_sub(62);
        let top: i64 = (&mag >> shift).try_into().unwrap_or(i64::MAX);
        let v = top as f64 * 2f64.powi(shift as i32 - FRAC_BITS as i32);
        if sign == Sign::Minus {
            -v
        } else {
            v
        }
    }

    /// Smallest integer at or above the value, treating values within
    /// `2^-(FRAC_BITS - 64)` of an integer as that integer.
    pub fn ceil_snapped(&self) -> i64 {
        let tol = BigInt::one() << 64u32;
        let floor = self.0.clone() >> FRAC_BITS;
        let rem = &self.0 - (&floor << FRAC_BITS);
        let floor: i64 = floor.try_into().expect("ceiling exceeds i64");
        if rem <= tol {
            floor
        } else {
            floor + 1
        }
    }
}

fn atanh_series(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut j = 3i64;
    loop {
        power = power.mul(&z2);
        let term = Fixed(&power.0 / BigInt::from(j));
        if term.0.is_zero() {
            break;
        }
        sum = sum.add(&term);
        j += 2;
    }
    sum
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2() -> Fixed {
    let t = atanh_series(&Fixed::from_ratio(1, 3));
    t.add(&t)
}

/// Distance of `x` to the nearest integer.
fn integer_gap(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Ceiling of an expression evaluated in `f64`, re-evaluated in fixed point
/// whenever the float lands within `1e-6` of an integer.
pub(crate) fn guarded_ceil(fast: f64, exact: impl FnOnce() -> Fixed) -> i64 {
    if fast.is_finite() && integer_gap(fast) > 1e-6 {
        fast.ceil() as i64
    } else {
        exact().ceil_snapped()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14 * b.abs().max(1.0)
    }

    #[test]
    fn ln_matches_float() {
        for v in [1i64, 2, 3, 10, 1000, 1 << 40] {
            assert!(close(Fixed::from_int(v).ln().to_f64(), (v as f64).ln()), "ln {v}");
        }
        assert!(close(Fixed::from_ratio(1, 7).ln().to_f64(), (1.0f64 / 7.0).ln()));
        assert!(close(ln2().to_f64(), std::f64::consts::LN_2));
    }

    #[test]
    fn exp_and_sqrt_match_float() {
        for v in [-3i64, -1, 0, 1, 5] {
            assert!(close(Fixed::from_int(v).exp().to_f64(), (v as f64).exp()), "exp {v}");
        }
        assert!(close(Fixed::from_int(2).sqrt().to_f64(), 2f64.sqrt()));
    }

    #[test]
    fn exp_inverts_ln() {
        let x = Fixed::from_ratio(7, 3);
        let back = x.ln().exp();
        let err = back.sub(&x).0.abs();
        assert!(err < (BigInt::one() << (FRAC_BITS - 250)));
    }

    #[test]
    fn ceil_snaps_near_integers() {
        assert_eq!(Fixed::from_int(4).ceil_snapped(), 4);
        assert_eq!(Fixed::from_ratio(9, 2).ceil_snapped(), 5);
        assert_eq!(Fixed::from_int(-2).ceil_snapped(), -2);
        let nearly = Fixed(Fixed::from_int(4).0 - BigInt::from(5));
        assert_eq!(nearly.ceil_snapped(), 4);
    }
}
