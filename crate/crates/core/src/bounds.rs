// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Sums of the decay profile `e^{-i/sqrt k}` over `i = 1..=t` and the
//! closed-form bounds they are compared against.

use num_traits::Float;

use crate::bisector::iteration_count;
use crate::error::Result;
use crate::precise::Fixed;
use crate::ratio::Fraction;

/// Decay profile for a given `k` and stage count `t`, generic over the float
/// type used for the sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayProfile<F: Float> {
    pub k: usize,
    pub t: usize,
    root: F,
}

impl<F: Float> DecayProfile<F> {
    pub fn new(k: usize, t: usize) -> Self {
        let root = F::from(k.max(1)).expect("k fits the float type").sqrt();
        DecayProfile { k, t, root }
    }

    /// Profile with `t = ceil(sqrt k ln(1/(1 - alpha)))`.
    pub fn for_alpha(k: usize, alpha: Fraction) -> Result<Self> {
        Ok(DecayProfile::new(k, iteration_count(k, alpha)?))
    }

    fn term(&self, i: usize) -> F {
        (-F::from(i).expect("index fits") / self.root).exp()
    }

    /// `sum e^{-i/sqrt k}`.
    pub fn sum(&self) -> F {
        (1..=self.t).fold(F::zero(), |acc, i| acc + self.term(i))
    }

    /// `sum i e^{-i/sqrt k}`.
    pub fn weighted_sum(&self) -> F {
        (1..=self.t).fold(F::zero(), |acc, i| acc + F::from(i).expect("index fits") * self.term(i))
    }

    /// `e^{-1/sqrt k} / (1 - e^{-1/sqrt k})^2 - k`; tends to -1/12.
    pub fn constant(&self) -> F {
        let q = self.term(1);
        let gap = F::one() - q;
        q / (gap * gap) - F::from(self.k).expect("k fits")
    }

    /// `1 + alpha sqrt k`.
    pub fn sum_bound(&self, alpha: F) -> F {
        F::one() + alpha * self.root
    }

    /// `-(1 - alpha) k ln(1/(1 - alpha)) + alpha (k + C)`.
    pub fn weighted_sum_bound(&self, alpha: F) -> F {
        let k = F::from(self.k).expect("k fits");
        let keep = F::one() - alpha;
        -(keep * k * (F::one() / keep).ln()) + alpha * (k + self.constant())
    }
}

/// Fixed-point counterparts of the [`DecayProfile`] quantities.
#[derive(Clone, Debug)]
pub struct PreciseDecay {
    pub k: usize,
    pub t: usize,
    pub sum: Fixed,
    pub weighted_sum: Fixed,
    pub constant: Fixed,
}

impl PreciseDecay {
    pub fn new(k: usize, t: usize) -> Self {
        let root = Fixed::from_int(k.max(1) as i64).sqrt();
        let term = |i: usize| Fixed::from_int(-(i as i64)).div(&root).exp();
        let mut sum = Fixed::from_int(0);
        let mut weighted_sum = Fixed::from_int(0);
        for i in 1..=t {
            let e = term(i);
            weighted_sum = weighted_sum.add(&Fixed::from_int(i as i64).mul(&e));
            sum = sum.add(&e);
        }
        let q = term(1);
        let gap = Fixed::from_int(1).sub(&q);
        let constant = q.div(&gap.mul(&gap)).sub(&Fixed::from_int(k as i64));
        PreciseDecay {
            k,
            t,
            sum,
            weighted_sum,
            constant,
        }
    }

    pub fn sum_bound(&self, alpha: Fraction) -> Fixed {
        let a = fixed_of(alpha);
        Fixed::from_int(1).add(&a.mul(&Fixed::from_int(self.k as i64).sqrt()))
    }

    pub fn weighted_sum_bound(&self, alpha: Fraction) -> Fixed {
        let a = fixed_of(alpha);
        let k = Fixed::from_int(self.k as i64);
        let keep = Fixed::from_int(1).sub(&a);
        let log = Fixed::from_int(1).div(&keep).ln();
        keep.mul(&k).mul(&log).neg().add(&a.mul(&k.add(&self.constant)))
    }

    /// Both sum bounds hold.
    pub fn bounds_hold(&self, alpha: Fraction) -> bool {
        self.sum_bound(alpha).sub(&self.sum).is_positive_or_zero()
            && self
                .weighted_sum
                .sub(&self.weighted_sum_bound(alpha))
                .is_positive_or_zero()
    }
}

fn fixed_of(f: Fraction) -> Fixed {
    Fixed::from_ratio(f.numer() as i64, f.denom() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DecayProfile64;

    #[test]
    fn constant_tends_to_minus_one_twelfth() {
        let c = DecayProfile64::new(10_000, 1).constant();
        assert!((c + 1.0 / 12.0).abs() < 1e-3);
    }

    #[test]
    fn float_and_fixed_agree() {
        for k in [4usize, 9, 16, 25] {
            for (p, q) in [(1u64, 4u64), (1, 2)] {
                let alpha = Fraction::new(p, q).unwrap();
                let fast = DecayProfile64::for_alpha(k, alpha).unwrap();
                let slow = PreciseDecay::new(k, fast.t);
                assert!((fast.sum() - slow.sum.to_f64()).abs() < 1e-9);
                assert!((fast.weighted_sum() - slow.weighted_sum.to_f64()).abs() < 1e-9);
                assert!((fast.constant() - slow.constant.to_f64()).abs() < 1e-9);
                assert!(slow.bounds_hold(alpha), "k={k} alpha={alpha}");
                assert!(fast.sum() <= fast.sum_bound(alpha.to_f64()));
            }
        }
    }

    #[test]
    fn single_precision_tracks_double() {
        let a = crate::DecayProfile32::new(16, 3).sum() as f64;
        let b = DecayProfile64::new(16, 3).sum();
        assert!((a - b).abs() < 1e-5);
    }
}
