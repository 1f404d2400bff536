// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Prime sieving and selection of moduli whose product defeats every
//! difference of a k-subset of `[n]`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::precise::{guarded_ceil, Fixed};

/// All primes in `[2, limit]`, ascending.
pub fn sieve(limit: usize) -> Result<Vec<usize>> {
    if limit < 2 {
        return Err(Error::LimitTooSmall(limit));
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p);
        let mut m = p.saturating_mul(p);
        while m <= limit {
            composite[m] = true;
            m += p;
        }
    }
    Ok(primes)
}

fn primes_below(bound: usize) -> Vec<usize> {
    if bound <= 2 {
        Vec::new()
    } else {
        sieve(bound - 1).expect("bound above 2")
    }
}

/// Number of unordered pairs in a k-set.
fn pairs(k: usize) -> u32 {
    (k * k.saturating_sub(1) / 2) as u32
}

/// `n^C(k,2)`, the bound every pairwise-difference product stays below.
pub fn crt_threshold(n: usize, k: usize) -> BigUint {
    BigUint::from(n).pow(pairs(k))
}

/// `ceil(k(k-1) log2 n / (4 ln k + 2 ln log2 n - 2 ln 2))`.
pub fn required_prime_count(n: usize, k: usize) -> Result<usize> {
    if k < 2 || n < k {
        return Err(Error::bad(format!(
            "required_prime_count needs n >= k >= 2, got n={n}, k={k}"
        )));
    }
    let fast = {
        let log_n = (n as f64).log2();
        let kf = k as f64;
        kf * (kf - 1.0) * log_n / (4.0 * kf.ln() + 2.0 * log_n.ln() - 2.0 * std::f64::consts::LN_2)
    };
    let exact = || {
        let ln2 = crate::precise::ln2();
        let log_n = Fixed::from_int(n as i64).ln().div(&ln2);
        let kk = Fixed::from_int((k * (k - 1)) as i64);
        let four = Fixed::from_int(4);
        let two = Fixed::from_int(2);
        let den = four
            .mul(&Fixed::from_int(k as i64).ln())
            .add(&two.mul(&log_n.ln()))
            .sub(&two.mul(&ln2));
        kk.mul(&log_n).div(&den)
    };
    Ok(guarded_ceil(fast, exact) as usize)
}

/// Which selection rule produced a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowRegime {
    /// `L <= ell < 2L` with `L = k^2 log2 n`: the largest primes below `L`.
    Dense,
    /// `ell >= 2L`: the largest `ceil(L / log2 ell)` primes below `ell`.
    Sparse,
    /// Primes below `ell` taken downward until the product reaches capacity.
    Fallback,
}

/// A set of prime moduli together with its exact product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeWindow {
    pub moduli: Vec<usize>,
    pub capacity: BigUint,
    pub required: BigUint,
    pub n: usize,
    pub k: usize,
    pub regime: WindowRegime,
    pub out_of_regime: bool,
}

impl PrimeWindow {
    fn from_moduli(mut moduli: Vec<usize>, n: usize, k: usize, regime: WindowRegime) -> Self {
        moduli.sort_unstable();
        let capacity = moduli.iter().fold(BigUint::one(), |acc, &p| acc * BigUint::from(p));
        PrimeWindow {
            moduli,
            capacity,
            required: crt_threshold(n, k),
            n,
            k,
            regime,
            out_of_regime: regime == WindowRegime::Fallback,
        }
    }

    pub fn r(&self) -> usize {
        self.moduli.len()
    }
}

/// `2^a >= n^b`, exactly.
fn pow2_at_least(a: usize, n: usize, b: usize) -> bool {
    (BigUint::one() << a) >= BigUint::from(n).pow(b as u32)
}

/// Whether `x >= k^2 log2 n` holds exactly.
pub(crate) fn at_least_k2_log_n(x: usize, n: usize, k: usize) -> bool {
    pow2_at_least(x, n, k * k)
}

/// Smallest integer at or above `k^2 log2 n`.
pub(crate) fn k2_log_n_ceil(n: usize, k: usize) -> usize {
    let guess = ((k * k) as f64 * (n.max(1) as f64).log2()).ceil().max(0.0) as usize;
    let mut x = guess.saturating_sub(2);
    while !at_least_k2_log_n(x, n, k) {
        x += 1;
    }
    x
}

/// Choose prime moduli below `ell` whose product is at least `n^C(k,2)`.
pub fn prime_window(n: usize, k: usize, ell: usize) -> Result<PrimeWindow> {
    if k < 2 {
        return Err(Error::bad(format!("prime_window needs k >= 2, got {k}")));
    }
    if ell < 3 || n < 2 {
        return Err(Error::InsufficientPrimes { n, k, ell });
    }
    let threshold = crt_threshold(n, k);
    let below_ell = primes_below(ell);
    let l_ceil = k2_log_n_ceil(n, k);
    let in_regime = k >= 8;

    let candidate = if at_least_k2_log_n(ell, n, k) && ell < 2 * l_ceil {
        // Primes strictly below k^2 log2 n.
        let below_l = primes_below(l_ceil);
        let r = required_prime_count(n.max(k), k)?;
        let take = below_l.len().min(r);
        Some(PrimeWindow::from_moduli(
            below_l[below_l.len() - take..].to_vec(),
            n,
            k,
            WindowRegime::Dense,
        ))
    } else if ell >= 2 * l_ceil {
        let r = ((k * k) as f64 * (n as f64).log2() / (ell as f64).log2()).ceil() as usize;
        let take = below_ell.len().min(r.max(1));
        Some(PrimeWindow::from_moduli(
            below_ell[below_ell.len() - take..].to_vec(),
            n,
            k,
            WindowRegime::Sparse,
        ))
    } else {
        None
    };

    if let Some(mut w) = candidate {
        if w.capacity >= threshold {
            w.out_of_regime = !in_regime;
            return Ok(w);
        }
    }

    let mut chosen = Vec::new();
    let mut product = BigUint::one();
    for &p in below_ell.iter().rev() {
        if product >= threshold {
            break;
        }
        product *= BigUint::from(p);
        chosen.push(p);
    }
    if product < threshold {
        return Err(Error::InsufficientPrimes { n, k, ell });
    }
    Ok(PrimeWindow::from_moduli(chosen, n, k, WindowRegime::Fallback))
}

/// `prod moduli >= n^C(k,2)`, exactly.
pub fn check_crt_capacity(moduli: &[usize], n: usize, k: usize) -> bool {
    let product = moduli.iter().fold(BigUint::one(), |acc, &p| acc * BigUint::from(p));
    product >= crt_threshold(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(p: usize) -> bool {
        p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
    }

    #[test]
    fn sieve_small_limits() {
        assert_eq!(sieve(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve(2).unwrap(), vec![2]);
        assert_eq!(sieve(30).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(matches!(sieve(1), Err(Error::LimitTooSmall(1))));
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let limit = 1_000_000;
        let primes = sieve(limit).unwrap();
        assert!(primes.iter().all(|&p| trial_division(p)));
        let mut it = primes.iter().peekable();
        for x in 0..=20_000 {
            let listed = it.peek() == Some(&&x);
            if listed {
                it.next();
            }
            assert_eq!(listed, trial_division(x), "x = {x}");
        }
        assert_eq!(primes.len(), 78_498);
    }

    #[test]
    fn prime_count_formula() {
        // Independent float evaluation well away from integer boundaries.
        let direct = |n: f64, k: f64| {
            let l = n.log2();
            (k * (k - 1.0) * l / (4.0 * k.ln() + 2.0 * l.ln() - 2.0 * 2f64.ln())).ceil() as usize
        };
        assert_eq!(required_prime_count(256, 8).unwrap(), direct(256.0, 8.0));
        assert_eq!(required_prime_count(256, 8).unwrap(), 41);
        assert_eq!(required_prime_count(4, 2).unwrap(), 2);
        assert!(matches!(required_prime_count(2, 3), Err(Error::BadParams(_))));
    }

    #[test]
    fn windows_at_desk_scale() {
        let w = prime_window(16, 2, 8).unwrap();
        assert_eq!(w.moduli, vec![5, 7]);
        assert!(check_crt_capacity(&w.moduli, 16, 2));
        let w = prime_window(8, 2, 11).unwrap();
        assert_eq!(w.moduli, vec![5, 7]);
        assert_eq!(w.capacity, BigUint::from(35u32));
        assert!(prime_window(2, 2, 1).is_err());
    }

    #[test]
    fn capacity_check() {
        assert!(check_crt_capacity(&[7, 5], 16, 2));
        assert!(!check_crt_capacity(&[3], 16, 2));
        assert!(check_crt_capacity(&[], 1, 2));
    }

    #[test]
    fn every_window_has_capacity() {
        for n in 2..40 {
            for k in 2..=4.min(n) {
                for ell in 3..60 {
                    if let Ok(w) = prime_window(n, k, ell) {
                        assert!(w.capacity >= w.required, "n={n} k={k} ell={ell}");
                        assert!(w.moduli.iter().all(|&p| p < ell));
                    }
                }
            }
        }
    }
}
