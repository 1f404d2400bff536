// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Lazy greedy set cover and the candidate pools it draws from.
//!
//! Selection order is fixed: highest fresh coverage first, ties to the
//! lowest candidate index. Pools are sorted by image sequence, so the tie
//! rule is lexicographic. Parallelism only touches the initial scoring pass,
//! whose result does not depend on scheduling.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::PoolBudget;
use crate::error::{Error, Result};

/// One greedy iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverageStep {
    /// Candidates whose coverage was recounted in this iteration.
    pub scanned: usize,
    /// Targets newly covered by the chosen candidate.
    pub covered: usize,
    /// Targets still uncovered before the choice.
    pub remaining: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    /// Indices into the candidate slice, in selection order.
    pub chosen: Vec<usize>,
    pub log: Vec<CoverageStep>,
}

/// Pick candidates until every target is covered.
///
/// Fails with `PoolExhausted` once no remaining candidate covers a
/// remaining target.
pub fn greedy_cover<C, T, P>(candidates: &[C], targets: &[T], covers: P) -> Result<GreedyOutcome>
where
    C: Sync,
    T: Sync,
    P: Fn(&C, &T) -> bool + Sync,
{
    let mut alive: Vec<usize> = (0..targets.len()).collect();
    let mut outcome = GreedyOutcome {
        chosen: Vec::new(),
        log: Vec::new(),
    };
    if alive.is_empty() {
        return Ok(outcome);
    }

    let scores: Vec<usize> = candidates
        .par_iter()
        .map(|c| targets.iter().filter(|t| covers(c, t)).count())
        .collect();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(i, &s)| (s, Reverse(i)))
        .collect();

    let mut scanned = candidates.len();
    let mut first = true;
    while !alive.is_empty() {
        let Some((bound, Reverse(idx))) = heap.pop() else {
            return Err(Error::PoolExhausted { remaining: alive.len() });
        };
        let fresh = if first {
            bound
        } else {
            scanned += 1;
            alive.iter().filter(|&&t| covers(&candidates[idx], &targets[t])).count()
        };
        if fresh == 0 {
            continue;
        }
        if fresh < bound {
            heap.push((fresh, Reverse(idx)));
            continue;
        }
        // fresh == bound dominates every other upper bound in the heap.
        outcome.log.push(CoverageStep {
            scanned,
            covered: fresh,
            remaining: alive.len(),
        });
        outcome.chosen.push(idx);
        alive.retain(|&t| !covers(&candidates[idx], &targets[t]));
        scanned = 0;
        first = false;
    }
    Ok(outcome)
}

/// Number of balanced maps `[t] -> [ell]` (every class of size
/// `floor(t/ell)` or `ceil(t/ell)`).
pub fn balanced_count(t: usize, ell: usize) -> BigUint {
    let q = t / ell;
    let r = t % ell;
    let fact = |m: usize| (1..=m).fold(BigUint::one(), |a, i| a * BigUint::from(i));
    let choose = |a: usize, b: usize| fact(a) / (fact(b) * fact(a - b));
    let denom = fact(q + 1).pow(r as u32) * fact(q).pow((ell - r) as u32);
    choose(ell, r) * fact(t) / denom
}

/// Balanced maps `[t] -> [ell]` in lexicographic order of image sequence.
fn enumerate_balanced(t: usize, ell: usize) -> Vec<Vec<u8>> {
    struct State {
        ell: usize,
        q: usize,
        r: usize,
        counts: Vec<usize>,
        big: usize,
        current: Vec<u8>,
        out: Vec<Vec<u8>>,
    }
    fn rec(s: &mut State, pos: usize, t: usize) {
        if pos == t {
            s.out.push(s.current.clone());
            return;
        }
        for v in 0..s.ell {
            let c = s.counts[v];
            let becomes_big = c == s.q;
            if c > s.q || (becomes_big && s.big == s.r) {
                continue;
            }
            s.counts[v] += 1;
            if becomes_big {
                s.big += 1;
            }
            let deficit: usize = s.counts.iter().map(|&c| s.q.saturating_sub(c)).sum();
            if deficit < t - pos {
                s.current[pos] = v as u8;
                rec(s, pos + 1, t);
            }
            if becomes_big {
                s.big -= 1;
            }
            s.counts[v] -= 1;
        }
    }
    let mut s = State {
        ell,
        q: t / ell,
        r: t % ell,
        counts: vec![0; ell],
        big: 0,
        current: vec![0; t],
        out: Vec::new(),
    };
    rec(&mut s, 0, t);
    s.out
}

/// Candidate pool of balanced maps: complete when small, seeded sample
/// otherwise. Returned sorted and free of duplicates.
pub fn balanced_pool(t: usize, ell: usize, budget: PoolBudget, seed: u64) -> Result<(Vec<Vec<u8>>, bool)> {
    if ell == 0 || ell > 256 {
        return Err(Error::bad(format!("pool codomain {ell} outside 1..=256")));
    }
    let full = balanced_count(t, ell).to_u64().is_some_and(|c| c <= budget.full_limit);
    if full {
        return Ok((enumerate_balanced(t, ell), true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = t / ell;
    let r = t % ell;
    let mut classes: Vec<u8> = (0..ell as u16).map(|v| v as u8).collect();
    let mut pool = Vec::with_capacity(budget.sample_size);
    for _ in 0..budget.sample_size {
        classes.shuffle(&mut rng);
        let mut images = Vec::with_capacity(t);
        for (i, &v) in classes.iter().enumerate() {
            let size = if i < r { q + 1 } else { q };
            images.extend(std::iter::repeat_n(v, size));
        }
        images.shuffle(&mut rng);
        pool.push(images);
    }
    pool.sort_unstable();
    pool.dedup();
    Ok((pool, false))
}

/// Binary candidates on `[m]` with exactly `w` ones, as bitmasks.
///
/// Sorted by image sequence, which for masks means by bit-reversed value.
pub fn weighted_pool(m: usize, w: usize, budget: PoolBudget, seed: u64) -> Result<(Vec<u128>, bool)> {
    if m > 128 || w > m {
        return Err(Error::bad(format!(
            "weighted pool needs w <= m <= 128, got m={m}, w={w}"
        )));
    }
    let total = crate::combin::binomial(m, w);
    let key = |mask: &u128| if m == 0 { 0 } else { mask.reverse_bits() >> (128 - m) };
    if total <= budget.full_limit as u128 {
        // Lexicographic image order puts zeros first, so enumerate the
        // positions of the ones in reverse-colex order.
        let mut pool: Vec<u128> = crate::combin::subset_masks(m, w);
        pool.sort_unstable_by_key(key);
        return Ok((pool, true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<usize> = (0..m).collect();
    let mut pool = Vec::with_capacity(budget.sample_size);
    for _ in 0..budget.sample_size {
        let (ones, _) = positions.partial_shuffle(&mut rng, w);
        pool.push(ones.iter().fold(0u128, |a, &x| a | (1u128 << x)));
    }
    pool.sort_unstable_by_key(key);
    pool.dedup();
    Ok((pool, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_prefers_lowest_index_on_ties() {
        // Targets 0..4; candidates as covered sets.
        let cands: Vec<Vec<usize>> = vec![vec![0, 1], vec![2, 3], vec![0, 1], vec![1, 2, 3]];
        let targets: Vec<usize> = (0..4).collect();
        let out = greedy_cover(&cands, &targets, |c, t| c.contains(t)).unwrap();
        assert_eq!(out.chosen, vec![3, 0]);
        assert_eq!(out.log[0].covered, 3);
        assert_eq!(out.log[0].remaining, 4);
        assert_eq!(out.log[1].remaining, 1);
    }

    #[test]
    fn greedy_reports_exhaustion() {
        let cands = vec![vec![0usize]];
        let targets = vec![0usize, 1];
        assert!(matches!(
            greedy_cover(&cands, &targets, |c, t| c.contains(t)),
            Err(Error::PoolExhausted { remaining: 1 })
        ));
    }

    #[test]
    fn balanced_enumeration_matches_count() {
        for (t, ell) in [(4, 2), (5, 2), (6, 3), (7, 3), (5, 5), (3, 4)] {
            let pool = enumerate_balanced(t, ell);
            assert_eq!(BigUint::from(pool.len()), balanced_count(t, ell), "t={t} ell={ell}");
            assert!(pool.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn weighted_pool_is_lex_sorted() {
        let (pool, full) = weighted_pool(5, 2, PoolBudget::default(), 1).unwrap();
        assert!(full);
        assert_eq!(pool.len(), 10);
        let seqs: Vec<Vec<u128>> = pool.iter().map(|m| (0..5).map(|x| (m >> x) & 1).collect()).collect();
        assert!(seqs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(seqs[0], vec![0, 0, 0, 1, 1]);
    }

    #[test]
    fn sampled_pool_is_deterministic() {
        let budget = PoolBudget {
            full_limit: 10,
            sample_size: 50,
        };
        let a = weighted_pool(20, 10, budget, 7).unwrap();
        let b = weighted_pool(20, 10, budget, 7).unwrap();
        assert_eq!(a, b);
        assert!(!a.1);
        let c = balanced_pool(20, 4, budget, 7).unwrap();
        assert_eq!(c, balanced_pool(20, 4, budget, 7).unwrap());
        assert!(c.0.iter().all(|f| f.len() == 20));
    }
}
