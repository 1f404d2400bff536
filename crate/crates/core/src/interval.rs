// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Interval guesses: a reservoir of consecutive positions plus a cut of the
//! remaining positions into consecutive intervals.
//!
//! If the reservoir length is at most `ceil((n - k) / (k + 1))` and the
//! granularity is 1, then for every k-subset `S` some guess has a reservoir
//! disjoint from `S` and intervals holding at most `budget` elements of `S`
//! each, provided `parts * budget >= k`.

use std::ops::Range;

use crate::combin::binomial;
use crate::error::{Error, Result};

/// One guess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalPlan {
    /// Consecutive runs of the non-reservoir positions, possibly empty.
    pub intervals: Vec<Vec<usize>>,
    pub reservoir: Range<usize>,
    /// `intervals[i]` together with the i-th chunk of the reservoir, ascending.
    pub augmented: Vec<Vec<usize>>,
}

/// Parameters shared by all guesses of one construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanShape {
    pub n: usize,
    pub parts: usize,
    pub reservoir: usize,
    /// Reservoir elements attached to each interval.
    pub augment: usize,
    pub granularity: usize,
}

/// Smallest `p` with `p^3 >= k^2`, i.e. `ceil(k^(2/3))`.
pub fn interval_parts(k: usize) -> usize {
    let target = (k as u128).pow(2);
    let mut p = 0usize;
    while (p as u128).pow(3) < target {
        p += 1;
    }
    p
}

/// Longest reservoir guaranteed to fit in a gap of every k-subset.
pub fn guaranteed_reservoir(n: usize, k: usize) -> usize {
    (n.saturating_sub(k)).div_ceil(k + 1)
}

impl PlanShape {
    pub fn new(n: usize, parts: usize, reservoir: usize, granularity: usize) -> Result<Self> {
        if parts == 0 {
            return Err(Error::bad("an interval plan needs at least one interval"));
        }
        if reservoir > n || granularity == 0 {
            return Err(Error::bad(format!(
                "reservoir {reservoir} and granularity {granularity} do not fit [{n}]"
            )));
        }
        Ok(PlanShape {
            n,
            parts,
            reservoir,
            augment: reservoir / parts,
            granularity,
        })
    }

    fn grid(&self, top: usize) -> Vec<usize> {
        let mut g: Vec<usize> = (0..=top).step_by(self.granularity).collect();
        if g.last() != Some(&top) {
            g.push(top);
        }
        g
    }

    pub fn guess_count(&self) -> u128 {
        let free = self.n - self.reservoir;
        let starts = self.grid(free).len();
        let cuts = self.grid(free).len();
        (starts as u128).saturating_mul(binomial(cuts + self.parts - 2, self.parts - 1))
    }

    /// All guesses, reservoir start ascending, then cut tuples ascending.
    pub fn plans(&self) -> PlanIter {
        let free = self.n - self.reservoir;
        PlanIter {
            shape: *self,
            starts: self.grid(free),
            cut_grid: self.grid(free),
            start_idx: 0,
            cuts: Some(vec![0; self.parts - 1]),
        }
    }

    fn plan(&self, start: usize, cuts: &[usize]) -> IntervalPlan {
        let seq: Vec<usize> = (0..start).chain(start + self.reservoir..self.n).collect();
        let mut bounds = vec![0];
        bounds.extend_from_slice(cuts);
        bounds.push(seq.len());
        let intervals: Vec<Vec<usize>> = bounds.windows(2).map(|w| seq[w[0]..w[1]].to_vec()).collect();
        let augmented = intervals
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                let lo = start + i * self.augment;
                let mut a: Vec<usize> = iv.iter().copied().chain(lo..lo + self.augment).collect();
                a.sort_unstable();
                a
            })
            .collect();
        IntervalPlan {
            intervals,
            reservoir: start..start + self.reservoir,
            augmented,
        }
    }
}

pub struct PlanIter {
    shape: PlanShape,
    starts: Vec<usize>,
    cut_grid: Vec<usize>,
    start_idx: usize,
    /// Indices into `cut_grid`, nondecreasing.
    cuts: Option<Vec<usize>>,
}

impl Iterator for PlanIter {
    type Item = IntervalPlan;

    fn next(&mut self) -> Option<IntervalPlan> {
        loop {
            if self.start_idx >= self.starts.len() {
                return None;
            }
            let Some(idx) = self.cuts.clone() else {
                self.start_idx += 1;
                self.cuts = Some(vec![0; self.shape.parts - 1]);
                continue;
            };
            let cuts: Vec<usize> = idx.iter().map(|&i| self.cut_grid[i]).collect();
            let plan = self.shape.plan(self.starts[self.start_idx], &cuts);
            self.cuts = advance(idx, self.cut_grid.len());
            return Some(plan);
        }
    }
}

/// Next nondecreasing index tuple over `[0, m)`.
fn advance(mut idx: Vec<usize>, m: usize) -> Option<Vec<usize>> {
    let mut i = idx.len();
    while i > 0 {
        i -= 1;
        if idx[i] + 1 < m {
            let v = idx[i] + 1;
            idx[i..].fill(v);
            return Some(idx);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_are_ceil_two_thirds_power() {
        assert_eq!(interval_parts(1), 1);
        assert_eq!(interval_parts(2), 2);
        assert_eq!(interval_parts(8), 4);
        assert_eq!(interval_parts(27), 9);
        assert_eq!(interval_parts(28), 10);
    }

    #[test]
    fn plans_match_count_and_shape() {
        let shape = PlanShape::new(10, 2, 3, 1).unwrap();
        let plans: Vec<_> = shape.plans().collect();
        assert_eq!(plans.len() as u128, shape.guess_count());
        assert_eq!(plans.len(), 8 * 8);
        for p in &plans {
            let mut all: Vec<usize> = p.intervals.concat();
            all.extend(p.reservoir.clone());
            all.sort_unstable();
            assert_eq!(all, (0..10).collect::<Vec<_>>());
            assert!(p.augmented.iter().all(|a| a.windows(2).all(|w| w[0] < w[1])));
        }
    }

    #[test]
    fn every_subset_has_a_good_guess() {
        let (n, k) = (11, 3);
        let parts = interval_parts(k);
        let budget = k.div_ceil(parts);
        let shape = PlanShape::new(n, parts, guaranteed_reservoir(n, k), 1).unwrap();
        let plans: Vec<_> = shape.plans().collect();
        for s in crate::combin::Combinations::new(n, k) {
            assert!(plans.iter().any(|p| {
                s.iter().all(|x| !p.reservoir.contains(x))
                    && p.intervals
                        .iter()
                        .all(|iv| iv.iter().filter(|x| s.contains(x)).count() <= budget)
            }));
        }
    }

    #[test]
    fn coarse_grid_shrinks_guesses() {
        let fine = PlanShape::new(40, 3, 5, 1).unwrap().guess_count();
        let coarse = PlanShape::new(40, 3, 5, 5).unwrap().guess_count();
        assert!(coarse < fine);
    }
}
