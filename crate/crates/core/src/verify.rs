// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Exhaustive certification of families against their definitions.
//!
//! Nothing here reuses builder code: subsets are walked in colexicographic
//! order by a local enumerator and each property is tested straight from the
//! image vectors. Reports never fail; an invalid family yields a witness.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::family::{Family, Uniformity};
use crate::function::Function;
use crate::ratio::Fraction;

/// A certificate of failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A k-subset no member handles.
    Subset(Vec<usize>),
    /// A disjoint pair `(S0, S1)` no member handles.
    Split { zeros: Vec<usize>, ones: Vec<usize> },
    /// A member violating a per-function condition.
    Function(usize),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let csv = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Witness::Subset(s) => f.write_str(&csv(s)),
            Witness::Split { zeros, ones } => write!(f, "{};{}", csv(zeros), csv(ones)),
            Witness::Function(i) => write!(f, "f{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    /// Number of target objects examined.
    pub checked: u64,
    /// First failure in enumeration order.
    pub witness: Option<Witness>,
    /// How many targets are handled by exactly `m` members, keyed by `m`.
    pub stats: BTreeMap<usize, u64>,
}

impl VerifyReport {
    fn from_scan(scan: Scan<Witness>) -> Self {
        VerifyReport {
            valid: scan.witness.is_none(),
            checked: scan.checked,
            witness: scan.witness,
            stats: scan.stats,
        }
    }

    fn function_failure(index: usize) -> Self {
        VerifyReport {
            valid: false,
            checked: 0,
            witness: Some(Witness::Function(index)),
            stats: BTreeMap::new(),
        }
    }

    /// Smallest cover multiplicity seen, if anything was checked.
    pub fn min_multiplicity(&self) -> Option<usize> {
        self.stats.keys().next().copied()
    }
}

fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// k-subsets of `[n]` in colexicographic order, starting at a given rank.
struct Colex {
    n: usize,
    set: Vec<usize>,
    left: u128,
}

impl Colex {
    fn starting_at(n: usize, k: usize, rank: u128, count: u128) -> Self {
        // Unrank: the largest element c with C(c, i+1) <= remaining rank.
        let mut set = vec![0usize; k];
        let mut r = rank;
        let mut hi = n;
        for i in (0..k).rev() {
            let mut c = i;
            while c + 1 < hi && choose(c + 1, i + 1) <= r {
                c += 1;
            }
            r -= choose(c, i + 1);
            set[i] = c;
            hi = c;
        }
        Colex { n, set, left: count }
    }

    fn advance(&mut self) {
        let k = self.set.len();
        for i in 0..k {
            let limit = if i + 1 < k { self.set[i + 1] } else { self.n };
            if self.set[i] + 1 < limit {
                self.set[i] += 1;
                for j in 0..i {
                    self.set[j] = j;
                }
                return;
            }
        }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        let out = self.set.clone();
        if self.left > 0 {
            self.advance();
        }
        Some(out)
    }
}

struct Scan<W> {
    checked: u64,
    witness: Option<W>,
    stats: BTreeMap<usize, u64>,
}

const CHUNK: u128 = 2048;

/// Scan every k-subset; `handle` returns a per-subset list of
/// (multiplicity, witness-if-uncovered) outcomes.
fn scan_subsets<F>(n: usize, k: usize, handle: F) -> Scan<Witness>
where
    F: Fn(&[usize], &mut Vec<(usize, Option<Witness>)>) + Sync,
{
    let total = choose(n, k);
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<Scan<Witness>> = (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let start = c as u128 * CHUNK;
            let count = CHUNK.min(total - start);
            let mut part = Scan {
                checked: 0,
                witness: None,
                stats: BTreeMap::new(),
            };
            let mut outcomes = Vec::new();
            for set in Colex::starting_at(n, k, start, count) {
                outcomes.clear();
                handle(&set, &mut outcomes);
                for (mult, w) in outcomes.drain(..) {
                    part.checked += 1;
                    *part.stats.entry(mult).or_insert(0) += 1;
                    if part.witness.is_none() {
                        part.witness = w;
                    }
                }
            }
            part
        })
        .collect();
    let mut merged = Scan {
        checked: 0,
        witness: None,
        stats: BTreeMap::new(),
    };
    for p in parts {
        merged.checked += p.checked;
        for (m, c) in p.stats {
            *merged.stats.entry(m).or_insert(0) += c;
        }
        if merged.witness.is_none() {
            merged.witness = p.witness;
        }
    }
    merged
}

fn splits_evenly(f: &Function, set: &[usize]) -> bool {
    let k = set.len();
    let ell = f.ell();
    let lo = k / ell;
    let hi = k.div_ceil(ell);
    let mut values: Vec<u32> = set.iter().map(|&x| f.apply(x)).collect();
    values.sort_unstable();
    let mut distinct = 0;
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j < values.len() && values[j] == values[i] {
            j += 1;
        }
        if j - i > hi || j - i < lo {
            return false;
        }
        distinct += 1;
        i = j;
    }
    // Values absent from S have count 0, allowed only when lo == 0.
    lo == 0 || distinct == ell
}

/// Every k-subset is split evenly by some member.
pub fn verify_splitter(family: &Family, k: usize) -> VerifyReport {
    let n = family.n();
    let fs = family.functions();
    VerifyReport::from_scan(scan_subsets(n, k, |set, out| {
        let mult = fs.iter().filter(|f| splits_evenly(f, set)).count();
        out.push((mult, (mult == 0).then(|| Witness::Subset(set.to_vec()))));
    }))
}

/// Like [`verify_splitter`] but only over the listed subsets, in list order.
pub fn verify_splitter_on(family: &Family, subsets: &[Vec<usize>]) -> VerifyReport {
    let fs = family.functions();
    let mut scan = Scan {
        checked: 0,
        witness: None,
        stats: BTreeMap::new(),
    };
    for set in subsets {
        let mult = fs.iter().filter(|f| splits_evenly(f, set)).count();
        scan.checked += 1;
        *scan.stats.entry(mult).or_insert(0) += 1;
        if mult == 0 && scan.witness.is_none() {
            scan.witness = Some(Witness::Subset(set.clone()));
        }
    }
    VerifyReport::from_scan(scan)
}

/// Per-function balance check under the chosen definition.
pub fn verify_uniformity(family: &Family, mode: Uniformity) -> VerifyReport {
    let n = family.n();
    let ell = family.ell();
    for (i, f) in family.functions().iter().enumerate() {
        let mut sizes = vec![0usize; ell];
        for &v in f.images() {
            sizes[v as usize] += 1;
        }
        let used: Vec<usize> = sizes.iter().copied().filter(|&s| s > 0).collect();
        let max = used.iter().copied().max().unwrap_or(0);
        let min = used.iter().copied().min().unwrap_or(0);
        let ok = match mode {
            Uniformity::None => true,
            Uniformity::AUniform(a) => max - min <= a,
            Uniformity::Uniform => {
                let c = used.len().max(1);
                min >= n / c && max <= n.div_ceil(c)
            }
            Uniformity::Strong => sizes.iter().all(|&s| s >= n / ell && s <= n.div_ceil(ell)),
        };
        if !ok {
            return VerifyReport::function_failure(i);
        }
    }
    VerifyReport {
        valid: true,
        checked: family.len() as u64,
        witness: None,
        stats: BTreeMap::new(),
    }
}

fn check_ones(family: &Family, alpha: Fraction) -> Option<VerifyReport> {
    let target = (alpha.numer() as u128 * family.n() as u128).div_ceil(alpha.denom() as u128) as usize;
    family
        .functions()
        .iter()
        .position(|f| f.ell() != 2 || f.images().iter().filter(|&&v| v == 1).count() != target)
        .map(VerifyReport::function_failure)
}

/// Exact ones count, and every k-subset lies in the zero set of some member.
pub fn verify_bisector(family: &Family, k: usize, alpha: Fraction) -> VerifyReport {
    if let Some(r) = check_ones(family, alpha) {
        return r;
    }
    let fs = family.functions();
    VerifyReport::from_scan(scan_subsets(family.n(), k, |set, out| {
        let mult = fs.iter().filter(|f| set.iter().all(|&x| f.apply(x) == 0)).count();
        out.push((mult, (mult == 0).then(|| Witness::Subset(set.to_vec()))));
    }))
}

fn split_of(set: &[usize], ones_positions: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (i, &x) in set.iter().enumerate() {
        if ones_positions.contains(&i) {
            ones.push(x);
        } else {
            zeros.push(x);
        }
    }
    (zeros, ones)
}

/// Exact ones count, and for every disjoint `(S0, S1)` with the given sizes
/// some member maps `S0` to zero and exactly `ceil(beta k1)` of `S1` to one.
pub fn verify_mapping_family(family: &Family, k0: usize, k1: usize, alpha: Fraction, beta: Fraction) -> VerifyReport {
    if let Some(r) = check_ones(family, alpha) {
        return r;
    }
    let hits = (beta.numer() as u128 * k1 as u128).div_ceil(beta.denom() as u128) as usize;
    let k = k0 + k1;
    let fs = family.functions();
    let placements: Vec<Vec<usize>> = Colex::starting_at(k, k1, 0, choose(k, k1)).collect();
    VerifyReport::from_scan(scan_subsets(family.n(), k, |set, out| {
        for pos in &placements {
            let (zeros, ones) = split_of(set, pos);
            let mult = fs
                .iter()
                .filter(|f| {
                    zeros.iter().all(|&x| f.apply(x) == 0) && ones.iter().filter(|&&x| f.apply(x) == 1).count() == hits
                })
                .count();
            out.push((mult, (mult == 0).then_some(Witness::Split { zeros, ones })));
        }
    }))
}

/// Exact ones count, and every 2-colouring of every k-subset is realised.
pub fn verify_universal(family: &Family, k: usize, alpha: Fraction) -> VerifyReport {
    if let Some(r) = check_ones(family, alpha) {
        return r;
    }
    let fs = family.functions();
    VerifyReport::from_scan(scan_subsets(family.n(), k, |set, out| {
        for colouring in 0u64..(1u64 << k) {
            let want = |i: usize| ((colouring >> i) & 1) as u32;
            let mult = fs
                .iter()
                .filter(|f| set.iter().enumerate().all(|(i, &x)| f.apply(x) == want(i)))
                .count();
            let witness = (mult == 0).then(|| {
                let pos: Vec<usize> = (0..k).filter(|&i| want(i) == 1).collect();
                let (zeros, ones) = split_of(set, &pos);
                Witness::Split { zeros, ones }
            });
            out.push((mult, witness));
        }
    }))
}

/// Dispatch on the family's own kind and parameters.
pub fn verify_family(family: &Family) -> VerifyReport {
    use crate::family::FamilyKind::*;
    let zero = Fraction::zero();
    match family.kind() {
        Splitter => {
            let r = verify_splitter(family, family.k());
            if !r.valid {
                return r;
            }
            let u = verify_uniformity(family, family.uniformity());
            if u.valid {
                r
            } else {
                u
            }
        }
        Bisector => verify_bisector(family, family.k(), family.alpha().unwrap_or(zero)),
        Mapping => verify_mapping_family(
            family,
            family.k0().unwrap_or(0),
            family.k1().unwrap_or(0),
            family.alpha().unwrap_or(zero),
            family.beta().unwrap_or(zero),
        ),
        Universal => verify_universal(family, family.k(), family.alpha().unwrap_or(zero)),
    }
}
