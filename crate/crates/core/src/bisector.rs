// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Bisector constructions. A bisector member is a binary function with an
//! exact ones count; a family is valid when every k-subset sits inside the
//! zero set of some member.
//!
//! Turning a one into a zero never breaks validity, which the re-normalising
//! steps below use freely.

use std::collections::{BTreeMap, HashSet};

use num_rational::Ratio;

use crate::certify::{certify, nested, require_desk};
use crate::combin::{binomial, subset_masks};
use crate::config::BuildConfig;
use crate::error::{Error, Result};
use crate::family::{Family, Provenance};
use crate::function::{refine_zeros, Function};
use crate::greedy::{greedy_cover, weighted_pool, CoverageStep};
use crate::interval::{guaranteed_reservoir, interval_parts, PlanShape};
use crate::precise::{guarded_ceil, Fixed};
use crate::ratio::Fraction;

/// Cap on k-subsets enumerated as greedy targets.
const TARGET_LIMIT: u128 = 5_000_000;

/// Functions on `[n]` that all have `ones` ones.
#[derive(Clone, Debug)]
pub(crate) struct Weighted {
    pub n: usize,
    pub ones: usize,
    pub functions: Vec<Function>,
    pub coverage: Vec<CoverageStep>,
    pub sampled: bool,
}

impl Weighted {
    fn single(n: usize, ones: usize) -> Self {
        let at_end: Vec<usize> = (n - ones..n).collect();
        Weighted {
            n,
            ones,
            functions: vec![Function::from_ones(n, &at_end)],
            coverage: Vec::new(),
            sampled: false,
        }
    }

    fn into_family(self, k: usize, alpha: Fraction, prov: Provenance) -> Result<Family> {
        Ok(Family::bisector(self.n, k, alpha, self.functions)?.with_provenance(prov))
    }
}

/// `prod_{i<k} (m-w-i)/(m-i)`: the chance a uniformly random weight-`w`
/// function zeroes a fixed k-subset.
pub fn bisector_progress_bound(m: usize, k: usize, w: usize) -> Ratio<u128> {
    if m < w + k {
        return Ratio::from_integer(0);
    }
    (0..k).fold(Ratio::from_integer(1u128), |acc, i| {
        acc * Ratio::new((m - w - i) as u128, (m - i) as u128)
    })
}

pub(crate) fn base_with_ones(m: usize, k: usize, w: usize, cfg: &BuildConfig) -> Result<Weighted> {
    if w > m || m - w < k {
        return Err(Error::bad(format!(
            "no weight-{w} function on [{m}] zeroes {k} elements"
        )));
    }
    if k == 0 || w == 0 {
        return Ok(Weighted::single(m, w));
    }
    if m > 128 {
        return Err(Error::bad(format!("greedy universe {m} exceeds 128")));
    }
    if binomial(m, k) > TARGET_LIMIT {
        return Err(Error::bad(format!("C({m},{k}) targets exceed the enumeration limit")));
    }
    let targets = subset_masks(m, k);
    let (pool, full) = weighted_pool(m, w, cfg.pool, cfg.seed)?;
    let outcome = greedy_cover(&pool, &targets, |f, s| f & s == 0)?;
    Ok(Weighted {
        n: m,
        ones: w,
        functions: outcome
            .chosen
            .iter()
            .map(|&i| Function::from_mask(m, pool[i]))
            .collect(),
        coverage: outcome.log,
        sampled: !full,
    })
}

/// Greedy cover of the k-subsets of `[m]` by functions with
/// `ceil(fraction * m)` ones.
pub fn base_bisector(m: usize, k: usize, ones_fraction: Fraction, cfg: &BuildConfig) -> Result<Family> {
    let w = ones_fraction.ceil_mul(m);
    let built = base_with_ones(m, k, w, cfg)?;
    let mut prov = Provenance::new("base_bisector");
    prov.out_of_regime = built.sampled;
    prov.seed = built.sampled.then_some(cfg.seed);
    prov.note("pool", if built.sampled { "sampled" } else { "full" });
    prov.note("progress_bound", bisector_progress_bound(m, k, w));
    prov.coverage = built.coverage.clone();
    certify(built.into_family(k, ones_fraction, prov)?, cfg)
}

/// Set the ones count of `f` to `target`: spare zeros in `fill` become ones
/// (lowest first), or surplus ones anywhere become zeros (lowest first).
fn renormalise(images: &mut [u32], target: usize, fill: &[usize]) -> Result<()> {
    let ones = images.iter().filter(|&&v| v == 1).count();
    if ones < target {
        let mut need = target - ones;
        for &x in fill {
            if need == 0 {
                break;
            }
            if images[x] == 0 {
                images[x] = 1;
                need -= 1;
            }
        }
        if need > 0 {
            return Err(Error::SizeMismatch(format!(
                "cannot add {need} more ones inside the free block"
            )));
        }
    } else {
        let mut drop = ones - target;
        for v in images.iter_mut() {
            if drop == 0 {
                break;
            }
            if *v == 1 {
                *v = 0;
                drop -= 1;
            }
        }
    }
    Ok(())
}

fn extend_by_d_with_ones(input: &Weighted, d: usize, k: usize, target: usize) -> Result<Weighted> {
    let n = input.n;
    if d == 0 && target == input.ones {
        return Ok(input.clone());
    }
    if d * (k + 1) >= n && d > 0 {
        return Err(Error::pre(format!("d(k+1) = {} is not below n = {n}", d * (k + 1))));
    }
    let total = n + d;
    let mut functions = Vec::with_capacity((k + 1) * input.functions.len());
    for j in 0..=k {
        let block: Vec<usize> = (j * d..(j + 1) * d).collect();
        let outside: Vec<usize> = (0..total).filter(|x| !(j * d..(j + 1) * d).contains(x)).collect();
        for f in &input.functions {
            let mut images = vec![0u32; total];
            for (i, &x) in outside.iter().enumerate() {
                images[x] = f.apply(i);
            }
            renormalise(&mut images, target, &block)?;
            functions.push(Function::from_images(2, images));
        }
        if d == 0 {
            break;
        }
    }
    Ok(Weighted {
        n: total,
        ones: target,
        functions,
        coverage: Vec::new(),
        sampled: input.sampled,
    })
}

fn weighted_of(family: &Family) -> Result<(Weighted, Fraction)> {
    let alpha = family
        .alpha()
        .ok_or_else(|| Error::bad("extension needs a binary family with alpha"))?;
    let ones = family.ones_target().unwrap_or(0);
    Ok((
        Weighted {
            n: family.n(),
            ones,
            functions: family.functions().to_vec(),
            coverage: Vec::new(),
            sampled: false,
        },
        alpha,
    ))
}

/// Re-embed a bisector on `[n]` into `[n + d]` around each of k+1 disjoint
/// forbidden blocks of length `d`.
pub fn extend_by_d(family: &Family, d: usize, k: usize, cfg: &BuildConfig) -> Result<Family> {
    let (w, alpha) = weighted_of(family)?;
    if d == 0 {
        return Ok(family.clone());
    }
    let target = alpha.ceil_mul(family.n() + d);
    let out = extend_by_d_with_ones(&w, d, k, target)?;
    let mut prov = Provenance::new("extend_by_d");
    prov.out_of_regime = true;
    prov.note("d", d);
    certify(out.into_family(k, alpha, prov)?, cfg)
}

fn extend_modulo_with_ones(input: &Weighted, n1: usize, k: usize, target: usize) -> Result<Weighted> {
    let n2 = input.n;
    if k > n2 || n2 > n1 || n2 == 0 {
        return Err(Error::bad(format!(
            "extend_modulo needs k <= n2 <= n1, got k={k}, n2={n2}, n1={n1}"
        )));
    }
    let c = n1 / n2;
    let d = n1 % n2;
    let base = c * n2;
    let pulled: Vec<Function> = input
        .functions
        .iter()
        .map(|f| Function::from_images(2, (0..base).map(|x| f.apply(x % n2)).collect()))
        .collect();
    let pulled = Weighted {
        n: base,
        ones: c * input.ones,
        functions: pulled,
        coverage: Vec::new(),
        sampled: input.sampled,
    };
    if d == 0 {
        let mut out = pulled;
        for f in out.functions.iter_mut() {
            let mut images = f.images().to_vec();
            renormalise(&mut images, target, &[])?;
            *f = Function::from_images(2, images);
        }
        out.ones = target;
        return Ok(out);
    }
    extend_by_d_with_ones(&pulled, d, k, target)
}

/// Pull a bisector on `[n2]` back to `[n1]` through `x mod n2`, then extend
/// by the remainder.
pub fn extend_modulo(family: &Family, n1: usize, k: usize, cfg: &BuildConfig) -> Result<Family> {
    let (w, alpha) = weighted_of(family)?;
    let out = extend_modulo_with_ones(&w, n1, k, alpha.ceil_mul(n1))?;
    let mut prov = Provenance::new("extend_modulo");
    prov.out_of_regime = true;
    prov.note("n2", family.n());
    certify(out.into_family(k, alpha, prov)?, cfg)
}

/// `ceil(sqrt(k) * ln(1 / (1 - alpha)))`.
pub fn iteration_count(k: usize, alpha: Fraction) -> Result<usize> {
    if alpha >= Fraction::one() {
        return Err(Error::bad("iteration_count needs alpha < 1"));
    }
    if alpha.is_zero() || k == 0 {
        return Ok(0);
    }
    let (p, q) = (alpha.numer() as i64, alpha.denom() as i64);
    let fast = (k as f64).sqrt() * ((q as f64) / ((q - p) as f64)).ln();
    let exact = || {
        let ratio = Fixed::from_ratio(q, q - p);
        Fixed::from_int(k as i64).sqrt().mul(&ratio.ln())
    };
    Ok(guarded_ceil(fast, exact) as usize)
}

/// `ceil(z / sqrt(k))`, exactly: the least `w` with `w^2 k >= z^2`.
pub(crate) fn ceil_div_sqrt(z: usize, k: usize) -> usize {
    if k == 0 {
        return z;
    }
    let (z, k) = (z as u128, k as u128);
    let mut w = ((z as f64) / (k as f64).sqrt()).floor() as u128;
    w = w.saturating_sub(2);
    while w * w * k < z * z {
        w += 1;
    }
    w as usize
}

/// Stage ones counts: each stage turns `ceil(z/sqrt(k))` of the surviving
/// `z` zeros into ones, the last stage trimmed to land on `total`.
pub(crate) fn stage_schedule(n: usize, k: usize, total: usize) -> Vec<(usize, usize)> {
    let mut z = n;
    let mut done = 0;
    let mut stages = Vec::new();
    while done < total {
        let w = ceil_div_sqrt(z, k).max(1).min(total - done);
        stages.push((z, w));
        z -= w;
        done += w;
    }
    stages
}

/// A bisector on `[z]` with `w` ones, directly or by modulo extension.
pub(crate) fn stage_bisector(z: usize, k: usize, w: usize, cfg: &BuildConfig) -> Result<Weighted> {
    if w == 0 || k == 0 || z <= cfg.direct_limit {
        return base_with_ones(z, k, w, cfg);
    }
    for n2 in (k + 1..=cfg.direct_limit.min(z)).rev() {
        let c = z / n2;
        let d = z % n2;
        if d > 0 && d * (k + 1) >= c * n2 {
            continue;
        }
        let w2 = (w * n2).div_ceil(z);
        if n2 < w2 + k {
            continue;
        }
        let base = base_with_ones(n2, k, w2, cfg)?;
        return extend_modulo_with_ones(&base, z, k, w);
    }
    Err(Error::bad(format!(
        "no base universe extends to [{z}] for k={k}, w={w}"
    )))
}

/// Compose stage families: each stage acts on the zero set left by the
/// previous stages.
pub(crate) fn compose_stages(stages: Vec<Weighted>) -> Vec<Function> {
    let mut iter = stages.into_iter();
    let Some(first) = iter.next() else {
        return Vec::new();
    };
    let mut current = first.functions;
    for stage in iter {
        let mut next = Vec::with_capacity(current.len() * stage.functions.len());
        for f in &current {
            for g in &stage.functions {
                next.push(refine_zeros(f, g));
            }
        }
        current = next;
    }
    current
}

fn zeros_family(n: usize, k: usize, alpha: Fraction, builder: &str) -> Result<Family> {
    Family::bisector(n, k, alpha, vec![Function::from_images(2, vec![0; n])])
        .map(|f| f.with_provenance(Provenance::new(builder)))
}

pub(crate) fn alpha_bisector_raw(n: usize, k: usize, alpha: Fraction, cfg: &BuildConfig) -> Result<Weighted> {
    let total = alpha.ceil_mul(n);
    if total > n || n - total < k {
        return Err(Error::bad(format!(
            "{total} ones on [{n}] leave fewer than k={k} zeros"
        )));
    }
    if total == 0 || k == 0 {
        return Ok(Weighted::single(n, total));
    }
    let stages = stage_schedule(n, k, total)
        .into_iter()
        .map(|(z, w)| stage_bisector(z, k, w, cfg))
        .collect::<Result<Vec<_>>>()?;
    let sampled = stages.iter().any(|s| s.sampled);
    Ok(Weighted {
        n,
        ones: total,
        functions: compose_stages(stages),
        coverage: Vec::new(),
        sampled,
    })
}

/// Iterated bisector: stages of ones fraction `1/sqrt(k)` on the surviving
/// zero set until `ceil(alpha n)` ones are placed.
pub fn alpha_bisector(n: usize, k: usize, alpha: Fraction, cfg: &BuildConfig) -> Result<Family> {
    if alpha >= Fraction::one() {
        return Err(Error::bad("alpha must be below 1"));
    }
    if alpha.is_zero() {
        return zeros_family(n, k, alpha, "alpha_bisector");
    }
    let out_of_regime = k < 16 || (n as u128) < (k as u128).pow(4);
    require_desk(out_of_regime, cfg, "alpha_bisector")?;
    let schedule = stage_schedule(n, k, alpha.ceil_mul(n));
    let out = alpha_bisector_raw(n, k, alpha, &nested(cfg))?;
    let mut prov = Provenance::new("alpha_bisector");
    prov.out_of_regime = out_of_regime || out.sampled;
    prov.note("stages", schedule.len());
    prov.note("iteration_count", iteration_count(k, alpha)?);
    prov.note(
        "stage_ones",
        schedule
            .iter()
            .map(|(z, w)| format!("{w}/{z}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    certify(out.into_family(k, alpha, prov)?, cfg)
}

/// Shape of the interval construction for a k-subset budget split
/// `(parts, per-part budget)`, checked for guaranteed coverage.
pub(crate) fn interval_shape(n: usize, k: usize, parts: usize, cfg: &BuildConfig) -> Result<PlanShape> {
    let reservoir = cfg.reservoir.unwrap_or_else(|| guaranteed_reservoir(n, k));
    let shape = PlanShape::new(n, parts, reservoir, cfg.granularity)?;
    let guesses = shape.guess_count();
    if guesses > cfg.guess_budget as u128 {
        return Err(Error::GuessSpaceTooLarge {
            guesses,
            budget: cfg.guess_budget,
        });
    }
    Ok(shape)
}

/// Bring `images` to `target` ones. Flips inside the reservoir come first
/// since the reservoir misses every target set. A leftover correction of
/// `delta` is applied in k+1 variants, each flipping `delta` positions of one
/// block of a (k+1)-way split of the flippable side; at most k target
/// elements lie on that side, so some block avoids them all.
///
/// With `surplus_anywhere`, turning ones into zeros never breaks a target
/// and the leftover surplus is trimmed in place instead.
fn fix_ones(
    mut images: Vec<u32>,
    target: usize,
    reservoir: &[usize],
    k: usize,
    surplus_anywhere: bool,
) -> Result<Vec<Vec<u32>>> {
    let ones = images.iter().filter(|&&v| v == 1).count();
    let (from, to, mut delta) = match ones.cmp(&target) {
        std::cmp::Ordering::Equal => return Ok(vec![images]),
        std::cmp::Ordering::Greater => (1, 0, ones - target),
        std::cmp::Ordering::Less => (0, 1, target - ones),
    };
    for &x in reservoir {
        if delta > 0 && images[x] == from {
            images[x] = to;
            delta -= 1;
        }
    }
    if delta == 0 {
        return Ok(vec![images]);
    }
    let side: Vec<usize> = (0..images.len()).filter(|&x| images[x] == from).collect();
    if from == 1 && surplus_anywhere {
        for &x in &side[..delta] {
            images[x] = 0;
        }
        return Ok(vec![images]);
    }
    let block = side.len() / (k + 1);
    if block < delta {
        return Err(Error::SizeMismatch(format!(
            "blocks of {block} positions cannot absorb a ones correction of {delta}"
        )));
    }
    Ok((0..=k)
        .map(|j| {
            let lo = j * side.len() / (k + 1);
            let mut v = images.clone();
            for &x in &side[lo..lo + delta] {
                v[x] = to;
            }
            v
        })
        .collect())
}

/// Assemble one guess: member `choice[i]` of `subs[i]` on `augmented[i]`,
/// then fix the ones count with [`fix_ones`].
pub(crate) fn assemble(
    n: usize,
    k: usize,
    plan: &crate::interval::IntervalPlan,
    subs: &[&Weighted],
    target: usize,
    surplus_anywhere: bool,
    out: &mut Vec<Function>,
) -> Result<()> {
    let sizes: Vec<usize> = subs.iter().map(|s| s.functions.len()).collect();
    if sizes.contains(&0) {
        return Ok(());
    }
    let reservoir: Vec<usize> = plan.reservoir.clone().collect();
    let mut choice = vec![0usize; subs.len()];
    loop {
        let mut images = vec![0u32; n];
        for (i, positions) in plan.augmented.iter().enumerate() {
            let f = &subs[i].functions[choice[i]];
            for (j, &x) in positions.iter().enumerate() {
                images[x] = f.apply(j);
            }
        }
        for v in fix_ones(images, target, &reservoir, k, surplus_anywhere)? {
            out.push(Function::from_images(2, v));
        }
        // Odometer, last interval fastest.
        let mut i = subs.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < sizes[i] {
                break;
            }
            choice[i] = 0;
        }
    }
}

pub(crate) fn dedup_in_order(functions: Vec<Function>) -> Vec<Function> {
    let mut seen = HashSet::new();
    functions.into_iter().filter(|f| seen.insert(f.clone())).collect()
}

fn interval_bisector_small(
    n: usize,
    k: usize,
    alpha: Fraction,
    cfg: &BuildConfig,
) -> Result<(Weighted, BTreeMap<&'static str, String>)> {
    let parts = interval_parts(k);
    let budget = k.div_ceil(parts);
    let shape = interval_shape(n, k, parts, cfg)?;
    let aug = shape.augment;
    if aug < alpha.ceil_mul(aug) + budget {
        return Err(Error::bad(format!(
            "augmented intervals of size {aug} cannot hold {budget} zeros at alpha = {alpha}"
        )));
    }
    let target = alpha.ceil_mul(n);
    let mut cache: BTreeMap<usize, Weighted> = BTreeMap::new();
    let mut functions = Vec::new();
    let mut guesses = 0usize;
    for plan in shape.plans() {
        guesses += 1;
        for a in &plan.augmented {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(a.len()) {
                e.insert(alpha_bisector_raw(a.len(), budget, alpha, cfg)?);
            }
        }
        let subs: Vec<&Weighted> = plan.augmented.iter().map(|a| &cache[&a.len()]).collect();
        assemble(n, k, &plan, &subs, target, true, &mut functions)?;
    }
    let before = functions.len();
    let functions = dedup_in_order(functions);
    let sampled = cache.values().any(|w| w.sampled);
    let mut notes = BTreeMap::new();
    notes.insert("guesses", guesses.to_string());
    notes.insert("parts", parts.to_string());
    notes.insert("part_budget", budget.to_string());
    notes.insert("reservoir", shape.reservoir.to_string());
    notes.insert("augment", aug.to_string());
    notes.insert("before_dedup", before.to_string());
    Ok((
        Weighted {
            n,
            ones: target,
            functions,
            coverage: Vec::new(),
            sampled,
        },
        notes,
    ))
}

/// Base universe for lifting a construction on `[n2]` to `[n]`.
pub(crate) fn lift_base(n: usize, k: usize, limit: usize) -> Option<usize> {
    (k + 1..=limit.min(n)).rev().find(|&n2| {
        let (c, d) = (n / n2, n % n2);
        d == 0 || d * (k + 1) < c * n2
    })
}

/// Union over interval guesses of products of per-interval bisectors.
pub fn interval_bisector(n: usize, k: usize, alpha: Fraction, cfg: &BuildConfig) -> Result<Family> {
    if alpha >= Fraction::one() {
        return Err(Error::bad("alpha must be below 1"));
    }
    if alpha.is_zero() || k == 0 {
        let w = Weighted::single(n, alpha.ceil_mul(n));
        return certify(w.into_family(k, alpha, Provenance::new("interval_bisector"))?, cfg);
    }
    let out_of_regime = (n as u128) < (k as u128).pow(5) || k < 16;
    require_desk(out_of_regime, cfg, "interval_bisector")?;
    let inner = nested(cfg);
    let (out, mut notes) = if n > cfg.interval_lift_above {
        let n2 = lift_base(n, k, cfg.interval_lift_above)
            .ok_or_else(|| Error::bad(format!("no base universe lifts to [{n}]")))?;
        let (small, mut notes) = interval_bisector_small(n2, k, alpha, &inner)?;
        notes.insert("lifted_from", n2.to_string());
        (extend_modulo_with_ones(&small, n, k, alpha.ceil_mul(n))?, notes)
    } else {
        interval_bisector_small(n, k, alpha, &inner)?
    };
    let mut prov = Provenance::new("interval_bisector");
    prov.out_of_regime = out_of_regime || out.sampled;
    for (key, v) in std::mem::take(&mut notes) {
        prov.note(key, v);
    }
    certify(out.into_family(k, alpha, prov)?, cfg)
}

/// Result of the adversarial subset search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryOutcome {
    /// The chosen elements, in pick order.
    pub witness: Vec<usize>,
    /// Members mapping the whole witness to 0.
    pub surviving: usize,
    /// Survivor count after each pick.
    pub trace: Vec<usize>,
}

/// Grow a k-subset one element at a time, each time taking the element that
/// some surviving member maps to 1 most often (ties to the smallest).
pub fn adversary_lower_bound(family: &Family, k: usize) -> AdversaryOutcome {
    let n = family.n();
    let mut alive: Vec<&Function> = family.functions().iter().collect();
    let mut witness = Vec::new();
    let mut trace = Vec::new();
    for _ in 0..k.min(n) {
        let best = (0..n)
            .filter(|x| !witness.contains(x))
            .max_by_key(|&x| (alive.iter().filter(|f| f.apply(x) == 1).count(), std::cmp::Reverse(x)))
            .expect("k <= n");
        witness.push(best);
        alive.retain(|f| f.apply(best) == 0);
        trace.push(alive.len());
    }
    AdversaryOutcome {
        witness,
        surviving: alive.len(),
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_bisector;

    fn frac(p: u64, q: u64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    fn cfg() -> BuildConfig {
        BuildConfig::default()
    }

    #[test]
    fn base_examples() {
        let fam = base_bisector(8, 2, frac(1, 2), &cfg()).unwrap();
        let r = verify_bisector(&fam, 2, frac(1, 2));
        assert!(r.valid);
        assert_eq!(r.checked, 28);
        assert!(fam.len() >= 4);
        assert!(fam.functions().iter().all(|f| f.ones() == 4));

        let fam = base_bisector(5, 0, frac(2, 5), &cfg()).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.functions()[0].ones(), 2);
        let fam = base_bisector(5, 2, frac(0, 1), &cfg()).unwrap();
        assert_eq!(fam.functions()[0].images(), &[0; 5]);
    }

    #[test]
    fn base_progress_matches_bound() {
        let fam = base_bisector(10, 2, frac(1, 2), &cfg()).unwrap();
        let bound = bisector_progress_bound(10, 2, 5);
        for s in &fam.provenance().coverage {
            assert!(Ratio::new(s.covered as u128, s.remaining as u128) >= bound);
        }
    }

    #[test]
    fn extend_by_d_examples() {
        let base = base_bisector(12, 2, frac(1, 2), &cfg()).unwrap();
        let ext = extend_by_d(&base, 1, 2, &cfg()).unwrap();
        assert_eq!(ext.len(), 3 * base.len());
        assert_eq!(ext.n(), 13);
        assert!(ext.functions().iter().all(|f| f.ones() == 7));
        assert!(verify_bisector(&ext, 2, frac(1, 2)).valid);

        assert_eq!(extend_by_d(&base, 0, 2, &cfg()).unwrap(), base);
        let small = base_bisector(6, 2, frac(1, 3), &cfg()).unwrap();
        assert!(matches!(
            extend_by_d(&small, 2, 2, &cfg()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn extend_modulo_examples() {
        let base = base_bisector(8, 2, frac(1, 2), &cfg()).unwrap();
        let doubled = extend_modulo(&base, 16, 2, &cfg()).unwrap();
        assert_eq!(doubled.len(), base.len());
        assert!(verify_bisector(&doubled, 2, frac(1, 2)).valid);
        let same = extend_modulo(&base, 8, 2, &cfg()).unwrap();
        assert_eq!(same.functions(), base.functions());
        let odd = extend_modulo(&base, 17, 2, &cfg()).unwrap();
        assert_eq!(odd.len(), 3 * base.len());
        assert!(verify_bisector(&odd, 2, frac(1, 2)).valid);
        assert!(matches!(extend_modulo(&base, 7, 2, &cfg()), Err(Error::BadParams(_))));
    }

    #[test]
    fn iteration_counts() {
        assert_eq!(iteration_count(16, frac(1, 2)).unwrap(), 3);
        assert_eq!(iteration_count(16, frac(0, 1)).unwrap(), 0);
        assert_eq!(iteration_count(4, frac(3, 4)).unwrap(), 3);
        assert!(iteration_count(4, frac(1, 1)).is_err());
    }

    #[test]
    fn ceil_div_sqrt_is_exact() {
        for z in 0..200 {
            for k in 1..30 {
                let w = ceil_div_sqrt(z, k);
                assert!(w * w * k >= z * z);
                assert!(w == 0 || (w - 1) * (w - 1) * k < z * z);
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let fam = alpha_bisector(16, 2, frac(1, 2), &cfg()).unwrap();
        assert!(verify_bisector(&fam, 2, frac(1, 2)).valid);
        assert!(fam.len() >= 4);
        let zeros = alpha_bisector(9, 3, frac(0, 1), &cfg()).unwrap();
        assert_eq!(zeros.len(), 1);
        for (n, k, a) in [(16, 2, frac(7, 8)), (16, 4, frac(3, 4))] {
            let fam = alpha_bisector(n, k, a, &cfg()).unwrap();
            assert!(
                fam.provenance().notes["stages"].parse::<usize>().unwrap() >= 2,
                "{n} {k}"
            );
            assert!(verify_bisector(&fam, k, a).valid);
        }
    }

    #[test]
    fn alpha_bisector_through_extension() {
        let c = BuildConfig {
            direct_limit: 12,
            ..cfg()
        };
        let fam = alpha_bisector(40, 2, frac(1, 2), &c).unwrap();
        assert!(verify_bisector(&fam, 2, frac(1, 2)).valid);
    }

    #[test]
    fn interval_examples() {
        let fam = interval_bisector(12, 1, frac(1, 2), &cfg()).unwrap();
        assert!(verify_bisector(&fam, 1, frac(1, 2)).valid);
        let fam = interval_bisector(32, 2, frac(1, 2), &cfg()).unwrap();
        assert!(verify_bisector(&fam, 2, frac(1, 2)).valid);
        assert_eq!(fam.provenance().notes["parts"], "2");
        assert_eq!(fam.provenance().notes["part_budget"], "1");
        let tight = BuildConfig {
            guess_budget: 10,
            ..cfg()
        };
        assert!(matches!(
            interval_bisector(32, 2, frac(1, 2), &tight),
            Err(Error::GuessSpaceTooLarge { .. })
        ));
        assert!(matches!(
            interval_bisector(12, 3, frac(1, 2), &cfg()),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn adversary_examples() {
        let zeros = Family::bisector(6, 3, frac(0, 1), vec![Function::from_images(2, vec![0; 6])]).unwrap();
        assert_eq!(adversary_lower_bound(&zeros, 3).surviving, 1);
        let fam = base_bisector(8, 2, frac(1, 2), &cfg()).unwrap();
        let out = adversary_lower_bound(&fam, 2);
        assert!(out.surviving >= 1);
        assert_eq!(out.witness.len(), 2);
        // Dropping members can leave a subset uncovered.
        let few = Family::bisector(4, 1, frac(1, 2), vec![Function::from_ones(4, &[0, 1])]).unwrap();
        let out = adversary_lower_bound(&few, 1);
        assert_eq!(out.surviving, 0);
        assert_eq!(out.witness, vec![0]);
    }
}
