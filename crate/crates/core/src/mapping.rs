// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Mapping families and uniform universal sets.
//!
//! A member covers a disjoint pair `(S0, S1)` when it sends `S0` to 0 and
//! exactly `ceil(beta |S1|)` elements of `S1` to 1.

use std::collections::BTreeMap;

use crate::bisector::{
    alpha_bisector_raw, assemble, compose_stages, dedup_in_order, interval_shape, stage_schedule, Weighted,
};
use crate::certify::{certify, nested, require_desk};
use crate::combin::{binomial, mask_of, Combinations};
use crate::config::{BuildConfig, MappingStrategy};
use crate::error::{Error, Result};
use crate::family::{Family, Provenance, Uniformity};
use crate::function::{compose, Function};
use crate::greedy::{greedy_cover, weighted_pool};
use crate::interval::interval_parts;
use crate::ratio::Fraction;
use crate::splitter::build_splitter_raw;
use crate::verify::verify_uniformity;

const TARGET_LIMIT: u128 = 5_000_000;

/// All `(S0, S1)` masks with `|S0| = k0`, `|S1| = k1` on `[m]`.
fn split_targets(m: usize, k0: usize, k1: usize) -> Vec<(u128, u128)> {
    let k = k0 + k1;
    let placements: Vec<Vec<usize>> = Combinations::new(k, k1).collect();
    let mut out = Vec::new();
    for set in Combinations::new(m, k) {
        for pos in &placements {
            let ones: Vec<usize> = pos.iter().map(|&i| set[i]).collect();
            let all = mask_of(&set);
            let s1 = mask_of(&ones);
            out.push((all & !s1, s1));
        }
    }
    out
}

fn mapping_feasible(m: usize, k0: usize, k1: usize, w: usize, hits: usize) -> Result<()> {
    if k0 + k1 > m || w > m || hits > k1 || hits > w || m - w + hits < k0 + k1 {
        return Err(Error::bad(format!(
            "no weight-{w} function on [{m}] zeroes {k0} and hits {hits} of {k1} elements"
        )));
    }
    Ok(())
}

pub(crate) fn base_mapping_with_ones(
    m: usize,
    k0: usize,
    k1: usize,
    w: usize,
    hits: usize,
    cfg: &BuildConfig,
) -> Result<Weighted> {
    mapping_feasible(m, k0, k1, w, hits)?;
    if k0 + k1 == 0 {
        let at_end: Vec<usize> = (m - w..m).collect();
        return Ok(Weighted {
            n: m,
            ones: w,
            functions: vec![Function::from_ones(m, &at_end)],
            coverage: Vec::new(),
            sampled: false,
        });
    }
    if m > 128 {
        return Err(Error::bad(format!("greedy universe {m} exceeds 128")));
    }
    if binomial(m, k0 + k1).saturating_mul(binomial(k0 + k1, k1)) > TARGET_LIMIT {
        return Err(Error::bad("mapping targets exceed the enumeration limit"));
    }
    let targets = split_targets(m, k0, k1);
    let (pool, full) = weighted_pool(m, w, cfg.pool, cfg.seed)?;
    let outcome = greedy_cover(&pool, &targets, |f, &(s0, s1)| {
        f & s0 == 0 && (f & s1).count_ones() as usize == hits
    })?;
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

fn into_mapping(
    w: Weighted,
    k0: usize,
    k1: usize,
    alpha: Fraction,
    beta: Fraction,
    prov: Provenance,
) -> Result<Family> {
    Ok(Family::mapping(w.n, k0, k1, alpha, beta, w.functions)?.with_provenance(prov))
}

/// Greedy cover of all `(S0, S1)` pairs on `[m]`.
pub fn base_mapping_family(
    m: usize,
    k0: usize,
    k1: usize,
    ones_fraction: Fraction,
    beta: Fraction,
    cfg: &BuildConfig,
) -> Result<Family> {
    if beta > Fraction::one() {
        return Err(Error::bad("beta must be at most 1"));
    }
    let w = ones_fraction.ceil_mul(m);
    let built = base_mapping_with_ones(m, k0, k1, w, beta.ceil_mul(k1), cfg)?;
    let mut prov = Provenance::new("base_mapping_family");
    prov.out_of_regime = built.sampled;
    prov.seed = built.sampled.then_some(cfg.seed);
    prov.note("pool", if built.sampled { "sampled" } else { "full" });
    prov.coverage = built.coverage.clone();
    certify(into_mapping(built, k0, k1, ones_fraction, beta, prov)?, cfg)
}

fn lift_raw(k: usize, splitter: &Family, bases: &BTreeMap<usize, Weighted>, target: usize) -> Result<Vec<Function>> {
    let mut out = Vec::new();
    for f in splitter.functions() {
        let fc = f.compress();
        let c = fc.ell();
        let base = bases
            .get(&c)
            .ok_or_else(|| Error::SizeMismatch(format!("no base family on [{c}]")))?;
        for b in &base.functions {
            let g = compose(b, &fc)?;
            let ones = g.ones();
            if ones == target {
                out.extend(std::iter::repeat_n(g, k + 1));
                continue;
            }
            let (side, delta, flip_to) = if ones < target {
                (0, target - ones, 1)
            } else {
                (1, ones - target, 0)
            };
            let pool = g.preimage(side);
            let block = pool.len() / (k + 1);
            if block < delta {
                return Err(Error::SizeMismatch(format!(
                    "blocks of {block} elements cannot absorb a ones correction of {delta}"
                )));
            }
            for j in 0..=k {
                let lo = j * pool.len() / (k + 1);
                let mut images = g.images().to_vec();
                for &x in &pool[lo..lo + delta] {
                    images[x] = flip_to;
                }
                out.push(Function::from_images(2, images));
            }
        }
    }
    Ok(out)
}

/// Compose each member of a uniform splitter with the base family for its
/// image size, then emit k+1 ones-count repairs, one per block of a
/// (k+1)-way partition of the side that needs flipping.
pub fn lift_mapping_family(
    splitter: &Family,
    bases: &BTreeMap<usize, Family>,
    ones_fraction: Fraction,
    cfg: &BuildConfig,
) -> Result<Family> {
    if !verify_uniformity(splitter, Uniformity::Uniform).valid {
        return Err(Error::UniformityRequired);
    }
    let first = bases
        .values()
        .next()
        .ok_or_else(|| Error::SizeMismatch("no base families".into()))?;
    let (k0, k1, beta) = (
        first.k0().unwrap_or(0),
        first.k1().unwrap_or(0),
        first.beta().unwrap_or(Fraction::one()),
    );
    if bases
        .values()
        .any(|b| b.k0() != Some(k0) || b.k1() != Some(k1) || b.beta() != Some(beta))
    {
        return Err(Error::SizeMismatch("base families disagree on (k0, k1, beta)".into()));
    }
    let mut weighted = BTreeMap::new();
    for (&c, b) in bases {
        if b.n() != c {
            return Err(Error::SizeMismatch(format!("base keyed {c} lives on [{}]", b.n())));
        }
        weighted.insert(
            c,
            Weighted {
                n: c,
                ones: b.ones_target().unwrap_or(0),
                functions: b.functions().to_vec(),
                coverage: Vec::new(),
                sampled: false,
            },
        );
    }
    let n = splitter.n();
    let functions = lift_raw(splitter.k(), splitter, &weighted, ones_fraction.ceil_mul(n))?;
    let mut prov = Provenance::new("lift_mapping_family");
    prov.out_of_regime = true;
    prov.note("splitter_size", splitter.len());
    let fam = Family::mapping(n, k0, k1, ones_fraction, beta, functions)?.with_provenance(prov);
    certify(fam, cfg)
}

/// Hit counts per stage: stage `i` of `t` must send `targets[i]` of the
/// `residuals[i]` still-unhit elements of `S1` to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaSchedule {
    pub k: usize,
    pub k1: usize,
    pub t: usize,
    pub targets: Vec<usize>,
    /// `residuals[0] = k1`, `residuals[t] = 0`.
    pub residuals: Vec<usize>,
}

impl BetaSchedule {
    /// Geometric profile `k1 e^{-i/sqrt k} / sum_j e^{-j/sqrt k}`; each stage
    /// takes the ceiling of its share and the last stage takes the rest.
    pub fn with_stages(k: usize, k1: usize, t: usize) -> Result<Self> {
        if k1 > k {
            return Err(Error::bad(format!("k1 = {k1} exceeds k = {k}")));
        }
        if t == 0 {
            if k1 > 0 {
                return Err(Error::bad("no stages to place the ones of S1"));
            }
            return Ok(BetaSchedule {
                k,
                k1,
                t,
                targets: Vec::new(),
                residuals: vec![0],
            });
        }
        let root = (k.max(1) as f64).sqrt();
        let weights: Vec<f64> = (1..=t).map(|i| (-(i as f64) / root).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut remaining = k1;
        let mut targets = Vec::with_capacity(t);
        let mut residuals = vec![k1];
        for (i, w) in weights.iter().enumerate() {
            let share = if i + 1 == t {
                remaining
            } else {
                let raw = k1 as f64 * w / total;
                let snapped = if (raw - raw.round()).abs() < 1e-9 {
                    raw.round()
                } else {
                    raw.ceil()
                };
                (snapped as usize).min(remaining)
            };
            targets.push(share);
            remaining -= share;
            residuals.push(remaining);
        }
        Ok(BetaSchedule {
            k,
            k1,
            t,
            targets,
            residuals,
        })
    }

    pub fn new(k: usize, k1: usize, alpha: Fraction) -> Result<Self> {
        BetaSchedule::with_stages(k, k1, crate::bisector::iteration_count(k, alpha)?)
    }

    /// `beta_i = targets[i] / residuals[i]`, taken as 1 once nothing is left.
    pub fn beta(&self, i: usize) -> Fraction {
        if self.residuals[i] == 0 {
            Fraction::one()
        } else {
            Fraction::new(self.targets[i] as u64, self.residuals[i] as u64).expect("nonzero residual")
        }
    }
}

/// See [`BetaSchedule::new`].
pub fn beta_schedule(k: usize, k1: usize, alpha: Fraction) -> Result<BetaSchedule> {
    BetaSchedule::new(k, k1, alpha)
}

/// A stage mapping family on `[z]`: direct greedy when small, otherwise
/// lifted through a uniform splitter.
fn stage_mapping(z: usize, k0: usize, ki: usize, w: usize, hits: usize, cfg: &BuildConfig) -> Result<Weighted> {
    let k = k0 + ki;
    if k == 0 || z <= cfg.direct_limit {
        let mut out = base_mapping_with_ones(z, k0, ki, w, hits, cfg)?;
        out.functions = dedup_in_order(out.functions);
        return Ok(out);
    }
    let width = cfg.direct_limit.max(k);
    let splitter = build_splitter_raw(z, k, width, Uniformity::Uniform, cfg)?;
    let mut bases = BTreeMap::new();
    for f in splitter.functions() {
        let c = f.image_size();
        if let std::collections::btree_map::Entry::Vacant(e) = bases.entry(c) {
            e.insert(base_mapping_with_ones(c, k0, ki, (w * c).div_ceil(z), hits, cfg)?);
        }
    }
    let sampled = bases.values().any(|b: &Weighted| b.sampled) || splitter.provenance().seed.is_some();
    let functions = dedup_in_order(lift_raw(k, &splitter, &bases, w)?);
    Ok(Weighted {
        n: z,
        ones: w,
        functions,
        coverage: Vec::new(),
        sampled,
    })
}

/// Clamp each stage's hit count to what the stage can realise, pushing any
/// shortfall to later stages. The last stage must take every residual.
fn fit_schedule(stages: &[(usize, usize)], k0: usize, schedule: &BetaSchedule) -> Result<Vec<(usize, usize)>> {
    let mut left = schedule.k1;
    let mut out = Vec::with_capacity(stages.len());
    for (i, &(z, w)) in stages.iter().enumerate() {
        let zeros = z - w;
        let lo = (k0 + left).saturating_sub(zeros);
        let hi = w.min(left);
        let want = if i + 1 == stages.len() {
            left
        } else {
            schedule.targets[i]
        };
        if lo > hi || want > hi && i + 1 == stages.len() {
            return Err(Error::bad(format!(
                "stage {i} on [{z}] with {w} ones cannot handle {left} residual ones"
            )));
        }
        let hits = want.clamp(lo, hi);
        out.push((left, hits));
        left -= hits;
    }
    if left > 0 {
        return Err(Error::bad("stages end with elements of S1 still unmapped"));
    }
    Ok(out)
}

pub(crate) fn iterated_mapping_raw(
    n: usize,
    k0: usize,
    k1: usize,
    alpha: Fraction,
    cfg: &BuildConfig,
) -> Result<(Weighted, Vec<(usize, usize)>)> {
    let total = alpha.ceil_mul(n);
    if k1 == 0 {
        return Ok((alpha_bisector_raw(n, k0, alpha, cfg)?, Vec::new()));
    }
    mapping_feasible(n, k0, k1, total, k1)?;
    let k = k0 + k1;
    let stages = stage_schedule(n, k, total);
    let schedule = BetaSchedule::with_stages(k, k1, stages.len())?;
    let plan = fit_schedule(&stages, k0, &schedule)?;
    let built = stages
        .iter()
        .zip(&plan)
        .map(|(&(z, w), &(ki, hits))| stage_mapping(z, k0, ki, w, hits, cfg))
        .collect::<Result<Vec<_>>>()?;
    let sampled = built.iter().any(|b| b.sampled);
    let functions = dedup_in_order(compose_stages(built));
    Ok((
        Weighted {
            n,
            ones: total,
            functions,
            coverage: Vec::new(),
            sampled,
        },
        plan,
    ))
}

/// Staged mapping family sending `S0` to 0 and all of `S1` to 1.
pub fn iterated_mapping_family(n: usize, k0: usize, k1: usize, alpha: Fraction, cfg: &BuildConfig) -> Result<Family> {
    if alpha >= Fraction::one() {
        return Err(Error::bad("alpha must be below 1"));
    }
    let k = k0 + k1;
    let out_of_regime = k < 16 || (n as u128) < (k as u128).pow(4);
    require_desk(out_of_regime, cfg, "iterated_mapping_family")?;
    let (built, plan) = iterated_mapping_raw(n, k0, k1, alpha, &nested(cfg))?;
    let mut prov = Provenance::new("iterated_mapping_family");
    prov.out_of_regime = out_of_regime || built.sampled;
    prov.note("stages", plan.len().max(1));
    if !plan.is_empty() {
        prov.note(
            "stage_hits",
            plan.iter()
                .map(|(r, h)| format!("{h}/{r}"))
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    certify(into_mapping(built, k0, k1, alpha, Fraction::one(), prov)?, cfg)
}

fn interval_mapping_small(
    n: usize,
    k0: usize,
    k1: usize,
    alpha: Fraction,
    cfg: &BuildConfig,
) -> Result<(Weighted, BTreeMap<&'static str, String>)> {
    let l0 = interval_parts(k0);
    let l1 = interval_parts(k1);
    let b0 = if k0 == 0 { 0 } else { k0.div_ceil(l0) };
    let b1 = if k1 == 0 { 0 } else { k1.div_ceil(l1) };
    let parts = if k0 > 0 && k1 > 0 { l0 + l1 - 1 } else { l0 + l1 };
    let shape = interval_shape(n, k0 + k1, parts, cfg)?;
    let aug = shape.augment;
    if aug < b0 + b1 || alpha.ceil_mul(aug) < b1 || aug - alpha.ceil_mul(aug) < b0 {
        return Err(Error::bad(format!(
            "augmented intervals of size {aug} cannot host budgets ({b0}, {b1})"
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
                e.insert(iterated_mapping_raw(a.len(), b0, b1, alpha, cfg)?.0);
            }
        }
        let subs: Vec<&Weighted> = plan.augmented.iter().map(|a| &cache[&a.len()]).collect();
        assemble(n, k0 + k1, &plan, &subs, target, false, &mut functions)?;
    }
    let before = functions.len();
    let functions = dedup_in_order(functions);
    let sampled = cache.values().any(|w| w.sampled);
    let mut notes = BTreeMap::new();
    notes.insert("guesses", guesses.to_string());
    notes.insert("parts", parts.to_string());
    notes.insert("part_budgets", format!("{b0},{b1}"));
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

/// Union over interval guesses of products of per-interval mapping families
/// with budgets `(ceil(k0/l0), ceil(k1/l1))`.
pub fn interval_mapping_family(n: usize, k0: usize, k1: usize, alpha: Fraction, cfg: &BuildConfig) -> Result<Family> {
    if alpha >= Fraction::one() {
        return Err(Error::bad("alpha must be below 1"));
    }
    if k1 == 0 {
        let b = crate::bisector::interval_bisector(n, k0, alpha, cfg)?;
        let prov = b.provenance().clone();
        return Ok(b.retag_mapping(k0, 0, Fraction::one()).with_provenance(prov));
    }
    let k = k0 + k1;
    let out_of_regime = (n as u128) < 4 * (k as u128).pow(6) || k < 16;
    require_desk(out_of_regime, cfg, "interval_mapping_family")?;
    let inner = nested(cfg);
    let (built, mut notes) = if n > cfg.interval_lift_above {
        let width = cfg.interval_lift_above.max(k);
        let splitter = build_splitter_raw(n, k, width, Uniformity::Uniform, &inner)?;
        let mut bases = BTreeMap::new();
        for f in splitter.functions() {
            let c = f.image_size();
            if let std::collections::btree_map::Entry::Vacant(e) = bases.entry(c) {
                e.insert(interval_mapping_small(c, k0, k1, alpha, &inner)?.0);
            }
        }
        let sampled = bases.values().any(|b: &Weighted| b.sampled);
        let functions = dedup_in_order(lift_raw(k, &splitter, &bases, alpha.ceil_mul(n))?);
        let mut notes = BTreeMap::new();
        notes.insert("lifted_by_splitter", splitter.len().to_string());
        (
            Weighted {
                n,
                ones: alpha.ceil_mul(n),
                functions,
                coverage: Vec::new(),
                sampled,
            },
            notes,
        )
    } else {
        interval_mapping_small(n, k0, k1, alpha, &inner)?
    };
    let mut prov = Provenance::new("interval_mapping_family");
    prov.out_of_regime = out_of_regime || built.sampled;
    for (key, v) in std::mem::take(&mut notes) {
        prov.note(key, v);
    }
    certify(into_mapping(built, k0, k1, alpha, Fraction::one(), prov)?, cfg)
}

/// Union over `k0 + k1 = k` of `(n, k0, k1, alpha, 1)`-mapping families,
/// duplicates removed with the first occurrence kept.
pub fn universal_set(n: usize, k: usize, alpha: Fraction, cfg: &BuildConfig) -> Result<Family> {
    if alpha >= Fraction::one() {
        return Err(Error::bad("alpha must be below 1"));
    }
    if k > n {
        return Err(Error::bad(format!("k = {k} exceeds n = {n}")));
    }
    let total = alpha.ceil_mul(n);
    let out_of_regime = alpha > Fraction::new(1, 2)? || (n as u128) < 4 * (k as u128).pow(6) || k < 16;
    require_desk(out_of_regime, cfg, "universal_set")?;
    let inner = nested(cfg);
    let mut prov = Provenance::new("universal_set");
    prov.out_of_regime = out_of_regime;
    prov.note("strategy", format!("{:?}", cfg.mapping_strategy).to_lowercase());
    let mut all = Vec::new();
    if k == 0 {
        let at_end: Vec<usize> = (n - total..n).collect();
        all.push(Function::from_ones(n, &at_end));
    }
    for k0 in (0..=k).filter(|_| k > 0) {
        let k1 = k - k0;
        let part = match cfg.mapping_strategy {
            MappingStrategy::Base => base_mapping_with_ones(n, k0, k1, total, k1, &inner)?.functions,
            MappingStrategy::Iterated => iterated_mapping_raw(n, k0, k1, alpha, &inner)?.0.functions,
            MappingStrategy::Interval => interval_mapping_family(n, k0, k1, alpha, &inner)?.into_functions(),
        };
        prov.note(format!("slice.{k0}.{k1}"), part.len());
        all.extend(part);
    }
    let before = all.len();
    let functions = dedup_in_order(all);
    prov.note("before_dedup", before);
    let fam = Family::universal(n, k, alpha, functions)?.with_provenance(prov);
    certify(fam, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_bisector, verify_mapping_family, verify_universal};

    fn frac(p: u64, q: u64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    fn cfg() -> BuildConfig {
        BuildConfig::default()
    }

    #[test]
    fn base_mapping_examples() {
        let fam = base_mapping_family(8, 1, 1, frac(1, 2), frac(1, 1), &cfg()).unwrap();
        let r = verify_mapping_family(&fam, 1, 1, frac(1, 2), frac(1, 1));
        assert!(r.valid);
        assert_eq!(r.checked, 56);

        let zero_beta = base_mapping_family(8, 1, 1, frac(1, 2), frac(0, 1), &cfg()).unwrap();
        assert!(verify_mapping_family(&zero_beta, 1, 1, frac(1, 2), frac(0, 1)).valid);
        let as_bisector = Family::bisector(8, 2, frac(1, 2), zero_beta.functions().to_vec()).unwrap();
        assert!(verify_bisector(&as_bisector, 2, frac(1, 2)).valid);

        let no_ones = base_mapping_family(8, 2, 0, frac(1, 2), frac(1, 2), &cfg()).unwrap();
        let as_bisector = Family::bisector(8, 2, frac(1, 2), no_ones.functions().to_vec()).unwrap();
        assert!(verify_bisector(&as_bisector, 2, frac(1, 2)).valid);
    }

    #[test]
    fn withheld_member_yields_witness() {
        let fam = base_mapping_family(8, 1, 1, frac(1, 2), frac(1, 1), &cfg()).unwrap();
        let fewer = Family::mapping(8, 1, 1, frac(1, 2), frac(1, 1), fam.functions()[1..].to_vec()).unwrap();
        let r = verify_mapping_family(&fewer, 1, 1, frac(1, 2), frac(1, 1));
        assert!(!r.valid);
        assert!(matches!(r.witness, Some(crate::Witness::Split { .. })));
    }

    #[test]
    fn lift_examples() {
        let splitter = Family::splitter(
            16,
            2,
            8,
            vec![
                Function::modulo(16, 8),
                Function::new(8, (0..16).map(|x| (x / 2) as u32).collect()).unwrap(),
            ],
        )
        .unwrap()
        .with_uniformity(Uniformity::Uniform);
        assert!(crate::verify::verify_splitter(&splitter, 2).valid);
        let base = base_mapping_family(8, 1, 1, frac(1, 2), frac(1, 1), &cfg()).unwrap();
        let bases = BTreeMap::from([(8usize, base.clone())]);
        let lifted = lift_mapping_family(&splitter, &bases, frac(1, 2), &cfg()).unwrap();
        assert_eq!(lifted.len(), 2 * base.len() * 3);
        assert!(verify_mapping_family(&lifted, 1, 1, frac(1, 2), frac(1, 1)).valid);

        let identity = Family::splitter(8, 2, 8, vec![Function::modulo(8, 8)]).unwrap();
        let same = lift_mapping_family(&identity, &bases, frac(1, 2), &cfg()).unwrap();
        assert_eq!(same.len(), 3 * base.len());

        let skewed = Family::splitter(8, 2, 8, vec![Function::new(8, vec![0, 0, 0, 1, 2, 3, 4, 5]).unwrap()]).unwrap();
        assert!(matches!(
            lift_mapping_family(&skewed, &bases, frac(1, 2), &cfg()),
            Err(Error::UniformityRequired)
        ));
    }

    #[test]
    fn lift_repairs_ones() {
        let splitter = crate::splitter::modulo_splitter(13, 2, 6, &cfg()).unwrap();
        let mut bases = BTreeMap::new();
        for f in splitter.functions() {
            let c = f.image_size();
            bases
                .entry(c)
                .or_insert_with(|| base_mapping_family(c, 1, 1, frac(1, 3), frac(1, 1), &cfg()).unwrap());
        }
        let lifted = lift_mapping_family(&splitter, &bases, frac(1, 3), &cfg()).unwrap();
        assert!(lifted.functions().iter().all(|f| f.ones() == 5));
        assert!(verify_mapping_family(&lifted, 1, 1, frac(1, 3), frac(1, 1)).valid);
    }

    #[test]
    fn schedule_examples() {
        let s = beta_schedule(16, 4, frac(1, 2)).unwrap();
        assert_eq!(s.t, 3);
        assert_eq!(s.targets, vec![2, 2, 0]);
        assert_eq!(s.targets.iter().sum::<usize>(), 4);
        assert_eq!(*s.residuals.last().unwrap(), 0);
        let empty = beta_schedule(16, 0, frac(1, 2)).unwrap();
        assert!(empty.targets.iter().all(|&t| t == 0));
        let one = BetaSchedule::with_stages(9, 5, 1).unwrap();
        assert_eq!(one.targets, vec![5]);
        assert_eq!(one.beta(0), Fraction::one());
        assert!(BetaSchedule::with_stages(4, 2, 0).is_err());
    }

    #[test]
    fn iterated_examples() {
        let fam = iterated_mapping_family(16, 1, 1, frac(1, 2), &cfg()).unwrap();
        assert!(verify_mapping_family(&fam, 1, 1, frac(1, 2), frac(1, 1)).valid);
        let fam = iterated_mapping_family(12, 2, 0, frac(1, 2), &cfg()).unwrap();
        assert!(verify_mapping_family(&fam, 2, 0, frac(1, 2), frac(1, 1)).valid);
        let multi = iterated_mapping_family(16, 1, 2, frac(3, 4), &cfg()).unwrap();
        assert!(verify_mapping_family(&multi, 1, 2, frac(3, 4), frac(1, 1)).valid);
    }

    #[test]
    fn iterated_through_lift() {
        let c = BuildConfig {
            direct_limit: 12,
            ..cfg()
        };
        let fam = iterated_mapping_family(30, 1, 1, frac(1, 2), &c).unwrap();
        assert!(verify_mapping_family(&fam, 1, 1, frac(1, 2), frac(1, 1)).valid);
    }

    #[test]
    fn interval_mapping_examples() {
        let fam = interval_mapping_family(32, 1, 1, frac(1, 2), &cfg()).unwrap();
        assert!(verify_mapping_family(&fam, 1, 1, frac(1, 2), frac(1, 1)).valid);
        let fam = interval_mapping_family(12, 1, 0, frac(1, 2), &cfg()).unwrap();
        assert!(verify_mapping_family(&fam, 1, 0, frac(1, 2), frac(1, 1)).valid);
        assert!(matches!(
            interval_mapping_family(5, 1, 1, frac(1, 2), &cfg()),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn universal_examples() {
        let fam = universal_set(8, 1, frac(1, 2), &cfg()).unwrap();
        assert!(verify_universal(&fam, 1, frac(1, 2)).valid);
        let fam = universal_set(8, 2, frac(1, 2), &cfg()).unwrap();
        let r = verify_universal(&fam, 2, frac(1, 2));
        assert!(r.valid);
        assert_eq!(r.checked, 112);
        assert!(fam.len() >= 4);
        assert!(
            verify_bisector(
                &Family::bisector(8, 2, frac(1, 2), fam.functions().to_vec()).unwrap(),
                2,
                frac(1, 2)
            )
            .valid
        );
        let trivial = universal_set(8, 0, frac(1, 2), &cfg()).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial.functions()[0].ones(), 4);
    }
}
