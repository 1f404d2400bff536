// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Splitter constructions: residues modulo primes, two-level composition,
//! greedy search over balanced maps, and the dispatcher tying them together.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use crate::certify::{certify, nested, require_desk};
use crate::combin::Combinations;
use crate::config::BuildConfig;
use crate::error::{Error, Result};
use crate::family::{Family, Provenance, Uniformity};
use crate::function::{compose, Function};
use crate::greedy::{balanced_pool, greedy_cover};
use crate::primes::{at_least_k2_log_n, k2_log_n_ceil, prime_window};
use crate::smooth::smooth;
use crate::verify::{verify_splitter_on, verify_uniformity};

fn identity(n: usize, ell: usize) -> Function {
    Function::from_images(ell, (0..n as u32).collect())
}

fn single(n: usize, k: usize, ell: usize, f: Function, builder: &str, how: &str, u: Uniformity) -> Result<Family> {
    let mut prov = Provenance::new(builder);
    prov.note("branch", how);
    Ok(Family::splitter(n, k, ell, vec![f])?
        .with_uniformity(u)
        .with_provenance(prov))
}

fn check_basic(n: usize, k: usize, ell: usize) -> Result<()> {
    if n == 0 || ell == 0 {
        return Err(Error::bad("splitters need n >= 1 and ell >= 1"));
    }
    if k > n {
        return Err(Error::bad(format!("k = {k} exceeds n = {n}")));
    }
    if ell < k {
        return Err(Error::bad(format!("ell = {ell} < k = {k} cannot split injectively")));
    }
    Ok(())
}

/// Largest widths of the trivial cases shared by every splitter builder.
fn trivial(n: usize, k: usize, ell: usize, builder: &str) -> Result<Option<Family>> {
    if ell >= n {
        return single(n, k, ell, identity(n, ell), builder, "identity", Uniformity::Strong).map(Some);
    }
    if k <= 1 {
        return single(
            n,
            k,
            ell,
            Function::from_images(ell, Function::modulo(n, ell).into_images()),
            builder,
            "single_residue",
            Uniformity::Strong,
        )
        .map(Some);
    }
    Ok(None)
}

/// One map `x -> x mod p` per prime `p` of the window for `(n, k, ell)`.
pub fn modulo_splitter(n: usize, k: usize, ell: usize, cfg: &BuildConfig) -> Result<Family> {
    certify(modulo_splitter_raw(n, k, ell, cfg)?, cfg)
}

pub(crate) fn modulo_splitter_raw(n: usize, k: usize, ell: usize, cfg: &BuildConfig) -> Result<Family> {
    check_basic(n, k, ell)?;
    if let Some(f) = trivial(n, k, ell, "modulo_splitter")? {
        return Ok(f.with_uniformity(Uniformity::Uniform));
    }
    let window = prime_window(n, k, ell)?;
    let out_of_regime = window.out_of_regime || k < 8 || !at_least_k2_log_n(ell, n, k);
    require_desk(out_of_regime, cfg, "modulo_splitter")?;
    let functions = window
        .moduli
        .iter()
        .map(|&p| Function::from_images(ell, Function::modulo(n, p).into_images()))
        .collect();
    let mut prov = Provenance::new("modulo_splitter");
    prov.out_of_regime = out_of_regime;
    prov.note("branch", format!("{:?}", window.regime).to_lowercase());
    prov.note("moduli", join(&window.moduli));
    Ok(Family::splitter(n, k, ell, functions)?
        .with_uniformity(Uniformity::Uniform)
        .with_provenance(prov))
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Largest `m <= cap` with `m^(k^2) <= 2^ell`.
fn intermediate_width(n: usize, k: usize, ell: usize, cap: usize) -> usize {
    let k2 = k * k;
    let guess = 2f64.powf(ell as f64 / k2 as f64).floor();
    let mut m = if guess >= cap as f64 { cap } else { guess as usize };
    let fits = |m: usize| BigUint::from(m).pow(k2 as u32) <= (BigUint::one() << ell);
    while m > 1 && !fits(m) {
        m -= 1;
    }
    while m < cap && fits(m + 1) {
        m += 1;
    }
    m.min(n)
}

pub(crate) fn max_nonuniformity(family: &Family) -> usize {
    family
        .functions()
        .iter()
        .map(Function::nonuniformity)
        .max()
        .unwrap_or(0)
}

/// Compose every `f` of `outer` (compressed onto its image) with each member
/// of the inner family built for that image size.
fn compose_stages<B>(outer: &Family, ell: usize, mut inner_for: B) -> Result<(Vec<Function>, BTreeMap<usize, usize>)>
where
    B: FnMut(usize) -> Result<Family>,
{
    let mut cache: BTreeMap<usize, Family> = BTreeMap::new();
    let mut functions = Vec::new();
    for f in outer.functions() {
        let fc = f.compress();
        let c = fc.ell();
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(c) {
            e.insert(inner_for(c)?);
        }
        for g in cache[&c].functions() {
            debug_assert_eq!(g.ell(), ell);
            functions.push(compose(g, &fc)?);
        }
    }
    let sizes = cache.iter().map(|(&c, fam)| (c, fam.len())).collect();
    Ok((functions, sizes))
}

/// Two modulo splitters chained through an intermediate codomain.
pub fn composed_splitter(n: usize, k: usize, ell: usize, cfg: &BuildConfig) -> Result<Family> {
    certify(composed_splitter_raw(n, k, ell, cfg)?, cfg)
}

pub(crate) fn composed_splitter_raw(n: usize, k: usize, ell: usize, cfg: &BuildConfig) -> Result<Family> {
    check_basic(n, k, ell)?;
    if let Some(f) = trivial(n, k, ell, "composed_splitter")? {
        return Ok(f.with_uniformity(Uniformity::AUniform(0)));
    }
    let ell_regime = ell >= k * k * k;
    require_desk(!ell_regime, cfg, "composed_splitter")?;

    let relabel = |mut fam: Family, branch: &str| {
        let p = fam.provenance_mut();
        p.builder = "composed_splitter".into();
        p.note("branch", branch);
        let a = max_nonuniformity(&fam);
        fam.with_uniformity(Uniformity::AUniform(a))
    };
    if at_least_k2_log_n(ell, n, k) {
        return Ok(relabel(modulo_splitter_raw(n, k, ell, cfg)?, "direct"));
    }
    let cap = n.min(cfg.max_intermediate);
    let mid = match cfg.intermediate {
        Some(m) => m.min(cap),
        None => intermediate_width(n, k, ell, cap),
    };
    if mid <= ell {
        return Ok(relabel(modulo_splitter_raw(n, k, ell, cfg)?, "degenerate"));
    }

    let outer = modulo_splitter_raw(n, k, mid, cfg)?;
    let (functions, inner_sizes) = compose_stages(&outer, ell, |c| modulo_splitter_raw(c, k, ell, cfg))?;
    let mut fam = Family::splitter(n, k, ell, functions)?;
    let measured = max_nonuniformity(&fam);

    let half_l = k2_log_n_ceil(n, k) as f64 / 2.0;
    let denom = mid as f64 - half_l;
    let bound = (denom > 0.0).then(|| (n as f64 / denom).ceil() as usize);
    let min_modulus = outer.functions().iter().map(Function::image_size).min().unwrap_or(mid);
    let in_regime = ell_regime
        && k >= 8
        && cfg.intermediate.is_none()
        && !outer.provenance().out_of_regime
        && (min_modulus as f64) >= denom;
    if let (true, Some(b)) = (in_regime, bound) {
        if measured > b {
            return Err(Error::NonuniformityExceeded { measured, allowed: b });
        }
    }

    let mut prov = Provenance::new("composed_splitter");
    prov.out_of_regime = !in_regime;
    prov.note("branch", "two_stage");
    prov.note("intermediate", mid);
    prov.note("outer_size", outer.len());
    prov.note(
        "inner_sizes",
        inner_sizes
            .iter()
            .map(|(c, s)| format!("{c}:{s}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    prov.note("nonuniformity", measured);
    if let Some(b) = bound {
        prov.note("nonuniformity_bound", b);
    }
    fam = fam
        .with_uniformity(Uniformity::AUniform(measured))
        .with_provenance(prov);
    Ok(fam)
}

/// `S` split as evenly as possible: injective when `ell >= |S|`.
fn even_split(f: &[u8], set: &[usize], ell: usize) -> bool {
    let k = set.len();
    if ell >= k {
        let mut seen = [0u64; 4];
        for &x in set {
            let v = f[x] as usize;
            if seen[v >> 6] & (1 << (v & 63)) != 0 {
                return false;
            }
            seen[v >> 6] |= 1 << (v & 63);
        }
        return true;
    }
    let lo = k / ell;
    let hi = k.div_ceil(ell);
    let mut distinct = 0;
    for (i, &x) in set.iter().enumerate() {
        let v = f[x];
        if set[..i].iter().any(|&y| f[y] == v) {
            continue;
        }
        distinct += 1;
        let count = set[i..].iter().filter(|&&y| f[y] == v).count();
        if count < lo || count > hi {
            return false;
        }
    }
    distinct == ell
}

/// `((ell - k) / ell)^k`, the chance a uniform map is injective scaled down
/// to a per-target lower bound.
pub fn splitter_progress_bound(k: usize, ell: usize) -> Ratio<u128> {
    if ell < k {
        return Ratio::from_integer(0);
    }
    Ratio::new(((ell - k) as u128).pow(k as u32), (ell as u128).pow(k as u32))
}

/// Greedy cover of the target k-subsets of `[t]` by balanced maps `[t] -> [ell]`.
pub fn brute_force_splitter(
    t: usize,
    k: usize,
    ell: usize,
    subsets: Option<&[Vec<usize>]>,
    cfg: &BuildConfig,
) -> Result<Family> {
    let mut fam = brute_force_splitter_raw(t, k, ell, subsets, cfg)?;
    match subsets {
        None => certify(fam, cfg),
        Some(targets) if fam.provenance().out_of_regime && !cfg.skip_certify => {
            let report = verify_splitter_on(&fam, targets);
            fam.provenance_mut().valid = Some(report.valid);
            if report.valid {
                Ok(fam)
            } else {
                Err(Error::Uncertified {
                    family: Box::new(fam),
                    report: Box::new(report),
                })
            }
        }
        Some(_) => Ok(fam),
    }
}

pub(crate) fn brute_force_splitter_raw(
    t: usize,
    k: usize,
    ell: usize,
    subsets: Option<&[Vec<usize>]>,
    cfg: &BuildConfig,
) -> Result<Family> {
    check_basic(t, k, ell)?;
    if ell > 256 {
        return Err(Error::bad("brute-force codomain above 256"));
    }
    let out_of_regime = ell < k * k;
    require_desk(out_of_regime, cfg, "brute_force_splitter")?;
    let targets: Vec<Vec<usize>> = match subsets {
        Some(s) => {
            if let Some(bad) = s.iter().find(|s| s.len() != k || s.iter().any(|&x| x >= t)) {
                return Err(Error::bad(format!("target {bad:?} is not a {k}-subset of [{t}]")));
            }
            s.to_vec()
        }
        None => Combinations::new(t, k).collect(),
    };
    let (pool, full) = balanced_pool(t, ell, cfg.pool, cfg.seed)?;
    let outcome = greedy_cover(&pool, &targets, |f, s| even_split(f, s, ell))?;
    let functions = outcome
        .chosen
        .iter()
        .map(|&i| Function::from_images(ell, pool[i].iter().map(|&v| v as u32).collect()))
        .collect();
    let mut prov = Provenance::new("brute_force_splitter");
    prov.out_of_regime = out_of_regime || !full;
    if subsets.is_some() {
        prov.note("scope", "given_targets");
    }
    prov.seed = (!full).then_some(cfg.seed);
    prov.note("pool", if full { "full" } else { "sampled" });
    prov.note("pool_size", pool.len());
    prov.note("targets", targets.len());
    prov.note("progress_bound", splitter_progress_bound(k, ell));
    prov.coverage = outcome.log;
    Ok(Family::splitter(t, k, ell, functions)?
        .with_uniformity(Uniformity::Strong)
        .with_provenance(prov))
}

fn composed_brute_force(
    n: usize,
    k: usize,
    ell: usize,
    mid: usize,
    inner: &BuildConfig,
) -> Result<(Family, &'static str)> {
    let outer = composed_splitter_raw(n, k, mid, inner)?;
    let (functions, _) = compose_stages(&outer, ell, |c| {
        if c <= ell {
            Ok(Family::splitter(c, k, ell, vec![identity(c, ell)])?)
        } else {
            brute_force_splitter_raw(c, k, ell, None, inner)
        }
    })?;
    let fam = Family::splitter(n, k, ell, functions)?;
    let a = max_nonuniformity(&fam);
    Ok((fam.with_uniformity(Uniformity::AUniform(a)), "composed_brute_force"))
}

/// Dispatch to the construction matching the size of `k` against
/// `log2 log2 n`, then smooth to the requested balance.
pub fn build_splitter(n: usize, k: usize, ell: usize, goal: Uniformity, cfg: &BuildConfig) -> Result<Family> {
    certify(build_splitter_raw(n, k, ell, goal, cfg)?, cfg)
}

pub(crate) fn build_splitter_raw(
    n: usize,
    k: usize,
    ell: usize,
    goal: Uniformity,
    cfg: &BuildConfig,
) -> Result<Family> {
    check_basic(n, k, ell)?;
    if let Some(f) = trivial(n, k, ell, "build_splitter")? {
        return Ok(f);
    }
    let inner = nested(cfg);
    let out_of_regime = ell < k * k * k || k < 8;
    require_desk(out_of_regime, cfg, "build_splitter")?;

    let loglog = (n as f64).log2().log2();
    let routed = if goal == Uniformity::Strong {
        brute_force_splitter_raw(n, k, ell, None, &inner).map(|f| (f, "brute_force"))
    } else if k as f64 >= loglog {
        composed_splitter_raw(n, k, ell, &inner).map(|f| (f, "composed"))
    } else {
        let mid = (loglog.powi(6).ceil() as usize)
            .min(n)
            .min(cfg.direct_limit.max(ell + 1));
        if mid <= ell {
            composed_splitter_raw(n, k, ell, &inner).map(|f| (f, "composed"))
        } else {
            composed_brute_force(n, k, ell, mid, &inner)
        }
    };
    // Desk-scale windows may lack primes below ell; greedy needs none.
    let routed = match routed {
        Err(Error::InsufficientPrimes { .. }) if cfg.desk_mode => Ok((
            brute_force_splitter_raw(n, k, ell, None, &inner)?,
            "brute_force_fallback",
        )),
        other => other,
    };
    let (mut fam, branch) = routed?;

    let mut branch = branch.to_string();
    if goal == Uniformity::Uniform && !verify_uniformity(&fam, Uniformity::Uniform).valid {
        let a = max_nonuniformity(&fam);
        match smooth(&fam, a, &inner) {
            Ok(s) => {
                fam = s;
                branch.push_str("+smooth");
            }
            Err(Error::PreconditionFailed(_)) => {
                fam = brute_force_splitter_raw(n, k, ell, None, &inner)?;
                branch = "brute_force_fallback".into();
            }
            Err(e) => return Err(e),
        }
    }
    let claimed = match goal {
        Uniformity::Uniform => Uniformity::Uniform,
        Uniformity::Strong => Uniformity::Strong,
        _ => fam.uniformity(),
    };
    let seed = fam.provenance().seed;
    let mut prov = Provenance::new("build_splitter");
    prov.out_of_regime = out_of_regime;
    prov.seed = seed;
    prov.note("branch", branch);
    prov.note("goal", goal);
    Ok(fam.with_uniformity(claimed).with_provenance(prov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_splitter;

    fn cfg() -> BuildConfig {
        BuildConfig::default()
    }

    #[test]
    fn modulo_examples() {
        let fam = modulo_splitter(16, 2, 8, &cfg()).unwrap();
        assert_eq!(fam.len(), 2);
        let r = verify_splitter(&fam, 2);
        assert!(r.valid);
        assert_eq!(r.checked, 120);
        assert!(fam.functions().iter().all(|f| f.nonuniformity() <= 1));

        let fam = modulo_splitter(5, 2, 5, &cfg()).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.functions()[0].images(), &[0, 1, 2, 3, 4]);

        assert!(matches!(modulo_splitter(6, 3, 2, &cfg()), Err(Error::BadParams(_))));
    }

    #[test]
    fn strict_mode_rejects_desk_parameters() {
        assert!(matches!(
            modulo_splitter(16, 2, 8, &BuildConfig::strict()),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn composed_examples() {
        let fam = composed_splitter(256, 2, 16, &cfg()).unwrap();
        assert_eq!(fam.provenance().notes["branch"], "degenerate");
        assert!(verify_splitter(&fam, 2).valid);

        let c = BuildConfig {
            intermediate: Some(12),
            ..cfg()
        };
        let fam = composed_splitter(24, 2, 8, &c).unwrap();
        assert_eq!(fam.provenance().notes["branch"], "two_stage");
        let r = verify_splitter(&fam, 2);
        assert!(r.valid);
        assert_eq!(r.checked, 276);

        assert!(matches!(composed_splitter(10, 4, 3, &cfg()), Err(Error::BadParams(_))));
    }

    #[test]
    fn composed_sizes_multiply() {
        let fam = composed_splitter(1024, 2, 20, &cfg()).unwrap();
        let notes = &fam.provenance().notes;
        assert_eq!(notes["intermediate"], "32");
        let outer: usize = notes["outer_size"].parse().unwrap();
        let inner: BTreeMap<usize, usize> = notes["inner_sizes"]
            .split(',')
            .map(|p| {
                let (a, b) = p.split_once(':').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        assert!(outer >= 1);
        assert_eq!(fam.len(), inner.values().sum::<usize>() * outer / inner.len().max(1));
        assert!(verify_splitter(&fam, 2).valid);
    }

    #[test]
    fn brute_force_examples() {
        let fam = brute_force_splitter(6, 2, 4, None, &cfg()).unwrap();
        assert!(verify_splitter(&fam, 2).valid);
        assert!(verify_uniformity(&fam, Uniformity::Strong).valid);
        for step in &fam.provenance().coverage {
            assert!(4 * step.covered >= step.remaining, "{step:?}");
        }
        assert_eq!(brute_force_splitter(4, 1, 2, None, &cfg()).unwrap().len(), 1);
        let perm = brute_force_splitter(5, 5, 5, None, &cfg()).unwrap();
        assert_eq!(perm.len(), 1);
        assert_eq!(perm.functions()[0].images(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn brute_force_on_given_targets() {
        let targets = vec![vec![0, 1], vec![2, 3]];
        let fam = brute_force_splitter(6, 2, 3, Some(&targets), &cfg()).unwrap();
        assert!(fam.functions().iter().any(|f| f.apply(0) != f.apply(1)));
        assert!(brute_force_splitter(6, 2, 3, Some(&[vec![0, 9]]), &cfg()).is_err());
    }

    #[test]
    fn build_examples() {
        let fam = build_splitter(24, 2, 8, Uniformity::Uniform, &cfg()).unwrap();
        assert!(fam.provenance().notes.contains_key("branch"));
        assert!(verify_splitter(&fam, 2).valid);
        assert!(verify_uniformity(&fam, Uniformity::Uniform).valid);

        let fam = build_splitter(8, 2, 8, Uniformity::Strong, &cfg()).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(matches!(
            build_splitter(10, 3, 2, Uniformity::None, &cfg()),
            Err(Error::BadParams(_))
        ));
    }
}
