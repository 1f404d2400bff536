// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! Turning an a-uniform splitter into a uniform one.
//!
//! Each function is laid out as a table: column `i` lists `f^{-1}(i)` in
//! ascending order. The rows are cut into k+1 horizontal stripes, and every
//! stripe yields one new function obtained by moving that stripe's elements
//! between columns until all column heights are balanced. A k-subset misses
//! at least one stripe, and the function derived from that stripe agrees
//! with `f` on the subset.

use std::ops::Range;

use crate::config::BuildConfig;
use crate::error::{Error, Result};
use crate::family::{Family, Provenance, Uniformity};
use crate::function::Function;

/// The column layout of one function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingTable {
    /// `(value, elements)` for every value in the image, values ascending.
    pub columns: Vec<(u32, Vec<usize>)>,
    /// Minimum column height.
    pub h: usize,
    /// k stripes partitioning `[0, h)` followed by `[h, max height)`.
    pub stripes: Vec<Range<usize>>,
}

impl SmoothingTable {
    pub fn new(f: &Function, k: usize) -> Self {
        let mut columns: Vec<(u32, Vec<usize>)> = Vec::new();
        let sizes = f.class_sizes();
        let mut slot = vec![usize::MAX; f.ell()];
        for (v, &s) in sizes.iter().enumerate() {
            if s > 0 {
                slot[v] = columns.len();
                columns.push((v as u32, Vec::with_capacity(s)));
            }
        }
        for x in 0..f.n() {
            columns[slot[f.apply(x) as usize]].1.push(x);
        }
        let h = columns.iter().map(|c| c.1.len()).min().unwrap_or(0);
        let top = columns.iter().map(|c| c.1.len()).max().unwrap_or(0);
        let mut stripes: Vec<Range<usize>> = (0..k).map(|j| j * h / k..(j + 1) * h / k).collect();
        stripes.push(h..top);
        SmoothingTable { columns, h, stripes }
    }

    /// Move the elements of one stripe so every column ends up with
    /// `floor(n/c)` or `ceil(n/c)` elements.
    fn rebalance(&self, stripe: &Range<usize>, n: usize, ell: usize) -> Result<Function> {
        let c = self.columns.len();
        let mut images = vec![0u32; n];
        let mut removed = Vec::new();
        let mut remaining = Vec::with_capacity(c);
        for (v, col) in &self.columns {
            let mut kept = 0;
            for (row, &x) in col.iter().enumerate() {
                if stripe.contains(&row) {
                    removed.push(x);
                } else {
                    images[x] = *v;
                    kept += 1;
                }
            }
            remaining.push(kept);
        }
        removed.sort_unstable();

        let q = n / c;
        let r = n % c;
        if remaining.iter().any(|&h| h > q + 1) {
            return Err(Error::pre("a column stays above the balanced height"));
        }
        let mut big: Vec<bool> = remaining.iter().map(|&h| h == q + 1).collect();
        let forced = big.iter().filter(|&&b| b).count();
        if forced > r {
            return Err(Error::pre("too many columns stay above the balanced height"));
        }
        let mut extra = r - forced;
        for b in big.iter_mut() {
            if extra == 0 {
                break;
            }
            if !*b {
                *b = true;
                extra -= 1;
            }
        }
        let mut next = removed.into_iter();
        for (i, (v, _)) in self.columns.iter().enumerate() {
            let target = if big[i] { q + 1 } else { q };
            for _ in remaining[i]..target {
                let x = next.next().expect("deficits sum to the stripe size");
                images[x] = *v;
            }
        }
        debug_assert!(next.next().is_none());
        Ok(Function::from_images(ell, images))
    }
}

/// Replace each member of an a-uniform splitter by k+1 uniform functions.
pub fn smooth(family: &Family, a: usize, _cfg: &BuildConfig) -> Result<Family> {
    let n = family.n();
    let k = family.k();
    let ell = family.ell();
    if k == 0 {
        return Err(Error::bad("smoothing needs k >= 1"));
    }
    let need = a.saturating_mul(ell).saturating_mul(k + 1);
    if n < need {
        return Err(Error::pre(format!("n = {n} is below a*ell*(k+1) = {need}")));
    }
    let measured = family
        .functions()
        .iter()
        .map(Function::nonuniformity)
        .max()
        .unwrap_or(0);
    if measured > a {
        return Err(Error::NonuniformityExceeded { measured, allowed: a });
    }
    let mut functions = Vec::with_capacity(family.len() * (k + 1));
    for f in family.functions() {
        let table = SmoothingTable::new(f, k);
        for stripe in &table.stripes {
            functions.push(table.rebalance(stripe, n, ell)?);
        }
    }
    let mut prov = Provenance::new("smooth");
    prov.out_of_regime = family.provenance().out_of_regime;
    prov.note("a", a);
    prov.note("input_size", family.len());
    Ok(Family::splitter(n, k, ell, functions)?
        .with_uniformity(Uniformity::Uniform)
        .with_provenance(prov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_splitter, verify_uniformity};

    fn digits_family() -> Family {
        // x mod 4, (x/4 + x) mod 4, (x/16 + x) mod 4: a uniform (60,2,4)-splitter.
        let f0 = Function::modulo(60, 4);
        let g1 = Function::new(4, (0..60).map(|x| ((x / 4 + x) % 4) as u32).collect()).unwrap();
        let g2 = Function::new(4, (0..60).map(|x| ((x / 16 + x) % 4) as u32).collect()).unwrap();
        // Perturb a copy of g1: move one element from class 0 to class 1.
        let mut images = g1.images().to_vec();
        let x = images.iter().position(|&v| v == 0).unwrap();
        images[x] = 1;
        let g1p = Function::new(4, images).unwrap();
        Family::splitter(60, 2, 4, vec![f0, g1, g2, g1p]).unwrap()
    }

    #[test]
    fn stripes_partition_rows() {
        let f = Function::new(3, vec![0, 0, 0, 1, 1, 2, 2, 2, 2, 0]).unwrap();
        let t = SmoothingTable::new(&f, 2);
        assert_eq!(t.h, 2);
        assert_eq!(t.stripes, vec![0..1, 1..2, 2..4]);
        assert_eq!(t.columns[0].1, vec![0, 1, 2, 9]);
    }

    #[test]
    fn two_uniform_input_becomes_uniform() {
        let fam = digits_family();
        assert_eq!(fam.functions().iter().map(Function::nonuniformity).max(), Some(2));
        assert!(verify_splitter(&fam, 2).valid);
        let out = smooth(&fam, 2, &BuildConfig::default()).unwrap();
        assert_eq!(out.len(), 3 * fam.len());
        assert!(verify_uniformity(&out, Uniformity::Uniform).valid);
        assert!(verify_splitter(&out, 2).valid);
    }

    #[test]
    fn uniform_input_with_zero_slack() {
        let fam = Family::splitter(
            12,
            2,
            4,
            vec![
                Function::modulo(12, 4),
                Function::new(4, (0..12).map(|x| (x / 3) as u32).collect()).unwrap(),
            ],
        )
        .unwrap();
        let out = smooth(&fam, 0, &BuildConfig::default()).unwrap();
        assert_eq!(out.len(), 6);
        assert!(out.functions().iter().all(|f| f.class_sizes() == vec![3, 3, 3, 3]));
        assert!(verify_splitter(&out, 2).valid);
    }

    #[test]
    fn figure_parameters_fail_precondition() {
        let f = Function::modulo(713, 30);
        let fam = Family::splitter(713, 5, 30, vec![f]).unwrap();
        assert!(matches!(
            smooth(&fam, 5, &BuildConfig::default()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn excess_nonuniformity_is_rejected() {
        let fam = digits_family();
        assert!(matches!(
            smooth(&fam, 1, &BuildConfig::default()),
            Err(Error::NonuniformityExceeded {
                measured: 2,
                allowed: 1
            })
        ));
    }
}
