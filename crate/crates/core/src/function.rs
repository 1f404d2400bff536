// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A total map `[n] -> [ell]` stored as its image sequence.
///
/// Ordering is lexicographic on the image sequence, which is the order the
/// greedy engine breaks ties in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Function {
    images: Vec<u32>,
    ell: usize,
    /// Cached ones count, present exactly when `ell == 2`.
    ones: Option<usize>,
}

impl Function {
    /// Checked constructor; `n` is the length of `images`.
    pub fn new(ell: usize, images: Vec<u32>) -> Result<Self> {
        if let Some((index, &value)) = images.iter().enumerate().find(|(_, &v)| v as usize >= ell) {
            return Err(Error::ImageOutOfRange { index, value, ell });
        }
        Ok(Function::from_images(ell, images))
    }

    /// Caller guarantees every image is below `ell`.
    pub(crate) fn from_images(ell: usize, images: Vec<u32>) -> Self {
        debug_assert!(images.iter().all(|&v| (v as usize) < ell));
        let ones = (ell == 2).then(|| images.iter().filter(|&&v| v == 1).count());
        Function { images, ell, ones }
    }

    /// `x -> x mod m` on `[n]`.
    pub fn modulo(n: usize, m: usize) -> Self {
        Function::from_images(m, (0..n).map(|x| (x % m) as u32).collect())
    }

    /// Binary function on `[n]` from a bitmask of its ones.
    pub(crate) fn from_mask(n: usize, mask: u128) -> Self {
        Function::from_images(2, (0..n).map(|x| ((mask >> x) & 1) as u32).collect())
    }

    /// Binary function on `[n]` from a sorted list of its ones.
    pub(crate) fn from_ones(n: usize, ones: &[usize]) -> Self {
        let mut images = vec![0u32; n];
        for &x in ones {
            images[x] = 1;
        }
        Function::from_images(2, images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> u32 {
        self.images[x]
    }

    /// Counts of each image value; entry `j` is `|f^{-1}(j)|`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.ell];
        for &v in &self.images {
            sizes[v as usize] += 1;
        }
        sizes
    }

    /// Histogram keyed by image value, omitting values outside the image.
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &v in &self.images {
            *h.entry(v).or_insert(0) += 1;
        }
        h
    }

    /// Max minus min class size over the actual image.
    pub fn nonuniformity(&self) -> usize {
        let sizes = self.class_sizes();
        let used = sizes.iter().copied().filter(|&s| s > 0);
        let max = used.clone().max().unwrap_or(0);
        let min = used.min().unwrap_or(0);
        max - min
    }

    /// Number of distinct image values.
    pub fn image_size(&self) -> usize {
        self.class_sizes().iter().filter(|&&s| s > 0).count()
    }

    /// Number of positions mapped to 1.
    pub fn ones(&self) -> usize {
        self.ones
            .unwrap_or_else(|| self.images.iter().filter(|&&v| v == 1).count())
    }

    /// Positions mapped to `value`, ascending.
    pub fn preimage(&self, value: u32) -> Vec<usize> {
        (0..self.n()).filter(|&x| self.images[x] == value).collect()
    }

    /// Relabel the image onto `[0, image_size)` preserving value order.
    pub(crate) fn compress(&self) -> Function {
        let sizes = self.class_sizes();
        let mut rank = vec![0u32; self.ell];
        let mut next = 0u32;
        for (v, &s) in sizes.iter().enumerate() {
            if s > 0 {
                rank[v] = next;
                next += 1;
            }
        }
        Function::from_images(
            next.max(1) as usize,
            self.images.iter().map(|&v| rank[v as usize]).collect(),
        )
    }

    pub(crate) fn into_images(self) -> Vec<u32> {
        self.images
    }
}

/// `counts[i] = |f^{-1}(i)|` for every `i` in `[ell]`.
pub fn image_histogram(f: &Function) -> Vec<usize> {
    f.class_sizes()
}

/// Largest gap between two nonempty class sizes of `f`.
pub fn nonuniformity(f: &Function) -> usize {
    f.nonuniformity()
}

/// Checked constructor with an explicit domain size.
pub fn make_function(n: usize, ell: usize, images: Vec<u32>) -> Result<Function> {
    if images.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: images.len(),
        });
    }
    Function::new(ell, images)
}

/// `outer . inner`, applying `inner` first.
pub fn compose(outer: &Function, inner: &Function) -> Result<Function> {
    if inner.ell() != outer.n() {
        return Err(Error::CodomainMismatch {
            inner_ell: inner.ell(),
            outer_n: outer.n(),
        });
    }
    Ok(Function::from_images(
        outer.ell(),
        inner.images.iter().map(|&y| outer.images[y as usize]).collect(),
    ))
}

/// Replace the zero set of `base` by the values of `stage`, which is defined
/// on the zero set in ascending order. Ones of `base` stay ones.
pub(crate) fn refine_zeros(base: &Function, stage: &Function) -> Function {
    let mut images = base.images.clone();
    let mut rank = 0;
    for v in images.iter_mut() {
        if *v == 0 {
            *v = stage.images[rank];
            rank += 1;
        }
    }
    debug_assert_eq!(rank, stage.n());
    Function::from_images(2, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_function_checks_shape() {
        assert!(matches!(
            make_function(3, 2, vec![0, 1]),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            make_function(2, 2, vec![0, 2]),
            Err(Error::ImageOutOfRange {
                index: 1,
                value: 2,
                ell: 2
            })
        ));
    }

    #[test]
    fn binary_functions_cache_ones() {
        let f = make_function(4, 2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(f.ones(), 2);
        assert_eq!(image_histogram(&Function::modulo(7, 3)), vec![3, 2, 2]);
        assert_eq!(nonuniformity(&Function::modulo(10, 3)), 1);
        assert_eq!(nonuniformity(&Function::modulo(10, 5)), 0);
    }

    #[test]
    fn compose_spot_values() {
        let inner = Function::modulo(6, 3);
        let outer = Function::new(2, vec![1, 0, 0]).unwrap();
        assert_eq!(compose(&outer, &inner).unwrap().images(), &[1, 0, 0, 1, 0, 0]);
        let id = Function::modulo(5, 5);
        let outer = Function::modulo(5, 2);
        assert_eq!(compose(&outer, &id).unwrap().images(), &[0, 1, 0, 1, 0]);
    }

    #[test]
    fn compose_checks_codomain() {
        let inner = Function::modulo(10, 5);
        let outer = Function::modulo(4, 2);
        assert!(matches!(compose(&outer, &inner), Err(Error::CodomainMismatch { .. })));
        let outer = Function::modulo(5, 3);
        let h = compose(&outer, &inner).unwrap();
        assert_eq!(h.images(), &[0, 1, 2, 0, 1, 0, 1, 2, 0, 1]);
    }

    #[test]
    fn histogram_and_nonuniformity() {
        let f = Function::new(4, vec![0, 0, 0, 2, 2]).unwrap();
        assert_eq!(f.class_sizes(), vec![3, 0, 2, 0]);
        assert_eq!(f.nonuniformity(), 1);
        assert_eq!(f.image_size(), 2);
        assert_eq!(f.compress().images(), &[0, 0, 0, 1, 1]);
    }

    fn arb_chain() -> impl Strategy<Value = (Function, Function, Function)> {
        (1usize..12, 1usize..8, 1usize..8, 1usize..8).prop_flat_map(|(n, a, b, c)| {
            (
                proptest::collection::vec(0..a as u32, n),
                proptest::collection::vec(0..b as u32, a),
                proptest::collection::vec(0..c as u32, b),
            )
                .prop_map(move |(f, g, h)| {
                    (
                        Function::new(a, f).unwrap(),
                        Function::new(b, g).unwrap(),
                        Function::new(c, h).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn compose_is_associative((f, g, h) in arb_chain()) {
            let left = compose(&compose(&h, &g).unwrap(), &f).unwrap();
            let right = compose(&h, &compose(&g, &f).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn histogram_sums_to_domain(ell in 1usize..10, images in proptest::collection::vec(0u32..10, 0..40)) {
            let images: Vec<u32> = images.into_iter().map(|v| v % ell as u32).collect();
            let f = Function::new(ell, images.clone()).unwrap();
            prop_assert_eq!(f.histogram().values().sum::<usize>(), images.len());
            prop_assert_eq!(f.class_sizes().iter().sum::<usize>(), images.len());
        }
    }
}
