// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::function::Function;
use crate::greedy::CoverageStep;
use crate::ratio::Fraction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Splitter,
    Bisector,
    Mapping,
    Universal,
}

impl FamilyKind {
    pub fn is_binary(self) -> bool {
        !matches!(self, FamilyKind::Splitter)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Splitter => "splitter",
            FamilyKind::Bisector => "bisector",
            FamilyKind::Mapping => "mapping",
            FamilyKind::Universal => "universal",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "splitter" => Ok(FamilyKind::Splitter),
            "bisector" => Ok(FamilyKind::Bisector),
            "mapping" => Ok(FamilyKind::Mapping),
            "universal" => Ok(FamilyKind::Universal),
            _ => Err(Error::bad(format!("unknown family kind {s:?}"))),
        }
    }
}

/// Balance guarantee claimed for every member of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Uniformity {
    None,
    /// Class sizes over the image differ by at most `a`.
    AUniform(usize),
    /// Class sizes over the image are `floor(n/|Im|)` or `ceil(n/|Im|)`.
    Uniform,
    /// Class sizes over all of `[ell]` are `floor(n/ell)` or `ceil(n/ell)`.
    Strong,
}

impl fmt::Display for Uniformity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Uniformity::None => f.write_str("none"),
            Uniformity::AUniform(a) => write!(f, "{a}-uniform"),
            Uniformity::Uniform => f.write_str("uniform"),
            Uniformity::Strong => f.write_str("strong"),
        }
    }
}

impl FromStr for Uniformity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Uniformity::None),
            "uniform" => Ok(Uniformity::Uniform),
            "strong" => Ok(Uniformity::Strong),
            _ => s
                .strip_suffix("-uniform")
                .and_then(|a| a.parse().ok())
                .map(Uniformity::AUniform)
                .ok_or_else(|| Error::bad(format!("unknown uniformity {s:?}"))),
        }
    }
}

/// How a family was produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub builder: String,
    pub out_of_regime: bool,
    pub seed: Option<u64>,
    /// Oracle verdict when the family was certified, `None` if never checked.
    pub valid: Option<bool>,
    pub notes: BTreeMap<String, String>,
    /// Per-iteration log of the top-level greedy run, if any.
    pub coverage: Vec<CoverageStep>,
}

impl Provenance {
    pub fn new(builder: impl Into<String>) -> Self {
        Provenance {
            builder: builder.into(),
            ..Default::default()
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.notes.insert(key.into(), value.to_string());
    }
}

/// An ordered list of functions sharing domain `[n]` and codomain `[ell]`,
/// tagged with the combinatorial property it is meant to have.
///
/// Constructors check only the shape; the semantic property is certified by
/// [`crate::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    kind: FamilyKind,
    n: usize,
    k: usize,
    ell: usize,
    alpha: Option<Fraction>,
    beta: Option<Fraction>,
    k0: Option<usize>,
    k1: Option<usize>,
    uniformity: Uniformity,
    functions: Vec<Function>,
    provenance: Provenance,
}

impl Family {
    fn build(kind: FamilyKind, n: usize, k: usize, ell: usize, functions: Vec<Function>) -> Result<Self> {
        for f in &functions {
            if f.n() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: f.n(),
                });
            }
            if f.ell() != ell {
                return Err(Error::SizeMismatch(format!(
                    "function codomain {} differs from family codomain {ell}",
                    f.ell()
                )));
            }
        }
        Ok(Family {
            kind,
            n,
            k,
            ell,
            alpha: None,
            beta: None,
            k0: None,
            k1: None,
            uniformity: Uniformity::None,
            functions,
            provenance: Provenance::default(),
        })
    }

    pub fn splitter(n: usize, k: usize, ell: usize, functions: Vec<Function>) -> Result<Self> {
        Family::build(FamilyKind::Splitter, n, k, ell, functions)
    }

    pub fn bisector(n: usize, k: usize, alpha: Fraction, functions: Vec<Function>) -> Result<Self> {
        let mut fam = Family::build(FamilyKind::Bisector, n, k, 2, functions)?;
        fam.alpha = Some(alpha);
        Ok(fam)
    }

    pub fn mapping(
        n: usize,
        k0: usize,
        k1: usize,
        alpha: Fraction,
        beta: Fraction,
        functions: Vec<Function>,
    ) -> Result<Self> {
        let mut fam = Family::build(FamilyKind::Mapping, n, k0 + k1, 2, functions)?;
        fam.alpha = Some(alpha);
        fam.beta = Some(beta);
        fam.k0 = Some(k0);
        fam.k1 = Some(k1);
        Ok(fam)
    }

    pub fn universal(n: usize, k: usize, alpha: Fraction, functions: Vec<Function>) -> Result<Self> {
        let mut fam = Family::build(FamilyKind::Universal, n, k, 2, functions)?;
        fam.alpha = Some(alpha);
        Ok(fam)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn alpha(&self) -> Option<Fraction> {
        self.alpha
    }

    pub fn beta(&self) -> Option<Fraction> {
        self.beta
    }

    pub fn k0(&self) -> Option<usize> {
        self.k0
    }

    pub fn k1(&self) -> Option<usize> {
        self.k1
    }

    pub fn uniformity(&self) -> Uniformity {
        self.uniformity
    }

    pub fn functions(&self) -> &[Function] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn provenance_mut(&mut self) -> &mut Provenance {
        &mut self.provenance
    }

    /// Required ones count `ceil(alpha n)` for binary kinds.
    pub fn ones_target(&self) -> Option<usize> {
        self.alpha.map(|a| a.ceil_mul(self.n))
    }

    /// Required `|S1 cap f^{-1}(1)|` for mapping families.
    pub fn hit_target(&self) -> Option<usize> {
        match (self.beta, self.k1) {
            (Some(b), Some(k1)) => Some(b.ceil_mul(k1)),
            _ => None,
        }
    }

    pub fn with_uniformity(mut self, uniformity: Uniformity) -> Self {
        self.uniformity = uniformity;
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn into_functions(self) -> Vec<Function> {
        self.functions
    }

    /// Same functions viewed as a mapping family with the given split.
    pub(crate) fn retag_mapping(mut self, k0: usize, k1: usize, beta: Fraction) -> Self {
        self.kind = FamilyKind::Mapping;
        self.k = k0 + k1;
        self.k0 = Some(k0);
        self.k1 = Some(k1);
        self.beta = Some(beta);
        self
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a Function;
    type IntoIter = std::slice::Iter<'a, Function>;

    fn into_iter(self) -> Self::IntoIter {
        self.functions.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_mixed_domains() {
        let fs = vec![Function::modulo(4, 2), Function::modulo(5, 2)];
        assert!(matches!(
            Family::splitter(4, 2, 2, fs),
            Err(Error::LengthMismatch { expected: 4, found: 5 })
        ));
    }

    #[test]
    fn uniformity_round_trips() {
        for u in [
            Uniformity::None,
            Uniformity::AUniform(3),
            Uniformity::Uniform,
            Uniformity::Strong,
        ] {
            assert_eq!(u.to_string().parse::<Uniformity>().unwrap(), u);
        }
    }

    #[test]
    fn targets_follow_parameters() {
        let half = Fraction::new(1, 2).unwrap();
        let fam = Family::mapping(9, 1, 3, half, half, vec![]).unwrap();
        assert_eq!(fam.ones_target(), Some(5));
        assert_eq!(fam.hit_target(), Some(2));
        assert_eq!(fam.k(), 4);
    }
}
