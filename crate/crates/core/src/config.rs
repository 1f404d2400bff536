// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

/// Size limits for candidate pools fed to the greedy engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoolBudget {
    /// Pools with at most this many members are enumerated completely.
    pub full_limit: u64,
    /// Number of seeded draws when the full pool is larger than `full_limit`.
    pub sample_size: usize,
}

impl Default for PoolBudget {
    fn default() -> Self {
        PoolBudget {
            full_limit: 1_000_000,
            sample_size: 100_000,
        }
    }
}

/// Which mapping-family construction `universal_set` unions over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MappingStrategy {
    /// Greedy cover directly on `[n]`.
    Base,
    #[default]
    Iterated,
    Interval,
}

/// Knobs shared by all builders. Two builds with equal configs are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub pool: PoolBudget,
    pub seed: u64,
    /// Accept parameters outside the asymptotic regime; such outputs are
    /// flagged and certified by the oracle before being returned.
    pub desk_mode: bool,
    /// Override for the intermediate codomain of the composed splitter.
    pub intermediate: Option<usize>,
    /// Cap on the intermediate codomain of the composed splitter.
    pub max_intermediate: usize,
    /// Universes up to this size are covered by greedy on the spot; larger
    /// ones are reached through modulo extension or splitter lifting.
    pub direct_limit: usize,
    /// Step between candidate reservoir starts and interval cut points.
    pub granularity: usize,
    /// Reservoir length override for the interval constructions.
    pub reservoir: Option<usize>,
    /// Maximum number of interval guesses.
    pub guess_budget: usize,
    /// Interval constructions on larger universes are lifted from this size.
    pub interval_lift_above: usize,
    pub mapping_strategy: MappingStrategy,
    /// Skip the oracle on out-of-regime outputs.
    pub skip_certify: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            pool: PoolBudget::default(),
            seed: 0x5eed_0fde_7e2a_11f0,
            desk_mode: true,
            intermediate: None,
            max_intermediate: 4096,
            direct_limit: 24,
            granularity: 1,
            reservoir: None,
            guess_budget: 100_000,
            interval_lift_above: 64,
            mapping_strategy: MappingStrategy::Iterated,
            skip_certify: false,
        }
    }
}

impl BuildConfig {
    /// Reject every out-of-regime request with `BadParams`.
    pub fn strict() -> Self {
        BuildConfig {
            desk_mode: false,
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_pool(mut self, full_limit: u64, sample_size: usize) -> Self {
        self.pool = PoolBudget {
            full_limit,
            sample_size,
        };
        self
    }
}
