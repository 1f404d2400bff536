// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

use crate::config::BuildConfig;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::verify::verify_family;

/// Out-of-regime families must pass the oracle before they leave a builder.
pub(crate) fn certify(mut family: Family, cfg: &BuildConfig) -> Result<Family> {
    if !family.provenance().out_of_regime || cfg.skip_certify {
        return Ok(family);
    }
    let report = verify_family(&family);
    family.provenance_mut().valid = Some(report.valid);
    if report.valid {
        Ok(family)
    } else {
        Err(Error::Uncertified {
            family: Box::new(family),
            report: Box::new(report),
        })
    }
}

/// Configuration for nested builds: the outermost builder certifies once.
pub(crate) fn nested(cfg: &BuildConfig) -> BuildConfig {
    BuildConfig {
        skip_certify: true,
        ..cfg.clone()
    }
}

/// Reject out-of-regime parameters unless desk mode is on.
pub(crate) fn require_desk(out_of_regime: bool, cfg: &BuildConfig, what: &str) -> Result<()> {
    if out_of_regime && !cfg.desk_mode {
        Err(Error::bad(format!(
            "{what} is outside the asymptotic regime and desk mode is off"
        )))
    } else {
        Ok(())
    }
}
