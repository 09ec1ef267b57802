use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::cost::{fit_through_origin, threshold_reference, LinearFit};
use super::run::run_protocol;
use super::SCHEMA_VERSION;
use crate::error::{Error, Result};
use crate::model::Variant;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostRow {
    pub m: usize,
    pub n: usize,
    pub p: u64,
    pub download: usize,
    pub upload: usize,
    pub randomness_sharing: usize,
    pub total: usize,
    pub theorem_bound: usize,
    pub idle_databases: usize,
    /// `M^K (K − 1)`; `None` on overflow.
    pub threshold_reference: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostTable {
    pub schema_version: u32,
    pub variant: Variant,
    pub t: usize,
    pub y: Vec<usize>,
    pub e: usize,
    pub k: u32,
    pub rows: Vec<CostRow>,
    /// Fit of download against M.
    pub fit: LinearFit,
}

/// Measured costs of `template` for every M in `ms`. N and p are chosen
/// automatically per point unless the template fixes them; θ is fixed to 1.
pub fn cost_table(template: &RunConfig, ms: RangeInclusive<usize>, k: u32) -> Result<CostTable> {
    if ms.is_empty() {
        return Err(Error::Param(format!("empty sweep {}..{}", ms.start(), ms.end())));
    }
    let rows = ms
        .clone()
        .into_par_iter()
        .map(|m| {
            let mut cfg = template.clone();
            cfg.m = m;
            cfg.theta = Some(1);
            let rep = run_protocol(&cfg)?;
            let c = rep.cost;
            Ok(CostRow {
                m,
                n: rep.params.n,
                p: rep.params.p,
                download: c.download_symbols,
                upload: c.upload_symbols,
                randomness_sharing: c.randomness_sharing_symbols,
                total: c.total,
                theorem_bound: c.theorem_bound,
                idle_databases: c.idle_databases,
                threshold_reference: threshold_reference(m, k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_through_origin(&rows.iter().map(|r| (r.m, r.download)).collect::<Vec<_>>());
    Ok(CostTable {
        schema_version: SCHEMA_VERSION,
        variant: template.variant,
        t: template.t,
        y: template.y.clone(),
        e: template.e.unwrap_or(0),
        k,
        rows,
        fit,
    })
}

/// Parses `A..B` or `A..=B` (both inclusive).
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Param(format!("expected a range like 2..6, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}
