//! Exact probability mass functions over adversary views, built by running
//! the protocol on every assignment of the free randomness coordinates.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Default bound on the number of assignments a single enumeration may visit.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Observed view → number of randomness assignments producing it.
///
/// Every assignment is equally likely, so `count / total` is the exact
/// probability of a view.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistributionMap {
    counts: BTreeMap<Vec<u64>, u64>,
    total: u64,
}

impl DistributionMap {
    pub fn point_mass(view: Vec<u64>) -> Self {
        let mut counts = BTreeMap::new();
        counts.insert(view, 1);
        DistributionMap { counts, total: 1 }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn probability(&self, view: &[u64]) -> Ratio<u64> {
        Ratio::new(self.counts.get(view).copied().unwrap_or(0), self.total.max(1))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u64>, Ratio<u64>)> {
        self.counts.iter().map(|(v, &c)| (v, Ratio::new(c, self.total)))
    }

    /// Adds another map with equal weight per assignment.
    pub fn absorb(&mut self, other: &DistributionMap) {
        for (v, &c) in &other.counts {
            *self.counts.entry(v.clone()).or_insert(0) += c;
        }
        self.total += other.total;
    }

    /// First view (in sorted order) whose probability differs, with both
    /// probabilities. `None` iff the two pmfs are identical.
    pub fn first_difference(&self, other: &DistributionMap) -> Option<(Vec<u64>, Ratio<u64>, Ratio<u64>)> {
        let (a, b) = (self.total as u128, other.total as u128);
        let mut views: Vec<&Vec<u64>> = self.counts.keys().chain(other.counts.keys()).collect();
        views.sort();
        views.dedup();
        views.into_iter().find_map(|v| {
            let ca = self.counts.get(v).copied().unwrap_or(0) as u128;
            let cb = other.counts.get(v).copied().unwrap_or(0) as u128;
            (ca * b != cb * a).then(|| (v.clone(), self.probability(v), other.probability(v)))
        })
    }

    pub fn same_as(&self, other: &DistributionMap) -> bool {
        self.first_difference(other).is_none()
    }
}

/// `p^dims`, or an error when it exceeds `cap`.
pub fn assignment_count(field: &Field, dims: usize, cap: u64) -> Result<u64> {
    let infeasible = || Error::AuditInfeasible {
        dimension: dims,
        modulus: field.modulus(),
        cap,
    };
    let n = u32::try_from(dims)
        .ok()
        .and_then(|d| field.modulus().checked_pow(d))
        .ok_or_else(infeasible)?;
    if n > cap {
        return Err(infeasible());
    }
    Ok(n)
}

/// Writes assignment number `index` (base-p digits) into the free coordinates.
fn write_assignment(field: &Field, index: u64, free: &[usize], out: &mut [Fe]) {
    let p = field.modulus();
    let mut rest = index;
    for &c in free {
        out[c] = field.reduce(rest % p);
        rest /= p;
    }
}

/// Advances the free coordinates to the next assignment (odometer order).
fn step(field: &Field, free: &[usize], out: &mut [Fe]) {
    let p = field.modulus();
    for &c in free {
        let v = out[c].value() + 1;
        if v < p {
            out[c] = field.reduce(v);
            return;
        }
        out[c] = Fe::ZERO;
    }
}

/// Calls `f` on `base` with the `free` coordinates set to every assignment in
/// turn, stopping at the first error. Sequential.
pub fn for_each_assignment<F>(field: &Field, base: &[Fe], free: &[usize], cap: u64, mut f: F) -> Result<u64>
where
    F: FnMut(&[Fe]) -> Result<bool>,
{
    let total = assignment_count(field, free.len(), cap)?;
    let mut cur = base.to_vec();
    write_assignment(field, 0, free, &mut cur);
    for _ in 0..total {
        if !f(&cur)? {
            break;
        }
        step(field, free, &mut cur);
    }
    Ok(total)
}

/// Exact distribution of `view` over every assignment of the `free`
/// coordinates of `base`, all other coordinates held fixed.
pub fn enumerate_distribution<F>(field: &Field, base: &[Fe], free: &[usize], cap: u64, view: F) -> Result<DistributionMap>
where
    F: Fn(&[Fe]) -> Result<Vec<u64>> + Sync,
{
    let total = assignment_count(field, free.len(), cap)?;
    let chunks = if total < 2048 { 1 } else { (rayon::current_num_threads() as u64 * 4).min(total) };
    let per = total.div_ceil(chunks);
    let partials = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let (start, end) = (k * per, ((k + 1) * per).min(total));
            let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            let mut cur = base.to_vec();
            write_assignment(field, start, free, &mut cur);
            for _ in start..end {
                *counts.entry(view(&cur)?).or_insert(0) += 1;
                step(field, free, &mut cur);
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = BTreeMap::new();
    for part in partials {
        for (v, c) in part {
            *counts.entry(v).or_insert(0) += c;
        }
    }
    Ok(DistributionMap { counts, total })
}
