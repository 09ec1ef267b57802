//! Communication accounting. One symbol is one field element on one link.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Params, SchemeParams, Variant};
use crate::transcript::{Node, Phase, Transcript};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub download_symbols: usize,
    pub upload_symbols: usize,
    /// Masks dealt by the first party plus one copy of the blinding noise.
    pub randomness_sharing_symbols: usize,
    /// `download + upload + randomness_sharing`.
    pub total: usize,
    /// Further copies of per-party blinding noise, not part of `total`.
    pub excluded_sharing_symbols: usize,
    /// Secret-shared storage, a one-off setup cost not part of `total`.
    pub storage_symbols: usize,
    /// Databases that neither send nor receive anything.
    pub idle_databases: usize,
    pub theorem_bound: usize,
    pub within_bound: bool,
    /// Closed form of `total` for these parameters.
    pub closed_form_total: usize,
    /// Published total formula, where its side conditions hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remark_total: Option<usize>,
}

impl CostReport {
    pub fn measure(params: &Params, t: &Transcript) -> Self {
        let (mut sharing, mut excluded) = (0, 0);
        for e in t.events() {
            match e.phase {
                Phase::MaskDealing => sharing += 1,
                Phase::NoiseProvisioning if e.from == Node::Party(0) => sharing += 1,
                Phase::NoiseProvisioning => excluded += 1,
                _ => {}
            }
        }
        let download = t.count_phase(Phase::Answer);
        let upload = t.count_phase(Phase::Query);
        let idle = (0..params.m())
            .flat_map(|party| (0..params.n()).map(move |db| Node::Database { party, db }))
            .filter(|&d| !t.events().iter().any(|e| e.from == d || e.to == d))
            .count();
        let bound = theorem_bound(params.raw());
        CostReport {
            download_symbols: download,
            upload_symbols: upload,
            randomness_sharing_symbols: sharing,
            total: download + upload + sharing,
            excluded_sharing_symbols: excluded,
            storage_symbols: t.count_phase(Phase::StorageDistribution),
            idle_databases: idle,
            theorem_bound: bound,
            within_bound: download <= bound,
            closed_form_total: closed_form_total(params),
            remark_total: remark_total(params.raw()),
        }
    }
}

/// `M(max(T,Y)+1)` for type I, `T2·N + max(TN, Y) + 1` for type II.
pub fn theorem_bound(raw: &SchemeParams) -> usize {
    raw.download_bound()
}

/// Total communication for the parameters as given, any N.
pub fn closed_form_total(params: &Params) -> usize {
    let (m, n, e) = (params.m(), params.n(), params.e());
    match params.variant() {
        Variant::Pma1 => (m - 1) * n + e * m * n + m * n,
        Variant::Spma1 => (m - 1) * n + e * m * n + (n - 1) + m * n,
        Variant::Spma2 | Variant::Pma2 => {
            let k = params.active_databases();
            (e + 1) * k + k - 1
        }
    }
}

/// The published formulas: `(M−1)N + EMN + MN`, plus `N − 1` for the
/// symmetric type I scheme, and `(E+1)(N+TN+1) + N + NT` for type II. The
/// type II formula assumes `Y ≤ TN` and a single communicating party.
pub fn remark_total(raw: &SchemeParams) -> Option<usize> {
    let (m, n, e, t) = (raw.m, raw.n, raw.e, raw.t);
    match raw.variant {
        Variant::Pma1 => Some((m - 1) * n + e * m * n + m * n),
        Variant::Spma1 => Some((m - 1) * n + e * m * n + n.checked_sub(1)? + m * n),
        Variant::Spma2 | Variant::Pma2 => {
            (raw.max_y() <= t * n && raw.t2 == 1).then(|| (e + 1) * (n + t * n + 1) + n + n * t)
        }
    }
}

/// Least-squares fit of `cost = c·M` through the origin, in exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: String,
    pub residual: String,
    pub exact: bool,
}

pub fn fit_through_origin(points: &[(usize, usize)]) -> LinearFit {
    let sxy: i128 = points.iter().map(|&(x, y)| (x * y) as i128).sum();
    let sxx: i128 = points.iter().map(|&(x, _)| (x * x) as i128).sum();
    let c = if sxx == 0 { Ratio::from_integer(0) } else { Ratio::new(sxy, sxx) };
    let residual: Ratio<i128> = points
        .iter()
        .map(|&(x, y)| {
            let r = Ratio::from_integer(y as i128) - c * (x as i128);
            r * r
        })
        .sum();
    LinearFit {
        slope: c.to_string(),
        residual: residual.to_string(),
        exact: residual == Ratio::from_integer(0),
    }
}

/// `M^K (K − 1)`, the growth of a predecessor threshold scheme. Reported for
/// contrast only.
pub fn threshold_reference(m: usize, k: u32) -> Option<u128> {
    (m as u128).checked_pow(k)?.checked_mul(k.saturating_sub(1) as u128)
}

pub fn check_idle(report: &CostReport, params: &Params) -> Result<()> {
    if report.idle_databases != params.dropped_databases() {
        return Err(crate::error::Error::Integrity(format!(
            "{} idle databases, expected {}",
            report.idle_databases,
            params.dropped_databases()
        )));
    }
    Ok(())
}
