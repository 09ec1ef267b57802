use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::cost::{check_idle, CostReport};
use super::SCHEMA_VERSION;
use crate::error::{Error, Result};
use crate::model::{RandomSource, SchemeParams};
use crate::protocol::run;
use crate::transcript::Transcript;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaRun {
    pub theta: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub count: u64,
    pub expected: usize,
    pub transcript_symbols: usize,
    pub transcript_digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub params: SchemeParams,
    pub seed: u64,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<String>>,
    /// 1-based members of each party's dataset.
    pub datasets: Vec<Vec<usize>>,
    pub runs: Vec<ThetaRun>,
    pub cost: CostReport,
    /// Transcripts of `runs`, in the same order.
    #[serde(skip)]
    pub transcripts: Vec<Transcript>,
}

/// Runs the configured scheme once per requested θ, each θ on its own random
/// stream, and checks every decoded count against the plaintext count.
pub fn run_protocol(config: &RunConfig) -> Result<RunReport> {
    let r = config.resolve()?;
    let results = r
        .thetas
        .par_iter()
        .map(|&theta| run(&r.params, &r.datasets, theta, &mut RandomSource::stream(config.seed, theta as u64)))
        .collect::<Result<Vec<_>>>()?;
    let costs: Vec<CostReport> = results.iter().map(|x| CostReport::measure(&r.params, &x.transcript)).collect();
    let cost = costs[0].clone();
    if costs.iter().any(|c| *c != cost) {
        return Err(Error::Integrity("communication cost differs between elements".into()));
    }
    check_idle(&cost, &r.params)?;
    let runs = results
        .iter()
        .map(|x| ThetaRun {
            theta: x.theta,
            element: r.universe.as_ref().map(|u| u[x.theta - 1].clone()),
            count: x.count,
            expected: x.expected,
            transcript_symbols: x.transcript.len(),
            transcript_digest: x.transcript.digest(),
        })
        .collect();
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        params: r.params.raw().clone(),
        seed: config.seed,
        warnings: r.params.warnings().to_vec(),
        universe: r.universe,
        datasets: r.datasets.iter().map(|d| d.members.iter().copied().collect()).collect(),
        runs,
        cost,
        transcripts: results.into_iter().map(|x| x.transcript).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;

    #[test]
    fn sweeps_every_element() {
        let mut cfg = RunConfig::new(Variant::Spma1, 3, 3);
        cfg.t = 1;
        cfg.seed = 4;
        let rep = run_protocol(&cfg).unwrap();
        assert_eq!(rep.runs.len(), 3);
        assert!(rep.runs.iter().all(|x| x.count == x.expected as u64));
        assert_eq!(rep.cost.download_symbols, 6);
        assert_eq!(rep.transcripts.len(), 3);
        assert_eq!(rep, run_protocol(&cfg).unwrap());
    }

    #[test]
    fn type_two_minimum() {
        let mut cfg = RunConfig::new(Variant::Spma2, 3, 2);
        cfg.t = 1;
        let rep = run_protocol(&cfg).unwrap();
        assert_eq!(rep.cost.download_symbols, 3);
        assert_eq!(rep.cost.idle_databases, 0);
        assert_eq!(rep.cost.remark_total, Some(rep.cost.total));
    }
}
