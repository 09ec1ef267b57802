use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::next_prime_above;
use crate::model::{generate_datasets, DatasetFile, Params, PartyDataset, RandomSource, SchemeParams, Variant};

/// Stream id reserved for dataset generation; θ runs use streams `1..=E`.
const DATASET_STREAM: u64 = u64::MAX;

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DatasetSource {
    /// Independent memberships with per-element probabilities (one value
    /// applies to every element).
    Generated { probs: Vec<f64> },
    /// JSON file in the [`DatasetFile`] format.
    File { path: PathBuf },
    Inline(DatasetFile),
}

impl Default for DatasetSource {
    fn default() -> Self {
        DatasetSource::Generated { probs: vec![0.5] }
    }
}

/// A run as described in a config file or on the command line. Unset `n`
/// and `p` are chosen automatically; an unset `theta` sweeps every element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub variant: Variant,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub t: usize,
    #[serde(default)]
    pub y: Vec<usize>,
    #[serde(default = "one")]
    pub t2: usize,
    /// Universe size; taken from the dataset when it names its universe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub datasets: DatasetSource,
    /// Audit selectors (`all`, `lemma3`, ...) run after the protocol.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub audits: Vec<String>,
}

impl RunConfig {
    pub fn new(variant: Variant, m: usize, e: usize) -> Self {
        RunConfig {
            variant,
            m,
            n: None,
            t: 0,
            y: Vec::new(),
            t2: 1,
            e: Some(e),
            p: None,
            alphas: None,
            theta: None,
            seed: 0,
            datasets: DatasetSource::default(),
            audits: Vec::new(),
        }
    }

    /// Reads a JSON config. A relative dataset path is taken relative to the
    /// config file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg: RunConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if let DatasetSource::File { path: data } = &mut cfg.datasets {
            if data.is_relative() {
                if let Some(dir) = path.parent() {
                    *data = dir.join(&*data);
                }
            }
        }
        Ok(cfg)
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let (universe, loaded) = match &self.datasets {
            DatasetSource::Generated { .. } => (None, None),
            DatasetSource::File { path } => {
                let file = DatasetFile::from_json(&std::fs::read_to_string(path)?)?;
                let ing = file.ingest()?;
                (Some(ing.universe), Some(ing.datasets))
            }
            DatasetSource::Inline(file) => {
                let ing = file.ingest()?;
                (Some(ing.universe), Some(ing.datasets))
            }
        };
        let e = match (self.e, &universe) {
            (Some(e), Some(u)) if e != u.len() => {
                return Err(Error::Param(format!("E = {e} but the dataset universe has {} elements", u.len())))
            }
            (_, Some(u)) => u.len(),
            (Some(e), None) => e,
            (None, None) => return Err(Error::Param("E is required for generated datasets".into())),
        };
        let n = match self.n {
            Some(n) => n,
            None => auto_n(self.variant, self.m, self.t, &self.y, self.t2)?,
        };
        let p = match self.p {
            Some(p) => p,
            None => auto_p(self.m, n),
        };
        let mut raw = SchemeParams::new(self.variant, self.m, n, self.t, 0, e, p)
            .with_eavesdroppers(self.y.clone())
            .with_t2(self.t2);
        raw.alphas = self.alphas.clone();
        let params = raw.validate()?;

        let datasets = match (loaded, &self.datasets) {
            (Some(d), _) => d,
            (None, DatasetSource::Generated { probs }) => {
                generate_datasets(self.m, e, probs, &mut RandomSource::stream(self.seed, DATASET_STREAM))?
            }
            (None, _) => unreachable!("file and inline sources always load"),
        };
        if datasets.len() != self.m {
            return Err(Error::Param(format!(
                "the dataset lists {} parties but M = {}",
                datasets.len(),
                self.m
            )));
        }
        let thetas = match self.theta {
            Some(theta) => {
                params.check_theta(theta)?;
                vec![theta]
            }
            None => (1..=e).collect(),
        };
        Ok(Resolved {
            params,
            datasets,
            universe,
            thetas,
        })
    }
}

/// A config with every automatic choice made and the datasets loaded.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub params: Params,
    pub datasets: Vec<PartyDataset>,
    pub universe: Option<Vec<String>>,
    pub thetas: Vec<usize>,
}

/// `max(T, Y) + 1` for type I. For type II, the smallest N with
/// `MN ≥ T2·N + max(TN, Y) + 1`.
pub fn auto_n(variant: Variant, m: usize, t: usize, y: &[usize], t2: usize) -> Result<usize> {
    let max_y = y.iter().copied().max().unwrap_or(0);
    if !variant.is_type_two() {
        return Ok(t.max(max_y) + 1);
    }
    // (M − T2 − T)·N ≥ 1 and (M − T2)·N ≥ Y + 1 are both met by N = Y + 1 when feasible at all
    (1..=max_y + 1)
        .find(|&n| m * n >= t2 * n + (t * n).max(max_y) + 1)
        .ok_or_else(|| {
            Error::Param(format!(
                "no N satisfies MN >= T2*N + max(TN, Y) + 1 with M = {m}, T = {t}, T2 = {t2}, Y = {max_y}"
            ))
        })
}

/// Smallest prime greater than `max(M, MN + 1)`.
pub fn auto_p(m: usize, n: usize) -> u64 {
    next_prime_above(m.max(m * n + 1) as u64)
}
