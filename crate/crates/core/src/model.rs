//! Universe, party datasets, incidence vectors, scheme parameters and the
//! seeded randomness every protocol run draws from.
//!
//! Element indices and the queried index θ are 1-based throughout the public
//! API, matching `1..=E`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{EvalPoints, Fe, Field};

/// Which scheme a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Type I collusion, user privacy and blind estimation.
    Pma1,
    /// Type I collusion with symmetric privacy.
    Spma1,
    /// Type II collusion with secret-shared storage and symmetric privacy.
    Spma2,
    /// Type II collusion without symmetric privacy. Runs the `Spma2` scheme,
    /// which meets the same download cost.
    Pma2,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Pma1, Variant::Spma1, Variant::Spma2, Variant::Pma2];

    pub fn is_type_two(self) -> bool {
        matches!(self, Variant::Spma2 | Variant::Pma2)
    }

    pub fn is_symmetric(self) -> bool {
        !matches!(self, Variant::Pma1)
    }

    /// The scheme that actually executes for this variant.
    pub fn scheme(self) -> Variant {
        match self {
            Variant::Pma2 => Variant::Spma2,
            v => v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Pma1 => "pma1",
            Variant::Spma1 => "spma1",
            Variant::Spma2 => "spma2",
            Variant::Pma2 => "pma2",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "pma1" | "pmai" => Ok(Variant::Pma1),
            "spma1" | "spmai" => Ok(Variant::Spma1),
            "spma2" | "spmaii" => Ok(Variant::Spma2),
            "pma2" | "pmaii" => Ok(Variant::Pma2),
            _ => Err(Error::Param(format!("unknown variant '{s}'"))),
        }
    }
}

fn one() -> usize {
    1
}

/// Unvalidated scheme parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub variant: Variant,
    /// Number of parties.
    pub m: usize,
    /// Databases per party.
    pub n: usize,
    /// Collusion budget: databases within a party (type I) or whole parties (type II).
    pub t: usize,
    /// Eavesdropping budgets. One value for type I, or one per party.
    #[serde(default)]
    pub y: Vec<usize>,
    /// Universe size.
    pub e: usize,
    /// Field modulus.
    pub p: u64,
    /// Communicating parties (type II only).
    #[serde(default = "one")]
    pub t2: usize,
    /// Explicit evaluation constants; defaults to α_j = j − 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<u64>>,
}

impl SchemeParams {
    pub fn new(variant: Variant, m: usize, n: usize, t: usize, y: usize, e: usize, p: u64) -> Self {
        SchemeParams {
            variant,
            m,
            n,
            t,
            y: vec![y],
            e,
            p,
            t2: 1,
            alphas: None,
        }
    }

    pub fn with_eavesdroppers(mut self, y: Vec<usize>) -> Self {
        self.y = y;
        self
    }

    pub fn with_t2(mut self, t2: usize) -> Self {
        self.t2 = t2;
        self
    }

    pub fn with_alphas(mut self, alphas: Vec<u64>) -> Self {
        self.alphas = Some(alphas);
        self
    }

    pub fn max_y(&self) -> usize {
        self.y.iter().copied().max().unwrap_or(0)
    }

    /// Noise degree of the queries.
    pub fn mu(&self) -> usize {
        if self.variant.is_type_two() {
            (self.n * self.t).max(self.max_y())
        } else {
            self.t.max(self.max_y())
        }
    }

    /// Databases that take part: `N` for type I, `T2·N + μ + 1` for type II.
    pub fn effective_db_count(&self) -> usize {
        if self.variant.is_type_two() {
            self.t2 * self.n + self.mu() + 1
        } else {
            self.n
        }
    }

    /// Upper bound on the download cost for these parameters.
    pub fn download_bound(&self) -> usize {
        if self.variant.is_type_two() {
            self.effective_db_count()
        } else {
            self.m * (self.mu() + 1)
        }
    }

    pub fn validate(&self) -> Result<Params> {
        let mut warnings = Vec::new();
        if self.m < 2 {
            return Err(Error::Param(format!("M >= 2 violated: M = {}", self.m)));
        }
        if self.n < 1 {
            return Err(Error::Param("N >= 1 violated: N = 0".into()));
        }
        if self.e < 1 {
            return Err(Error::Param("E >= 1 violated: E = 0".into()));
        }
        if !(self.y.is_empty() || self.y.len() == 1 || self.y.len() == self.m) {
            return Err(Error::Param(format!(
                "expected 1 or M = {} eavesdropping budgets, got {}",
                self.m,
                self.y.len()
            )));
        }
        let mu = self.mu();
        let active = self.effective_db_count();
        if self.variant.is_type_two() {
            if self.t2 < 1 {
                return Err(Error::Param("T2 >= 1 violated: T2 = 0".into()));
            }
            let total = self.m * self.n;
            if total < active {
                return Err(Error::Param(format!(
                    "MN >= T2*N + max(TN, Y_1..Y_M) + 1 violated: {} * {} = {total} < {} * {} + {mu} + 1 = {active}",
                    self.m, self.n, self.t2, self.n
                )));
            }
            if total > active {
                warnings.push(format!(
                    "{} of {total} databases are dropped; only the first {active} participate",
                    total - active
                ));
            }
        } else {
            if self.n < mu + 1 {
                return Err(Error::Param(format!(
                    "N >= max(T,Y) + 1 violated: N = {} < {}",
                    self.n,
                    mu + 1
                )));
            }
            if self.n > mu + 1 {
                warnings.push(format!(
                    "N = {} exceeds max(T,Y) + 1 = {}; the extra databases only add download cost",
                    self.n,
                    mu + 1
                ));
            }
            if self.t2 != 1 {
                warnings.push("T2 has no effect on type I schemes".into());
            }
        }
        if mu == 0 {
            warnings.push("T = Y = 0: queries carry no noise and reveal the queried index".into());
        }

        let field = Field::new(self.p)?;
        if self.p <= self.m as u64 {
            return Err(Error::Param(format!(
                "p > M violated: p = {} cannot represent counts 0..={}",
                self.p, self.m
            )));
        }
        let points = match &self.alphas {
            Some(a) => {
                if a.len() < active {
                    return Err(Error::Param(format!(
                        "{active} evaluation points required, {} given",
                        a.len()
                    )));
                }
                EvalPoints::new(&field, &a[..active])?
            }
            None => EvalPoints::canonical(&field, active)
                .map_err(|_| Error::Param(format!(
                    "p - 1 >= number of evaluation points violated: p = {} but {active} distinct nonzero points are needed",
                    self.p
                )))?,
        };
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok(Params {
            raw: self.clone(),
            field,
            points,
            mu,
            active,
            warnings,
        })
    }
}

/// Validated parameters together with the field and evaluation points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    raw: SchemeParams,
    field: Field,
    points: EvalPoints,
    mu: usize,
    active: usize,
    warnings: Vec<String>,
}

impl Params {
    pub fn raw(&self) -> &SchemeParams {
        &self.raw
    }
    pub fn variant(&self) -> Variant {
        self.raw.variant
    }
    pub fn m(&self) -> usize {
        self.raw.m
    }
    pub fn n(&self) -> usize {
        self.raw.n
    }
    pub fn t(&self) -> usize {
        self.raw.t
    }
    pub fn t2(&self) -> usize {
        self.raw.t2
    }
    pub fn e(&self) -> usize {
        self.raw.e
    }
    pub fn max_y(&self) -> usize {
        self.raw.max_y()
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn points(&self) -> &EvalPoints {
        &self.points
    }
    pub fn mu(&self) -> usize {
        self.mu
    }
    /// Participating databases: per party for type I, in total for type II.
    pub fn active_databases(&self) -> usize {
        self.active
    }
    /// Databases left idle after dropping (type II).
    pub fn dropped_databases(&self) -> usize {
        if self.raw.variant.is_type_two() {
            self.raw.m * self.raw.n - self.active
        } else {
            0
        }
    }
    /// Number of storage noise vectors per party in the type II encoding.
    pub fn storage_degree(&self) -> usize {
        self.raw.t2 * self.raw.n
    }
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn check_theta(&self, theta: usize) -> Result<()> {
        if theta == 0 || theta > self.e() {
            Err(Error::Param(format!(
                "theta = {theta} is outside 1..={}",
                self.e()
            )))
        } else {
            Ok(())
        }
    }

    /// The unit vector e_θ.
    pub fn unit(&self, theta: usize) -> Vec<Fe> {
        let mut v = vec![Fe::ZERO; self.e()];
        v[theta - 1] = Fe::ONE;
        v
    }

    /// Splits a global type II database index into (party, database).
    pub fn locate(&self, global: usize) -> (usize, usize) {
        (global / self.n(), global % self.n())
    }
}

/// The set of universe elements a party holds, as 1-based indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartyDataset {
    pub members: BTreeSet<usize>,
}

impl PartyDataset {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        PartyDataset {
            members: members.into_iter().collect(),
        }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members.contains(&k)
    }
}

/// Length-E 0/1 vector marking the elements a party holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncidenceVector {
    bits: Vec<Fe>,
}

impl IncidenceVector {
    pub fn from_bits(bits: &[bool]) -> Self {
        IncidenceVector {
            bits: bits.iter().map(|&b| if b { Fe::ONE } else { Fe::ZERO }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[Fe] {
        &self.bits
    }

    /// Bit for the 1-based element `k`.
    pub fn bit(&self, k: usize) -> bool {
        self.bits[k - 1] == Fe::ONE
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.bits.iter().map(|b| b.value() as u8).collect()
    }

    pub fn to_dataset(&self) -> PartyDataset {
        PartyDataset::new((1..=self.len()).filter(|&k| self.bit(k)))
    }
}

/// Maps a dataset to its incidence vector over a universe of size `e`.
pub fn incidence(dataset: &PartyDataset, e: usize) -> Result<IncidenceVector> {
    let mut bits = vec![false; e];
    for &k in &dataset.members {
        if k == 0 || k > e {
            return Err(Error::Param(format!("element {k} is outside 1..={e}")));
        }
        bits[k - 1] = true;
    }
    Ok(IncidenceVector::from_bits(&bits))
}

pub fn incidences(datasets: &[PartyDataset], e: usize) -> Result<Vec<IncidenceVector>> {
    datasets.iter().map(|d| incidence(d, e)).collect()
}

/// Plaintext count of parties holding element θ. Every decoder is checked
/// against this.
pub fn true_count(theta: usize, datasets: &[PartyDataset]) -> usize {
    datasets.iter().filter(|d| d.contains(theta)).count()
}

/// Samples every (party, element) membership independently with
/// probability `probs[k]`; a single probability applies to every element.
pub fn generate_datasets(m: usize, e: usize, probs: &[f64], rng: &mut RandomSource) -> Result<Vec<PartyDataset>> {
    if !(probs.len() == 1 || probs.len() == e) {
        return Err(Error::Param(format!(
            "expected 1 or E = {e} membership probabilities, got {}",
            probs.len()
        )));
    }
    if let Some(bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Param(format!("membership probability {bad} is outside [0, 1]")));
    }
    let prob = |k: usize| if probs.len() == 1 { probs[0] } else { probs[k - 1] };
    Ok((0..m)
        .map(|_| PartyDataset::new((1..=e).filter(|&k| rng.bernoulli(prob(k)))))
        .collect())
}

/// Every assignment of `m` datasets over a universe of size `e`, in a fixed
/// order. There are `2^(m·e)` of them.
pub fn all_dataset_assignments(m: usize, e: usize) -> Vec<Vec<PartyDataset>> {
    let bits = m * e;
    (0u64..1 << bits)
        .map(|mask| {
            (0..m)
                .map(|i| PartyDataset::new((1..=e).filter(|&k| mask >> (i * e + k - 1) & 1 == 1)))
                .collect()
        })
        .collect()
}

/// JSON ingestion format: `{"universe": [...], "parties": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub universe: Vec<String>,
    pub parties: Vec<Vec<String>>,
}

/// Datasets mapped onto indices `1..=E`. Elements are numbered in sorted
/// order of their names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ingested {
    pub universe: Vec<String>,
    pub datasets: Vec<PartyDataset>,
}

impl DatasetFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn ingest(&self) -> Result<Ingested> {
        let mut index = BTreeMap::new();
        for name in &self.universe {
            if index.insert(name.clone(), 0usize).is_some() {
                return Err(Error::Param(format!("universe element '{name}' is listed twice")));
            }
        }
        if index.is_empty() {
            return Err(Error::Param("universe is empty".into()));
        }
        for (k, v) in index.values_mut().enumerate() {
            *v = k + 1;
        }
        let datasets = self
            .parties
            .iter()
            .enumerate()
            .map(|(i, party)| {
                party
                    .iter()
                    .map(|name| {
                        index.get(name).copied().ok_or_else(|| {
                            Error::Param(format!(
                                "party {} holds '{name}', which is not in the universe",
                                i + 1
                            ))
                        })
                    })
                    .collect::<Result<BTreeSet<_>>>()
                    .map(|members| PartyDataset { members })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ingested {
            universe: index.into_keys().collect(),
            datasets,
        })
    }
}

/// Seeded, reproducible source of uniform field elements.
///
/// Backed by the ChaCha8 stream cipher, which is counter based: a seed plus a
/// stream id pins down the whole sequence.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::stream(seed, 0)
    }

    /// An independent stream derived from the same seed.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Position in the underlying 32-bit word stream.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn uniform(&mut self, field: &Field) -> Fe {
        field.reduce(self.rng.gen_range(0..field.modulus()))
    }

    pub fn uniform_vec(&mut self, field: &Field, len: usize) -> Vec<Fe> {
        (0..len).map(|_| self.uniform(field)).collect()
    }

    pub fn bernoulli(&mut self, prob: f64) -> bool {
        self.rng.gen_bool(prob)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }
}
