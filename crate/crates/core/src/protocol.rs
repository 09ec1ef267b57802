//! Runs a scheme end to end from a flat randomness vector and records the
//! transcript.
//!
//! Each scheme's randomness is laid out as named blocks in a single vector of
//! field elements. Sampling draws the vector from a [`RandomSource`] in block
//! order; the audits instead enumerate chosen blocks exhaustively while
//! holding the rest fixed.
//!
//! Block order for type I: query noise per party, free masks, then (for the
//! symmetric variant) per-party blinding noise. Type II: storage noise per
//! party, query noise, global blinding noise. The type I symmetric layout
//! extends the non-symmetric one, so both draw identical query noise and
//! masks from the same seed.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::model::{incidences, true_count, IncidenceVector, Params, PartyDataset, RandomSource, Variant};
use crate::pma1::{self, AnswerVectorI, MaskingVectors};
use crate::spma1::{self, PartyNoise};
use crate::spma2::{self, GlobalNoise};
use crate::transcript::{Node, Phase, Transcript};

/// A named slice of the randomness vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    /// Type I: noise of one party's queries. Type II: `party` is `None`.
    QueryNoise { party: Option<usize> },
    /// Free masking vectors of parties 1..M−1.
    Masks,
    /// Type I blinding scalars of one party.
    PartyNoise { party: usize },
    /// Type II blinding scalars.
    GlobalNoise,
    /// Type II storage noise of one party.
    StorageNoise { party: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layout {
    blocks: Vec<(Block, Range<usize>)>,
    len: usize,
}

impl Layout {
    fn push(&mut self, block: Block, len: usize) {
        self.blocks.push((block, self.len..self.len + len));
        self.len += len;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn blocks(&self) -> &[(Block, Range<usize>)] {
        &self.blocks
    }

    /// Coordinates of `block`, empty if the scheme has no such block.
    pub fn range(&self, block: Block) -> Range<usize> {
        self.blocks
            .iter()
            .find(|(b, _)| *b == block)
            .map_or(0..0, |(_, r)| r.clone())
    }

    /// Coordinates of every block accepted by `pred`.
    pub fn coords(&self, pred: impl Fn(&Block) -> bool) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|(b, _)| pred(b))
            .flat_map(|(_, r)| r.clone())
            .collect()
    }
}

pub fn layout(params: &Params) -> Layout {
    let mut l = Layout::default();
    let (m, e, mu) = (params.m(), params.e(), params.mu());
    match params.variant().scheme() {
        Variant::Pma1 | Variant::Spma1 => {
            for i in 0..m {
                l.push(Block::QueryNoise { party: Some(i) }, mu * e);
            }
            l.push(Block::Masks, (m - 1) * params.n());
            if params.variant() == Variant::Spma1 {
                for i in 0..m {
                    l.push(Block::PartyNoise { party: i }, params.n() - 1);
                }
            }
        }
        _ => {
            for i in 0..m {
                l.push(Block::StorageNoise { party: i }, params.storage_degree() * e);
            }
            l.push(Block::QueryNoise { party: None }, mu * e);
            l.push(Block::GlobalNoise, params.active_databases() - 1);
        }
    }
    l
}

/// Draws a full randomness vector.
pub fn sample(params: &Params, rng: &mut RandomSource) -> Vec<Fe> {
    rng.uniform_vec(params.field(), layout(params).len())
}

/// Deliberate breakage used as negative controls by the audits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tamper {
    ZeroMasks,
    ZeroBlindingNoise,
    ZeroStorageNoise,
    ZeroQueryNoise,
}

impl Tamper {
    pub fn hits(self, block: &Block) -> bool {
        match self {
            Tamper::ZeroMasks => matches!(block, Block::Masks),
            Tamper::ZeroBlindingNoise => matches!(block, Block::PartyNoise { .. } | Block::GlobalNoise),
            Tamper::ZeroStorageNoise => matches!(block, Block::StorageNoise { .. }),
            Tamper::ZeroQueryNoise => matches!(block, Block::QueryNoise { .. }),
        }
    }

    pub fn apply(self, layout: &Layout, randomness: &mut [Fe]) {
        for c in layout.coords(|b| self.hits(b)) {
            randomness[c] = Fe::ZERO;
        }
    }
}

/// Answers of one run, in the shape the matching decoder expects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answers {
    TypeOne(AnswerVectorI),
    TypeTwo(Vec<Fe>),
}

/// One executed run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub transcript: Transcript,
    pub answers: Answers,
}

impl Execution {
    pub fn decode(&self, params: &Params) -> Result<u64> {
        match &self.answers {
            Answers::TypeOne(a) => pma1::decode(params, a),
            Answers::TypeTwo(a) => spma2::decode(params, a),
        }
    }
}

fn chunks(slice: &[Fe], size: usize, count: usize) -> Vec<Vec<Fe>> {
    (0..count).map(|k| slice[k * size..(k + 1) * size].to_vec()).collect()
}

/// Executes one run of the scheme selected by `params` with explicit
/// randomness. `theta` is 1-based.
pub fn execute(params: &Params, incidences: &[IncidenceVector], theta: usize, randomness: &[Fe]) -> Result<Execution> {
    let layout = layout(params);
    if randomness.len() != layout.len() {
        return Err(Error::Param(format!(
            "randomness vector has length {}, layout needs {}",
            randomness.len(),
            layout.len()
        )));
    }
    if incidences.len() != params.m() || incidences.iter().any(|v| v.len() != params.e()) {
        return Err(Error::Param(format!(
            "expected {} incidence vectors of length {}",
            params.m(),
            params.e()
        )));
    }
    params.check_theta(theta)?;
    match params.variant().scheme() {
        Variant::Spma2 => execute_type_two(params, &layout, incidences, theta, randomness),
        _ => execute_type_one(params, &layout, incidences, theta, randomness),
    }
}

fn execute_type_one(
    params: &Params,
    layout: &Layout,
    incidences: &[IncidenceVector],
    theta: usize,
    r: &[Fe],
) -> Result<Execution> {
    let (m, n, e, mu) = (params.m(), params.n(), params.e(), params.mu());
    let f = params.field();
    let noise = (0..m)
        .map(|i| chunks(&r[layout.range(Block::QueryNoise { party: Some(i) })], e, mu))
        .collect();
    let queries = pma1::queries_from_noise(params, theta, noise)?;
    let masks: MaskingVectors = pma1::masks_from_free(f, chunks(&r[layout.range(Block::Masks)], n, m - 1));
    let blinding = (params.variant() == Variant::Spma1).then(|| PartyNoise {
        zprime: (0..m)
            .map(|i| r[layout.range(Block::PartyNoise { party: i })].to_vec())
            .collect(),
    });
    let answers = match &blinding {
        Some(z) => spma1::answer_all(params, incidences, &queries, &masks, z)?,
        None => pma1::answer_all(params, incidences, &queries, &masks)?,
    };

    let mut t = Transcript::with_capacity((m - 1) * n + m * n * (e + 2));
    for i in 1..m {
        t.extend(Phase::MaskDealing, Node::Party(0), Node::Party(i), &masks.s[i]);
    }
    if let Some(z) = &blinding {
        for (i, row) in z.zprime.iter().enumerate() {
            t.extend(Phase::NoiseProvisioning, Node::Party(i), Node::PartyDatabases(i), row);
        }
    }
    for i in 0..m {
        for j in 0..n {
            t.extend(Phase::Query, Node::User, Node::Database { party: i, db: j }, queries.query(i, j));
        }
    }
    for i in 0..m {
        for j in 0..n {
            t.push(Phase::Answer, Node::Database { party: i, db: j }, Node::User, answers.a[i][j]);
        }
    }
    Ok(Execution {
        transcript: t,
        answers: Answers::TypeOne(answers),
    })
}

fn execute_type_two(
    params: &Params,
    layout: &Layout,
    incidences: &[IncidenceVector],
    theta: usize,
    r: &[Fe],
) -> Result<Execution> {
    let (m, e, mu, n_eff) = (params.m(), params.e(), params.mu(), params.active_databases());
    let shares = (0..m)
        .map(|i| {
            let noise = chunks(&r[layout.range(Block::StorageNoise { party: i })], e, params.storage_degree());
            spma2::encode_storage_with(params, &incidences[i], noise)
        })
        .collect::<Result<Vec<_>>>()?;
    let storage = spma2::aggregate(params, &shares)?;
    let queries = spma2::queries_from_noise(params, theta, chunks(&r[layout.range(Block::QueryNoise { party: None })], e, mu))?;
    let blinding = GlobalNoise {
        zprime: r[layout.range(Block::GlobalNoise)].to_vec(),
    };
    let answers = spma2::answer_all(params, &storage, &queries, &blinding)?;

    let db = |g: usize| {
        let (party, db) = params.locate(g);
        Node::Database { party, db }
    };
    let mut t = Transcript::with_capacity(m * n_eff * e + n_eff * (e + 2));
    for (i, share) in shares.iter().enumerate() {
        for (g, s) in share.shares.iter().enumerate() {
            t.extend(Phase::StorageDistribution, Node::Party(i), db(g), s);
        }
    }
    t.extend(Phase::NoiseProvisioning, Node::Party(0), Node::AllDatabases, &blinding.zprime);
    for (g, q) in queries.queries.iter().enumerate() {
        t.extend(Phase::Query, Node::User, db(g), q);
    }
    for (g, &a) in answers.iter().enumerate() {
        t.push(Phase::Answer, db(g), Node::User, a);
    }
    Ok(Execution {
        transcript: t,
        answers: Answers::TypeTwo(answers),
    })
}

/// Result of a sampled run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub theta: usize,
    pub count: u64,
    pub expected: usize,
    pub transcript: Transcript,
}

/// Samples randomness, executes, decodes, and checks the count against the
/// plaintext oracle.
pub fn run(params: &Params, datasets: &[PartyDataset], theta: usize, rng: &mut RandomSource) -> Result<RunResult> {
    let inc = incidences(datasets, params.e())?;
    let randomness = sample(params, rng);
    let exec = execute(params, &inc, theta, &randomness)?;
    let count = exec.decode(params)?;
    let expected = true_count(theta, datasets);
    if count != expected as u64 {
        return Err(Error::Integrity(format!(
            "decoded count {count} differs from the true count {expected} for theta = {theta}"
        )));
    }
    Ok(RunResult {
        theta,
        count,
        expected,
        transcript: exec.transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SchemeParams;

    #[test]
    fn layout_sizes() {
        let p = SchemeParams::new(Variant::Spma1, 3, 2, 1, 0, 4, 7).validate().unwrap();
        let l = layout(&p);
        // 3 parties * μ(1) * E(4) + 2 * 2 masks + 3 * 1 blinding
        assert_eq!(l.len(), 12 + 4 + 3);
        assert_eq!(l.range(Block::Masks), 12..16);
        assert_eq!(l.range(Block::GlobalNoise), 0..0);

        let p = SchemeParams::new(Variant::Spma2, 3, 1, 1, 0, 2, 5).validate().unwrap();
        let l = layout(&p);
        assert_eq!(l.len(), 3 * 2 + 2 + 2);
    }

    #[test]
    fn sampled_layout_matches_generator_order() {
        let p = SchemeParams::new(Variant::Spma1, 3, 2, 1, 0, 4, 7).validate().unwrap();
        let flat = sample(&p, &mut RandomSource::new(21));
        let mut rng = RandomSource::new(21);
        let q = pma1::gen_queries(&p, 1, &mut rng).unwrap();
        let s = pma1::gen_masks(&p, &mut rng);
        let z = spma1::gen_noise(&p, &mut rng);
        let l = layout(&p);
        assert_eq!(q.noise[1][0], flat[l.range(Block::QueryNoise { party: Some(1) })].to_vec());
        assert_eq!(s.s[0], flat[l.range(Block::Masks)][..2].to_vec());
        assert_eq!(z.zprime[2], flat[l.range(Block::PartyNoise { party: 2 })].to_vec());
    }

    #[test]
    fn tamper_zeroes_only_its_blocks() {
        let p = SchemeParams::new(Variant::Spma1, 2, 2, 1, 0, 2, 5).validate().unwrap();
        let l = layout(&p);
        let mut r = vec![Fe::ONE; l.len()];
        Tamper::ZeroMasks.apply(&l, &mut r);
        assert!(r[l.range(Block::Masks)].iter().all(|x| x.is_zero()));
        assert!(r[l.range(Block::QueryNoise { party: Some(0) })].iter().all(|x| *x == Fe::ONE));
    }

    #[test]
    fn transcript_shapes() {
        let d = vec![PartyDataset::new([1]), PartyDataset::new([1, 2])];
        let p = SchemeParams::new(Variant::Spma1, 2, 2, 1, 0, 2, 5).validate().unwrap();
        let r = run(&p, &d, 1, &mut RandomSource::new(1)).unwrap();
        assert_eq!(r.count, 2);
        let t = &r.transcript;
        assert_eq!(t.count_phase(Phase::MaskDealing), 2);
        assert_eq!(t.count_phase(Phase::NoiseProvisioning), 2);
        assert_eq!(t.count_phase(Phase::Query), 8);
        assert_eq!(t.count_phase(Phase::Answer), 4);

        let d = vec![PartyDataset::new([1]), PartyDataset::new([2]), PartyDataset::new([1, 2])];
        let p = SchemeParams::new(Variant::Pma2, 3, 2, 1, 0, 2, 7).validate().unwrap();
        let r = run(&p, &d, 1, &mut RandomSource::new(1)).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.transcript.count_phase(Phase::Answer), 5);
        assert_eq!(r.transcript.count_phase(Phase::StorageDistribution), 3 * 5 * 2);
        // the sixth database is idle
        let idle = Node::Database { party: 2, db: 1 };
        assert!(r.transcript.events().iter().all(|e| e.to != idle && e.from != idle));
    }

    #[test]
    fn execute_rejects_malformed_inputs() {
        let p = SchemeParams::new(Variant::Pma1, 2, 2, 1, 0, 2, 5).validate().unwrap();
        let inc = vec![IncidenceVector::from_bits(&[true, false]); 2];
        assert!(execute(&p, &inc, 1, &[Fe::ZERO; 3]).is_err());
        let r = vec![Fe::ZERO; layout(&p).len()];
        assert!(execute(&p, &inc[..1], 1, &r).is_err());
        assert!(execute(&p, &inc, 3, &r).is_err());
    }
}
