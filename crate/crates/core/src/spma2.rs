//! Symmetric private membership aggregation with type II collusion.
//!
//! Parties secret-share their incidence vectors over the participating
//! databases with a degree-`T2·N` encoding, each database adds the shares it
//! receives, and the user queries every participating database with a
//! degree-μ noisy unit vector. Each answer is a polynomial of degree
//! `T2·N + μ` in `1+α_n` whose constant coefficient is the count; the shared
//! noise `Z'_1..Z'_{n_eff−1}` blinds every higher coefficient. The same
//! scheme serves the non-symmetric type II variant.
//!
//! Databases are numbered globally `0..M·N` in party-major order; only the
//! first `n_eff` take part.

use crate::error::{Error, Result};
use crate::field::{decode_constant, Fe, Field};
use crate::model::{IncidenceVector, Params, RandomSource, SchemeParams};

/// Number of participating databases, `T2·N + max(TN, Y_1..Y_M) + 1`.
pub fn effective_db_count(raw: &SchemeParams) -> Result<usize> {
    let n_eff = raw.effective_db_count();
    if n_eff > raw.m * raw.n {
        return Err(Error::Param(format!(
            "{n_eff} databases are needed but only MN = {} exist",
            raw.m * raw.n
        )));
    }
    Ok(n_eff)
}

/// One party's shares, `shares[n]` for each participating database.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageShare {
    pub shares: Vec<Vec<Fe>>,
    /// `noise[ℓ]` is `X_{i,ℓ+1}`.
    pub noise: Vec<Vec<Fe>>,
}

/// `P̃_{in} = P_i + Σ_{ℓ=1}^{T2·N} (1+α_n)^ℓ X_{iℓ}`.
pub fn encode_storage_with(params: &Params, incidence: &IncidenceVector, noise: Vec<Vec<Fe>>) -> Result<StorageShare> {
    let f = params.field();
    if noise.len() != params.storage_degree() || noise.iter().any(|x| x.len() != params.e()) {
        return Err(Error::Param(format!(
            "expected {} storage noise vectors of length {}",
            params.storage_degree(),
            params.e()
        )));
    }
    let shares = (0..params.active_databases())
        .map(|n| {
            let x = params.points().shifted(f, n);
            let mut share = incidence.as_slice().to_vec();
            let mut xl = Fe::ONE;
            for x_l in &noise {
                xl = f.mul(xl, x);
                f.axpy(&mut share, xl, x_l);
            }
            share
        })
        .collect();
    Ok(StorageShare { shares, noise })
}

pub fn encode_storage(params: &Params, incidence: &IncidenceVector, rng: &mut RandomSource) -> Result<StorageShare> {
    let noise = (0..params.storage_degree())
        .map(|_| rng.uniform_vec(params.field(), params.e()))
        .collect();
    encode_storage_with(params, incidence, noise)
}

/// Sum of what each database received, `ptilde[n]` per participating database.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregatedStorage {
    pub ptilde: Vec<Vec<Fe>>,
}

/// Database-side step: add the shares received from every party.
pub fn aggregate_at(field: &Field, shares: &[Option<&[Fe]>]) -> Result<Vec<Fe>> {
    let mut acc: Option<Vec<Fe>> = None;
    for (i, share) in shares.iter().enumerate() {
        let share = share.ok_or_else(|| Error::Protocol(format!("share from party {} is missing", i + 1)))?;
        match &mut acc {
            None => acc = Some(share.to_vec()),
            Some(a) => {
                if a.len() != share.len() {
                    return Err(Error::Param("shares have different lengths".into()));
                }
                for (x, &y) in a.iter_mut().zip(share) {
                    *x = field.add(*x, y);
                }
            }
        }
    }
    acc.ok_or_else(|| Error::Protocol("no shares to aggregate".into()))
}

pub fn aggregate(params: &Params, shares: &[StorageShare]) -> Result<AggregatedStorage> {
    if shares.len() != params.m() {
        return Err(Error::Protocol(format!(
            "{} of {} parties delivered shares",
            shares.len(),
            params.m()
        )));
    }
    let ptilde = (0..params.active_databases())
        .map(|n| {
            let at: Vec<Option<&[Fe]>> = shares.iter().map(|s| s.shares.get(n).map(Vec::as_slice)).collect();
            aggregate_at(params.field(), &at)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AggregatedStorage { ptilde })
}

/// Blinding scalars shared by all participating databases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalNoise {
    pub zprime: Vec<Fe>,
}

impl GlobalNoise {
    pub fn zero(params: &Params) -> Self {
        GlobalNoise {
            zprime: vec![Fe::ZERO; params.active_databases() - 1],
        }
    }
}

pub fn gen_noise(params: &Params, rng: &mut RandomSource) -> GlobalNoise {
    GlobalNoise {
        zprime: rng.uniform_vec(params.field(), params.active_databases() - 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySetII {
    /// `queries[n]` has length E.
    pub queries: Vec<Vec<Fe>>,
    /// μ noise vectors shared across databases.
    pub noise: Vec<Vec<Fe>>,
}

pub fn queries_from_noise(params: &Params, theta: usize, noise: Vec<Vec<Fe>>) -> Result<QuerySetII> {
    params.check_theta(theta)?;
    if noise.len() != params.mu() || noise.iter().any(|z| z.len() != params.e()) {
        return Err(Error::Param(format!(
            "expected {} query noise vectors of length {}",
            params.mu(),
            params.e()
        )));
    }
    let f = params.field();
    let unit = params.unit(theta);
    let queries = (0..params.active_databases())
        .map(|n| {
            let x = params.points().shifted(f, n);
            let mut q = unit.clone();
            let mut xl = Fe::ONE;
            for z in &noise {
                xl = f.mul(xl, x);
                f.axpy(&mut q, xl, z);
            }
            q
        })
        .collect();
    Ok(QuerySetII { queries, noise })
}

pub fn gen_queries(params: &Params, theta: usize, rng: &mut RandomSource) -> Result<QuerySetII> {
    let noise = (0..params.mu())
        .map(|_| rng.uniform_vec(params.field(), params.e()))
        .collect();
    queries_from_noise(params, theta, noise)
}

/// `P̃_nᵗ Q_n + Σ_{k=1}^{n_eff−1} (1+α_n)^k Z'_k`.
pub fn answer(field: &Field, ptilde: &[Fe], query: &[Fe], zprime: &[Fe], alpha: Fe) -> Result<Fe> {
    let x = field.add(Fe::ONE, alpha);
    let mut acc = field.dot(ptilde, query)?;
    let mut xk = Fe::ONE;
    for &z in zprime {
        xk = field.mul(xk, x);
        acc = field.add(acc, field.mul(xk, z));
    }
    Ok(acc)
}

pub fn answer_all(
    params: &Params,
    storage: &AggregatedStorage,
    queries: &QuerySetII,
    noise: &GlobalNoise,
) -> Result<Vec<Fe>> {
    if noise.zprime.len() + 1 != params.active_databases() {
        return Err(Error::Param(format!(
            "expected {} blinding scalars",
            params.active_databases() - 1
        )));
    }
    (0..params.active_databases())
        .map(|n| {
            answer(
                params.field(),
                &storage.ptilde[n],
                &queries.queries[n],
                &noise.zprime,
                params.points().alpha(n),
            )
        })
        .collect()
}

/// Inverts the `n_eff`-point Vandermonde system and returns the constant
/// coefficient as the count.
pub fn decode(params: &Params, answers: &[Fe]) -> Result<u64> {
    if answers.len() != params.active_databases() {
        return Err(Error::Protocol(format!(
            "decoder needs {} answers, got {}",
            params.active_databases(),
            answers.len()
        )));
    }
    decode_constant(params.field(), params.points(), answers, params.m())
}
