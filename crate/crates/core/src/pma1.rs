//! Private membership aggregation with type I collusion.
//!
//! Every database of party `i` holds a copy of the incidence vector `P_i`.
//! The query to database `j` of party `i` is
//! `e_θ + Σ_{ℓ=1}^{μ} (1+α_j)^ℓ Z_{iℓ}`, so the answer `P_iᵗ Q_{ij} + S_{ij}`
//! is a degree-μ polynomial in `1+α_j` whose constant term is party i's bit
//! for θ. The masks `S_i` sum to zero across parties, so summing answers per
//! database index and inverting the Vandermonde system yields the count and
//! nothing about which parties contributed to it.

use crate::error::{Error, Result};
use crate::field::{decode_constant, Fe, Field};
use crate::model::{IncidenceVector, Params, RandomSource};

/// Queries for every (party, database) plus the noise that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySetI {
    /// `queries[i][j]` has length E.
    pub queries: Vec<Vec<Vec<Fe>>>,
    /// `noise[i][ℓ]` is `Z_{i,ℓ+1}`, shared by all databases of party i.
    pub noise: Vec<Vec<Vec<Fe>>>,
}

impl QuerySetI {
    pub fn query(&self, party: usize, db: usize) -> &[Fe] {
        &self.queries[party][db]
    }
}

/// Builds the queries from explicit noise, `noise[i]` holding μ vectors.
pub fn queries_from_noise(params: &Params, theta: usize, noise: Vec<Vec<Vec<Fe>>>) -> Result<QuerySetI> {
    params.check_theta(theta)?;
    let f = params.field();
    if noise.len() != params.m() || noise.iter().any(|z| z.len() != params.mu()) {
        return Err(Error::Param(format!(
            "expected {} x {} noise vectors",
            params.m(),
            params.mu()
        )));
    }
    let unit = params.unit(theta);
    let queries = noise
        .iter()
        .map(|z| {
            (0..params.n())
                .map(|j| {
                    let x = params.points().shifted(f, j);
                    let mut q = unit.clone();
                    let mut xl = Fe::ONE;
                    for z_l in z {
                        xl = f.mul(xl, x);
                        f.axpy(&mut q, xl, z_l);
                    }
                    q
                })
                .collect()
        })
        .collect();
    Ok(QuerySetI { queries, noise })
}

/// Samples `M·μ` uniform noise vectors and builds the queries.
pub fn gen_queries(params: &Params, theta: usize, rng: &mut RandomSource) -> Result<QuerySetI> {
    let f = params.field();
    let noise = (0..params.m())
        .map(|_| (0..params.mu()).map(|_| rng.uniform_vec(f, params.e())).collect())
        .collect();
    queries_from_noise(params, theta, noise)
}

/// Per-party masking vectors of length N summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskingVectors {
    pub s: Vec<Vec<Fe>>,
}

impl MaskingVectors {
    pub fn zero(params: &Params) -> Self {
        MaskingVectors {
            s: vec![vec![Fe::ZERO; params.n()]; params.m()],
        }
    }

    pub fn sum(&self, field: &Field) -> Vec<Fe> {
        let n = self.s.first().map_or(0, Vec::len);
        (0..n).map(|j| field.sum(self.s.iter().map(|row| row[j]))).collect()
    }
}

/// Parties 1..M−1 take `free`; party M takes the negated sum.
pub fn masks_from_free(field: &Field, free: Vec<Vec<Fe>>) -> MaskingVectors {
    let n = free.first().map_or(0, Vec::len);
    let mut last = vec![Fe::ZERO; n];
    for row in &free {
        for (acc, &v) in last.iter_mut().zip(row) {
            *acc = field.sub(*acc, v);
        }
    }
    let mut s = free;
    s.push(last);
    MaskingVectors { s }
}

pub fn gen_masks(params: &Params, rng: &mut RandomSource) -> MaskingVectors {
    let f = params.field();
    let free = (1..params.m()).map(|_| rng.uniform_vec(f, params.n())).collect();
    masks_from_free(f, free)
}

/// One database's reply: `P_iᵗ q + s`.
pub fn answer(field: &Field, incidence: &IncidenceVector, query: &[Fe], mask: Fe) -> Result<Fe> {
    Ok(field.add(field.dot(incidence.as_slice(), query)?, mask))
}

/// Replies indexed `[party][database]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerVectorI {
    pub a: Vec<Vec<Fe>>,
}

impl AnswerVectorI {
    /// `b[j] = Σ_i a[i][j]`.
    pub fn column_sums(&self, field: &Field) -> Vec<Fe> {
        let n = self.a.first().map_or(0, Vec::len);
        (0..n).map(|j| field.sum(self.a.iter().map(|row| row[j]))).collect()
    }
}

pub fn answer_all(
    params: &Params,
    incidences: &[IncidenceVector],
    queries: &QuerySetI,
    masks: &MaskingVectors,
) -> Result<AnswerVectorI> {
    let f = params.field();
    let a = (0..params.m())
        .map(|i| {
            (0..params.n())
                .map(|j| answer(f, &incidences[i], queries.query(i, j), masks.s[i][j]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnswerVectorI { a })
}

/// Sums the answers per database index and reads the count off the constant
/// coefficient. Individual parties' answers are never examined.
pub fn decode(params: &Params, answers: &AnswerVectorI) -> Result<u64> {
    if answers.a.len() != params.m() || answers.a.iter().any(|r| r.len() != params.n()) {
        return Err(Error::Protocol(format!(
            "decoder needs all {} x {} answers",
            params.m(),
            params.n()
        )));
    }
    let sums = answers.column_sums(params.field());
    decode_constant(params.field(), params.points(), &sums, params.m())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{incidence, PartyDataset, SchemeParams, Variant};

    fn params(m: usize, n: usize, t: usize, y: usize, e: usize, p: u64) -> Params {
        SchemeParams::new(Variant::Pma1, m, n, t, y, e, p).validate().unwrap()
    }

    #[test]
    fn zero_noise_gives_unit_queries() {
        let p = params(2, 2, 1, 0, 3, 7);
        let zero = vec![vec![vec![Fe::ZERO; 3]; 1]; 2];
        let q = queries_from_noise(&p, 2, zero).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(q.query(i, j), p.unit(2).as_slice());
            }
        }
    }

    #[test]
    fn query_by_hand_mod_3() {
        // μ = 1, E = 2, p = 3, Z = (1,2), α = 1, θ = 1: (1,0) + 2·(1,2) = (0,1)
        let p = SchemeParams::new(Variant::Pma1, 2, 2, 1, 0, 2, 3)
            .with_alphas(vec![1, 0])
            .validate()
            .unwrap();
        let z = vec![vec![vec![Fe::ONE, p.field().elem(2).unwrap()]]; 2];
        let q = queries_from_noise(&p, 1, z).unwrap();
        assert_eq!(q.query(0, 0), &[Fe::ZERO, Fe::ONE]);
    }

    #[test]
    fn query_generation_is_seeded() {
        let p = params(3, 2, 1, 1, 4, 11);
        let a = gen_queries(&p, 3, &mut RandomSource::new(5)).unwrap();
        let b = gen_queries(&p, 3, &mut RandomSource::new(5)).unwrap();
        assert_eq!(a, b);
        assert!(gen_queries(&p, 5, &mut RandomSource::new(5)).is_err());
    }

    #[test]
    fn mask_examples() {
        let f5 = Field::new(5).unwrap();
        let s = masks_from_free(&f5, vec![vec![Fe::ONE, f5.elem(2).unwrap()], vec![f5.elem(3).unwrap(); 2]]);
        assert_eq!(s.s[2], vec![Fe::ONE, Fe::ZERO]);

        let p = params(2, 3, 2, 0, 1, 7);
        let s = gen_masks(&p, &mut RandomSource::new(3));
        for j in 0..3 {
            assert_eq!(p.field().add(s.s[0][j], s.s[1][j]), Fe::ZERO);
        }
    }

    #[test]
    fn answer_examples() {
        let f = Field::new(7).unwrap();
        let p1 = incidence(&PartyDataset::new(1..=5), 5).unwrap();
        let p2 = incidence(&PartyDataset::new([2, 3, 4]), 5).unwrap();
        let e = |k: usize| {
            let mut v = vec![Fe::ZERO; 5];
            v[k - 1] = Fe::ONE;
            v
        };
        assert_eq!(answer(&f, &p1, &e(3), Fe::ZERO).unwrap(), Fe::ONE);
        assert_eq!(answer(&f, &p2, &e(1), Fe::ZERO).unwrap(), Fe::ZERO);
        assert_eq!(answer(&f, &p2, &[Fe::ZERO; 5], f.elem(4).unwrap()).unwrap(), f.elem(4).unwrap());
        assert!(answer(&f, &p2, &[Fe::ZERO; 4], Fe::ZERO).is_err());
    }

    #[test]
    fn decode_examples() {
        let p = params(2, 2, 1, 0, 5, 7);
        let inc = vec![
            incidence(&PartyDataset::new(1..=5), 5).unwrap(),
            incidence(&PartyDataset::new([2, 3, 4]), 5).unwrap(),
        ];
        let mut rng = RandomSource::new(11);
        let q = gen_queries(&p, 2, &mut rng).unwrap();
        let s = gen_masks(&p, &mut rng);
        let a = answer_all(&p, &inc, &q, &s).unwrap();
        assert_eq!(decode(&p, &a).unwrap(), 2);

        let empty = vec![incidence(&PartyDataset::default(), 5).unwrap(); 2];
        let a = answer_all(&p, &empty, &q, &s).unwrap();
        assert_eq!(decode(&p, &a).unwrap(), 0);

        let mut short = a.clone();
        short.a[1].pop();
        assert!(matches!(decode(&p, &short), Err(Error::Protocol(_))));
    }

    #[test]
    fn single_database_without_noise_sums_bits() {
        let p = params(3, 1, 0, 0, 2, 5);
        let inc: Vec<_> = [vec![1], vec![1, 2], vec![]]
            .into_iter()
            .map(|d| incidence(&PartyDataset::new(d), 2).unwrap())
            .collect();
        let q = queries_from_noise(&p, 1, vec![vec![]; 3]).unwrap();
        let a = answer_all(&p, &inc, &q, &MaskingVectors::zero(&p)).unwrap();
        assert_eq!(decode(&p, &a).unwrap(), 2);
    }

    #[test]
    fn tampered_answers_are_flagged() {
        let p = params(2, 2, 1, 0, 2, 7);
        let inc = vec![incidence(&PartyDataset::new([1]), 2).unwrap(); 2];
        let mut rng = RandomSource::new(2);
        let q = gen_queries(&p, 1, &mut rng).unwrap();
        let s = gen_masks(&p, &mut rng);
        let mut a = answer_all(&p, &inc, &q, &s).unwrap();
        // shifting both sums by 3 moves the constant coefficient to 5 > M
        let three = p.field().elem(3).unwrap();
        a.a[0][0] = p.field().add(a.a[0][0], three);
        a.a[0][1] = p.field().add(a.a[0][1], three);
        assert!(matches!(decode(&p, &a), Err(Error::Integrity(_))));
    }
}
