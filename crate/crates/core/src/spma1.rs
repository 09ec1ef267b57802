//! Symmetric private membership aggregation with type I collusion.
//!
//! Identical to [`crate::pma1`] except that each party's databases share
//! N−1 noise scalars `Z'_{iℓ}` and add `Σ_ℓ (1+α_j)^ℓ Z'_{iℓ}` to every
//! answer. The noise lands on the interference coefficients only, so the
//! decoder is unchanged and the user learns nothing beyond the count.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::model::{IncidenceVector, Params, RandomSource};
use crate::pma1::{AnswerVectorI, MaskingVectors, QuerySetI};

/// `zprime[i]` holds party i's N−1 shared noise scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyNoise {
    pub zprime: Vec<Vec<Fe>>,
}

impl PartyNoise {
    pub fn zero(params: &Params) -> Self {
        PartyNoise {
            zprime: vec![vec![Fe::ZERO; params.n() - 1]; params.m()],
        }
    }
}

pub fn gen_noise(params: &Params, rng: &mut RandomSource) -> PartyNoise {
    let f = params.field();
    PartyNoise {
        zprime: (0..params.m()).map(|_| rng.uniform_vec(f, params.n() - 1)).collect(),
    }
}

/// `P_iᵗ q + Σ_{ℓ=1}^{N−1} (1+α_j)^ℓ z'_ℓ + s`.
pub fn answer(
    field: &Field,
    incidence: &IncidenceVector,
    query: &[Fe],
    zprime: &[Fe],
    mask: Fe,
    alpha: Fe,
) -> Result<Fe> {
    let x = field.add(Fe::ONE, alpha);
    let mut blind = Fe::ZERO;
    let mut xl = Fe::ONE;
    for &z in zprime {
        xl = field.mul(xl, x);
        blind = field.add(blind, field.mul(xl, z));
    }
    Ok(field.add(field.add(field.dot(incidence.as_slice(), query)?, blind), mask))
}

pub fn answer_all(
    params: &Params,
    incidences: &[IncidenceVector],
    queries: &QuerySetI,
    masks: &MaskingVectors,
    noise: &PartyNoise,
) -> Result<AnswerVectorI> {
    let f = params.field();
    if noise.zprime.len() != params.m() || noise.zprime.iter().any(|z| z.len() + 1 != params.n()) {
        return Err(Error::Param(format!(
            "expected {} rows of {} noise scalars",
            params.m(),
            params.n() - 1
        )));
    }
    let a = (0..params.m())
        .map(|i| {
            (0..params.n())
                .map(|j| {
                    answer(
                        f,
                        &incidences[i],
                        queries.query(i, j),
                        &noise.zprime[i],
                        masks.s[i][j],
                        params.points().alpha(j),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnswerVectorI { a })
}

/// Same decoder as the non-symmetric scheme.
pub fn decode(params: &Params, answers: &AnswerVectorI) -> Result<u64> {
    crate::pma1::decode(params, answers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{incidence, PartyDataset, SchemeParams, Variant};
    use crate::pma1;

    fn params(m: usize, n: usize, t: usize, e: usize, p: u64) -> Params {
        SchemeParams::new(Variant::Spma1, m, n, t, 0, e, p).validate().unwrap()
    }

    #[test]
    fn noise_shape() {
        let p = params(2, 1, 0, 2, 3);
        assert!(gen_noise(&p, &mut RandomSource::new(1)).zprime.iter().all(Vec::is_empty));
        let p = params(2, 2, 1, 2, 3);
        let z = gen_noise(&p, &mut RandomSource::new(1));
        assert_eq!(z.zprime.len(), 2);
        assert!(z.zprime.iter().all(|r| r.len() == 1 && r[0].value() < 3));
        assert_eq!(z, gen_noise(&p, &mut RandomSource::new(1)));
    }

    #[test]
    fn answer_examples() {
        let f5 = Field::new(5).unwrap();
        let inc = IncidenceVector::from_bits(&[true, false]);
        let e1 = [Fe::ONE, Fe::ZERO];
        // 1 + 2·2 = 0 mod 5
        let two = f5.elem(2).unwrap();
        assert_eq!(answer(&f5, &inc, &e1, &[two], Fe::ZERO, Fe::ONE).unwrap(), Fe::ZERO);
        assert_eq!(answer(&f5, &inc, &e1, &[Fe::ZERO], Fe::ZERO, Fe::ONE).unwrap(), Fe::ONE);
        // noise only: (1+1)·2 + (1+1)^2·3 = 4 + 12 = 16 = 1 mod 5
        let three = f5.elem(3).unwrap();
        let zero_q = [Fe::ZERO; 2];
        assert_eq!(answer(&f5, &inc, &zero_q, &[two, three], Fe::ZERO, Fe::ONE).unwrap(), Fe::ONE);
        assert!(answer(&f5, &inc, &[Fe::ZERO], &[], Fe::ZERO, Fe::ONE).is_err());
    }

    #[test]
    fn zero_noise_matches_pma1() {
        let p = params(3, 3, 2, 4, 11);
        let p1 = SchemeParams { variant: Variant::Pma1, ..p.raw().clone() }.validate().unwrap();
        let inc: Vec<_> = [vec![1, 2], vec![2], vec![3, 4]]
            .into_iter()
            .map(|d| incidence(&PartyDataset::new(d), 4).unwrap())
            .collect();
        let mut rng = RandomSource::new(4);
        let q = pma1::gen_queries(&p, 2, &mut rng).unwrap();
        let s = pma1::gen_masks(&p, &mut rng);
        let a = answer_all(&p, &inc, &q, &s, &PartyNoise::zero(&p)).unwrap();
        assert_eq!(a, pma1::answer_all(&p1, &inc, &q, &s).unwrap());
        assert_eq!(decode(&p, &a).unwrap(), pma1::decode(&p1, &a).unwrap());
    }

    #[test]
    fn decode_examples() {
        let p = params(2, 2, 1, 5, 7);
        let inc = vec![
            incidence(&PartyDataset::new(1..=5), 5).unwrap(),
            incidence(&PartyDataset::new([2, 3, 4]), 5).unwrap(),
        ];
        let mut rng = RandomSource::new(8);
        let q = pma1::gen_queries(&p, 4, &mut rng).unwrap();
        let s = pma1::gen_masks(&p, &mut rng);
        let z = gen_noise(&p, &mut rng);
        assert_eq!(decode(&p, &answer_all(&p, &inc, &q, &s, &z).unwrap()).unwrap(), 2);
        let empty = vec![IncidenceVector::from_bits(&[false; 5]); 2];
        assert_eq!(decode(&p, &answer_all(&p, &empty, &q, &s, &z).unwrap()).unwrap(), 0);
    }
}
