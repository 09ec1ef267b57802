//! Answers checked against an independent expansion of the answer
//! polynomial, plus randomized end-to-end correctness.

use proptest::prelude::*;

use pma::audit::oracle_polynomial_expand;
use pma::field::{Fe, Field};
use pma::harness::{run_protocol, RunConfig};
use pma::model::{incidences, PartyDataset, RandomSource, SchemeParams, Variant};
use pma::protocol::{execute, layout, sample, Answers, Block};

fn to_field(f: &Field, bits: &[Fe]) -> Vec<Fe> {
    bits.iter().map(|b| f.reduce(b.value())).collect()
}

fn vec_sum(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn chunks(v: &[Fe], size: usize) -> Vec<Vec<Fe>> {
    v.chunks(size).map(<[Fe]>::to_vec).collect()
}

fn datasets(m: usize, e: usize, seed: u64) -> Vec<PartyDataset> {
    let mut rng = RandomSource::new(seed);
    (0..m)
        .map(|_| PartyDataset::new((1..=e).filter(|_| rng.bernoulli(0.5))))
        .collect()
}

/// Type II: answers are the aggregated storage polynomial times the query
/// polynomial plus the blinding polynomial, evaluated at `1 + α_j`; the
/// constant coefficient is the count.
fn check_type_two(raw: SchemeParams, seed: u64) {
    let params = raw.validate().unwrap();
    let f = params.field();
    let (m, e) = (params.m(), params.e());
    let d = datasets(m, e, seed);
    let inc = incidences(&d, e).unwrap();
    let theta = 1 + (seed as usize % e);
    let r = sample(&params, &mut RandomSource::new(seed));
    let l = layout(&params);

    let mut storage = vec![vec![Fe::ZERO; e]; params.storage_degree() + 1];
    for (i, v) in inc.iter().enumerate() {
        storage[0] = vec_sum(f, &storage[0], &to_field(f, v.as_slice()));
        for (a, x) in chunks(&r[l.range(Block::StorageNoise { party: i })], e).iter().enumerate() {
            storage[a + 1] = vec_sum(f, &storage[a + 1], x);
        }
    }
    let mut query = vec![params.unit(theta)];
    if params.mu() > 0 {
        query.extend(chunks(&r[l.range(Block::QueryNoise { party: None })], e));
    }
    let mut coeffs = oracle_polynomial_expand(f, &storage, &query).unwrap();
    assert_eq!(coeffs.len(), params.active_databases(), "degree accounting");
    for (c, &z) in coeffs.iter_mut().skip(1).zip(&r[l.range(Block::GlobalNoise)]) {
        *c = f.add(*c, z);
    }
    let count = d.iter().filter(|s| s.contains(theta)).count() as u64;
    assert_eq!(coeffs[0].value(), count);

    let exec = execute(&params, &inc, theta, &r).unwrap();
    let Answers::TypeTwo(answers) = &exec.answers else { panic!("type II run") };
    for (j, &a) in answers.iter().enumerate() {
        assert_eq!(f.eval_poly(&coeffs, params.points().shifted(f, j)), a, "database {j}");
    }
    assert_eq!(exec.decode(&params).unwrap(), count);
}

/// Type I: the per-index answer sums are a degree-μ polynomial whose
/// coefficient ℓ ≥ 1 is `Σ_i (P_iᵗ Z_iℓ + Z'_iℓ)`; masks cancel.
fn check_type_one(raw: SchemeParams, seed: u64) {
    let params = raw.validate().unwrap();
    let f = params.field();
    let (m, n, e, mu) = (params.m(), params.n(), params.e(), params.mu());
    let d = datasets(m, e, seed);
    let inc = incidences(&d, e).unwrap();
    let theta = 1 + (seed as usize % e);
    let r = sample(&params, &mut RandomSource::new(seed));
    let l = layout(&params);

    let mut coeffs = vec![Fe::ZERO; n.max(mu + 1)];
    for (i, v) in inc.iter().enumerate() {
        let p = to_field(f, v.as_slice());
        let z = chunks(&r[l.range(Block::QueryNoise { party: Some(i) })], e);
        let mut query = vec![params.unit(theta)];
        query.extend(z);
        let own = oracle_polynomial_expand(f, &[p], &query).unwrap();
        for (c, x) in coeffs.iter_mut().zip(own) {
            *c = f.add(*c, x);
        }
        for (c, &z) in coeffs.iter_mut().skip(1).zip(&r[l.range(Block::PartyNoise { party: i })]) {
            *c = f.add(*c, z);
        }
    }
    let exec = execute(&params, &inc, theta, &r).unwrap();
    let Answers::TypeOne(answers) = &exec.answers else { panic!("type I run") };
    for (j, s) in answers.column_sums(f).into_iter().enumerate() {
        assert_eq!(f.eval_poly(&coeffs, params.points().shifted(f, j)), s, "index {j}");
    }
    let count = d.iter().filter(|s| s.contains(theta)).count() as u64;
    assert_eq!(coeffs[0].value(), count);
    assert_eq!(exec.decode(&params).unwrap(), count);
}

#[test]
fn answer_polynomials_type_two() {
    for seed in 0..20 {
        check_type_two(SchemeParams::new(Variant::Spma2, 3, 1, 1, 0, 2, 5), seed);
        check_type_two(SchemeParams::new(Variant::Spma2, 4, 2, 1, 0, 3, 11), seed);
        check_type_two(SchemeParams::new(Variant::Pma2, 5, 1, 2, 0, 4, 7).with_eavesdroppers(vec![0, 3, 0, 1, 0]), seed);
        check_type_two(SchemeParams::new(Variant::Spma2, 5, 2, 1, 0, 2, 13).with_t2(2), seed);
    }
}

#[test]
fn answer_polynomials_type_one() {
    for seed in 0..20 {
        check_type_one(SchemeParams::new(Variant::Pma1, 2, 2, 1, 0, 3, 7), seed);
        check_type_one(SchemeParams::new(Variant::Spma1, 3, 3, 2, 1, 4, 11), seed);
        check_type_one(SchemeParams::new(Variant::Spma1, 4, 4, 1, 2, 2, 13), seed);
        check_type_one(SchemeParams::new(Variant::Pma1, 3, 1, 0, 0, 5, 5), seed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_variant_decodes_the_true_count(
        v in 0usize..4,
        m in 2usize..6,
        t in 0usize..3,
        y in 0usize..3,
        e in 1usize..5,
        seed in any::<u64>(),
    ) {
        let variant = Variant::ALL[v];
        // type II needs M > T + 1
        prop_assume!(!variant.is_type_two() || m > t + 1);
        let mut cfg = RunConfig::new(variant, m, e);
        cfg.t = t;
        cfg.y = vec![y];
        cfg.seed = seed;
        let rep = run_protocol(&cfg).unwrap();
        for r in &rep.runs {
            let want = rep.datasets.iter().filter(|d| d.contains(&r.theta)).count();
            prop_assert_eq!(r.count, want as u64);
        }
        prop_assert!(rep.cost.within_bound);
        prop_assert_eq!(rep.cost.download_symbols, rep.cost.theorem_bound);
    }

    #[test]
    fn reports_depend_only_on_config(seed in any::<u64>(), m in 2usize..5) {
        let mut cfg = RunConfig::new(Variant::Spma1, m, 3);
        cfg.t = 1;
        cfg.seed = seed;
        let a = serde_json::to_string(&run_protocol(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_protocol(&cfg).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
