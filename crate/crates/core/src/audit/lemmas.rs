//! Exhaustive privacy audits.
//!
//! Each audit fixes the inputs, enumerates every value of the randomness the
//! adversary does not know, and compares the exact view distributions across
//! inputs the adversary must not be able to tell apart. Randomness outside
//! the enumerated blocks is held at a fixed sample.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::distribution::{assignment_count, enumerate_distribution, for_each_assignment, DistributionMap};
use super::view::AdversaryView;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::model::{all_dataset_assignments, incidences, true_count, IncidenceVector, Params, PartyDataset, RandomSource};
use crate::protocol::{execute, layout, sample, Block, Layout, Tamper};
use crate::transcript::Node;

const FIXED_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Two inputs whose view probabilities differ at `view`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub left: String,
    pub right: String,
    pub view: Vec<u64>,
    pub left_probability: String,
    pub right_probability: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    fn new(name: &str, witness: Option<Witness>) -> Self {
        Check {
            name: name.into(),
            verdict: if witness.is_some() { Verdict::Fail } else { Verdict::Pass },
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditOutcome {
    pub verdict: Verdict,
    pub enumerated_assignments: u64,
    pub checks: Vec<Check>,
}

impl AuditOutcome {
    fn new(checks: Vec<Check>, enumerated_assignments: u64) -> Self {
        let verdict = if checks.iter().all(|c| c.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        AuditOutcome {
            verdict,
            enumerated_assignments,
            checks,
        }
    }

    /// Witness of the first failing check.
    pub fn witness(&self) -> Option<&Witness> {
        self.checks.iter().find_map(|c| c.witness.as_ref())
    }
}

/// How much of the query randomness the user is assumed to remember.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryKnowledge {
    /// Distributions are compared for every fixed value of the query noise.
    Conditioned,
    /// Query noise is averaged out along with everything else.
    Marginal,
}

struct Config {
    theta: usize,
    datasets: Vec<PartyDataset>,
    incidences: Vec<IncidenceVector>,
}

impl Config {
    fn new(params: &Params, theta: usize, datasets: Vec<PartyDataset>) -> Result<Self> {
        let incidences = incidences(&datasets, params.e())?;
        Ok(Config {
            theta,
            datasets,
            incidences,
        })
    }

    fn label(&self) -> String {
        let sets: Vec<String> = self
            .datasets
            .iter()
            .map(|d| format!("{{{}}}", d.members.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        format!("theta={} P=[{}]", self.theta, sets.join(" "))
    }

    /// Membership bits of every party for every element except θ.
    fn others(&self) -> Vec<bool> {
        self.incidences
            .iter()
            .flat_map(|v| (1..=v.len()).filter(|&k| k != self.theta).map(|k| v.bit(k)))
            .collect()
    }

    fn column(&self) -> Vec<bool> {
        self.incidences.iter().map(|v| v.bit(self.theta)).collect()
    }

    fn count(&self) -> usize {
        true_count(self.theta, &self.datasets)
    }
}

fn all_configs(params: &Params) -> Result<Vec<Config>> {
    let sets = all_dataset_assignments(params.m(), params.e());
    (1..=params.e())
        .flat_map(|theta| sets.iter().map(move |d| (theta, d.clone())))
        .map(|(theta, d)| Config::new(params, theta, d))
        .collect()
}

fn witness(left: String, a: &DistributionMap, right: String, b: &DistributionMap) -> Option<Witness> {
    a.first_difference(b).map(|(view, pa, pb)| Witness {
        left,
        right,
        view,
        left_probability: pa.to_string(),
        right_probability: pb.to_string(),
    })
}

/// Compares every config against the first config sharing its key. Configs
/// with key `None` are skipped.
fn group_check<K: Ord>(
    dists: &[(&Config, DistributionMap)],
    prefix: &str,
    key: impl Fn(&Config) -> Option<K>,
) -> Option<Witness> {
    let mut reps: BTreeMap<K, usize> = BTreeMap::new();
    for (k, (cfg, dist)) in dists.iter().enumerate() {
        let Some(group) = key(cfg) else { continue };
        match reps.get(&group) {
            None => {
                reps.insert(group, k);
            }
            Some(&r) => {
                let (rc, rd) = &dists[r];
                if let Some(w) = witness(format!("{prefix}{}", rc.label()), rd, format!("{prefix}{}", cfg.label()), dist) {
                    return Some(w);
                }
            }
        }
    }
    None
}

struct Auditor<'a> {
    params: &'a Params,
    layout: Layout,
    base: Vec<Fe>,
    tamper: Option<Tamper>,
    cap: u64,
}

impl<'a> Auditor<'a> {
    fn new(params: &'a Params, tamper: Option<Tamper>, cap: u64) -> Self {
        let layout = layout(params);
        let mut base = sample(params, &mut RandomSource::new(FIXED_SEED));
        if let Some(t) = tamper {
            t.apply(&layout, &mut base);
        }
        Auditor {
            params,
            layout,
            base,
            tamper,
            cap,
        }
    }

    /// Enumerable coordinates of the blocks accepted by `pred`.
    fn coords(&self, pred: impl Fn(&Block) -> bool) -> Vec<usize> {
        self.layout
            .coords(|b| pred(b) && !self.tamper.is_some_and(|t| t.hits(b)))
    }

    fn dist(&self, base: &[Fe], free: &[usize], cfg: &Config, view: &AdversaryView) -> Result<DistributionMap> {
        enumerate_distribution(self.params.field(), base, free, self.cap, |r| {
            Ok(view.extract(&execute(self.params, &cfg.incidences, cfg.theta, r)?.transcript))
        })
    }

    fn dists<'c>(
        &self,
        base: &[Fe],
        free: &[usize],
        configs: &'c [Config],
        view: &AdversaryView,
    ) -> Result<Vec<(&'c Config, DistributionMap)>> {
        configs
            .iter()
            .map(|c| Ok((c, self.dist(base, free, c, view)?)))
            .collect()
    }

    /// Runs `check` for every value of the `outer` coordinates, stopping at
    /// the first witness.
    fn conditioned(
        &self,
        outer: &[usize],
        inner: &[usize],
        configs: &[Config],
        view: &AdversaryView,
        check: impl Fn(&[(&Config, DistributionMap)], &str) -> Option<Witness>,
    ) -> Result<(Option<Witness>, u64)> {
        assignment_count(self.params.field(), outer.len() + inner.len(), self.cap)?;
        let mut found = None;
        let mut enumerated = 0;
        for_each_assignment(self.params.field(), &self.base, outer, self.cap, |r| {
            let d = self.dists(r, inner, configs, view)?;
            enumerated += d.iter().map(|(_, m)| m.total()).sum::<u64>();
            let fixed: Vec<u64> = outer.iter().map(|&c| r[c].value()).collect();
            let prefix = if outer.is_empty() {
                String::new()
            } else {
                format!("query noise {fixed:?}, ")
            };
            found = check(&d, &prefix);
            Ok(found.is_none())
        })?;
        Ok((found, enumerated))
    }

    /// Randomness unknown to a user holding the answers: everything but the
    /// query noise. For type II the storage noise of the first party suffices,
    /// since answers depend on storage noise only through its sum over parties.
    fn hidden_from_user(&self) -> Vec<usize> {
        self.coords(|b| match b {
            Block::QueryNoise { .. } => false,
            Block::StorageNoise { party } => *party == 0,
            _ => true,
        })
    }
}

fn total(d: &[(&Config, DistributionMap)]) -> u64 {
    d.iter().map(|(_, m)| m.total()).sum()
}

/// Colluding databases learn nothing about θ: their joint query distribution
/// is the same for every θ.
pub fn audit_query_privacy(params: &Params, colluders: &[Node], tamper: Option<Tamper>, cap: u64) -> Result<AuditOutcome> {
    let view = AdversaryView::Colluding {
        databases: colluders.to_vec(),
    };
    view.check(params)?;
    let a = Auditor::new(params, tamper, cap);
    let parties: Vec<usize> = colluders
        .iter()
        .filter_map(|n| match n {
            Node::Database { party, .. } => Some(*party),
            _ => None,
        })
        .collect();
    let free = a.coords(|b| match b {
        Block::QueryNoise { party: Some(i) } => parties.contains(i),
        Block::QueryNoise { party: None } => true,
        _ => false,
    });
    let empty = vec![PartyDataset::default(); params.m()];
    let configs = (1..=params.e())
        .map(|theta| Config::new(params, theta, empty.clone()))
        .collect::<Result<Vec<_>>>()?;
    let d = a.dists(&a.base, &free, &configs, &view)?;
    let check = Check::new("theta", group_check(&d, "", |_| Some(())));
    Ok(AuditOutcome::new(vec![check], total(&d)))
}

/// The user learns only the count: for fixed θ, fixed memberships of the
/// other elements and fixed count, which parties hold θ does not change the
/// answer distribution.
pub fn audit_blind_estimation(
    params: &Params,
    knowledge: QueryKnowledge,
    tamper: Option<Tamper>,
    cap: u64,
) -> Result<AuditOutcome> {
    let a = Auditor::new(params, tamper, cap);
    let query = a.coords(|b| matches!(b, Block::QueryNoise { .. }));
    let hidden = a.hidden_from_user();
    let (outer, inner) = match knowledge {
        QueryKnowledge::Conditioned => (query, hidden),
        QueryKnowledge::Marginal => (Vec::new(), [query, hidden].concat()),
    };
    let configs = all_configs(params)?;
    let (w, n) = a.conditioned(&outer, &inner, &configs, &AdversaryView::User, |d, prefix| {
        group_check(d, prefix, |c| Some((c.theta, c.others(), c.count())))
    })?;
    Ok(AuditOutcome::new(vec![Check::new("placement", w)], n))
}

/// The user learns nothing about elements other than θ: for fixed θ and
/// fixed memberships of θ, the answers do not depend on the rest of the
/// datasets. The user is assumed to know the query noise.
pub fn audit_symmetric_privacy(params: &Params, tamper: Option<Tamper>, cap: u64) -> Result<AuditOutcome> {
    let a = Auditor::new(params, tamper, cap);
    let outer = a.coords(|b| matches!(b, Block::QueryNoise { .. }));
    let inner = a.hidden_from_user();
    let configs = all_configs(params)?;
    let (w, n) = a.conditioned(&outer, &inner, &configs, &AdversaryView::User, |d, prefix| {
        group_check(d, prefix, |c| Some((c.theta, c.column())))
    })?;
    Ok(AuditOutcome::new(vec![Check::new("other elements", w)], n))
}

/// Any `subset_size` databases pooling one party's storage shares learn
/// nothing about that party's dataset. Every party and every subset of
/// participating databases is tried.
pub fn audit_storage_security(params: &Params, subset_size: usize, tamper: Option<Tamper>, cap: u64) -> Result<AuditOutcome> {
    if !params.variant().is_type_two() {
        return Err(Error::Param("storage audits apply to type II variants".into()));
    }
    let n_eff = params.active_databases();
    if subset_size > n_eff {
        return Err(Error::Param(format!(
            "cannot pick {subset_size} of {n_eff} participating databases"
        )));
    }
    let a = Auditor::new(params, tamper, cap);
    let mut enumerated = 0;
    for party in 0..params.m() {
        let free = a.coords(|b| *b == Block::StorageNoise { party });
        let configs = all_dataset_assignments(1, params.e())
            .into_iter()
            .map(|mine| {
                let mut d = vec![PartyDataset::default(); params.m()];
                d[party] = mine[0].clone();
                Config::new(params, 1, d)
            })
            .collect::<Result<Vec<_>>>()?;
        for subset in combinations(n_eff, subset_size) {
            let databases = subset
                .iter()
                .map(|&g| {
                    let (party, db) = params.locate(g);
                    Node::Database { party, db }
                })
                .collect();
            let view = AdversaryView::Storage { party, databases };
            let d = a.dists(&a.base, &free, &configs, &view)?;
            enumerated += total(&d);
            let prefix = format!("{}: ", view.describe());
            if let Some(w) = group_check(&d, &prefix, |_| Some(())) {
                return Ok(AuditOutcome::new(vec![Check::new("dataset", Some(w))], enumerated));
            }
        }
    }
    Ok(AuditOutcome::new(vec![Check::new("dataset", None)], enumerated))
}

/// An eavesdropper on the query and answer links of the tapped databases
/// learns neither θ, nor the datasets, nor the count. The eavesdropper does
/// not know the query noise, the masks, or the blinding noise.
pub fn audit_eavesdropper(params: &Params, tapped: &[Node], tamper: Option<Tamper>, cap: u64) -> Result<AuditOutcome> {
    let view = AdversaryView::Eavesdropper {
        databases: tapped.to_vec(),
    };
    view.check(params)?;
    let a = Auditor::new(params, tamper, cap);
    let type_two = params.variant().is_type_two();
    let mut parties: Vec<usize> = tapped
        .iter()
        .filter_map(|n| match n {
            Node::Database { party, .. } => Some(*party),
            _ => None,
        })
        .collect();
    parties.dedup();
    if !type_two && parties.len() > 1 {
        return Err(Error::Param("type I eavesdroppers tap the databases of a single party".into()));
    }
    let tapped_party = parties.first().copied();
    let free = if type_two {
        a.coords(|b| !matches!(b, Block::StorageNoise { party } if *party != 0))
    } else {
        a.coords(|b| match b {
            Block::QueryNoise { party } => *party == tapped_party,
            Block::PartyNoise { party } => Some(*party) == tapped_party,
            Block::Masks => true,
            _ => false,
        })
    };
    let configs = all_configs(params)?;
    let d = a.dists(&a.base, &free, &configs, &view)?;

    let theta = group_check(&d, "", |c| Some(c.datasets.clone()));
    let data = if type_two {
        Check::new("datasets", group_check(&d, "", |c| Some(c.theta)))
    } else {
        let own = tapped_party.unwrap_or(0);
        Check::new(
            "own dataset",
            group_check(&d, "", |c| {
                let mut rest = c.datasets.clone();
                rest.remove(own);
                Some((c.theta, rest))
            }),
        )
    };
    // uniform prior over datasets: mix the conditional pmfs of each count
    let mut mixtures: BTreeMap<(usize, usize), DistributionMap> = BTreeMap::new();
    for (c, m) in &d {
        mixtures.entry((c.theta, c.count())).or_default().absorb(m);
    }
    let mut count = None;
    for theta in 1..=params.e() {
        let mut it = mixtures.range((theta, 0)..=(theta, params.m()));
        if let Some((&(_, k0), first)) = it.next() {
            count = it.find_map(|(&(_, k), m)| {
                witness(format!("theta={theta} count={k0}"), first, format!("theta={theta} count={k}"), m)
            });
        }
        if count.is_some() {
            break;
        }
    }
    let checks = vec![Check::new("theta", theta), data, Check::new("count", count)];
    Ok(AuditOutcome::new(checks, total(&d)))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::DEFAULT_CAP;
    use crate::model::{SchemeParams, Variant};

    fn db(party: usize, db: usize) -> Node {
        Node::Database { party, db }
    }

    fn type_one(v: Variant) -> Params {
        SchemeParams::new(v, 2, 2, 1, 1, 2, 3).validate().unwrap()
    }

    fn type_two() -> Params {
        SchemeParams::new(Variant::Spma2, 3, 1, 1, 0, 2, 5)
            .with_eavesdroppers(vec![1, 1, 1])
            .validate()
            .unwrap()
    }

    #[test]
    fn combinations_are_listed() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn query_privacy_type_one() {
        let p = type_one(Variant::Pma1);
        let ok = audit_query_privacy(&p, &[db(0, 0)], None, DEFAULT_CAP).unwrap();
        assert_eq!(ok.verdict, Verdict::Pass);
        assert_eq!(ok.enumerated_assignments, 2 * 9);
        let over = audit_query_privacy(&p, &[db(0, 0), db(0, 1)], None, DEFAULT_CAP).unwrap();
        assert_eq!(over.verdict, Verdict::Fail);
        assert!(over.witness().is_some());
        let bare = audit_query_privacy(&p, &[db(0, 0)], Some(Tamper::ZeroQueryNoise), DEFAULT_CAP).unwrap();
        assert_eq!(bare.verdict, Verdict::Fail);
        let nobody = audit_query_privacy(&p, &[], None, DEFAULT_CAP).unwrap();
        assert_eq!(nobody.verdict, Verdict::Pass);
    }

    #[test]
    fn query_privacy_type_two() {
        let p = type_two();
        assert_eq!(audit_query_privacy(&p, &[db(1, 0)], None, DEFAULT_CAP).unwrap().verdict, Verdict::Pass);
        assert_eq!(
            audit_query_privacy(&p, &[db(0, 0), db(2, 0)], None, DEFAULT_CAP).unwrap().verdict,
            Verdict::Fail
        );
    }

    #[test]
    fn blind_estimation() {
        let s = type_one(Variant::Spma1);
        let r = audit_blind_estimation(&s, QueryKnowledge::Conditioned, None, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness());
        let p = type_one(Variant::Pma1);
        let r = audit_blind_estimation(&p, QueryKnowledge::Marginal, None, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness());
        let r = audit_blind_estimation(&p, QueryKnowledge::Marginal, Some(Tamper::ZeroMasks), DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        // without blinding noise, a user who remembers its query noise can
        // separate placements through the interference terms
        let r = audit_blind_estimation(&p, QueryKnowledge::Conditioned, None, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn symmetric_privacy() {
        let s = type_one(Variant::Spma1);
        assert_eq!(audit_symmetric_privacy(&s, None, DEFAULT_CAP).unwrap().verdict, Verdict::Pass);
        let p = type_one(Variant::Pma1);
        assert_eq!(audit_symmetric_privacy(&p, None, DEFAULT_CAP).unwrap().verdict, Verdict::Fail);
        let t = audit_symmetric_privacy(&s, Some(Tamper::ZeroBlindingNoise), DEFAULT_CAP).unwrap();
        assert_eq!(t.verdict, Verdict::Fail);
    }

    #[test]
    fn storage_security() {
        let p = type_two();
        assert_eq!(audit_storage_security(&p, 1, None, DEFAULT_CAP).unwrap().verdict, Verdict::Pass);
        assert_eq!(audit_storage_security(&p, 2, None, DEFAULT_CAP).unwrap().verdict, Verdict::Fail);
        assert_eq!(
            audit_storage_security(&p, 1, Some(Tamper::ZeroStorageNoise), DEFAULT_CAP).unwrap().verdict,
            Verdict::Fail
        );
        assert!(audit_storage_security(&p, 4, None, DEFAULT_CAP).is_err());
        assert!(audit_storage_security(&type_one(Variant::Pma1), 1, None, DEFAULT_CAP).is_err());
    }

    #[test]
    fn eavesdropper_type_one() {
        for v in [Variant::Pma1, Variant::Spma1] {
            let p = type_one(v);
            let r = audit_eavesdropper(&p, &[db(1, 1)], None, DEFAULT_CAP).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{v:?} {:?}", r.witness());
            assert_eq!(r.checks.len(), 3);
            let r = audit_eavesdropper(&p, &[db(0, 0), db(0, 1)], None, DEFAULT_CAP).unwrap();
            assert_eq!(r.verdict, Verdict::Fail);
        }
        let p = type_one(Variant::Pma1);
        let r = audit_eavesdropper(&p, &[db(0, 0)], Some(Tamper::ZeroMasks), DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(audit_eavesdropper(&p, &[db(0, 0), db(1, 0)], None, DEFAULT_CAP).is_err());
    }

    #[test]
    fn eavesdropper_type_two() {
        let p = type_two();
        let r = audit_eavesdropper(&p, &[db(2, 0)], None, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness());
        let r = audit_eavesdropper(&p, &[db(0, 0), db(1, 0)], None, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let r = audit_eavesdropper(&p, &[db(0, 0)], Some(Tamper::ZeroQueryNoise), DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn infeasible_enumerations_are_refused() {
        let p = type_one(Variant::Spma1);
        let err = audit_symmetric_privacy(&p, None, 100).unwrap_err();
        assert!(matches!(err, Error::AuditInfeasible { .. }));
    }
}
