//! The standard audit battery: positive cases inside each adversary budget
//! and negative controls that must be caught.

use serde::{Deserialize, Serialize};

use super::lemmas::{
    audit_blind_estimation, audit_eavesdropper, audit_query_privacy, audit_storage_security,
    audit_symmetric_privacy, Check, QueryKnowledge, Verdict, Witness,
};
use super::view::parse_database;
use crate::error::Result;
use crate::model::{SchemeParams, Variant};
use crate::protocol::Tamper;
use crate::transcript::Node;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "audit", rename_all = "snake_case")]
pub enum AuditKind {
    QueryPrivacy { colluders: Vec<String> },
    BlindEstimation { knowledge: QueryKnowledge },
    SymmetricPrivacy,
    StorageSecurity { subset_size: usize },
    Eavesdropper { tapped: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCase {
    /// Property id, `lemma1` ..= `lemma7`.
    pub lemma: String,
    pub name: String,
    pub params: SchemeParams,
    #[serde(flatten)]
    pub kind: AuditKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tamper: Option<Tamper>,
    pub expected: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub lemma: String,
    pub name: String,
    pub params: SchemeParams,
    #[serde(flatten)]
    pub kind: AuditKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tamper: Option<Tamper>,
    pub verdict: Verdict,
    pub expected: Verdict,
    pub enumerated_assignments: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub checks: Vec<Check>,
}

impl AuditReport {
    pub fn as_expected(&self) -> bool {
        self.verdict == self.expected
    }
}

fn nodes(names: &[String]) -> Result<Vec<Node>> {
    names.iter().map(|s| parse_database(s)).collect()
}

pub fn run_case(case: &AuditCase, cap: u64) -> Result<AuditReport> {
    let params = case.params.validate()?;
    let t = case.tamper;
    let outcome = match &case.kind {
        AuditKind::QueryPrivacy { colluders } => audit_query_privacy(&params, &nodes(colluders)?, t, cap)?,
        AuditKind::BlindEstimation { knowledge } => audit_blind_estimation(&params, *knowledge, t, cap)?,
        AuditKind::SymmetricPrivacy => audit_symmetric_privacy(&params, t, cap)?,
        AuditKind::StorageSecurity { subset_size } => audit_storage_security(&params, *subset_size, t, cap)?,
        AuditKind::Eavesdropper { tapped } => audit_eavesdropper(&params, &nodes(tapped)?, t, cap)?,
    };
    log::info!("{} {}: {:?}", case.lemma, case.name, outcome.verdict);
    Ok(AuditReport {
        lemma: case.lemma.clone(),
        name: case.name.clone(),
        params: case.params.clone(),
        kind: case.kind.clone(),
        tamper: case.tamper,
        verdict: outcome.verdict,
        expected: case.expected,
        enumerated_assignments: outcome.enumerated_assignments,
        witness: outcome.witness().cloned(),
        checks: outcome.checks,
    })
}

fn case(lemma: u8, name: &str, params: SchemeParams, kind: AuditKind, tamper: Option<Tamper>, expected: Verdict) -> AuditCase {
    AuditCase {
        lemma: format!("lemma{lemma}"),
        name: name.into(),
        params,
        kind,
        tamper,
        expected,
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// p = 3, E = 2, M = 2, N = 2, T = 1, Y = 1.
pub fn small_type_one(variant: Variant) -> SchemeParams {
    SchemeParams::new(variant, 2, 2, 1, 1, 2, 3)
}

/// p = 5, E = 2, M = 3, N = 1, T = 1, one eavesdropped database per party.
pub fn small_type_two() -> SchemeParams {
    SchemeParams::new(Variant::Spma2, 3, 1, 1, 0, 2, 5).with_eavesdroppers(vec![1, 1, 1])
}

pub fn default_suite() -> Vec<AuditCase> {
    use AuditKind::*;
    use QueryKnowledge::*;
    use Verdict::*;
    let (pma1, spma1, spma2) = (
        small_type_one(Variant::Pma1),
        small_type_one(Variant::Spma1),
        small_type_two(),
    );
    let pair_budget = SchemeParams::new(Variant::Spma2, 4, 1, 2, 0, 2, 5);
    let q = |list: &[&str]| QueryPrivacy { colluders: names(list) };
    let tap = |list: &[&str]| Eavesdropper { tapped: names(list) };
    vec![
        case(1, "spma1 answers hide other elements", spma1.clone(), SymmetricPrivacy, None, Pass),
        case(1, "spma2 answers hide other elements", spma2.clone(), SymmetricPrivacy, None, Pass),
        case(1, "pma1 has no blinding noise", pma1.clone(), SymmetricPrivacy, None, Fail),
        case(1, "spma1 with zeroed blinding noise", spma1.clone(), SymmetricPrivacy, Some(Tamper::ZeroBlindingNoise), Fail),
        // with N = T = 1 the aggregated storage noise already covers both
        // interference coefficients; blinding noise matters once μ > N
        case(1, "spma2 storage noise alone hides other elements", spma2.clone(), SymmetricPrivacy, Some(Tamper::ZeroBlindingNoise), Pass),
        case(1, "spma2 with zeroed blinding noise, T=2", pair_budget.clone(), SymmetricPrivacy, Some(Tamper::ZeroBlindingNoise), Fail),
        case(2, "spma1 placement hidden, query noise known", spma1.clone(), BlindEstimation { knowledge: Conditioned }, None, Pass),
        case(2, "pma1 placement hidden, query noise averaged", pma1.clone(), BlindEstimation { knowledge: Marginal }, None, Pass),
        case(2, "spma2 placement hidden, query noise known", spma2.clone(), BlindEstimation { knowledge: Conditioned }, None, Pass),
        case(2, "pma1 placement leaks when query noise is known", pma1.clone(), BlindEstimation { knowledge: Conditioned }, None, Fail),
        case(2, "pma1 with zeroed masks", pma1.clone(), BlindEstimation { knowledge: Marginal }, Some(Tamper::ZeroMasks), Fail),
        case(3, "spma2 single database", spma2.clone(), q(&["party2.db1"]), None, Pass),
        case(3, "spma2 pair within a budget of two", pair_budget, q(&["party1.db1", "party3.db1"]), None, Pass),
        case(3, "spma2 pair over a budget of one", spma2.clone(), q(&["party1.db1", "party2.db1"]), None, Fail),
        case(3, "spma2 with zeroed query noise", spma2.clone(), q(&["party1.db1"]), Some(Tamper::ZeroQueryNoise), Fail),
        case(4, "pma1 single database", pma1.clone(), q(&["party1.db1"]), None, Pass),
        case(4, "spma1 one database in each party", spma1.clone(), q(&["party1.db2", "party2.db1"]), None, Pass),
        case(4, "pma1 whole party over a budget of one", pma1.clone(), q(&["party1.db1", "party1.db2"]), None, Fail),
        case(4, "pma1 with zeroed query noise", pma1.clone(), q(&["party2.db2"]), Some(Tamper::ZeroQueryNoise), Fail),
        case(5, "spma2 any single database", spma2.clone(), StorageSecurity { subset_size: 1 }, None, Pass),
        case(5, "spma2 two databases pooling shares", spma2.clone(), StorageSecurity { subset_size: 2 }, None, Fail),
        case(5, "spma2 with zeroed storage noise", spma2.clone(), StorageSecurity { subset_size: 1 }, Some(Tamper::ZeroStorageNoise), Fail),
        case(6, "pma1 one tapped database", pma1.clone(), tap(&["party1.db1"]), None, Pass),
        case(6, "spma1 one tapped database", spma1.clone(), tap(&["party2.db2"]), None, Pass),
        case(6, "pma1 two tapped databases over a budget of one", pma1.clone(), tap(&["party1.db1", "party1.db2"]), None, Fail),
        case(6, "pma1 with zeroed masks", pma1, tap(&["party1.db1"]), Some(Tamper::ZeroMasks), Fail),
        case(7, "spma2 one tapped database", spma2.clone(), tap(&["party3.db1"]), None, Pass),
        case(7, "spma2 two tapped databases over a budget of one", spma2.clone(), tap(&["party1.db1", "party2.db1"]), None, Fail),
        case(7, "spma2 with zeroed query noise", spma2, tap(&["party1.db1"]), Some(Tamper::ZeroQueryNoise), Fail),
    ]
}
