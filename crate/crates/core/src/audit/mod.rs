//! Exact information-leakage audits over small fields.

mod distribution;
mod lemmas;
mod suite;
mod view;

pub use distribution::{
    assignment_count, enumerate_distribution, for_each_assignment, DistributionMap, DEFAULT_CAP,
};
pub use lemmas::{
    audit_blind_estimation, audit_eavesdropper, audit_query_privacy, audit_storage_security,
    audit_symmetric_privacy, combinations, AuditOutcome, Check, QueryKnowledge, Verdict, Witness,
};
pub use suite::{default_suite, run_case, small_type_one, small_type_two, AuditCase, AuditKind, AuditReport};
pub use view::{parse_database, AdversaryView};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Coefficients of `Σ_a Σ_b x^(a+b) ⟨storage_a, query_b⟩`.
///
/// Used to check answers against an independent expansion of the
/// storage-times-query polynomial.
pub fn oracle_polynomial_expand(field: &Field, storage: &[Vec<Fe>], query: &[Vec<Fe>]) -> Result<Vec<Fe>> {
    if storage.is_empty() || query.is_empty() {
        return Err(Error::Param("both polynomials need a constant coefficient".into()));
    }
    let mut out = vec![Fe::ZERO; storage.len() + query.len() - 1];
    for (a, s) in storage.iter().enumerate() {
        for (b, q) in query.iter().enumerate() {
            out[a + b] = field.add(out[a + b], field.dot(s, q)?);
        }
    }
    Ok(out)
}
