//! Exhaustive audits: exact view distributions over every value of the
//! hidden randomness, compared across inputs that must look alike.
//!
//!     cargo run --release --example privacy_audits

use pma::audit::{
    audit_eavesdropper, audit_query_privacy, audit_symmetric_privacy, small_type_one, AuditOutcome, DEFAULT_CAP,
};
use pma::model::Variant;
use pma::protocol::Tamper;
use pma::transcript::Node;

fn show(label: &str, o: &AuditOutcome) {
    println!("{label}: {:?} over {} assignments", o.verdict, o.enumerated_assignments);
    if let Some(w) = o.witness() {
        println!(
            "  view {:?} has probability {} under {} but {} under {}",
            w.view, w.left_probability, w.left, w.right_probability, w.right
        );
    }
}

fn main() -> pma::error::Result<()> {
    let pma1 = small_type_one(Variant::Pma1).validate()?;
    let spma1 = small_type_one(Variant::Spma1).validate()?;
    let db = |party, db| Node::Database { party, db };

    show("one colluding database", &audit_query_privacy(&pma1, &[db(0, 0)], None, DEFAULT_CAP)?);
    show("a whole party colluding", &audit_query_privacy(&pma1, &[db(0, 0), db(0, 1)], None, DEFAULT_CAP)?);
    show("symmetric privacy, spma1", &audit_symmetric_privacy(&spma1, None, DEFAULT_CAP)?);
    show("symmetric privacy, pma1", &audit_symmetric_privacy(&pma1, None, DEFAULT_CAP)?);
    show(
        "eavesdropper without masks",
        &audit_eavesdropper(&pma1, &[db(1, 0)], Some(Tamper::ZeroMasks), DEFAULT_CAP)?,
    );
    Ok(())
}
