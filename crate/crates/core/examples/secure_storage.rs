//! Type II collusion: parties secret-share their incidence vectors across all
//! databases, which only ever see aggregated shares. Databases beyond the
//! effective count are dropped and stay idle.
//!
//!     cargo run --example secure_storage

use pma::model::{PartyDataset, RandomSource, SchemeParams, Variant};
use pma::protocol::run;
use pma::transcript::{Node, Phase};

fn main() -> pma::error::Result<()> {
    // 4 parties x 2 databases, any one party's databases may collude
    let params = SchemeParams::new(Variant::Spma2, 4, 2, 1, 0, 3, 11).validate()?;
    println!(
        "{} databases participate, {} idle",
        params.active_databases(),
        params.dropped_databases()
    );
    let datasets = vec![
        PartyDataset::new([1]),
        PartyDataset::new([1, 3]),
        PartyDataset::new([]),
        PartyDataset::new([1, 2, 3]),
    ];
    let r = run(&params, &datasets, 1, &mut RandomSource::new(3))?;
    println!("element 1 is held by {} parties", r.count);
    println!(
        "storage symbols {}, answers {}",
        r.transcript.count_phase(Phase::StorageDistribution),
        r.transcript.count_phase(Phase::Answer)
    );
    let idle = Node::Database { party: 3, db: 1 };
    let touched = r.transcript.events().iter().any(|e| e.from == idle || e.to == idle);
    println!("{idle} touched: {touched}");
    Ok(())
}
