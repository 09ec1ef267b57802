//! Counts how many parties hold an element without revealing the element to
//! the databases or the holders to the user.
//!
//!     cargo run --example count_membership

use pma::model::{PartyDataset, RandomSource, SchemeParams, Variant};
use pma::protocol::run;
use pma::transcript::Phase;

fn main() -> pma::error::Result<()> {
    // two parties, two databases each, any single database may collude
    let params = SchemeParams::new(Variant::Pma1, 2, 2, 1, 0, 5, 7).validate()?;
    let datasets = vec![PartyDataset::new(1..=5), PartyDataset::new([2, 3, 4])];

    let mut rng = RandomSource::new(2024);
    for theta in 1..=5 {
        let r = run(&params, &datasets, theta, &mut rng)?;
        println!(
            "element {theta}: held by {} parties ({} answer symbols)",
            r.count,
            r.transcript.count_phase(Phase::Answer)
        );
    }
    Ok(())
}
