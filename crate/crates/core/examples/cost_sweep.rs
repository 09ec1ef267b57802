//! Communication cost as the number of parties grows: linear for type I,
//! flat for type II once enough databases exist.
//!
//!     cargo run --example cost_sweep

use pma::harness::{cost_table, render, Format, RunConfig};
use pma::model::Variant;

fn main() -> pma::error::Result<()> {
    for (variant, from) in [(Variant::Pma1, 2), (Variant::Spma1, 2), (Variant::Spma2, 3)] {
        let mut cfg = RunConfig::new(variant, from, 4);
        cfg.t = 1;
        print!("{}", render(&cost_table(&cfg, from..=6, 3)?, Format::Table)?);
        println!();
    }
    Ok(())
}
