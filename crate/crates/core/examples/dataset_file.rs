//! Runs a config that names its elements, loading datasets from JSON.
//!
//!     cargo run --example dataset_file

use std::path::Path;

use pma::harness::{render, run_protocol, Format, RunConfig};

fn main() -> pma::error::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/run.json");
    let cfg = RunConfig::from_file(&path)?;
    let report = run_protocol(&cfg)?;
    print!("{}", render(&report, Format::Table)?);
    for r in &report.runs {
        println!("{} -> {}", r.element.as_deref().unwrap_or("?"), r.count);
    }
    Ok(())
}
