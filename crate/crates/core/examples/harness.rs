//! Cross-check the closed forms against the oracles on a coarse grid.
//!
//! cargo run --release --example harness -- tdiag 7

use ksq::oracle::{agreement_harness, GridSpec, SampleConfig};

fn main() -> ksq::Result<()> {
    let mut args = std::env::args().skip(1);
    let family = args.next().unwrap_or_else(|| "tlm".into()).parse()?;
    let resolution = args.next().and_then(|s| s.parse().ok()).unwrap_or(11);
    let cfg = SampleConfig::new(1000, 7, 1e-8)?;
    print!("{}", agreement_harness(GridSpec { family, resolution }, &cfg)?);
    Ok(())
}
