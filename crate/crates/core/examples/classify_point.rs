//! Classify one map given as a descriptor on the command line.
//!
//! cargo run --example classify_point -- tlm:0.5,0.5

use ksq::classify::{classify_full, ClassifyConfig};

fn main() -> ksq::Result<()> {
    let descriptor = std::env::args().nth(1).unwrap_or_else(|| "phi:0.6,0.5,0".into());
    let v = classify_full(&descriptor, &ClassifyConfig::default())?;
    println!("{descriptor}");
    for (level, t) in [
        ("positive", &v.positive),
        ("kadison-schwarz", &v.kadison_schwarz),
        ("completely positive", &v.completely_positive),
    ] {
        println!("  {level:<20} {:<20} {}", t.status.label(), t.note);
    }
    Ok(())
}
