//! Certified bounds on the two horizontal lines used by the coefficient
//! envelopes, compared with their published values.

use cuspbound::rigor::suite::{published_constants_suite, SuiteConfig};

fn main() -> cuspbound::Result<()> {
    let mut cfg = SuiteConfig::default();
    if let Some(m) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        cfg.grid = m;
        cfg.grid_s4 = m / 2;
    }
    for r in published_constants_suite(&cfg)? {
        println!("{}", r.summary());
    }
    Ok(())
}
