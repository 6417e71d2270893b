//! Verify the level-2 transformation laws at seeded points in the upper half-plane.

use cuspbound::rigor::transform::{transformation_suite, DEFAULT_SEED};

fn main() -> cuspbound::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    for r in transformation_suite(seed, 10, 1e-8)? {
        println!("{}", r.summary());
    }
    Ok(())
}
