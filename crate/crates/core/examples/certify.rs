//! The explicit coefficient bound applied to random cusp forms of weight at
//! most 40, and B(k) across weights.

use cuspbound::envelopes::theorem::{b_of_k, b_of_k_derived, coefficient_constant_reports, oracle_suite};

fn main() -> cuspbound::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20240601u64);
    for r in coefficient_constant_reports()?.into_iter().chain(oracle_suite(seed, 60, 40, 200)?) {
        println!("{}", r.summary());
    }
    for k in [8u32, 12, 20, 40, 80, 160, 320] {
        println!("B({k}) = {:.6e} (derived {:.6e})", b_of_k(k)?, b_of_k_derived(k)?);
    }
    Ok(())
}
