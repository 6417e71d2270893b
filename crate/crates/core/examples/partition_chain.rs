//! Recompute the explicit envelopes for powers of the distinct-partition
//! generating function and check them against exact tables.

use cuspbound::partitions::{chain_reports, ChainInputs, PartitionTables};

fn main() -> cuspbound::Result<()> {
    let n_max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3000);
    let tables = PartitionTables::build(n_max);
    for inputs in [ChainInputs::Published, ChainInputs::Recomputed] {
        for r in chain_reports(inputs, n_max as u64, &tables)? {
            println!("{}", r.summary());
        }
    }
    Ok(())
}
