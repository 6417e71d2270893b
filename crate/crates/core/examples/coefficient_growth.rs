//! Check the explicit coefficient bounds for ψ and φ and watch the ratios to
//! their asymptotic profiles approach 1.

use cuspbound::partitions::{distinct_parts_profile, dm_power24, odd_parts_profile, verify_thm2_trend, verify_thm3};

fn main() -> cuspbound::Result<()> {
    let n_max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    for r in verify_thm3(n_max)? {
        println!("{}", r.summary());
    }
    println!("b profile: {:?}", dm_power24(&distinct_parts_profile())?);
    println!("s profile: {:?}", dm_power24(&odd_parts_profile())?);
    let trend = verify_thm2_trend(2 * n_max)?;
    for r in trend.reports() {
        println!("{}", r.summary());
    }
    Ok(())
}
