//! Coefficient envelopes at the three cusps, the I-integral constants and the
//! inner-product bound they combine into.

use cuspbound::envelopes::{
    envelope_constants_from_rigor, envelope_reports, envelopes_from_published_inputs, i_constant_reports,
    inner_product_printed, inner_product_reports, inner_product_upper,
};
use cuspbound::rigor::suite::SuiteConfig;

fn main() -> cuspbound::Result<()> {
    let mut cfg = SuiteConfig::default();
    if let Some(m) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        cfg.grid = m;
        cfg.grid_s4 = m / 2;
    }
    let (env, _) = envelope_constants_from_rigor(&cfg)?;
    for (i, s) in env.sectors.iter().enumerate() {
        println!("sector {}: c1 = {:.6}, c2 = {:.6}, c3 = {}", i + 1, s.c1, s.c2, s.c3);
    }
    let published = envelopes_from_published_inputs();
    for (i, s) in published.sectors.iter().enumerate() {
        println!("sector {} from published line bounds: c1 = {:.6}, c2 = {:.6}", i + 1, s.c1, s.c2);
    }
    for r in envelope_reports(&env).into_iter().chain(i_constant_reports()?).chain(inner_product_reports(60)?) {
        println!("{}", r.summary());
    }
    for k in [8u32, 12, 24, 40] {
        println!(
            "k = {k:>2}, m = 1: printed {:.6e}, used {:.6e}",
            inner_product_printed(k, 1)?,
            inner_product_upper(k, 1)?
        );
    }
    Ok(())
}
