//! The echelon basis F_(k,m) of weight-k level-2 cusp forms, checked against
//! the generating-function identity.

use cuspbound::basis::{dim_sk2, echelon_basis, echelon_reports, genfunc_crosscheck};

fn main() -> cuspbound::Result<()> {
    let k: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(24);
    let basis = echelon_basis(k, 16)?;
    println!("dim S_{k}(2) = {}, ell = {}", dim_sk2(k), basis.ell);
    for m in 1..=dim_sk2(k) {
        let row: Vec<String> = basis.form(m)?.terms().map(|(_, c)| c.to_string()).collect();
        println!("F_({k},{m}) from q^{m}: {}", row.join(" "));
    }
    for r in echelon_reports(60, 40)? {
        println!("{}", r.summary());
    }
    for k in [8, 10, 12, 16, 20] {
        println!("{}", genfunc_crosscheck(k, 20, 8)?.summary());
    }
    Ok(())
}
