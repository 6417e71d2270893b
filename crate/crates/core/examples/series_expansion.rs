//! Exact q-expansions of the level-2 forms, the dual constructions that
//! cross-check them, and the CSV exchange format.

use cuspbound::forms::{dual_construction_suite, FormName};
use cuspbound::QSeries;

fn main() -> cuspbound::Result<()> {
    let terms: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(120);
    for name in ["psi", "phi", "f2", "s4", "delta8", "j"] {
        let f: FormName = name.parse()?;
        let s = f.expand(8)?;
        let head: Vec<String> = s.terms().map(|(n, c)| format!("{c}q^{n}")).collect();
        println!("{name:>7}: {} + O(q^8)", head.join(" + "));
    }
    for r in dual_construction_suite(terms + 1) {
        println!("{}", r.summary());
    }
    let psi = FormName::Psi.expand(terms + 1)?;
    let back = QSeries::from_csv(&psi.to_csv())?;
    println!("psi through q^{terms} survives a CSV round trip: {}", back == psi);
    Ok(())
}
