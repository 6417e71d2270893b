//! Numerical side of the symmetric-square lower bound: residue identity,
//! gamma-factor inequality, quadrature constant and the final floor.

use cuspbound::envelopes::lfunc::{default_k_samples, gamma_ratio_constant, lfunc_constants_suite, LEVELS};
use cuspbound::envelopes::lfunc_residue_identity;

fn main() -> cuspbound::Result<()> {
    for x in [0.5, 2.0, 48.0, 1000.0] {
        println!("{}", lfunc_residue_identity(x)?.summary());
    }
    println!("gamma-ratio constant {:.8}", gamma_ratio_constant()?);
    for r in lfunc_constants_suite(&default_k_samples(), &LEVELS)? {
        println!("{}", r.summary());
    }
    Ok(())
}
