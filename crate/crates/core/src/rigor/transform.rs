//! Numerical checks of the level-2 transformation laws used to move the
//! generating function between cusps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use super::ball::{default_precision, Ball, CBall};
use super::eval::{Expansion, Prepared};
use super::tail::{MajorantTerm, TailKind};
use crate::error::Result;
use crate::forms::{delta_series, eisenstein_series, f2_series, phi_series, psi_series, s4_series};
use crate::report::BoundReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `ψ(-1/z) = 2^12 φ(z/2)`
    PsiInversion,
    /// `ψ(z/(1-z)) = -2^12 φ(z) ψ(z/2)`
    PsiCuspOne,
    /// `F_2(-1/z) = -(z²/2) F_2(z/2)`
    F2Inversion,
    /// `S_4(-1/z) = (z⁴/240)(E_4(z) - E_4(z/2)/16)`
    S4Inversion,
    /// `S_4(z/(1-z)) = ((z-1)⁴/240)(E_4(z) - E_4(z/2 + 1/2)/16)`
    S4CuspOne,
    /// `F_2(z/(1-z)) = (z-1)² (E_2(z/2 + 1/2)/2 - E_2(z))`
    F2CuspOne,
    /// `Δ(z + 1/2) = -Δ(2z)³ / (Δ(z) Δ(4z))`, the 24th power of the η half-shift.
    EtaHalfShift,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::PsiInversion,
        Identity::PsiCuspOne,
        Identity::F2Inversion,
        Identity::S4Inversion,
        Identity::S4CuspOne,
        Identity::F2CuspOne,
        Identity::EtaHalfShift,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Identity::PsiInversion => "psi(-1/z) = 2^12 phi(z/2)",
            Identity::PsiCuspOne => "psi(z/(1-z)) = -2^12 phi(z) psi(z/2)",
            Identity::F2Inversion => "F2(-1/z) = -(z^2/2) F2(z/2)",
            Identity::S4Inversion => "S4(-1/z) = (z^4/240)(E4(z) - E4(z/2)/16)",
            Identity::S4CuspOne => "S4(z/(1-z)) = ((z-1)^4/240)(E4(z) - E4(z/2+1/2)/16)",
            Identity::F2CuspOne => "F2(z/(1-z)) = (z-1)^2 (E2(z/2+1/2)/2 - E2(z))",
            Identity::EtaHalfShift => "Delta(z+1/2) = -Delta(2z)^3 / (Delta(z) Delta(4z))",
        }
    }
}

/// Expansions shared by all identities.
pub struct Forms {
    psi: Prepared,
    phi: Prepared,
    f2: Prepared,
    s4: Prepared,
    e2: Prepared,
    e4: Prepared,
    delta: Prepared,
    prec: u32,
}

impl Forms {
    pub fn new(trunc: i64, prec: u32) -> Result<Forms> {
        let p = |e: Expansion| e.prepare(prec, false);
        Ok(Forms {
            psi: p(Expansion::new(psi_series(trunc), TailKind::HauptmodulS, 1.0)),
            phi: p(Expansion::new(phi_series(trunc), TailKind::HauptmodulB, 1.0)),
            f2: p(Expansion::new(f2_series(trunc), TailKind::SigmaPoly, 24.0)),
            s4: p(Expansion::new(s4_series(trunc), TailKind::SigmaCubicQuintic, 1.0)),
            e2: p(Expansion::new(eisenstein_series(2, trunc)?, TailKind::SigmaPoly, 24.0)),
            e4: p(Expansion::new(eisenstein_series(4, trunc)?, TailKind::SigmaCubicQuintic, 240.0)),
            // |τ(n)| <= d(n) n^{11/2} <= 2 n^6
            delta: p(Expansion::new(delta_series(trunc), TailKind::Custom(vec![MajorantTerm::poly(2.0, 6)]), 1.0)),
            prec,
        })
    }

    fn r(&self, a: i64, b: i64) -> CBall {
        CBall::real(Ball::from_rational(&Rational::from((a, b)), self.prec))
    }

    /// Both sides at `z`.
    pub fn sides(&self, id: Identity, z: &CBall) -> Result<(CBall, CBall)> {
        let one = self.r(1, 1);
        let half = |w: &CBall| w.mul(&self.r(1, 2));
        let inv = z.recip()?.neg();
        let cusp1 = z.div(&one.sub(z))?;
        let zm1 = z.sub(&one);
        let shifted_half = half(z).add(&self.r(1, 2));
        let c4096 = self.r(4096, 1);
        Ok(match id {
            Identity::PsiInversion => (self.psi.eval(&inv)?, c4096.mul(&self.phi.eval(&half(z))?)),
            Identity::PsiCuspOne => {
                let rhs = c4096.mul(&self.phi.eval(z)?).mul(&self.psi.eval(&half(z))?).neg();
                (self.psi.eval(&cusp1)?, rhs)
            }
            Identity::F2Inversion => (self.f2.eval(&inv)?, half(&z.pow_u(2)).mul(&self.f2.eval(&half(z))?).neg()),
            Identity::S4Inversion => {
                let bracket = self.e4.eval(z)?.sub(&self.e4.eval(&half(z))?.mul(&self.r(1, 16)));
                (self.s4.eval(&inv)?, z.pow_u(4).mul(&self.r(1, 240)).mul(&bracket))
            }
            Identity::S4CuspOne => {
                let bracket = self.e4.eval(z)?.sub(&self.e4.eval(&shifted_half)?.mul(&self.r(1, 16)));
                (self.s4.eval(&cusp1)?, zm1.pow_u(4).mul(&self.r(1, 240)).mul(&bracket))
            }
            Identity::F2CuspOne => {
                let bracket = half(&self.e2.eval(&shifted_half)?).sub(&self.e2.eval(z)?);
                (self.f2.eval(&cusp1)?, zm1.pow_u(2).mul(&bracket))
            }
            Identity::EtaHalfShift => {
                let lhs = self.delta.eval(&z.add(&self.r(1, 2)))?;
                let d2 = self.delta.eval(&z.mul(&self.r(2, 1)))?;
                let den = self.delta.eval(z)?.mul(&self.delta.eval(&z.mul(&self.r(4, 1)))?);
                (lhs, d2.pow_u(3).div(&den)?.neg())
            }
        })
    }
}

/// `n` points with `x` uniform in `[-1/2, 1/2]` and `y` uniform in `[0.8, 1.2]`.
pub fn seeded_samples(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen_range(-0.5..=0.5), rng.gen_range(0.8..=1.2))).collect()
}

/// Certified upper bound on `max |lhs - rhs| / |rhs|` over the samples, which
/// must not exceed `tol`.
pub fn check_transformation(forms: &Forms, id: Identity, samples: &[(f64, f64)], tol: f64) -> Result<BoundReport> {
    let prec = forms.prec;
    let mut worst = 0f64;
    let mut worst_at = (0.0, 0.0);
    for &(x, y) in samples {
        let z = CBall::from_f64(x, y, prec);
        let (l, r) = forms.sides(id, &z)?;
        let rel = l.sub(&r).abs().div(&Ball::exact(r.abs().lower()))?.upper_f64();
        if rel > worst || worst == 0.0 {
            worst = rel;
            worst_at = (x, y);
        }
    }
    Ok(BoundReport::upper(format!("{} at {} sampled points", id.label(), samples.len()), worst, tol)
        .with_note(format!("largest certified relative discrepancy at z = {:.6} + {:.6}i", worst_at.0, worst_at.1)))
}

pub const DEFAULT_SEED: u64 = 20240601;

/// All identities at `n` seeded points with relative tolerance `tol`.
pub fn transformation_suite(seed: u64, n: usize, tol: f64) -> Result<Vec<BoundReport>> {
    let forms = Forms::new(200, default_precision())?;
    let samples = seeded_samples(seed, n);
    Identity::ALL.iter().map(|&id| check_transformation(&forms, id, &samples, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_at_i_is_real() {
        let forms = Forms::new(120, 128).unwrap();
        let (l, r) = forms.sides(Identity::PsiInversion, &CBall::from_f64(0.0, 1.0, 128)).unwrap();
        assert!(l.overlaps(&r));
        assert!(l.im.contains(&rug::Float::with_val(128, 0)));
    }

    #[test]
    fn s4_inversion_at_2i() {
        let forms = Forms::new(120, 128).unwrap();
        let (l, r) = forms.sides(Identity::S4Inversion, &CBall::from_f64(0.0, 2.0, 128)).unwrap();
        assert!(l.overlaps(&r));
    }

    #[test]
    fn wrong_sign_is_detected() {
        let forms = Forms::new(120, 128).unwrap();
        let z = CBall::from_f64(0.1, 1.0, 128);
        let (l, r) = forms.sides(Identity::EtaHalfShift, &z).unwrap();
        assert!(!l.overlaps(&r.neg()));
    }
}
