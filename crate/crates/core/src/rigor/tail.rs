//! Pointwise majorants for discarded coefficients and certified sums of the
//! resulting tails.

use serde::{Deserialize, Serialize};

use super::ball::Ball;
use crate::error::{Error, Result};

/// `c n^p e^{a√n}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorantTerm {
    pub c: f64,
    pub p: u32,
    pub a: f64,
}

impl MajorantTerm {
    pub const fn poly(c: f64, p: u32) -> MajorantTerm {
        MajorantTerm { c, p, a: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TailKind {
    /// `σ(n) < n + n²`.
    SigmaPoly,
    /// `|s(n)| < 0.9 n^11 e^{2π√(2n)}` for the coefficients of ψ.
    HauptmodulS,
    /// `b(n) < 0.08 n^11 e^{2π√(2n)}` for the coefficients of φ.
    HauptmodulB,
    /// `n³ + n⁵`, which dominates `σ_3(n)`.
    SigmaCubicQuintic,
    Custom(Vec<MajorantTerm>),
}

const TWO_PI_SQRT2: f64 = 8.885_765_876_316_733;

impl TailKind {
    pub fn terms(&self) -> Vec<MajorantTerm> {
        match self {
            TailKind::SigmaPoly => vec![MajorantTerm::poly(1.0, 1), MajorantTerm::poly(1.0, 2)],
            // The exponent constant is rounded up in its last place.
            TailKind::HauptmodulS => vec![MajorantTerm { c: 0.9, p: 11, a: TWO_PI_SQRT2 + 1e-14 }],
            TailKind::HauptmodulB => vec![MajorantTerm { c: 0.08, p: 11, a: TWO_PI_SQRT2 + 1e-14 }],
            TailKind::SigmaCubicQuintic => vec![MajorantTerm::poly(1.0, 3), MajorantTerm::poly(1.0, 5)],
            TailKind::Custom(t) => t.clone(),
        }
    }
}

/// `|a_n| <= scale * majorant(n)` for every `n >= start`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub kind: TailKind,
    pub scale: f64,
    pub start: i64,
}

impl TailBound {
    pub fn new(kind: TailKind, scale: f64, start: i64) -> TailBound {
        TailBound { kind, scale, start }
    }

    /// No discarded terms beyond `start` (for polynomials).
    pub fn zero(start: i64) -> TailBound {
        TailBound { kind: TailKind::Custom(Vec::new()), scale: 0.0, start }
    }

    /// Certified upper bound on `sum_{n >= start} n^extra * |a_n| * r^n` for
    /// `0 < r < 1`, given as a ball whose upper end point is used.
    ///
    /// For `n >= N` we have `a√n <= a n / √N`, so each term is at most
    /// `c n^p ρ^n` with `ρ = r e^{a/√N}`; successive ratios are then at most
    /// `((N+1)/N)^p ρ`, and the geometric comparison closes the sum.
    pub fn tail_sum(&self, r: &Ball, extra: u32) -> Result<Ball> {
        let prec = r.prec();
        let terms = self.kind.terms();
        if terms.is_empty() || self.scale == 0.0 {
            return Ok(Ball::zero(prec));
        }
        let n = self.start.max(1);
        let nb = Ball::from_i64(n, prec);
        let r_up = Ball::exact(r.upper());
        let mut total = Ball::zero(prec);
        for t in terms {
            let p = t.p + extra;
            let rho = r_up.mul(&Ball::from_f64(t.a, prec).div(&nb.sqrt()?)?.exp());
            let growth = Ball::from_i64(n + 1, prec).div(&nb)?.pow_u(p);
            let q = growth.mul(&rho);
            let denom = Ball::from_i64(1, prec).sub(&q);
            if !denom.is_positive() {
                return Err(Error::NonSummable(q.upper_f64()));
            }
            let first = nb.pow_u(p).mul(&rho.pow_u(n as u32));
            total = total.add(&first.div(&denom)?.mul(&Ball::from_f64(t.c, prec)));
        }
        let s = total.mul(&Ball::from_f64(self.scale, prec));
        Ok(Ball::exact(s.upper()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_dominates_direct_sum() {
        let prec = 128;
        let r = Ball::from_f64(0.3, prec);
        let tb = TailBound::new(TailKind::SigmaPoly, 24.0, 10);
        let bound = tb.tail_sum(&r, 0).unwrap().upper_f64();
        let direct: f64 = (10..400).map(|n| 24.0 * ((n + n * n) as f64) * 0.3f64.powi(n)).sum();
        assert!(bound >= direct && bound < 2.0 * direct, "{bound} {direct}");
    }

    #[test]
    fn subexponential_growth_is_handled() {
        let prec = 128;
        let r = Ball::from_f64((-2.0 * std::f64::consts::PI * 0.865f64).exp(), prec);
        let tb = TailBound::new(TailKind::HauptmodulS, 1.0, 60);
        let bound = tb.tail_sum(&r, 1).unwrap().upper_f64();
        let direct: f64 = (60..600)
            .map(|n| {
                let n = n as f64;
                0.9 * n.powi(12) * (TWO_PI_SQRT2 * n.sqrt() - 2.0 * std::f64::consts::PI * 0.865 * n).exp()
            })
            .sum();
        assert!(bound >= direct, "{bound} {direct}");
    }

    #[test]
    fn non_summable_is_an_error() {
        let r = Ball::from_f64(0.9, 128);
        let tb = TailBound::new(TailKind::HauptmodulS, 1.0, 5);
        assert!(matches!(tb.tail_sum(&r, 0), Err(Error::NonSummable(_))));
    }
}
