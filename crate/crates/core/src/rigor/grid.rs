//! Expressions along a horizontal segment `z = x + iy`, `|x| <= 1/2`, and
//! certified extrema of their absolute values from a finite grid.

use std::sync::Arc;

use rayon::prelude::*;
use rug::Rational;

use super::ball::{Ball, CBall};
use super::eval::Prepared;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum LineExpr {
    Series(Arc<Prepared>),
    /// `(z - c)^k` for real rational `c`.
    Poly { c: Rational, k: u32 },
    Const(Ball),
    Sum(Vec<LineExpr>),
    Product(Vec<LineExpr>),
}

impl LineExpr {
    pub fn series(p: Prepared) -> LineExpr {
        LineExpr::Series(Arc::new(p))
    }

    pub fn eval(&self, z: &CBall) -> Result<CBall> {
        let prec = z.prec();
        Ok(match self {
            LineExpr::Series(p) => p.eval(z)?,
            LineExpr::Poly { c, k } => {
                let shifted = CBall::new(z.re.sub(&Ball::from_rational(c, prec)), z.im.clone());
                shifted.pow_u(*k)
            }
            LineExpr::Const(b) => CBall::real(b.clone()),
            LineExpr::Sum(v) => {
                let mut acc = CBall::zero(prec);
                for e in v {
                    acc = acc.add(&e.eval(z)?);
                }
                acc
            }
            LineExpr::Product(v) => {
                let mut acc = CBall::one(prec);
                for e in v {
                    acc = acc.mul(&e.eval(z)?);
                }
                acc
            }
        })
    }

    /// Upper bound for `|expr|` on the segment.
    pub fn sup_abs(&self, y: &Ball) -> Result<Ball> {
        let prec = y.prec();
        Ok(match self {
            LineExpr::Series(p) => p.sup_abs(y)?,
            LineExpr::Poly { k, .. } => self.poly_radius(y)?.pow_u(*k),
            LineExpr::Const(b) => b.abs(),
            LineExpr::Sum(v) => {
                let mut acc = Ball::zero(prec);
                for e in v {
                    acc = acc.add(&e.sup_abs(y)?);
                }
                acc
            }
            LineExpr::Product(v) => {
                let mut acc = Ball::from_i64(1, prec);
                for e in v {
                    acc = acc.mul(&e.sup_abs(y)?);
                }
                acc
            }
        }
        .upper_ball())
    }

    /// Upper bound for `|d expr / dz|` on the segment (product rule for products).
    pub fn deriv_sup(&self, y: &Ball) -> Result<Ball> {
        let prec = y.prec();
        Ok(match self {
            LineExpr::Series(p) => p.deriv_sup(y)?,
            LineExpr::Poly { k, .. } => {
                if *k == 0 {
                    Ball::zero(prec)
                } else {
                    self.poly_radius(y)?.pow_u(k - 1).mul_i64(*k as i64)
                }
            }
            LineExpr::Const(_) => Ball::zero(prec),
            LineExpr::Sum(v) => {
                let mut acc = Ball::zero(prec);
                for e in v {
                    acc = acc.add(&e.deriv_sup(y)?);
                }
                acc
            }
            LineExpr::Product(v) => {
                let sups = v.iter().map(|e| e.sup_abs(y)).collect::<Result<Vec<_>>>()?;
                let mut acc = Ball::zero(prec);
                for (i, e) in v.iter().enumerate() {
                    let mut term = e.deriv_sup(y)?;
                    for (j, s) in sups.iter().enumerate() {
                        if j != i {
                            term = term.mul(s);
                        }
                    }
                    acc = acc.add(&term);
                }
                acc
            }
        }
        .upper_ball())
    }

    /// `max_{|x| <= 1/2} |x + iy - c|`.
    fn poly_radius(&self, y: &Ball) -> Result<Ball> {
        let LineExpr::Poly { c, .. } = self else { unreachable!() };
        let prec = y.prec();
        let half = Rational::from((1, 2));
        let left = (Rational::from(-&half) - c).abs();
        let right = Rational::from(&half - c).abs();
        let m = Ball::from_rational(&left.max(right), prec);
        m.sqr().add(&y.sqr()).sqrt()
    }
}

trait UpperBall {
    fn upper_ball(self) -> Ball;
}

impl UpperBall for Ball {
    fn upper_ball(self) -> Ball {
        Ball::exact(self.upper())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Max,
    Min,
}

#[derive(Clone, Debug)]
pub struct GridResult {
    pub mode: Mode,
    pub points: u64,
    /// Extreme midpoint value of `|expr|` over the samples.
    pub sample_value: f64,
    pub sample_x: f64,
    pub deriv_bound: f64,
    /// `deriv_bound * (half grid spacing)`, rounded up.
    pub correction: f64,
    /// Upper bound (max) or lower bound (min) valid on the whole segment.
    pub certified: f64,
}

/// Samples `|expr|` at `x = -1/2 + j/M`, `0 <= j <= M`, and corrects the
/// extreme sample by the derivative bound times half the spacing.
///
/// Per-point evaluation is parallel; the reduction uses only `max`/`min`
/// with index tie-breaking, so the result does not depend on scheduling.
pub fn grid_extremum(expr: &LineExpr, y: &Ball, m: u64, mode: Mode) -> Result<GridResult> {
    if m < 2 {
        return Err(Error::InvalidArgument("grid needs M >= 2".into()));
    }
    let prec = y.prec();
    let samples: Vec<(u64, f64, f64, f64)> = (0..=m)
        .into_par_iter()
        .map(|j| {
            let x = Rational::from((j as i64, m as i64)) - Rational::from((1, 2));
            let z = CBall::new(Ball::from_rational(&x, prec), y.clone());
            let a = expr.eval(&z)?.abs();
            Ok((j, a.upper_f64(), a.lower_f64(), a.mid_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    let pick = |a: &(u64, f64, f64, f64), b: &(u64, f64, f64, f64)| -> bool {
        match mode {
            Mode::Max => b.1 > a.1 || (b.1 == a.1 && b.0 < a.0),
            Mode::Min => b.2 < a.2 || (b.2 == a.2 && b.0 < a.0),
        }
    };
    let mut best = samples[0];
    for s in &samples[1..] {
        if pick(&best, s) {
            best = *s;
        }
    }
    let d = expr.deriv_sup(y)?;
    let corr = d.div(&Ball::from_i64(2 * m as i64, prec))?.upper_ball();
    let (certified, sample_value) = match mode {
        Mode::Max => (Ball::from_f64(best.1, prec).add(&corr).upper_f64(), best.3),
        Mode::Min => {
            let lo = Ball::from_f64(best.2, prec).sub(&corr).lower_f64();
            if lo <= 0.0 {
                return Err(Error::NonPositiveLowerBound(format!("grid minimum {} minus correction {}", best.2, corr.upper_f64())));
            }
            (lo, best.3)
        }
    };
    Ok(GridResult {
        mode,
        points: m + 1,
        sample_value,
        sample_x: -0.5 + best.0 as f64 / m as f64,
        deriv_bound: d.upper_f64(),
        correction: corr.upper_f64(),
        certified,
    })
}
