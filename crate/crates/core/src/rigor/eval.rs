//! Certified evaluation of truncated q-expansions with explicit tails.

use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::{Assign, Float, Rational};

use super::ball::{Ball, CBall, RAD_PREC};
use super::tail::{TailBound, TailKind};
use crate::error::Result;
use crate::series::QSeries;

/// A truncated expansion together with a majorant for every coefficient it drops.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub series: QSeries,
    pub tail: TailBound,
}

impl Expansion {
    /// Attaches `scale * kind` as the majorant from the series' truncation on.
    pub fn new(series: QSeries, kind: TailKind, scale: f64) -> Expansion {
        let start = series.trunc();
        Expansion { series, tail: TailBound::new(kind, scale, start) }
    }

    /// A polynomial: nothing is discarded.
    pub fn exact(series: QSeries) -> Expansion {
        let start = series.trunc();
        Expansion { series, tail: TailBound::zero(start) }
    }

    pub fn prepare(&self, prec: u32, halfperiod: bool) -> Prepared {
        let den = Rational::from(self.series.denominator().clone());
        let mut coeffs = Vec::with_capacity(self.series.len());
        let mut abs = Vec::with_capacity(self.series.len());
        for c in self.series.numerators() {
            let q = Rational::from(c) / &den;
            coeffs.push(Float::with_val(prec, &q));
            abs.push(Float::with_val_round(RAD_PREC, Rational::from(q.abs_ref()), Round::Up).0);
        }
        Prepared { val: self.series.valuation(), coeffs, abs, tail: self.tail.clone(), halfperiod, prec }
    }
}

/// Coefficients converted once for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Prepared {
    val: i64,
    coeffs: Vec<Float>,
    abs: Vec<Float>,
    tail: TailBound,
    pub halfperiod: bool,
    pub prec: u32,
}

fn two_pi_alpha(halfperiod: bool, prec: u32) -> Ball {
    let pi = Ball::pi(prec);
    if halfperiod {
        pi
    } else {
        pi.mul_i64(2)
    }
}

impl Prepared {
    /// `e^{2πiαz}` with `α = 1/2` for half-period expansions.
    pub fn nome(&self, z: &CBall) -> CBall {
        let c = two_pi_alpha(self.halfperiod, self.prec);
        CBall::new(z.im.mul(&c).neg(), z.re.mul(&c)).exp()
    }

    /// `|e^{2πiαz}|` on the line `Im z = y`.
    pub fn nome_abs(&self, y: &Ball) -> Ball {
        y.mul(&two_pi_alpha(self.halfperiod, self.prec)).neg().exp()
    }

    pub fn eval(&self, z: &CBall) -> Result<CBall> {
        let p = self.prec;
        let w = self.nome(z);
        let r_up = w.abs().upper();
        let delta = {
            let mut d = Float::with_val(RAD_PREC, w.max_rad());
            d *= 2;
            d
        };
        let (wr, wi) = (w.re.mid(), w.im.mid());

        // Midpoint Horner.
        let mut sr = Float::new(p);
        let mut si = Float::new(p);
        let mut t1 = Float::new(p);
        let mut t2 = Float::new(p);
        for c in self.coeffs.iter().rev() {
            t1.assign(sr.mul_sub_mul_ref(wr, &si, wi));
            t2.assign(sr.mul_add_mul_ref(wi, &si, wr));
            sr.clone_from(&t1);
            sr += c;
            si.clone_from(&t2);
        }

        // S0 = sum |c_j| R^j and S1 = sum j |c_j| R^{j-1}, rounded up.
        let r = Float::with_val_round(RAD_PREC, &r_up, Round::Up).0;
        let mut s0 = Float::new(RAD_PREC);
        let mut s1 = Float::new(RAD_PREC);
        for (j, a) in self.abs.iter().enumerate().rev() {
            s1.mul_assign_round_up(&r);
            if j > 0 {
                let ja = Float::with_val_round(RAD_PREC, a * j as u32, Round::Up).0;
                s1.add_assign_round(&ja, Round::Up);
            }
            s0.mul_assign_round_up(&r);
            s0.add_assign_round(a, Round::Up);
        }
        let len = self.coeffs.len() as u32;
        let mut err = Float::with_val(RAD_PREC, 16 * len + 16) << (1 - p as i32);
        err.mul_assign_round_up(&s0);
        let mut moved = s1;
        moved.mul_assign_round_up(&delta);
        err.add_assign_round(&moved, Round::Up);

        let poly = CBall::new(Ball::with_radius(sr, &err), Ball::with_radius(si, &err));
        let shifted = if self.val == 0 { poly } else { poly.mul(&w.pow_i(self.val)?) };
        let tail = self.tail.tail_sum(&Ball::exact(r_up), 0)?;
        Ok(shifted.inflate(tail.mid()))
    }

    /// `sum |a_n| |w|^n + tail` on the line `Im z = y`, an upper bound for `|f|` there.
    pub fn sup_abs(&self, y: &Ball) -> Result<Ball> {
        self.weighted_abs_sum(y, false)
    }

    /// Upper bound for `|f'(z)|` on the line `Im z = y`:
    /// `2πα (sum |n| |a_n| |w|^n + tail)`.
    pub fn deriv_sup(&self, y: &Ball) -> Result<Ball> {
        let s = self.weighted_abs_sum(y, true)?;
        Ok(Ball::exact(s.mul(&two_pi_alpha(self.halfperiod, self.prec)).upper()))
    }

    fn weighted_abs_sum(&self, y: &Ball, weighted: bool) -> Result<Ball> {
        let r = self.nome_abs(y);
        let mut total = Ball::zero(self.prec);
        let rv = if self.val >= 0 { r.pow_u(self.val as u32) } else { r.recip()?.pow_u(self.val.unsigned_abs() as u32) };
        let mut pw = rv;
        for (j, a) in self.abs.iter().enumerate() {
            let n = self.val + j as i64;
            let mut term = pw.mul(&Ball::exact(a.clone()));
            if weighted {
                term = term.mul_i64(n.abs());
            }
            total = total.add(&term);
            pw = pw.mul(&r);
        }
        total = total.add(&self.tail.tail_sum(&r, u32::from(weighted))?);
        Ok(Ball::exact(total.upper()))
    }
}

trait MulUp {
    fn mul_assign_round_up(&mut self, o: &Float);
}

impl MulUp for Float {
    fn mul_assign_round_up(&mut self, o: &Float) {
        use rug::ops::MulAssignRound;
        self.mul_assign_round(o, Round::Up);
    }
}

/// Ball containing `f(z)`; with `halfperiod` the expansion variable is `e^{πiz}`.
pub fn eval_ball(f: &Expansion, z: &CBall, halfperiod: bool) -> Result<CBall> {
    f.prepare(z.prec(), halfperiod).eval(z)
}

/// Certified upper bound for `|f'|` on the horizontal line `Im z = y`.
pub fn deriv_bound(f: &Expansion, y: &Ball, halfperiod: bool) -> Result<Ball> {
    f.prepare(y.prec(), halfperiod).deriv_sup(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{phi_series, psi_series};
    use rug::Integer;

    const P: u32 = 200;

    #[test]
    fn constant_one() {
        let f = Expansion::exact(QSeries::one(10));
        let v = eval_ball(&f, &CBall::from_f64(0.1, 0.5, P), false).unwrap();
        assert!(v.re.contains(&Float::with_val(P, 1)));
        assert!(v.re.rad().to_f64() < 1e-30 && v.im.rad().to_f64() < 1e-30);
    }

    #[test]
    fn hauptmodul_product_is_one() {
        let psi = Expansion::new(psi_series(150), TailKind::HauptmodulS, 1.0);
        let phi = Expansion::new(phi_series(150), TailKind::HauptmodulB, 1.0);
        let z = CBall::new(Ball::from_decimal("0.3", P), Ball::from_decimal("0.9", P));
        let prod = eval_ball(&psi, &z, false).unwrap().mul(&eval_ball(&phi, &z, false).unwrap());
        assert!(prod.re.contains(&Float::with_val(P, 1)), "{:?}", prod.re.mid_f64());
        assert!(prod.im.contains(&Float::with_val(P, 0)));
        assert!(prod.re.rad().to_f64() < 1e-20);
    }

    #[test]
    fn zero_series_has_zero_derivative() {
        let f = Expansion::exact(QSeries::from_integers(0, vec![Integer::new(); 10], 10).unwrap());
        assert_eq!(deriv_bound(&f, &Ball::from_f64(1.0, P), false).unwrap().upper_f64(), 0.0);
    }

    #[test]
    fn halfperiod_matches_doubled_argument() {
        let psi = Expansion::new(psi_series(150), TailKind::HauptmodulS, 1.0);
        let z = CBall::new(Ball::from_decimal("0.2", P), Ball::from_decimal("1.1", P));
        let half = eval_ball(&psi, &z, true).unwrap();
        let zh = z.scale(&Ball::from_rational(&Rational::from((1, 2)), P));
        let direct = eval_ball(&psi, &zh, false).unwrap();
        assert!(half.overlaps(&direct));
    }
}
