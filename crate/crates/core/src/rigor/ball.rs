//! Midpoint-radius arithmetic over MPFR floats.
//!
//! Midpoints are rounded to nearest at the working precision; radii are kept
//! at a short precision and always rounded upward, so every operation returns
//! a ball containing all exact results for inputs drawn from its arguments.

use std::cmp::Ordering;

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, MulAssignRound, Pow};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Precision of radii.
pub const RAD_PREC: u32 = 64;
pub const DEFAULT_PREC: u32 = 200;
pub const MAX_PREC: u32 = 2000;

/// Working precision: `PRECISION_BITS` from the environment, else 200.
pub fn default_precision() -> u32 {
    std::env::var("PRECISION_BITS")
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .filter(|&p| (53..=MAX_PREC).contains(&p))
        .unwrap_or(DEFAULT_PREC)
}

/// Runs `f` at increasing precision until it returns `Some`, up to `MAX_PREC`.
pub fn with_precision_retry<T>(start: u32, mut f: impl FnMut(u32) -> Option<T>) -> Result<T> {
    let mut p = start.max(53);
    loop {
        if let Some(v) = f(p) {
            return Ok(v);
        }
        if p >= MAX_PREC {
            return Err(Error::Indeterminate(p));
        }
        p = (p * 2).min(MAX_PREC);
    }
}

fn rzero() -> Float {
    Float::new(RAD_PREC)
}

/// Upper bound on `|x|` at radius precision.
fn abs_up(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, x.abs_ref(), Round::Up).0
}

fn add_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a + b, Round::Up).0
}

fn mul_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a * b, Round::Up).0
}

fn div_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a / b, Round::Up).0
}

/// Bound on the error of a midpoint rounded to nearest with result `ord`.
fn round_err(mid: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        return rzero();
    }
    match mid.get_exp() {
        Some(e) => Float::with_val(RAD_PREC, 1) << (e - mid.prec() as i32),
        None => rzero(),
    }
}

#[derive(Clone, Debug)]
pub struct Ball {
    mid: Float,
    rad: Float,
}

impl Ball {
    pub fn exact(mid: Float) -> Ball {
        Ball { mid, rad: rzero() }
    }

    /// Ball with given midpoint and radius (the radius is rounded up).
    pub fn with_radius(mid: Float, rad: &Float) -> Ball {
        Ball { mid, rad: abs_up(rad) }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Float::new(prec))
    }

    pub fn from_f64(x: f64, prec: u32) -> Ball {
        Ball::exact(Float::with_val(prec.max(53), x))
    }

    pub fn from_i64(x: i64, prec: u32) -> Ball {
        Ball::from_integer(&Integer::from(x), prec)
    }

    pub fn from_integer(x: &Integer, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, x, Round::Nearest);
        let rad = round_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_rational(x: &Rational, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, x, Round::Nearest);
        let rad = round_err(&mid, ord);
        Ball { mid, rad }
    }

    /// Decimal literal such as `"0.865"`, enclosed exactly.
    pub fn from_decimal(s: &str, prec: u32) -> Ball {
        let r = decimal_to_rational(s);
        Ball::from_rational(&r, prec)
    }

    pub fn pi(prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, Constant::Pi, Round::Nearest);
        let rad = round_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    /// Certified upper end point.
    pub fn upper(&self) -> Float {
        let mut u = self.mid.clone();
        u.add_assign_round(&self.rad, Round::Up);
        u
    }

    /// Certified lower end point.
    pub fn lower(&self) -> Float {
        let mut l = self.mid.clone();
        l.add_assign_round(-self.rad.clone(), Round::Down);
        l
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper().to_f64_round(Round::Up)
    }

    pub fn lower_f64(&self) -> f64 {
        self.lower().to_f64_round(Round::Down)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// `Some(true)` if certainly `< other`, `Some(false)` if certainly `>=`.
    pub fn lt(&self, other: &Ball) -> Option<bool> {
        if self.upper() < other.lower() {
            Some(true)
        } else if self.lower() >= other.upper() {
            Some(false)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > 0
    }

    /// Widen the radius by `extra` (rounded up).
    pub fn inflate(&self, extra: &Float) -> Ball {
        Ball { mid: self.mid.clone(), rad: add_up(&self.rad, &abs_up(extra)) }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let prec = self.prec().max(o.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid + &o.mid, Round::Nearest);
        let rad = add_up(&add_up(&self.rad, &o.rad), &round_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let prec = self.prec().max(o.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &o.mid, Round::Nearest);
        let mut rad = mul_up(&abs_up(&self.mid), &o.rad);
        rad = add_up(&rad, &mul_up(&abs_up(&o.mid), &self.rad));
        rad = add_up(&rad, &mul_up(&self.rad, &o.rad));
        rad = add_up(&rad, &round_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul(&Ball::from_i64(k, self.prec()))
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    /// Fails when the divisor ball contains zero.
    pub fn div(&self, o: &Ball) -> Result<Ball> {
        let a = Float::with_val_round(RAD_PREC, o.mid.abs_ref(), Round::Down).0;
        let den_lo = Float::with_val_round(RAD_PREC, &a - &o.rad, Round::Down).0;
        if den_lo <= 0 {
            return Err(Error::InvalidArgument("division by a ball containing zero".into()));
        }
        let prec = self.prec().max(o.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &o.mid, Round::Nearest);
        let err = round_err(&mid, ord);
        let q_abs = add_up(&abs_up(&mid), &err);
        let num = add_up(&self.rad, &mul_up(&q_abs, &o.rad));
        let rad = add_up(&div_up(&num, &den_lo), &err);
        Ok(Ball { mid, rad })
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::from_i64(1, self.prec()).div(self)
    }

    pub fn pow_u(&self, n: u32) -> Ball {
        let mut acc = Ball::from_i64(1, self.prec());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn exp(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.exp_ref(), Round::Nearest);
        let e_up = Float::with_val_round(RAD_PREC, self.mid.exp_ref(), Round::Up).0;
        let m1 = Float::with_val_round(RAD_PREC, self.rad.exp_m1_ref(), Round::Up).0;
        let rad = add_up(&mul_up(&e_up, &m1), &round_err(&mid, ord));
        Ball { mid, rad }
    }

    /// Natural logarithm; fails unless the ball is positive.
    pub fn ln(&self) -> Result<Ball> {
        let lo = self.lower_rad_prec();
        if lo <= 0 {
            return Err(Error::InvalidArgument("logarithm of a non-positive ball".into()));
        }
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.ln_ref(), Round::Nearest);
        let rad = add_up(&div_up(&self.rad, &lo), &round_err(&mid, ord));
        Ok(Ball { mid, rad })
    }

    /// Square root; the ball must not extend below zero.
    pub fn sqrt(&self) -> Result<Ball> {
        let lo = self.lower_rad_prec();
        if lo < 0 {
            return Err(Error::InvalidArgument("square root of a negative ball".into()));
        }
        if lo == 0 {
            let hi = Float::with_val_round(RAD_PREC, self.upper().sqrt_ref(), Round::Up).0;
            let mut mid = Float::with_val(self.prec(), &hi);
            mid /= 2;
            return Ok(Ball { mid, rad: hi });
        }
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.sqrt_ref(), Round::Nearest);
        let s = Float::with_val_round(RAD_PREC, lo.sqrt_ref(), Round::Down).0;
        let rad = add_up(&div_up(&self.rad, &s), &round_err(&mid, ord));
        Ok(Ball { mid, rad })
    }

    fn lipschitz1(&self, mid: Float, ord: Ordering) -> Ball {
        let rad = add_up(&self.rad, &round_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sin(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.sin_ref(), Round::Nearest);
        self.lipschitz1(mid, ord)
    }

    pub fn cos(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.cos_ref(), Round::Nearest);
        self.lipschitz1(mid, ord)
    }

    pub fn atan(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.atan_ref(), Round::Nearest);
        self.lipschitz1(mid, ord)
    }

    /// `self^e` for a positive base.
    pub fn pow(&self, e: &Ball) -> Result<Ball> {
        Ok(self.ln()?.mul(e).exp())
    }

    pub fn abs(&self) -> Ball {
        let a = Float::with_val(self.prec(), self.mid.abs_ref());
        if a >= self.rad {
            return Ball { mid: a, rad: self.rad.clone() };
        }
        let hi = add_up(&abs_up(&self.mid), &self.rad);
        let mut mid = Float::with_val(self.prec(), &hi);
        mid /= 2;
        Ball { mid, rad: hi }
    }

    /// Interval hull of the two balls.
    pub fn union(&self, o: &Ball) -> Ball {
        let prec = self.prec().max(o.prec());
        let lo = self.lower().min(&o.lower()).clone();
        let hi = self.upper().max(&o.upper()).clone();
        from_endpoints(&lo, &hi, prec)
    }

    /// Componentwise max: a ball containing `max(x, y)` for x, y in the inputs.
    pub fn max(&self, o: &Ball) -> Ball {
        let prec = self.prec().max(o.prec());
        let lo = self.lower().max(&o.lower()).clone();
        let hi = self.upper().max(&o.upper()).clone();
        from_endpoints(&lo, &hi, prec)
    }

    fn lower_rad_prec(&self) -> Float {
        let l = self.lower();
        Float::with_val_round(RAD_PREC, &l, Round::Down).0
    }
}

/// Ball enclosing the interval `[lo, hi]`.
pub fn from_endpoints(lo: &Float, hi: &Float, prec: u32) -> Ball {
    let mut mid = Float::with_val(prec + 2, lo + hi);
    mid /= 2;
    let mid = Float::with_val(prec, &mid);
    let r1 = Float::with_val_round(RAD_PREC, hi - &mid, Round::Up).0;
    let r2 = Float::with_val_round(RAD_PREC, &mid - lo, Round::Up).0;
    Ball { rad: r1.max(&r2).clone(), mid }
}

/// Exact rational value of a decimal literal.
pub fn decimal_to_rational(s: &str) -> Rational {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: Integer = format!("{}{}", if int.is_empty() { "0" } else { int }, frac)
        .parse()
        .expect("malformed decimal literal");
    let r = Rational::from((digits, Integer::from(10).pow(frac.len() as u32)));
    if neg {
        -r
    } else {
        r
    }
}

/// Complex ball in rectangular form.
#[derive(Clone, Debug)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn real(re: Ball) -> CBall {
        let p = re.prec();
        CBall { re, im: Ball::zero(p) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> CBall {
        CBall { re: Ball::from_f64(re, prec), im: Ball::from_f64(im, prec) }
    }

    pub fn zero(prec: u32) -> CBall {
        CBall::real(Ball::zero(prec))
    }

    pub fn one(prec: u32) -> CBall {
        CBall::real(Ball::from_i64(1, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        CBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, s: &Ball) -> CBall {
        CBall { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn div(&self, o: &CBall) -> Result<CBall> {
        let d = o.norm_sqr();
        let n = self.mul(&o.conj());
        Ok(CBall { re: n.re.div(&d)?, im: n.im.div(&d)? })
    }

    pub fn recip(&self) -> Result<CBall> {
        CBall::one(self.prec()).div(self)
    }

    pub fn pow_u(&self, n: u32) -> CBall {
        let mut acc = CBall::one(self.prec());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow_i(&self, n: i64) -> Result<CBall> {
        let p = self.pow_u(n.unsigned_abs() as u32);
        if n < 0 {
            p.recip()
        } else {
            Ok(p)
        }
    }

    pub fn exp(&self) -> CBall {
        let r = self.re.exp();
        CBall { re: r.mul(&self.im.cos()), im: r.mul(&self.im.sin()) }
    }

    /// `|z|` via hypot; the radius grows by at most the sum of the component radii.
    pub fn abs(&self) -> Ball {
        let prec = self.prec();
        let (mid, ord) = Float::with_val_round(prec, self.re.mid.hypot_ref(&self.im.mid), Round::Nearest);
        let rad = add_up(&add_up(&self.re.rad, &self.im.rad), &round_err(&mid, ord));
        Ball { mid, rad }
    }

    /// Upper bound on the larger component radius.
    pub fn max_rad(&self) -> Float {
        self.re.rad.clone().max(&self.im.rad).clone()
    }

    pub fn overlaps(&self, o: &CBall) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn inflate(&self, extra: &Float) -> CBall {
        CBall { re: self.re.inflate(extra), im: self.im.inflate(extra) }
    }
}

/// Scalar radius ops exported for callers that fold in their own error terms.
pub mod radius {
    use super::*;

    pub fn add(a: &Float, b: &Float) -> Float {
        add_up(a, b)
    }

    pub fn mul(a: &Float, b: &Float) -> Float {
        mul_up(a, b)
    }

    pub fn div(a: &Float, b: &Float) -> Float {
        div_up(a, b)
    }

    pub fn from_f64(x: f64) -> Float {
        Float::with_val(RAD_PREC, x)
    }

    pub fn abs(x: &Float) -> Float {
        abs_up(x)
    }

    /// Accumulate `acc += a * b` rounding up (for nonnegative terms).
    pub fn mul_add(acc: &mut Float, a: &Float, b: &Float) {
        let t = mul_up(a, b);
        acc.add_assign_round(&t, Round::Up);
    }

    pub fn scale(acc: &mut Float, s: &Float) {
        acc.mul_assign_round(s, Round::Up);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    #[test]
    fn constant_one_is_tight() {
        let one = Ball::from_i64(1, P);
        assert!(one.contains(&Float::with_val(P, 1)));
        assert!(*one.rad() < 1e-30);
    }

    #[test]
    fn arithmetic_contains_exact_results() {
        let third = Ball::from_rational(&Rational::from((1, 3)), P);
        let x = third.mul_i64(3);
        assert!(x.contains(&Float::with_val(P, 1)));
        let e = Ball::from_i64(1, P).exp();
        let l = e.ln().unwrap();
        assert!(l.contains(&Float::with_val(P, 1)));
        let s = Ball::from_i64(2, P).sqrt().unwrap().sqr();
        assert!(s.contains(&Float::with_val(P, 2)));
        let q = Ball::from_i64(1, P).div(&Ball::from_i64(7, P)).unwrap().mul_i64(7);
        assert!(q.contains(&Float::with_val(P, 1)));
    }

    #[test]
    fn trig_identity() {
        let x = Ball::from_decimal("0.731", P);
        let s = x.sin().sqr().add(&x.cos().sqr());
        assert!(s.contains(&Float::with_val(P, 1)));
        assert!(*s.rad() < 1e-50);
    }

    #[test]
    fn complex_exp_of_pi_i() {
        let z = CBall::new(Ball::zero(P), Ball::pi(P));
        let w = z.exp();
        assert!(w.re.contains(&Float::with_val(P, -1)));
        assert!(w.im.contains(&Float::with_val(P, 0)));
    }

    #[test]
    fn division_by_zero_ball_fails() {
        let z = Ball::with_radius(Float::with_val(P, 0.1), &Float::with_val(RAD_PREC, 0.2));
        assert!(Ball::from_i64(1, P).div(&z).is_err());
    }

    #[test]
    fn decimal_literal_is_exact() {
        assert_eq!(decimal_to_rational("0.865"), Rational::from((173, 200)));
        assert_eq!(decimal_to_rational("-1.5"), Rational::from((-3, 2)));
        assert_eq!(decimal_to_rational("12"), Rational::from(12));
    }

    #[test]
    fn precision_retry_escalates() {
        let mut seen = Vec::new();
        let r = with_precision_retry(200, |p| {
            seen.push(p);
            (p >= 800).then_some(p)
        });
        assert_eq!(r.unwrap(), 800);
        assert_eq!(seen, vec![200, 400, 800]);
        assert!(with_precision_retry(200, |_| None::<()>).is_err());
    }
}
