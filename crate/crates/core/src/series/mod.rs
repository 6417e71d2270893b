//! Truncated Laurent series in q with exact rational coefficients.

mod mul;
pub mod nt;

pub use mul::{convolve, MulStrategy};

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Assign, Integer, Rational};

use crate::error::{Error, Result};

/// Default working truncation (first unknown exponent).
pub const DEFAULT_TRUNC: i64 = 120;

/// `sum_{valuation <= n < trunc} (num[n - valuation] / den) q^n + O(q^trunc)`.
///
/// Coefficients share one positive denominator, kept in lowest terms with the
/// numerators. The stored window may start with zeros; `leading_exponent`
/// reports the first nonzero term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    valuation: i64,
    trunc: i64,
    num: Vec<Integer>,
    den: Integer,
}

impl QSeries {
    pub fn from_integers(valuation: i64, coeffs: Vec<Integer>, trunc: i64) -> Result<Self> {
        if trunc - valuation != coeffs.len() as i64 {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients cannot fill exponents {}..{}",
                coeffs.len(),
                valuation,
                trunc
            )));
        }
        Ok(QSeries { valuation, trunc, num: coeffs, den: Integer::from(1) })
    }

    pub fn from_rationals(valuation: i64, coeffs: &[Rational], trunc: i64) -> Result<Self> {
        if trunc - valuation != coeffs.len() as i64 {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients cannot fill exponents {}..{}",
                coeffs.len(),
                valuation,
                trunc
            )));
        }
        let mut den = Integer::from(1);
        for c in coeffs {
            den.lcm_mut(c.denom());
        }
        let num = coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&den / c.denom()))
            .collect();
        Ok(QSeries { valuation, trunc, num, den }.normalized())
    }

    /// Integer coefficients given as `i64` (convenient in tests and examples).
    pub fn from_i64(valuation: i64, coeffs: &[i64], trunc: i64) -> Result<Self> {
        Self::from_integers(valuation, coeffs.iter().map(|&c| Integer::from(c)).collect(), trunc)
    }

    pub fn zero(trunc: i64) -> Self {
        QSeries { valuation: trunc, trunc, num: Vec::new(), den: Integer::from(1) }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(Rational::from(1), 0, trunc)
    }

    /// `c q^e + O(q^trunc)`; collapses to the zero window when `e >= trunc`.
    pub fn monomial(c: Rational, e: i64, trunc: i64) -> Self {
        if e >= trunc {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![Rational::new(); (trunc - e) as usize];
        coeffs[0] = c;
        Self::from_rationals(e, &coeffs, trunc).unwrap()
    }

    fn normalized(mut self) -> Self {
        if self.den < 0 {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.den != 1 {
            let mut g = self.den.clone();
            for c in &self.num {
                if g == 1 {
                    break;
                }
                g.gcd_mut(c);
            }
            if g != 1 {
                self.den /= &g;
                for c in &mut self.num {
                    c.div_exact_mut(&g);
                }
            }
        }
        self
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Number of known coefficients, `trunc - valuation`.
    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn denominator(&self) -> &Integer {
        &self.den
    }

    pub fn numerators(&self) -> &[Integer] {
        &self.num
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| *c == 0)
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn leading_exponent(&self) -> Option<i64> {
        self.num.iter().position(|c| *c != 0).map(|i| self.valuation + i as i64)
    }

    pub fn coeff(&self, n: i64) -> Result<Rational> {
        if n >= self.trunc {
            return Err(Error::BeyondTruncation { exp: n, trunc: self.trunc });
        }
        if n < self.valuation {
            return Ok(Rational::new());
        }
        Ok(Rational::from((self.num[(n - self.valuation) as usize].clone(), self.den.clone())))
    }

    /// Coefficient as an integer; fails if the series is not integral.
    pub fn int_coeff(&self, n: i64) -> Result<Integer> {
        if !self.is_integral() {
            return Err(Error::InvalidArgument("series has non-integral coefficients".into()));
        }
        if n >= self.trunc {
            return Err(Error::BeyondTruncation { exp: n, trunc: self.trunc });
        }
        if n < self.valuation {
            return Ok(Integer::new());
        }
        Ok(self.num[(n - self.valuation) as usize].clone())
    }

    /// `(exponent, coefficient)` pairs over the known window.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Rational)> + '_ {
        self.num
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.valuation + i as i64, Rational::from((c.clone(), self.den.clone()))))
    }

    /// Drops leading zero coefficients, raising the valuation; `trunc` is unchanged.
    pub fn strip_leading_zeros(&self) -> Self {
        match self.num.iter().position(|c| *c != 0) {
            None => Self::zero(self.trunc),
            Some(0) => self.clone(),
            Some(i) => QSeries {
                valuation: self.valuation + i as i64,
                trunc: self.trunc,
                num: self.num[i..].to_vec(),
                den: self.den.clone(),
            },
        }
    }

    /// Same series with fewer known terms.
    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        if trunc <= self.valuation {
            return Self::zero(trunc);
        }
        let num = self.num[..(trunc - self.valuation) as usize].to_vec();
        QSeries { valuation: self.valuation, trunc, num, den: self.den.clone() }.normalized()
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QSeries { valuation: self.valuation + k, trunc: self.trunc + k, ..self.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let num = self.num.iter().map(|x| Integer::from(x * c.numer())).collect();
        QSeries { valuation: self.valuation, trunc: self.trunc, num, den: Integer::from(&self.den * c.denom()) }
            .normalized()
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&Rational::from(c))
    }

    fn window(&self, lo: i64, hi: i64, den: &Integer) -> Vec<Integer> {
        let factor = Integer::from(den / &self.den);
        (lo..hi)
            .map(|n| {
                if n < self.valuation || n >= self.trunc {
                    Integer::new()
                } else {
                    Integer::from(&self.num[(n - self.valuation) as usize] * &factor)
                }
            })
            .collect()
    }

    pub fn add_series(&self, other: &QSeries) -> QSeries {
        let trunc = self.trunc.min(other.trunc);
        let val = self.valuation.min(other.valuation).min(trunc);
        let den = Integer::from(self.den.lcm_ref(&other.den));
        let mut a = self.window(val, trunc, &den);
        let b = other.window(val, trunc, &den);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        QSeries { valuation: val, trunc, num: a, den }.normalized()
    }

    pub fn mul_with(&self, other: &QSeries, strategy: MulStrategy) -> QSeries {
        let val = self.valuation + other.valuation;
        let len = self.len().min(other.len());
        let num = convolve(&self.num, &other.num, len, strategy);
        let den = Integer::from(&self.den * &other.den);
        QSeries { valuation: val, trunc: val + len as i64, num, den }.normalized()
    }

    pub fn mul_series(&self, other: &QSeries) -> QSeries {
        self.mul_with(other, MulStrategy::Auto)
    }

    /// Multiplicative inverse. Leading zeros in the window are skipped, so the
    /// result has `trunc = trunc - 2 * leading_exponent`.
    pub fn invert(&self) -> Result<QSeries> {
        let lead = self.num.iter().position(|c| *c != 0).ok_or(Error::NonInvertible)?;
        let v = self.valuation + lead as i64;
        let u = &self.num[lead..];
        let len = u.len();
        let u0 = &u[0];
        let inv = if *u0 == 1 || *u0 == -1 {
            // Unit leading coefficient: stay in the integers.
            let mut b: Vec<Integer> = Vec::with_capacity(len);
            b.push(u0.clone());
            let mut acc = Integer::new();
            for n in 1..len {
                acc.assign(0);
                for j in 1..=n {
                    acc += &u[j] * &b[n - j];
                }
                let neg = Integer::from(-&acc);
                b.push(if *u0 == 1 { neg } else { acc.clone() });
            }
            let scaled: Vec<Integer> = b.into_iter().map(|x| x * &self.den).collect();
            QSeries { valuation: -v, trunc: -v + len as i64, num: scaled, den: Integer::from(1) }
        } else {
            let u0r = Rational::from(u0);
            let mut b: Vec<Rational> = Vec::with_capacity(len);
            b.push(Rational::from(1) / &u0r);
            for n in 1..len {
                let mut acc = Rational::new();
                for j in 1..=n {
                    acc += Rational::from(&u[j] * b[n - j].numer()) / b[n - j].denom();
                }
                b.push(-acc / &u0r);
            }
            let d = Rational::from(&self.den);
            let scaled: Vec<Rational> = b.into_iter().map(|x| x * &d).collect();
            QSeries::from_rationals(-v, &scaled, -v + len as i64)?
        };
        Ok(inv.normalized())
    }

    pub fn pow(&self, e: u32) -> QSeries {
        if e == 0 {
            return QSeries::one(self.len() as i64);
        }
        let mut base = self.clone();
        let mut acc: Option<QSeries> = None;
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_series(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_series(&base);
        }
        acc.unwrap()
    }

    /// `f(z) -> f(dz)`: exponent n becomes dn.
    pub fn apply_vd(&self, d: u32) -> QSeries {
        assert!(d >= 1, "V_d needs d >= 1");
        let d = d as i64;
        let val = self.valuation * d;
        let trunc = self.trunc * d;
        let mut num = vec![Integer::new(); (trunc - val) as usize];
        for (i, c) in self.num.iter().enumerate() {
            num[i * d as usize] = c.clone();
        }
        QSeries { valuation: val, trunc, num, den: self.den.clone() }
    }

    /// `q d/dq`: coefficient at exponent n is multiplied by n.
    pub fn theta(&self) -> QSeries {
        let num = self
            .num
            .iter()
            .enumerate()
            .map(|(i, c)| Integer::from(c * (self.valuation + i as i64)))
            .collect();
        QSeries { valuation: self.valuation, trunc: self.trunc, num, den: self.den.clone() }.normalized()
    }

    /// CSV dump `n,numerator/denominator` (denominator omitted when 1).
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (n, c) in self.terms() {
            if *c.denom() == 1 {
                writeln!(s, "{},{}", n, c.numer()).unwrap();
            } else {
                writeln!(s, "{},{}/{}", n, c.numer(), c.denom()).unwrap();
            }
        }
        s
    }

    /// Inverse of [`QSeries::to_csv`]; `trunc` is one past the last row.
    pub fn from_csv(text: &str) -> Result<QSeries> {
        let mut rows: Vec<(i64, Rational)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (n, c) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `n,value`", lineno + 1)))?;
            let n: i64 = n.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad exponent", lineno + 1)))?;
            rows.push((n, parse_rational(c)?));
        }
        let Some(&(first, _)) = rows.first() else {
            return Err(Error::Parse("empty coefficient file".into()));
        };
        for (i, (n, _)) in rows.iter().enumerate() {
            if *n != first + i as i64 {
                return Err(Error::Parse(format!("exponents must be consecutive (row {})", i + 1)));
            }
        }
        let coeffs: Vec<Rational> = rows.into_iter().map(|(_, c)| c).collect();
        let trunc = first + coeffs.len() as i64;
        QSeries::from_rationals(first, &coeffs, trunc)
    }
}

/// Parses `p` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Integer = p.trim().parse().map_err(|_| bad())?;
            let q: Integer = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::from((p, q)))
        }
        None => Ok(Rational::from(s.parse::<Integer>().map_err(|_| bad())?)),
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_series(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        let num = self.num.iter().map(|c| Integer::from(-c)).collect();
        QSeries { num, ..self.clone() }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_series(&-rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_series(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(t: i64) -> QSeries {
        QSeries::from_i64(0, &vec![1; t as usize], t).unwrap()
    }

    #[test]
    fn additive_inverse_keeps_trunc() {
        let q = QSeries::monomial(Rational::from(1), 1, 10);
        let z = &q + &-&q;
        assert!(z.is_zero());
        assert_eq!(z.trunc(), 10);
    }

    #[test]
    fn geometric_series_inverse() {
        let one_minus_q = QSeries::from_i64(0, &[1, -1, 0, 0, 0, 0], 6).unwrap();
        assert_eq!(&one_minus_q * &geometric(6), QSeries::one(6));
        assert_eq!(one_minus_q.invert().unwrap(), geometric(6));
    }

    #[test]
    fn zero_is_not_invertible() {
        assert_eq!(QSeries::zero(5).invert(), Err(Error::NonInvertible));
        assert_eq!(QSeries::from_i64(0, &[0, 0, 0], 3).unwrap().invert(), Err(Error::NonInvertible));
    }

    #[test]
    fn coefficient_beyond_trunc_is_an_error() {
        let g = geometric(4);
        assert!(g.coeff(3).is_ok());
        assert_eq!(g.coeff(4), Err(Error::BeyondTruncation { exp: 4, trunc: 4 }));
        assert_eq!(g.coeff(-3).unwrap(), 0);
    }

    #[test]
    fn vd_and_theta() {
        let a = QSeries::from_i64(1, &[1, -24], 3).unwrap();
        let v2 = a.apply_vd(2);
        assert_eq!(v2.valuation(), 2);
        assert_eq!(v2.trunc(), 6);
        assert_eq!(v2.coeff(2).unwrap(), 1);
        assert_eq!(v2.coeff(3).unwrap(), 0);
        assert_eq!(v2.coeff(4).unwrap(), -24);
        assert_eq!(a.apply_vd(1), a);

        let inv_q = QSeries::from_i64(-1, &[1, 5], 1).unwrap();
        let t = inv_q.theta();
        assert_eq!(t.coeff(-1).unwrap(), -1);
        assert_eq!(t.coeff(0).unwrap(), 0);
        assert!(QSeries::one(8).theta().is_zero());
    }

    #[test]
    fn pow_zero_and_truncation() {
        let a = QSeries::from_i64(0, &[2, 1, 1], 3).unwrap();
        assert_eq!(a.pow(0), QSeries::one(3));
        let cube = a.pow(3);
        assert_eq!(cube, &(&a * &a) * &a);
    }

    #[test]
    fn rational_inverse() {
        let a = QSeries::from_rationals(0, &[Rational::from(2), Rational::from((1, 3)), Rational::from(5)], 3).unwrap();
        let p = &a * &a.invert().unwrap();
        assert_eq!(p, QSeries::one(3));
    }

    #[test]
    fn csv_round_trip() {
        let a = QSeries::from_rationals(-1, &[Rational::from(1), Rational::from((-1, 2)), Rational::from(7)], 2).unwrap();
        let text = a.to_csv();
        assert_eq!(text, "-1,1\n0,-1/2\n1,7\n");
        assert_eq!(QSeries::from_csv(&text).unwrap(), a);
    }
}
