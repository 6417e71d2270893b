//! Constructors for the modular objects on Γ₀(2) used throughout the crate.
//!
//! All `trunc` arguments are exclusive: the result knows exponents `< trunc`.
//! Each form has a product (or divisor-sum) route that does not divide series,
//! and the quotient routes are kept alongside as independent constructions.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::rigor::ball::{default_precision, with_precision_retry, Ball};
use crate::series::nt::{bernoulli, sigma_odd_table, sigma_table};
use crate::series::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormName {
    Eta24,
    Delta,
    Psi,
    Phi,
    Eisenstein(u32),
    F2,
    S4,
    Delta8,
    J,
    Fkm(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormDescriptor {
    pub name: FormName,
    pub weight: u32,
    pub level: u32,
    pub valuation: i64,
}

impl FormName {
    pub fn descriptor(self) -> FormDescriptor {
        let (weight, level, valuation) = match self {
            FormName::Eta24 | FormName::Delta => (12, 1, 1),
            FormName::Psi => (0, 2, -1),
            FormName::Phi => (0, 2, 1),
            FormName::Eisenstein(k) => (k, 1, 0),
            FormName::F2 => (2, 2, 0),
            FormName::S4 => (4, 2, 1),
            FormName::Delta8 => (8, 2, 1),
            FormName::J => (0, 1, -1),
            FormName::Fkm(k, m) => (k, 2, m as i64),
        };
        FormDescriptor { name: self, weight, level, valuation }
    }

    /// Expansion known through `q^{trunc-1}`.
    pub fn expand(self, trunc: i64) -> Result<QSeries> {
        match self {
            FormName::Eta24 => Ok(eta24_series(trunc)),
            FormName::Delta => Ok(delta_series(trunc)),
            FormName::Psi => Ok(psi_series(trunc)),
            FormName::Phi => Ok(phi_series(trunc)),
            FormName::Eisenstein(k) => eisenstein_series(k, trunc),
            FormName::F2 => Ok(f2_series(trunc)),
            FormName::S4 => Ok(s4_series(trunc)),
            FormName::Delta8 => Ok(delta8_series(trunc)),
            FormName::J => Ok(j_series(trunc)),
            FormName::Fkm(k, m) => {
                let b = crate::basis::echelon_basis(k, trunc)?;
                b.form(m as usize).cloned()
            }
        }
    }
}

impl fmt::Display for FormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormName::Eta24 => write!(f, "eta24"),
            FormName::Delta => write!(f, "delta"),
            FormName::Psi => write!(f, "psi"),
            FormName::Phi => write!(f, "phi"),
            FormName::Eisenstein(k) => write!(f, "e{k}"),
            FormName::F2 => write!(f, "f2"),
            FormName::S4 => write!(f, "s4"),
            FormName::Delta8 => write!(f, "delta8"),
            FormName::J => write!(f, "j"),
            FormName::Fkm(k, m) => write!(f, "fkm:{k},{m}"),
        }
    }
}

impl FromStr for FormName {
    type Err = Error;

    /// Accepts `eta24 delta psi phi f2 s4 delta8 j`, `e<k>` or `eisenstein:<k>`,
    /// and `fkm:<k>,<m>`.
    fn from_str(s: &str) -> Result<FormName> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidArgument(format!("unknown form `{s}`"));
        Ok(match s.as_str() {
            "eta24" => FormName::Eta24,
            "delta" => FormName::Delta,
            "psi" => FormName::Psi,
            "phi" => FormName::Phi,
            "f2" => FormName::F2,
            "s4" => FormName::S4,
            "delta8" => FormName::Delta8,
            "j" => FormName::J,
            _ => {
                if let Some(rest) = s.strip_prefix("fkm:") {
                    let (k, m) = rest.split_once(',').ok_or_else(bad)?;
                    let k: u32 = k.trim().parse().map_err(|_| bad())?;
                    let m: u32 = m.trim().parse().map_err(|_| bad())?;
                    if m < 1 || m as usize > crate::basis::dim_sk2(k) {
                        return Err(bad());
                    }
                    FormName::Fkm(k, m)
                } else {
                    let k = s.strip_prefix("eisenstein:").or_else(|| s.strip_prefix('e')).ok_or_else(bad)?;
                    let k: u32 = k.parse().map_err(|_| bad())?;
                    if k < 2 || k % 2 == 1 {
                        return Err(bad());
                    }
                    FormName::Eisenstein(k)
                }
            }
        })
    }
}

fn ints(v: Vec<Integer>, valuation: i64) -> QSeries {
    let trunc = valuation + v.len() as i64;
    QSeries::from_integers(valuation, v, trunc).expect("length matches window")
}

/// `prod_{n in parts} (1 + sign q^n)` through `q^{len-1}`, one factor at a time.
fn product_in_place(len: usize, parts: impl Iterator<Item = usize>, sign: i32) -> Vec<Integer> {
    let mut c = vec![Integer::new(); len];
    if len == 0 {
        return c;
    }
    c[0] = Integer::from(1);
    for n in parts {
        if n == 0 || n >= len {
            continue;
        }
        for i in (n..len).rev() {
            let (lo, hi) = c.split_at_mut(i);
            if sign > 0 {
                hi[0] += &lo[i - n];
            } else {
                hi[0] -= &lo[i - n];
            }
        }
    }
    c
}

/// `prod_{n>=1} (1 - q^n)` from the pentagonal number theorem.
pub fn euler_function(len: usize) -> QSeries {
    let mut c = vec![Integer::new(); len];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if (e as usize) < len {
                c[e as usize] += if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    ints(c, 0)
}

/// `prod_{n>=1} (1 - q^n)` by multiplying out the factors.
pub fn euler_function_direct(len: usize) -> QSeries {
    ints(product_in_place(len, 1..len, -1), 0)
}

/// `prod_{n>=1} (1 + q^n)`.
pub fn distinct_parts_series(len: usize) -> QSeries {
    ints(product_in_place(len, 1..len, 1), 0)
}

/// `prod_{n>=1} (1 - q^{2n-1})`.
pub fn odd_parts_series(len: usize) -> QSeries {
    ints(product_in_place(len, (1..len).step_by(2), -1), 0)
}

fn unit_len(trunc: i64, valuation: i64) -> usize {
    (trunc - valuation).max(0) as usize
}

/// `Δ = q prod (1 - q^n)^24`, via the pentagonal series.
pub fn delta_series(trunc: i64) -> QSeries {
    euler_function(unit_len(trunc, 1)).pow(24).shift(1)
}

/// `η(z)^24` with the Euler product expanded factor by factor.
pub fn eta24_series(trunc: i64) -> QSeries {
    euler_function_direct(unit_len(trunc, 1)).pow(24).shift(1)
}

/// `ψ = q^{-1} prod (1 - q^{2n-1})^24`.
pub fn psi_series(trunc: i64) -> QSeries {
    odd_parts_series(unit_len(trunc, -1)).pow(24).shift(-1)
}

/// `ψ = Δ(z) / Δ(2z)`.
pub fn psi_via_delta_quotient(trunc: i64) -> QSeries {
    let d = delta_series(trunc + 2);
    let inv = d.apply_vd(2).invert().expect("Δ(2z) has leading coefficient 1");
    &d * &inv
}

/// `φ = q prod (1 + q^n)^24`.
pub fn phi_series(trunc: i64) -> QSeries {
    distinct_parts_series(unit_len(trunc, 1)).pow(24).shift(1)
}

/// `φ = 1/ψ`.
pub fn phi_via_psi_inverse(trunc: i64) -> QSeries {
    psi_series(trunc - 2).invert().expect("ψ has leading coefficient 1")
}

/// `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n` for even `k >= 2`.
pub fn eisenstein_series(k: u32, trunc: i64) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Eisenstein series needs even k >= 2, got {k}")));
    }
    let len = unit_len(trunc, 0);
    let mult = Rational::from(-2 * k as i64) / bernoulli(k);
    let sig = sigma_table(len, k - 1);
    let mut coeffs: Vec<Rational> = sig.into_iter().map(|s| Rational::from(s) * &mult).collect();
    if len > 0 {
        coeffs[0] = Rational::from(1);
    }
    QSeries::from_rationals(0, &coeffs, trunc.max(0))
}

/// `F_2 = 1 + 24 sum (sum of odd divisors of n) q^n`.
pub fn f2_series(trunc: i64) -> QSeries {
    let len = unit_len(trunc, 0);
    let mut c: Vec<Integer> = sigma_odd_table(len).into_iter().map(|s| s * 24).collect();
    if len > 0 {
        c[0] = Integer::from(1);
    }
    ints(c, 0)
}

/// `F_2 = 2 E_2(2z) - E_2(z)`.
pub fn f2_via_e2(trunc: i64) -> QSeries {
    let e2 = eisenstein_series(2, trunc).unwrap();
    let v2 = e2.apply_vd(2).scale_int(2);
    &v2 - &e2
}

/// `S_4 = (E_4(z) - E_4(2z)) / 240`.
pub fn s4_series(trunc: i64) -> QSeries {
    let e4 = eisenstein_series(4, trunc).unwrap();
    let d = &e4 - &e4.apply_vd(2);
    d.scale(&Rational::from((1, 240))).truncate(trunc).strip_leading_zeros()
}

/// `(η(z) η(2z))^8 = q prod (1 - q^n)^8 (1 - q^{2n})^8`.
pub fn delta8_series(trunc: i64) -> QSeries {
    let len = unit_len(trunc, 1);
    let e = euler_function(len);
    let prod = &e * &e.apply_vd(2).truncate(len as i64);
    prod.pow(8).shift(1)
}

/// `j = E_4^3 / Δ`.
pub fn j_series(trunc: i64) -> QSeries {
    let e4 = eisenstein_series(4, trunc + 1).unwrap();
    let inv = delta_series(trunc + 2).invert().expect("Δ = q + ...");
    &e4.pow(3) * &inv
}

/// Agreement of two constructions over their common window.
pub fn dual_construction_report(name: &str, a: &QSeries, b: &QSeries) -> BoundReport {
    let trunc = a.trunc().min(b.trunc());
    let lo = a.valuation().min(b.valuation());
    let mismatches = (lo..trunc).filter(|&n| a.coeff(n).unwrap() != b.coeff(n).unwrap()).count();
    BoundReport::check(format!("{name}: two constructions agree through q^{}", trunc - 1), mismatches)
}

/// Dual-construction checks for ψ, φ, F_2, Δ and the ψφ = 1 identity.
pub fn dual_construction_suite(trunc: i64) -> Vec<BoundReport> {
    let psi = psi_series(trunc);
    let phi = phi_series(trunc);
    let mut out = vec![
        dual_construction_report("psi", &psi, &psi_via_delta_quotient(trunc)),
        dual_construction_report("phi", &phi, &phi_via_psi_inverse(trunc)),
        dual_construction_report("F2", &f2_series(trunc), &f2_via_e2(trunc)),
        dual_construction_report("Delta", &delta_series(trunc), &eta24_series(trunc)),
    ];
    let prod = &psi * &phi;
    out.push(dual_construction_report("psi*phi = 1", &prod, &QSeries::one(prod.trunc())));
    let integral = [&psi, &phi].iter().filter(|s| !s.is_integral()).count()
        + [f2_series(trunc), delta_series(trunc), s4_series(trunc), delta8_series(trunc)]
            .iter()
            .filter(|s| !s.is_integral())
            .count();
    out.push(BoundReport::check("psi, phi, F2, Delta, S4, Delta8 have integer coefficients", integral));
    out
}

/// Checks the j-coefficient envelope
/// `c(n) = e^{4π√n} / (√2 n^{3/4}) (1 - 3/(32π√n) + ε_n)` with `|ε_n| <= 0.055/n`
/// for `1 <= n <= n_max`. The certified value is `max_n n|ε_n|`.
pub fn check_bp_envelope(n_max: u32) -> Result<BoundReport> {
    let j = j_series(n_max as i64 + 1);
    let prec = default_precision();
    let mut worst = 0f64;
    let mut worst_n = 0;
    for n in 1..=n_max {
        let c = j.int_coeff(n as i64)?;
        let v = with_precision_retry(prec, |p| {
            let eps = bp_epsilon(&c, n, p);
            let scaled = eps.abs().mul_i64(n as i64);
            let limit = Ball::from_decimal("0.055", p);
            match scaled.lt(&limit) {
                Some(true) => Some(Some(scaled.upper_f64())),
                Some(false) => Some(None),
                None => None,
            }
        })?;
        match v {
            Some(x) => {
                if x > worst {
                    worst = x;
                    worst_n = n;
                }
            }
            None => {
                return Ok(BoundReport::upper(format!("j envelope: n|eps_n| <= 0.055 fails at n = {n}"), f64::INFINITY, 0.055));
            }
        }
    }
    Ok(BoundReport::upper(format!("j envelope: max n|eps_n| over 1 <= n <= {n_max}"), worst, 0.055)
        .with_note(format!("worst at n = {worst_n}")))
}

/// `ε_n = c(n) √2 n^{3/4} e^{-4π√n} - 1 + 3/(32π√n)`.
pub fn bp_epsilon(c: &Integer, n: u32, prec: u32) -> Ball {
    let pi = Ball::pi(prec);
    let nb = Ball::from_i64(n as i64, prec);
    let sn = nb.sqrt().unwrap();
    let n34 = nb.mul(&sn).sqrt().unwrap();
    let two = Ball::from_i64(2, prec).sqrt().unwrap();
    let e = pi.mul(&sn).mul_i64(-4).exp();
    let main = Ball::from_integer(c, prec).mul(&two).mul(&n34).mul(&e);
    let corr = Ball::from_i64(3, prec).div(&pi.mul(&sn).mul_i64(32)).unwrap();
    main.sub(&Ball::from_i64(1, prec)).add(&corr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_first_coefficients() {
        let d = delta_series(12);
        let tau = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612];
        for (i, t) in tau.iter().enumerate() {
            assert_eq!(d.int_coeff(i as i64 + 1).unwrap(), *t);
        }
        assert_eq!(d.trunc(), 12);
    }

    #[test]
    fn psi_phi_leading_terms() {
        let psi = psi_series(10);
        assert_eq!(psi.valuation(), -1);
        assert_eq!(psi.int_coeff(-1).unwrap(), 1);
        assert_eq!(psi.int_coeff(0).unwrap(), -24);
        assert_eq!(psi.int_coeff(1).unwrap(), 276);
        let phi = phi_series(10);
        assert_eq!(phi.int_coeff(1).unwrap(), 1);
        assert_eq!(phi.int_coeff(2).unwrap(), 24);
        assert_eq!(psi_via_delta_quotient(10), psi);
        assert_eq!(phi_via_psi_inverse(10), phi);
    }

    #[test]
    fn eisenstein_and_level_two_forms() {
        let e4 = eisenstein_series(4, 5).unwrap();
        assert_eq!(e4.coeff(0).unwrap(), 1);
        assert_eq!(e4.coeff(1).unwrap(), 240);
        assert_eq!(eisenstein_series(2, 3).unwrap().coeff(1).unwrap(), -24);
        assert!(eisenstein_series(3, 5).is_err());
        assert!(eisenstein_series(0, 5).is_err());
        let f2 = f2_series(6);
        assert_eq!(f2.coeff(3).unwrap(), 96);
        assert_eq!(f2, f2_via_e2(6));
        let s4 = s4_series(6);
        assert_eq!(s4.valuation(), 1);
        assert_eq!(s4.coeff(1).unwrap(), 1);
        // (240*(sigma_3(2) - sigma_3(1)))/240 = 9 - 1 = 8
        assert_eq!(s4.coeff(2).unwrap(), 8);
    }

    #[test]
    fn delta8_cube_is_delta_product() {
        let d8 = delta8_series(20);
        assert_eq!(d8.leading_exponent(), Some(1));
        assert_eq!(d8.int_coeff(2).unwrap(), -8);
        let d = delta_series(20);
        let rhs = &d * &d.apply_vd(2);
        let lhs = d8.pow(3);
        assert_eq!(lhs.truncate(rhs.trunc()), rhs.truncate(lhs.trunc()));
    }

    #[test]
    fn j_leading_coefficients() {
        let j = j_series(4);
        assert_eq!(j.int_coeff(-1).unwrap(), 1);
        assert_eq!(j.int_coeff(0).unwrap(), 744);
        assert_eq!(j.int_coeff(1).unwrap(), 196884);
        assert_eq!(j.int_coeff(2).unwrap(), 21493760);
    }

    #[test]
    fn names_parse() {
        assert_eq!("psi".parse::<FormName>().unwrap(), FormName::Psi);
        assert_eq!("E4".parse::<FormName>().unwrap(), FormName::Eisenstein(4));
        assert_eq!("eisenstein:12".parse::<FormName>().unwrap(), FormName::Eisenstein(12));
        assert_eq!("fkm:12,2".parse::<FormName>().unwrap(), FormName::Fkm(12, 2));
        assert!("fkm:12,3".parse::<FormName>().is_err());
        assert!("nope".parse::<FormName>().is_err());
        for n in ["eta24", "delta", "psi", "phi", "e6", "f2", "s4", "delta8", "j", "fkm:16,3"] {
            assert_eq!(n.parse::<FormName>().unwrap().to_string(), n);
        }
    }
}
