//! The echelon basis `F_{k,m} = q^m + O(q^ell)` of weight-k cusp forms on Γ₀(2).

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::forms::{delta8_series, f2_series, phi_series, psi_series, s4_series};
use crate::report::BoundReport;
use crate::series::QSeries;

/// Dimension of `S_k(Γ₀(2))`: `floor(k/4) - 1` for even `k >= 8`, zero for even `k < 8`.
pub fn dim_sk2(k: u32) -> usize {
    if k % 2 == 1 || k < 8 {
        return 0;
    }
    (k / 4 - 1) as usize
}

fn check_weight(k: u32) -> Result<()> {
    if k % 2 == 1 || k < 8 {
        return Err(Error::InvalidArgument(format!("even k >= 8 required, got {k}")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EchelonBasis {
    pub k: u32,
    pub ell: u32,
    pub kprime: u32,
    /// `forms[m - 1]` is `F_{k,m}`.
    pub forms: Vec<QSeries>,
}

impl EchelonBasis {
    pub fn form(&self, m: usize) -> Result<&QSeries> {
        if m == 0 || m > self.forms.len() {
            return Err(Error::InvalidArgument(format!("m = {m} outside 1..={}", self.forms.len())));
        }
        Ok(&self.forms[m - 1])
    }

    pub fn trunc(&self) -> i64 {
        self.forms.iter().map(|f| f.trunc()).min().unwrap_or(0)
    }

    /// Denominators of the forms; all ones means every `A_k(m, n)` is integral.
    pub fn denominators(&self) -> Vec<Integer> {
        self.forms.iter().map(|f| f.denominator().clone()).collect()
    }

    /// Verifies the echelon shape: `F_{k,m}` is `q^m` plus terms at exponents `>= ell`.
    pub fn check_echelon(&self) -> Result<()> {
        let ell = self.ell as i64;
        if self.forms.len() != dim_sk2(self.k) {
            return Err(Error::Internal(format!("k = {}: {} forms, expected {}", self.k, self.forms.len(), dim_sk2(self.k))));
        }
        for (i, f) in self.forms.iter().enumerate() {
            let m = i as i64 + 1;
            for n in f.valuation().min(0)..ell {
                let want = if n == m { 1 } else { 0 };
                if f.coeff(n)? != want {
                    return Err(Error::Internal(format!("k = {}: F_m with m = {m} has coefficient {} at q^{n}", self.k, f.coeff(n)?)));
                }
            }
        }
        Ok(())
    }
}

/// Generators `Δ8 F_2^i S_4^j` with `2i + 4j = k - 8`, truncated to `trunc`.
pub fn spanning_set(k: u32, trunc: i64) -> Result<Vec<QSeries>> {
    check_weight(k)?;
    let d8 = delta8_series(trunc);
    let f2 = f2_series(trunc);
    let s4 = s4_series(trunc);
    let mut out = Vec::new();
    let rest = k - 8;
    for j in 0..=rest / 4 {
        let i = (rest - 4 * j) / 2;
        let g = &(&d8 * &f2.pow(i)) * &s4.pow(j);
        out.push(g.truncate(trunc));
    }
    Ok(out)
}

/// Row-reduces `rows` (integer vectors) fraction-free to reduced echelon form,
/// pivoting in increasing column. Returns `(pivot column, row)` pairs.
fn reduce_fraction_free(mut rows: Vec<Vec<Integer>>) -> Vec<(usize, Vec<Integer>)> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots: Vec<(usize, Vec<Integer>)> = Vec::new();
    for col in 0..ncols {
        let Some(pos) = rows.iter().position(|r| r[col] != 0) else { continue };
        let prow = rows.swap_remove(pos);
        let p = prow[col].clone();
        let eliminate = |r: &mut Vec<Integer>| {
            if r[col] == 0 {
                return;
            }
            let c = r[col].clone();
            for (x, y) in r.iter_mut().zip(prow.iter()) {
                *x *= &p;
                *x -= Integer::from(&c * y);
            }
            remove_content(r);
        };
        for r in rows.iter_mut() {
            eliminate(r);
        }
        for (_, r) in pivots.iter_mut() {
            eliminate(r);
        }
        pivots.push((col, prow));
    }
    pivots
}

fn remove_content(r: &mut [Integer]) {
    let mut g = Integer::new();
    for x in r.iter() {
        g.gcd_mut(x);
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for x in r.iter_mut() {
            x.div_exact_mut(&g);
        }
    }
}

/// Echelon basis known through `q^{trunc-1}`.
pub fn echelon_basis(k: u32, trunc: i64) -> Result<EchelonBasis> {
    check_weight(k)?;
    let ell = k / 4;
    if trunc < ell as i64 + 1 {
        return Err(Error::InvalidArgument(format!("trunc must exceed ell = {ell}")));
    }
    let gens = spanning_set(k, trunc)?;
    // Common window: exponents 0..trunc, scaled to integer rows.
    let rows: Vec<Vec<Integer>> = gens
        .iter()
        .map(|g| {
            let den = g.denominator();
            (0..trunc)
                .map(|n| {
                    let c = g.coeff(n).unwrap();
                    c.numer() * Integer::from(den / c.denom())
                })
                .collect()
        })
        .collect();
    let mut reduced = reduce_fraction_free(rows);
    reduced.sort_by_key(|(c, _)| *c);
    let dim = dim_sk2(k);
    let cols: Vec<usize> = reduced.iter().map(|(c, _)| *c).collect();
    if reduced.len() != dim || cols != (1..=dim).collect::<Vec<_>>() {
        return Err(Error::Internal(format!("k = {k}: spanning set reduced to pivots {cols:?}, expected 1..={dim}")));
    }
    let forms = reduced
        .into_iter()
        .map(|(col, row)| {
            let p = row[col].clone();
            let coeffs: Vec<Rational> = row.into_iter().map(|x| Rational::from((x, p.clone()))).collect();
            QSeries::from_rationals(0, &coeffs, trunc).map(|s| s.strip_leading_zeros())
        })
        .collect::<Result<Vec<_>>>()?;
    let basis = EchelonBasis { k, ell, kprime: k - 4 * ell, forms };
    basis.check_echelon()?;
    Ok(basis)
}

/// `sum_m a[m-1] F_{k,m}`.
pub fn expand_linear_combo(k: u32, a: &[Rational], trunc: i64) -> Result<QSeries> {
    let dim = dim_sk2(k);
    check_weight(k)?;
    if a.len() != dim {
        return Err(Error::InvalidArgument(format!("expected {dim} coefficients for k = {k}, got {}", a.len())));
    }
    let basis = echelon_basis(k, trunc)?;
    Ok(combine(&basis, a))
}

/// Linear combination over an already computed basis.
pub fn combine(basis: &EchelonBasis, a: &[Rational]) -> QSeries {
    let mut acc = QSeries::zero(basis.trunc());
    for (f, c) in basis.forms.iter().zip(a) {
        if *c != 0 {
            acc = &acc + &f.scale(c);
        }
    }
    acc
}

/// Expands the two-variable generating function of the basis in `p = e^{2πiτ}`
/// (for Im τ above Im z) and compares the coefficient of `p^{-m}` with
/// `F_{k,m}` through `q^{t_q}`. Integrating the generating function against
/// `e^{2πimτ}` over a horizontal period selects exactly that coefficient.
///
/// With `H = S_4^ell ψ F_{k'}` (`F_0 = 1`) and `K = F_2 / (S_4^ell F_{k'})`,
/// `ψ(τ)/(ψ(τ) - ψ(z)) = sum_j ψ(z)^j φ(τ)^j` gives the `p^{-m}` coefficient
/// `H(z) sum_j c_{m,j} ψ(z)^j` with `c_{m,j} = [p^{-m}] K φ^{j+1}`; only
/// `j <= ell - 1 - m` contribute.
pub fn genfunc_crosscheck(k: u32, t_q: i64, t_p: i64) -> Result<BoundReport> {
    check_weight(k)?;
    let ell = (k / 4) as i64;
    let kprime = k - 4 * ell as u32;
    let basis = echelon_basis(k, t_q + 1)?;
    let fk = |t: i64| if kprime == 0 { QSeries::one(t) } else { f2_series(t) };

    // p-side: K phi^{j+1} only needs exponents up to 0.
    let tp = t_p.max(ell + 2) + 2 * ell;
    let s4p = s4_series(tp);
    let denom = &s4p.pow(ell as u32) * &fk(tp);
    let kser = &f2_series(tp) * &denom.invert()?;
    let phi = phi_series(tp);
    let max_j = ell - 1;
    let mut phipow = phi.clone();
    // c[m][j] for m = 0..ell-1
    let mut c: Vec<Vec<Rational>> = vec![Vec::new(); ell as usize];
    for _j in 0..=max_j {
        let prod = &kser * &phipow;
        for (m, row) in c.iter_mut().enumerate() {
            row.push(prod.coeff(-(m as i64))?);
        }
        phipow = &phipow * &phi;
    }

    // q-side: H and powers of psi.
    let tq = t_q + 2 * ell + 4;
    let s4q = s4_series(tq);
    let psi = psi_series(tq);
    let h = &(&s4q.pow(ell as u32) * &psi) * &fk(tq);
    let mut psipow = vec![QSeries::one(tq + 2 * ell)];
    for j in 1..=max_j as usize {
        let next = &psipow[j - 1] * &psi;
        psipow.push(next);
    }

    let mut failures = Vec::new();
    let mut p0_valuation = None;
    for m in 0..ell {
        let mut acc = QSeries::zero(tq);
        for (j, cj) in c[m as usize].iter().enumerate() {
            if *cj != 0 {
                acc = &acc + &(&h * &psipow[j]).scale(cj);
            }
        }
        if acc.trunc() <= t_q {
            return Err(Error::Internal(format!("generating-function expansion only known below q^{}", acc.trunc())));
        }
        if m == 0 {
            p0_valuation = acc.leading_exponent();
            continue;
        }
        let f = basis.form(m as usize)?;
        for n in acc.valuation().min(f.valuation())..=t_q {
            if acc.coeff(n)? != f.coeff(n)? {
                failures.push((m, n));
            }
        }
    }
    let mut report = BoundReport::check(
        format!("k = {k}: generating-function coefficient of p^-m equals F_(k,m) through q^{t_q}"),
        failures.len(),
    );
    let note = match failures.first() {
        Some((m, n)) => format!("first mismatch at (m, n) = ({m}, {n})"),
        None => format!("p^0 coefficient has q-valuation {}", p0_valuation.map_or("none".into(), |v| v.to_string())),
    };
    report = report.with_note(note);
    if p0_valuation.is_some_and(|v| v > 0) {
        report.pass = false;
        report.margin = -1.0;
    }
    Ok(report)
}

/// Echelon shape for every even `8 <= k <= k_max`, plus the largest
/// denominator seen (1 means all coefficients are integers).
pub fn echelon_reports(k_max: u32, trunc: i64) -> Result<Vec<BoundReport>> {
    use rayon::prelude::*;
    let ks: Vec<u32> = (8..=k_max).step_by(2).collect();
    let results: Vec<(u32, bool, Integer)> = ks
        .par_iter()
        .map(|&k| {
            let b = echelon_basis(k, trunc.max(k as i64 / 4 + 2))?;
            let den = b.denominators().into_iter().max().unwrap_or_else(|| Integer::from(1));
            Ok((k, b.check_echelon().is_ok(), den))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<u32> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    let max_den = results.iter().map(|r| r.2.clone()).max().unwrap_or_else(|| Integer::from(1));
    let mut note = format!("largest coefficient denominator {max_den}");
    if !bad.is_empty() {
        note.push_str(&format!("; fails at k = {bad:?}"));
    }
    Ok(vec![BoundReport::check(format!("F_(k,m) = q^m + O(q^ell) for even 8 <= k <= {k_max}"), bad.len()).with_note(note)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(dim_sk2(8), 1);
        assert_eq!(dim_sk2(10), 1);
        assert_eq!(dim_sk2(40), 9);
        assert_eq!(dim_sk2(6), 0);
        assert_eq!(dim_sk2(2), 0);
    }

    #[test]
    fn weight_eight_is_delta8() {
        let b = echelon_basis(8, 30).unwrap();
        assert_eq!(b.forms.len(), 1);
        assert_eq!(b.forms[0], delta8_series(30));
        assert_eq!(b.forms[0].coeff(2).unwrap(), -8);
    }

    #[test]
    fn weight_twelve_shape() {
        let b = echelon_basis(12, 20).unwrap();
        assert_eq!(b.forms.len(), 2);
        assert_eq!(b.forms[0].valuation(), 1);
        assert_eq!(b.forms[1].valuation(), 2);
        assert_eq!(b.forms[0].coeff(2).unwrap(), 0);
        assert_eq!(b.ell, 3);
    }

    #[test]
    fn linear_combo_round_trip() {
        let a = vec![Rational::from(1), Rational::from(0), Rational::from(-24)];
        let g = expand_linear_combo(16, &a, 25).unwrap();
        for (m, c) in a.iter().enumerate() {
            assert_eq!(g.coeff(m as i64 + 1).unwrap(), *c);
        }
        assert!(expand_linear_combo(16, &a[..2], 25).is_err());
        let zero = expand_linear_combo(16, &[Rational::new(), Rational::new(), Rational::new()], 25).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn genfunc_small_weights() {
        for k in [8, 10, 12] {
            let r = genfunc_crosscheck(k, 12, 8).unwrap();
            assert!(r.pass, "{}", r.summary());
        }
    }
}
