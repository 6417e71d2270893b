//! Certified bounds on the lines `Im z = 0.865` and `Im τ = 1.16` that feed the
//! coefficient envelopes, checked against their published values.

use rug::Rational;

use super::ball::{default_precision, Ball, CBall};
use super::eval::Expansion;
use super::grid::{grid_extremum, GridResult, LineExpr, Mode};
use super::tail::{MajorantTerm, TailKind};
use crate::error::Result;
use crate::forms::{eisenstein_series, f2_series, phi_series, psi_series, s4_series};
use crate::report::{BoundReport, Provenance};
use crate::series::QSeries;

pub const Y: &str = "0.865";
pub const V: &str = "1.16";

/// Grid densities and truncation for the suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub trunc: i64,
    /// Grid count for every extremum except the `S_4(τ)` minimum.
    pub grid: u64,
    pub grid_s4: u64,
    pub prec: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trunc: 80, grid: 40000, grid_s4: 20000, prec: default_precision() }
    }
}

/// All certified line bounds. `z = x + 0.865i`, `τ = u + 1.16i`, `|x|, |u| <= 1/2`.
#[derive(Clone, Debug)]
pub struct LineBounds {
    pub f2_z: f64,
    pub f2_tau: f64,
    pub s4_z: f64,
    pub s4_tau_min: GridResult,
    pub psi_z: GridResult,
    pub psi_tau_min: GridResult,
    pub phi_half: f64,
    pub z_abs: f64,
    pub f2_half_scaled: f64,
    pub e4_half: GridResult,
    pub e4_half_shift: GridResult,
    pub e2_half_shift: GridResult,
    pub phi_z: f64,
    pub psi_half: GridResult,
    pub psi_deriv: f64,
    pub s4_deriv: f64,
    /// The same derivative bound with the majorant `n³ + n⁵` in place of the exact coefficients.
    pub s4_deriv_majorant: f64,
}

/// `f(q) -> f(-q)`, i.e. the expansion of `f(z/2 + 1/2)` in `e^{πiz}`.
fn twist(s: &QSeries) -> QSeries {
    let coeffs: Vec<Rational> = s
        .terms()
        .map(|(n, c)| if n.rem_euclid(2) == 1 { -c } else { c })
        .collect();
    QSeries::from_rationals(s.valuation(), &coeffs, s.trunc()).expect("twist keeps shape")
}

struct Expansions {
    f2: Expansion,
    s4: Expansion,
    psi: Expansion,
    phi: Expansion,
    /// `E_4(z) - E_4(z/2)/16` in `e^{πiz}`.
    e4_half: Expansion,
    /// `E_4(z) - E_4(z/2 + 1/2)/16` in `e^{πiz}`.
    e4_half_shift: Expansion,
    /// `E_2(z/2 + 1/2)/2 - E_2(z)` in `e^{πiz}`.
    e2_half_shift: Expansion,
}

fn expansions(t: i64) -> Result<Expansions> {
    let e4 = eisenstein_series(4, 2 * t)?;
    let e4_v2 = e4.apply_vd(2).truncate(2 * t);
    let sixteenth = Rational::from((1, 16));
    let e2 = eisenstein_series(2, 2 * t)?;
    let e2_v2 = e2.apply_vd(2).truncate(2 * t);
    Ok(Expansions {
        f2: Expansion::new(f2_series(t), TailKind::SigmaPoly, 24.0),
        // |σ_3(n) - σ_3(n/2)| <= σ_3(n) <= n³ + n⁵
        s4: Expansion::new(s4_series(t), TailKind::SigmaCubicQuintic, 1.0),
        psi: Expansion::new(psi_series(t), TailKind::HauptmodulS, 1.0),
        phi: Expansion::new(phi_series(t), TailKind::HauptmodulB, 1.0),
        // 240 σ_3(n/2) + 15 σ_3(n) <= 255 σ_3(n)
        e4_half: Expansion::new(&e4_v2 - &e4.scale(&sixteenth), TailKind::SigmaCubicQuintic, 255.0),
        e4_half_shift: Expansion::new(&e4_v2 - &twist(&e4).scale(&sixteenth), TailKind::SigmaCubicQuintic, 255.0),
        // 12 σ(n) + 24 σ(n/2) <= 36 σ(n) < 36 (n + n²)
        e2_half_shift: Expansion::new(&twist(&e2).scale(&Rational::from((1, 2))) - &e2_v2, TailKind::SigmaPoly, 36.0),
    })
}

pub fn line_bounds(cfg: &SuiteConfig) -> Result<LineBounds> {
    let p = cfg.prec;
    let y = Ball::from_decimal(Y, p);
    let v = Ball::from_decimal(V, p);
    let ex = expansions(cfg.trunc)?;
    let full = |e: &Expansion| LineExpr::series(e.prepare(p, false));
    let half = |e: &Expansion| LineExpr::series(e.prepare(p, true));
    let c = |r: Rational| LineExpr::Const(Ball::from_rational(&r, p));
    let poly = |c: i64, k: u32| LineExpr::Poly { c: Rational::from(c), k };
    let sup = |e: &LineExpr, at: &Ball| -> Result<f64> { Ok(e.sup_abs(at)?.upper_f64()) };

    let f2_z = sup(&full(&ex.f2), &y)?;
    let f2_tau = sup(&full(&ex.f2), &v)?;
    let s4_z = sup(&full(&ex.s4), &y)?;
    let s4_tau_min = grid_extremum(&full(&ex.s4), &v, cfg.grid_s4, Mode::Min)?;
    let psi_z = grid_extremum(&full(&ex.psi), &y, cfg.grid, Mode::Max)?;
    let psi_tau_min = grid_extremum(&full(&ex.psi), &v, cfg.grid, Mode::Min)?;
    let phi_half = sup(&half(&ex.phi), &y)?;
    let z_abs = CBall::new(Ball::from_rational(&Rational::from((1, 2)), p), y.clone()).abs().upper_f64();
    let f2_half_scaled = sup(&LineExpr::Product(vec![poly(0, 2), c(Rational::from((1, 2))), half(&ex.f2)]), &y)?;
    let e4_half = grid_extremum(
        &LineExpr::Product(vec![poly(0, 4), c(Rational::from((1, 240))), half(&ex.e4_half)]),
        &y,
        cfg.grid,
        Mode::Max,
    )?;
    let e4_half_shift = grid_extremum(
        &LineExpr::Product(vec![poly(1, 4), c(Rational::from((1, 240))), half(&ex.e4_half_shift)]),
        &y,
        cfg.grid,
        Mode::Max,
    )?;
    let e2_half_shift = grid_extremum(&LineExpr::Product(vec![poly(1, 2), half(&ex.e2_half_shift)]), &y, cfg.grid, Mode::Max)?;
    let phi_z = sup(&full(&ex.phi), &y)?;
    let psi_half = grid_extremum(&half(&ex.psi), &y, cfg.grid, Mode::Max)?;
    let psi_deriv = full(&ex.psi).deriv_sup(&y)?.upper_f64();
    let s4_deriv = full(&ex.s4).deriv_sup(&v)?.upper_f64();
    // 2π sum (n³ + n⁵) e^{-2πnv}: coefficients n² + n⁴, weighted by n.
    let explicit: Vec<i64> = (0..60i64).map(|n| if n == 0 { 0 } else { n * n + n.pow(4) }).collect();
    let majorant = Expansion::new(
        QSeries::from_i64(0, &explicit, 60)?,
        TailKind::Custom(vec![MajorantTerm::poly(1.0, 2), MajorantTerm::poly(1.0, 4)]),
        1.0,
    );
    let s4_deriv_majorant = LineExpr::series(majorant.prepare(p, false)).deriv_sup(&v)?.upper_f64();
    Ok(LineBounds {
        f2_z,
        f2_tau,
        s4_z,
        s4_tau_min,
        psi_z,
        psi_tau_min,
        phi_half,
        z_abs,
        f2_half_scaled,
        e4_half,
        e4_half_shift,
        e2_half_shift,
        phi_z,
        psi_half,
        psi_deriv,
        s4_deriv,
        s4_deriv_majorant,
    })
}

/// Published values of the line bounds, in the order reported.
pub const PUBLISHED: [(&str, f64); 14] = [
    ("|F2(z)|", 1.10514),
    ("|F2(tau)|", 1.01642),
    ("|S4(z)|", 0.00452),
    ("|S4(tau)|", 0.00067),
    ("|psi(z)|", 254.56248),
    ("|psi(tau)|", 1439.51688),
    ("|phi(z/2)|", 0.34276),
    ("|z^2/2 F2(z/2)|", 1.35659),
    ("|z^4/240 (E4(z) - E4(z/2)/16)|", 0.0042),
    ("|(z-1)^4/240 (E4(z) - E4(z/2+1/2)/16)|", 0.044063),
    ("|(z-1)^2 (E2(z/2+1/2)/2 - E2(z))|", 2.69392),
    ("|phi(z)|", 0.00486),
    ("|psi(z/2)|", 15.95619),
    ("|z|", 0.99912),
];

pub const PSI_GRID_SAMPLE_MAX: f64 = 254.52626;
pub const PSI_DERIV: f64 = 1448.69599;
pub const S4_DERIV: f64 = 0.00871;

fn grid_note(g: &GridResult) -> String {
    format!(
        "{} grid points, sample {:.9} at x = {:.6}, |f'| <= {:.6}, correction {:.3e}",
        g.points, g.sample_value, g.sample_x, g.deriv_bound, g.correction
    )
}

/// Every line bound as a report: upper bounds must not exceed the published
/// value by more than 1%, lower bounds must not fall below it by more than 1%.
pub fn published_constants_suite(cfg: &SuiteConfig) -> Result<Vec<BoundReport>> {
    let b = line_bounds(cfg)?;
    Ok(suite_reports(&b))
}

pub fn suite_reports(b: &LineBounds) -> Vec<BoundReport> {
    let tol = 0.01;
    let up = |i: usize, v: f64, note: String| {
        let (name, r) = PUBLISHED[i];
        let on = if name.contains("tau") { "Im tau = 1.16" } else { "Im z = 0.865" };
        BoundReport::reproduce_upper(format!("{name} <= {r} on {on}"), v, r, tol).with_note(note)
    };
    let sum_note = || "coefficient absolute sum with certified tail".to_string();
    let mut out = vec![
        up(0, b.f2_z, sum_note()),
        up(1, b.f2_tau, sum_note()),
        up(2, b.s4_z, sum_note()),
        BoundReport::reproduce_lower(format!("{} >= {} on Im tau = 1.16", PUBLISHED[3].0, PUBLISHED[3].1), b.s4_tau_min.certified, PUBLISHED[3].1, tol)
            .with_note(grid_note(&b.s4_tau_min)),
        up(4, b.psi_z.certified, grid_note(&b.psi_z)),
        BoundReport::reproduce_lower(format!("{} >= {} on Im tau = 1.16", PUBLISHED[5].0, PUBLISHED[5].1), b.psi_tau_min.certified, PUBLISHED[5].1, tol)
            .with_note(grid_note(&b.psi_tau_min)),
        up(6, b.phi_half, sum_note()),
        up(7, b.f2_half_scaled, "product of suprema".to_string()),
        up(8, b.e4_half.certified, grid_note(&b.e4_half)),
        up(9, b.e4_half_shift.certified, grid_note(&b.e4_half_shift)),
        up(10, b.e2_half_shift.certified, grid_note(&b.e2_half_shift)),
        up(11, b.phi_z, sum_note()),
        up(12, b.psi_half.certified, grid_note(&b.psi_half)),
        up(13, b.z_abs, "|1/2 + 0.865i|".to_string()),
    ];
    out.push(BoundReport::agree(
        "|psi(z)| grid sample maximum matches published sample",
        b.psi_z.sample_value,
        PSI_GRID_SAMPLE_MAX,
        0.001,
        Provenance::Published,
    ));
    out.push(BoundReport::reproduce_upper("|psi'(z)| <= 1448.69599 on Im z = 0.865", b.psi_deriv, PSI_DERIV, 1e-3));
    out.push(BoundReport::lower("|psi'(z)| bound includes the dominant terms", b.psi_deriv, 1448.0));
    out.push(
        BoundReport::reproduce_upper("|S4'(tau)| <= 0.00871 on Im tau = 1.16", b.s4_deriv, S4_DERIV, 0.01)
            .with_note(format!("exact coefficients; with the n^3 + n^5 majorant the bound is {:.7}", b.s4_deriv_majorant)),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_flips_odd_exponents() {
        let s = QSeries::from_i64(0, &[1, 2, 3, 4], 4).unwrap();
        let t = twist(&s);
        assert_eq!(t.int_coeff(1).unwrap(), -2);
        assert_eq!(t.int_coeff(2).unwrap(), 3);
    }

    #[test]
    fn coarse_suite_is_close() {
        let cfg = SuiteConfig { trunc: 60, grid: 400, grid_s4: 400, prec: 128 };
        let b = line_bounds(&cfg).unwrap();
        assert!((b.f2_z - 1.1051388).abs() < 1e-6, "{}", b.f2_z);
        assert!((b.psi_deriv - 1448.695983).abs() < 1e-4, "{}", b.psi_deriv);
        assert!(b.s4_deriv < 0.0044);
        assert!((b.s4_deriv_majorant - 0.0087052).abs() < 1e-6, "{}", b.s4_deriv_majorant);
    }
}
