use cuspbound::envelopes::theorem::theorem1_bound;
use cuspbound::partitions::q_table;
use cuspbound::report::{BoundReport, ReportDocument};
use cuspbound::rigor::ball::Ball;
use cuspbound::rigor::suite::{line_bounds, SuiteConfig};
use cuspbound::{MulStrategy, QSeries};
use proptest::prelude::*;
use rug::{Integer, Rational};

fn series(valuation: i64, len: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-50i64..=50, len).prop_map(move |c| QSeries::from_i64(valuation, &c, valuation + len as i64).unwrap())
}

fn unit_series(len: usize) -> impl Strategy<Value = QSeries> {
    (prop::sample::select(vec![-3i64, -1, 1, 2, 5]), prop::collection::vec(-20i64..=20, len - 1)).prop_map(move |(c0, rest)| {
        let mut c = vec![c0];
        c.extend(rest);
        QSeries::from_i64(0, &c, len as i64).unwrap()
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..=10_000, 1i64..=997).prop_map(|(p, q)| Rational::from((p, q)))
}

fn encloses(b: &Ball, x: &Rational) -> bool {
    b.lower() <= *x && b.upper() >= *x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative_and_associative(a in series(0, 20), b in series(1, 20), c in series(-1, 20)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in series(0, 16), b in series(0, 16), c in series(0, 16)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn strategies_agree(a in series(0, 60), b in series(2, 60)) {
        let s = a.mul_with(&b, MulStrategy::Schoolbook);
        prop_assert_eq!(&s, &a.mul_with(&b, MulStrategy::Kronecker));
        prop_assert_eq!(&s, &a.mul_with(&b, MulStrategy::Auto));
    }

    #[test]
    fn inverse_is_two_sided(a in unit_series(24)) {
        let inv = a.invert().unwrap();
        prop_assert_eq!(&a * &inv, QSeries::one(24));
        prop_assert_eq!(inv.invert().unwrap(), a);
    }

    #[test]
    fn vd_is_a_ring_map(a in series(0, 12), b in series(1, 12), d in 1u32..5, e in 1u32..4) {
        prop_assert_eq!((&a * &b).apply_vd(d), &a.apply_vd(d) * &b.apply_vd(d));
        prop_assert_eq!(a.apply_vd(d).apply_vd(e), a.apply_vd(d * e));
    }

    #[test]
    fn csv_round_trips(a in series(-2, 15), den in 1i64..50) {
        let s = a.scale(&Rational::from((1, den)));
        prop_assert_eq!(QSeries::from_csv(&s.to_csv()).unwrap(), s);
    }

    #[test]
    fn balls_enclose_exact_arithmetic(x in rational(), y in rational()) {
        let p = 96;
        let (bx, by) = (Ball::from_rational(&x, p), Ball::from_rational(&y, p));
        prop_assert!(encloses(&bx.add(&by), &Rational::from(&x + &y)));
        prop_assert!(encloses(&bx.sub(&by), &Rational::from(&x - &y)));
        prop_assert!(encloses(&bx.mul(&by), &Rational::from(&x * &y)));
        if y != 0 {
            prop_assert!(encloses(&bx.div(&by).unwrap(), &Rational::from(&x / &y)));
        }
        prop_assert!(encloses(&bx.sqr(), &Rational::from(&x * &x)));
    }

    #[test]
    fn exp_and_log_are_inverse_on_balls(x in (1i64..=10_000, 1i64..=997).prop_map(|(p, q)| Rational::from((p, q)))) {
        let b = Ball::from_rational(&x, 128);
        prop_assert!(encloses(&b.ln().unwrap().exp(), &x));
        prop_assert!(encloses(&b.sqrt().unwrap().sqr(), &x));
    }

    #[test]
    fn explicit_bound_is_homogeneous_and_subadditive(
        k in prop::sample::select(vec![8u32, 12, 16, 20, 24]),
        seed in prop::collection::vec(-9i64..=9, 6),
        other in prop::collection::vec(-9i64..=9, 6),
        c in 1i64..20,
        n in 1u64..500,
    ) {
        let dim = cuspbound::basis::dim_sk2(k);
        let a: Vec<Rational> = seed.iter().cycle().take(dim).map(|&v| Rational::from(v)).collect();
        let b: Vec<Rational> = other.iter().cycle().take(dim).map(|&v| Rational::from(v)).collect();
        prop_assume!(a.iter().any(|v| *v != 0) && b.iter().any(|v| *v != 0));
        let ba = theorem1_bound(k, &a, n).unwrap();
        let ca: Vec<Rational> = a.iter().map(|v| Rational::from(v * c)).collect();
        let bca = theorem1_bound(k, &ca, n).unwrap();
        prop_assert!((bca / (c as f64 * ba) - 1.0).abs() < 1e-12);
        let sum: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| Rational::from(x + y)).collect();
        if sum.iter().any(|v| *v != 0) {
            prop_assert!(theorem1_bound(k, &sum, n).unwrap() <= (ba + theorem1_bound(k, &b, n).unwrap()) * (1.0 + 1e-12));
        }
        prop_assert!(theorem1_bound(k, &a, 2 * n).unwrap() > ba);
    }

    #[test]
    fn report_status_matches_margins(values in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..8)) {
        let reports: Vec<BoundReport> = values.iter().map(|&(v, t)| BoundReport::upper("p", v, t)).collect();
        for r in &reports {
            prop_assert_eq!(r.pass, r.margin >= 0.0);
        }
        let doc = ReportDocument::new("prop", 1, reports);
        prop_assert_eq!(doc.passed(), doc.reports.iter().all(|r| r.margin >= 0.0));
        prop_assert_eq!(ReportDocument::from_json(&doc.to_json()).unwrap(), doc);
    }
}

#[test]
fn distinct_partition_powers_convolve() {
    let n = 400;
    let as_series = |k: u32| QSeries::from_integers(0, q_table(k, n).unwrap(), n as i64 + 1).unwrap();
    for (a, b) in [(1, 1), (2, 2), (4, 4), (8, 8), (8, 16)] {
        assert_eq!(&as_series(a) * &as_series(b), as_series(a + b), "Q_{a} Q_{b}");
    }
    assert_eq!(q_table(1, 10).unwrap()[10], Integer::from(10));
}

#[test]
fn certified_extrema_bracket_grid_samples() {
    for grid in [200u64, 800] {
        let cfg = SuiteConfig { trunc: 60, grid, grid_s4: grid, prec: 128 };
        let b = line_bounds(&cfg).unwrap();
        for g in [&b.psi_z, &b.e4_half, &b.e4_half_shift, &b.e2_half_shift, &b.psi_half] {
            assert!(g.certified >= g.sample_value, "max at grid {grid}: {} < {}", g.certified, g.sample_value);
        }
        for g in [&b.s4_tau_min, &b.psi_tau_min] {
            assert!(g.certified <= g.sample_value, "min at grid {grid}: {} > {}", g.certified, g.sample_value);
        }
    }
}
