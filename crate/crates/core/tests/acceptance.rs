//! One line per acceptance criterion. Every criterion is evaluated before the
//! final assertion so the full table is always printed. Lines go straight to
//! stdout, which the test harness does not capture.

use std::io::Write;
use std::time::{Duration, Instant};

use cuspbound::basis::{echelon_reports, genfunc_crosscheck};
use cuspbound::envelopes::lfunc::{default_k_samples, LEVELS};
use cuspbound::envelopes::theorem::oracle_suite;
use cuspbound::envelopes::{envelope_reports, lfunc_constants_suite, lfunc_residue_identity, EnvelopeConstants};
use cuspbound::forms::{check_bp_envelope, dual_construction_suite};
use cuspbound::partitions::{chain_reports, verify_thm2_trend, verify_thm3, ChainInputs, PartitionTables};
use cuspbound::report::BoundReport;
use cuspbound::rigor::suite::{line_bounds, suite_reports, LineBounds, SuiteConfig};
use cuspbound::rigor::transform::{transformation_suite, DEFAULT_SEED};
use cuspbound::Result;

struct Outcome {
    pass: bool,
    detail: String,
    failures: Vec<String>,
}

fn outcome(reports: &[BoundReport], extra: Option<(bool, String)>) -> Outcome {
    let failures: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.summary()).collect();
    let mut detail = format!("{}/{} checks", reports.len() - failures.len(), reports.len());
    let mut pass = failures.is_empty() && !reports.is_empty();
    if let Some((ok, text)) = extra {
        pass &= ok;
        detail.push_str(&format!("; {text}"));
    }
    Outcome { pass, detail, failures }
}

fn errored(e: cuspbound::Error) -> Outcome {
    Outcome { pass: false, detail: format!("error: {e}"), failures: vec![] }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn line_constants(b: &LineBounds, elapsed: Duration) -> Outcome {
    let reports = suite_reports(b);
    let displayed = reports.iter().take(14).filter(|r| r.pass).count();
    outcome(&reports, Some((displayed >= 14 && elapsed < Duration::from_secs(300), format!("{displayed} displayed bounds reproduced in {:.1?}", elapsed))))
}

fn envelopes(b: &LineBounds) -> Result<Outcome> {
    let env = EnvelopeConstants::from_line_bounds(b)?;
    let s = &env.sectors;
    Ok(outcome(
        &envelope_reports(&env),
        Some((true, format!("({:.4}, {:.4}), ({:.3}, {:.4}), ({:.4}, {:.3})", s[0].c1, s[0].c2, s[1].c1, s[1].c2, s[2].c1, s[2].c2))),
    ))
}

fn chain() -> Result<Outcome> {
    let tables = PartitionTables::build(3000);
    let mut reports = chain_reports(ChainInputs::Published, 3000, &tables)?;
    reports.extend(chain_reports(ChainInputs::Recomputed, 3000, &tables)?);
    Ok(outcome(&reports, None))
}

fn growth_envelopes() -> Result<Outcome> {
    let (reports, elapsed) = timed(|| verify_thm3(2000));
    Ok(outcome(&reports?, Some((elapsed < Duration::from_secs(60), format!("{:.1?}", elapsed)))))
}

fn asymptotic_trend() -> Result<Outcome> {
    let t = verify_thm2_trend(4000)?;
    Ok(outcome(&t.reports(), Some((true, format!("s ratios {:.4?}, b ratios {:.4?}", t.s_ratios, t.b_ratios)))))
}

fn basis() -> Result<Outcome> {
    let mut reports = echelon_reports(60, 40)?;
    for k in [8, 10, 12, 16, 20] {
        reports.push(genfunc_crosscheck(k, 20, 8)?);
    }
    Ok(outcome(&reports, None))
}

fn oracle() -> Result<Outcome> {
    let count = 60;
    let reports = oracle_suite(DEFAULT_SEED, count, 40, 200)?;
    let worst = reports.get(1).map(|r| r.certified_value).unwrap_or(f64::NAN);
    Ok(outcome(&reports, Some((count >= 50, format!("{count} instances, worst ratio {worst:.3e}")))))
}

fn lfunc() -> Result<Outcome> {
    let mut reports = Vec::new();
    for x in [2.0, 48.0, 1000.0] {
        reports.push(lfunc_residue_identity(x)?);
    }
    reports.extend(lfunc_constants_suite(&default_k_samples(), &LEVELS)?);
    Ok(outcome(&reports, None))
}

fn bp_envelope() -> Result<Outcome> {
    Ok(outcome(&[check_bp_envelope(300)?], None))
}

fn identities() -> Result<Outcome> {
    let mut reports = dual_construction_suite(121);
    let transforms = transformation_suite(DEFAULT_SEED, 10, 1e-8)?;
    let n = transforms.len();
    reports.extend(transforms);
    Ok(outcome(&reports, Some((n >= 6, format!("{n} transformation identities")))))
}

#[test]
fn acceptance() {
    let (bounds, elapsed) = timed(|| line_bounds(&SuiteConfig::default()));
    let criteria: Vec<(&str, Outcome)> = vec![
        (
            "certified line constants at M = 40000",
            match &bounds {
                Ok(b) => line_constants(b, elapsed),
                Err(e) => errored(e.clone()),
            },
        ),
        (
            "envelope triples within 2%",
            match &bounds {
                Ok(b) => envelopes(b).unwrap_or_else(errored),
                Err(e) => errored(e.clone()),
            },
        ),
        ("partition envelope chain and exact tables to 3000", chain().unwrap_or_else(errored)),
        ("psi and phi coefficient envelopes for n <= 2000", growth_envelopes().unwrap_or_else(errored)),
        ("asymptotic ratio trend at 1000, 2000, 4000", asymptotic_trend().unwrap_or_else(errored)),
        ("echelon basis k <= 60 and generating function through q^20", basis().unwrap_or_else(errored)),
        ("explicit bound on random forms", oracle().unwrap_or_else(errored)),
        ("L-function numeric constants", lfunc().unwrap_or_else(errored)),
        ("|eps_n| <= 0.055/n for n <= 300", bp_envelope().unwrap_or_else(errored)),
        ("dual constructions to T = 120 and transformation identities", identities().unwrap_or_else(errored)),
    ];
    let mut all = true;
    let mut table = String::from("\n");
    for (i, (name, o)) in criteria.iter().enumerate() {
        table.push_str(&format!("criterion {:>2}: {} {name} ({})\n", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail));
        for f in &o.failures {
            table.push_str(&format!("    {f}\n"));
        }
        all &= o.pass;
    }
    let mut out = std::io::stdout().lock();
    out.write_all(table.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(all, "at least one acceptance criterion failed");
}
