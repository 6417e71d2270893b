//! Structured records of certified inequalities and the document that collects them.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// The reference value is a published constant being reproduced.
    Published,
    /// The reference value is computed independently by this crate.
    Derived,
}

/// One certified inequality `certified_value <= threshold` (or `>=`).
///
/// `pass` holds exactly when `margin >= 0`, where `margin` is
/// `threshold - certified_value` for `Le` and the negation for `Ge`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub claim: String,
    pub certified_value: f64,
    pub reference_value: Option<f64>,
    pub direction: Direction,
    pub threshold: f64,
    pub margin: f64,
    /// `(certified - reference) / |reference|` when a reference is present.
    pub rel_deviation: Option<f64>,
    pub provenance: Provenance,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    fn build(
        claim: impl Into<String>,
        value: f64,
        reference: Option<f64>,
        direction: Direction,
        threshold: f64,
        provenance: Provenance,
    ) -> BoundReport {
        let margin = match direction {
            Direction::Le => threshold - value,
            Direction::Ge => value - threshold,
        };
        let rel_deviation = reference.filter(|r| *r != 0.0).map(|r| (value - r) / r.abs());
        BoundReport {
            claim: claim.into(),
            certified_value: value,
            reference_value: reference,
            direction,
            threshold,
            margin,
            rel_deviation,
            provenance,
            pass: margin >= 0.0 && value.is_finite(),
            note: None,
        }
    }

    /// `value <= threshold` with a derived threshold.
    pub fn upper(claim: impl Into<String>, value: f64, threshold: f64) -> BoundReport {
        Self::build(claim, value, None, Direction::Le, threshold, Provenance::Derived)
    }

    /// `value >= threshold` with a derived threshold.
    pub fn lower(claim: impl Into<String>, value: f64, threshold: f64) -> BoundReport {
        Self::build(claim, value, None, Direction::Ge, threshold, Provenance::Derived)
    }

    /// Reproduces a published upper bound: passes if the certified upper bound
    /// is no weaker than `reference * (1 + tol)`.
    pub fn reproduce_upper(claim: impl Into<String>, value: f64, reference: f64, tol: f64) -> BoundReport {
        let t = reference + tol * reference.abs();
        Self::build(claim, value, Some(reference), Direction::Le, t, Provenance::Published)
    }

    /// Reproduces a published lower bound: passes if the certified lower bound
    /// is no weaker than `reference * (1 - tol)`.
    pub fn reproduce_lower(claim: impl Into<String>, value: f64, reference: f64, tol: f64) -> BoundReport {
        let t = reference - tol * reference.abs();
        Self::build(claim, value, Some(reference), Direction::Ge, t, Provenance::Published)
    }

    /// Two-sided agreement `|value - reference| <= tol * |reference|`,
    /// encoded as an upper bound on the relative deviation.
    pub fn agree(claim: impl Into<String>, value: f64, reference: f64, tol: f64, provenance: Provenance) -> BoundReport {
        let dev = if reference == 0.0 { value.abs() } else { ((value - reference) / reference).abs() };
        let mut r = Self::build(claim, dev, Some(reference), Direction::Le, tol, provenance);
        r.rel_deviation = (reference != 0.0).then(|| (value - reference) / reference.abs());
        r.note = Some(format!("value {value:.10e}"));
        r
    }

    /// A yes/no check recorded as `failures <= 0`.
    pub fn check(claim: impl Into<String>, failures: usize) -> BoundReport {
        Self::build(claim, failures as f64, None, Direction::Le, 0.0, Provenance::Derived)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> BoundReport {
        self.note = Some(note.into());
        self
    }

    pub fn with_provenance(mut self, p: Provenance) -> BoundReport {
        self.provenance = p;
        self
    }

    pub fn with_reference(mut self, reference: f64) -> BoundReport {
        self.reference_value = Some(reference);
        self.rel_deviation = (reference != 0.0).then(|| (self.certified_value - reference) / reference.abs());
        self
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        let dir = match self.direction {
            Direction::Le => "<=",
            Direction::Ge => ">=",
        };
        let mut s = format!(
            "[{}] {}: {:.8e} {} {:.8e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.certified_value,
            dir,
            self.threshold
        );
        if let Some(d) = self.rel_deviation {
            s.push_str(&format!(" (deviation {:+.3}%)", 100.0 * d));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!(" [{n}]"));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Aggregate output of one CLI invocation. Contains no timestamp, so equal
/// inputs serialize to identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub status: Status,
    pub reports: Vec<BoundReport>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, seed: u64, reports: Vec<BoundReport>) -> ReportDocument {
        let status = if reports.iter().all(|r| r.pass) { Status::Pass } else { Status::Fail };
        ReportDocument {
            schema: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            seed,
            status,
            reports,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(s: &str) -> crate::Result<ReportDocument> {
        serde_json::from_str(s).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_sign_matches_pass() {
        let ok = BoundReport::upper("x", 1.0, 2.0);
        assert!(ok.pass && ok.margin == 1.0);
        let bad = BoundReport::lower("x", 1.0, 2.0);
        assert!(!bad.pass && bad.margin == -1.0);
    }

    #[test]
    fn reproduction_is_one_sided() {
        // A tighter lower bound than published passes; a weaker one beyond tolerance fails.
        assert!(BoundReport::reproduce_lower("s", 0.00068, 0.00067, 0.01).pass);
        assert!(!BoundReport::reproduce_lower("s", 0.00066, 0.00067, 0.01).pass);
        assert!(BoundReport::reproduce_upper("s", 1.1051, 1.10514, 0.01).pass);
        assert!(!BoundReport::reproduce_upper("s", 1.2, 1.10514, 0.01).pass);
    }

    #[test]
    fn document_round_trip() {
        let doc = ReportDocument::new(
            "unit",
            7,
            vec![BoundReport::reproduce_upper("a", 0.1 + 0.2, 0.3, 0.01).with_note("n"), BoundReport::check("b", 0)],
        );
        let back = ReportDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert!(doc.passed());
    }
}
