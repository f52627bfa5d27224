//! Report entries and their JSON, CSV and human renderings.

use asd_forge_core::asd::suites::SuiteCell;
use asd_forge_core::asd::{Refutation, SpecRecord, Verdict};
use asd_forge_core::hyp::CheckOutcome;
use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// One checked statement: a suite cell, a scalar congruence, an identity, or a plain value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// Suite or command name.
    pub suite: String,
    pub prime: Option<u64>,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Refutation>,
    pub summary: String,
    pub pass: bool,
    pub conjectural: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Entry {
    pub fn new(suite: &str, prime: Option<u64>, label: impl Into<String>, pass: bool, summary: impl Into<String>) -> Self {
        Entry {
            suite: suite.into(),
            prime,
            label: label.into(),
            spec: None,
            verdicts: Vec::new(),
            refutation: None,
            summary: summary.into(),
            pass,
            conjectural: false,
            notes: Vec::new(),
            data: None,
        }
    }

    /// A value with nothing to verify; always passes.
    pub fn info(suite: &str, prime: Option<u64>, label: impl Into<String>, summary: impl Into<String>) -> Self {
        Self::new(suite, prime, label, true, summary)
    }

    pub fn error(suite: &str, prime: Option<u64>, label: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self::new(suite, prime, label, false, format!("error: {err}"))
    }

    pub fn with_data<T: Serialize>(mut self, v: &T) -> Self {
        self.data = serde_json::to_value(v).ok();
        self
    }

    pub fn conjectural(mut self, c: bool) -> Self {
        self.conjectural = c;
        self
    }

    pub fn from_cell(cell: SuiteCell) -> Self {
        let summary = cell.summary();
        let (spec, verdicts) = match cell.report {
            Some(r) => (Some(r.spec), r.verdicts),
            None => (None, Vec::new()),
        };
        Entry {
            suite: cell.suite,
            prime: Some(cell.p),
            label: cell.label,
            spec,
            verdicts,
            refutation: cell.refutation,
            summary,
            pass: cell.pass,
            conjectural: cell.conjectural,
            notes: cell.notes,
            data: None,
        }
    }

    pub fn from_outcome(suite: &str, o: &CheckOutcome) -> Self {
        Entry {
            suite: suite.into(),
            prime: Some(o.p),
            label: format!("{} {}", o.check, o.params),
            spec: None,
            verdicts: Vec::new(),
            refutation: None,
            summary: o.summary(),
            pass: o.pass,
            conjectural: o.conjectural,
            notes: Vec::new(),
            data: serde_json::to_value(o).ok(),
        }
    }

    /// Whether this entry makes the run fail.
    pub fn blocking(&self) -> bool {
        !self.pass && !self.conjectural
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub entries: usize,
    pub failed: usize,
    pub conjectural: usize,
    pub conjectural_failed: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub entries: Vec<Entry>,
    pub summary: Totals,
}

impl Report {
    pub fn new(command: &str, entries: Vec<Entry>) -> Self {
        let summary = Totals {
            entries: entries.len(),
            failed: entries.iter().filter(|e| e.blocking()).count(),
            conjectural: entries.iter().filter(|e| e.conjectural).count(),
            conjectural_failed: entries.iter().filter(|e| e.conjectural && !e.pass).count(),
            passed: entries.iter().all(|e| !e.blocking()),
        };
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "asd-forge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            entries,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let mut r: Report = serde_json::from_str(text).map_err(|e| CliError::Config(format!("not an asd-forge report: {e}")))?;
        // recompute rather than trust the stored totals
        r = Report { ..Report::new(&r.command, r.entries) };
        Ok(r)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "prime", "label", "pass", "conjectural", "checked", "failed", "summary"])?;
        for e in &self.entries {
            let failed = e.verdicts.iter().filter(|v| !v.pass).count();
            w.write_record([
                e.suite.clone(),
                e.prime.map(|p| p.to_string()).unwrap_or_default(),
                e.label.clone(),
                e.pass.to_string(),
                e.conjectural.to_string(),
                e.verdicts.len().to_string(),
                failed.to_string(),
                e.summary.clone(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let mark = match (e.pass, e.conjectural) {
                (true, _) => "ok  ",
                (false, true) => "note",
                (false, false) => "FAIL",
            };
            out.push_str(&format!("[{mark}] {}\n", e.summary));
            for n in e.notes.iter().filter(|n| !e.summary.contains(n.as_str())) {
                out.push_str(&format!("       {n}\n"));
            }
        }
        let t = &self.summary;
        out.push_str(&format!(
            "{} entries, {} failed, {} conjectural ({} not confirmed): {}\n",
            t.entries,
            t.failed,
            t.conjectural,
            t.conjectural_failed,
            if t.passed { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv()?,
            Format::Human => self.to_human(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjectural_failures_do_not_block() {
        let r = Report::new(
            "t",
            vec![Entry::new("s", Some(5), "a", true, "a"), Entry::new("s", Some(5), "b", false, "b").conjectural(true)],
        );
        assert!(r.passed());
        assert_eq!(r.summary.conjectural_failed, 1);
        let r = Report::new("t", vec![Entry::error("s", None, "c", "boom")]);
        assert!(!r.passed());
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn json_round_trip() {
        let r = Report::new("t", vec![Entry::info("s", Some(7), "x", "x = 1").with_data(&[1, 2])]);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(Report::from_json("{}").is_err());
    }

    #[test]
    fn csv_quotes_fields() {
        let r = Report::new("t", vec![Entry::info("s", Some(7), "a, b", "x")]);
        let csv = r.to_csv().unwrap();
        assert!(csv.contains("\"a, b\""));
        assert_eq!(csv.lines().count(), 2);
    }
}
