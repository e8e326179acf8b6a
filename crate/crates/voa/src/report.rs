//! Machine-readable verification reports.
//!
//! Reports are the public contract of the verification suites: entries are
//! sorted by check id, there are no timestamps, and identical invocations
//! produce byte-identical JSON (`schema: "voa-report/1"`).

use serde::Serialize;

pub const SCHEMA: &str = "voa-report/1";

/// Flags shared by every suite.
#[derive(Clone, Debug, Serialize)]
pub struct Config {
    /// Level bound `-D`.
    pub level: i64,
    /// Mode window `-M`.
    pub modes: i64,
    /// Twist `-s`.
    pub twist: i64,
    /// Charge window for character and scan sweeps.
    pub charge_window: i64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            level: 6,
            modes: 3,
            twist: 0,
            charge_window: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub inputs: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl CheckEntry {
    pub fn new(
        id: impl Into<String>,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        pass: bool,
    ) -> Self {
        CheckEntry {
            id: id.into(),
            inputs: inputs.into(),
            expected: expected.into(),
            got: got.into(),
            pass,
        }
    }

    /// Entry asserting that two rendered values coincide.
    pub fn compare(
        id: impl Into<String>,
        inputs: impl Into<String>,
        expected: impl std::fmt::Display,
        got: impl std::fmt::Display,
    ) -> Self {
        let e = expected.to_string();
        let g = got.to_string();
        let pass = e == g;
        CheckEntry::new(id, inputs, e, g, pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub config: Config,
    pub engine_version: &'static str,
    pub entries: Vec<CheckEntry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>, config: Config, mut entries: Vec<CheckEntry>) -> Self {
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        let total = entries.len();
        let passed = entries.iter().filter(|e| e.pass).count();
        Report {
            schema: SCHEMA,
            suite: suite.into(),
            config,
            engine_version: env!("CARGO_PKG_VERSION"),
            entries,
            summary: Summary {
                total,
                passed,
                failed: total - passed,
            },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite {} (D={} M={} s={} charge-window={})\n",
            self.suite, self.config.level, self.config.modes, self.config.twist,
            self.config.charge_window
        ));
        for e in &self.entries {
            out.push_str(&format!(
                "[{}] {} | {} | expected: {} | got: {}\n",
                if e.pass { "ok" } else { "FAIL" },
                e.id,
                e.inputs,
                e.expected,
                e.got
            ));
        }
        out.push_str(&format!(
            "{}/{} checks passed\n",
            self.summary.passed, self.summary.total
        ));
        out
    }
}
