//! Verification reports and their three output formats.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
}

impl Check {
    pub fn exact(id: &str, ok: bool, expected: impl ToString, observed: impl ToString) -> Check {
        Check { id: id.into(), status: Status::from_bool(ok), expected: expected.to_string(), observed: observed.to_string(), tolerance: "exact".into() }
    }

    pub fn skipped(id: &str, expected: impl ToString, reason: impl ToString) -> Check {
        Check { id: id.into(), status: Status::Skipped, expected: expected.to_string(), observed: reason.to_string(), tolerance: "-".into() }
    }
}

/// One integrated row of the six-loop table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub name: String,
    pub edges: String,
    pub expected: f64,
    pub value: f64,
    pub std_error: f64,
    pub method: String,
    pub samples: u64,
    pub new_samples: u64,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<TableRow>,
    pub wall_time_seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn table(&self) -> String {
        let mut out = String::new();
        if !self.rows.is_empty() {
            let _ = writeln!(out, "{:<6} {:<40} {:>12} {:>12} {:>10} {:<22} {:>10} {:>10} status", "name", "edges", "expected", "value", "error", "method", "samples", "new");
            for r in &self.rows {
                let _ = writeln!(
                    out,
                    "{:<6} {:<40} {:>12} {:>12} {:>10} {:<22} {:>10} {:>10} {}",
                    r.name,
                    r.edges,
                    r.expected,
                    r.value,
                    r.std_error,
                    r.method,
                    r.samples,
                    r.new_samples,
                    r.status.label()
                );
            }
            out.push('\n');
        }
        let _ = writeln!(out, "suite {}", self.suite);
        for c in &self.checks {
            let _ = writeln!(out, "{:<8} {:<20} expected {} | observed {} | tolerance {}", c.status.label(), c.id, c.expected, c.observed, c.tolerance);
        }
        let _ = writeln!(out, "wall time {:.1} s", self.wall_time_seconds);
        out
    }

    fn csv(&self) -> String {
        fn field(s: &str) -> String {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        }
        let mut out = String::new();
        if !self.rows.is_empty() {
            out.push_str("name,edges,expected,value,std_error,method,samples,new_samples,status\n");
            for r in &self.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    field(&r.name),
                    field(&r.edges),
                    r.expected,
                    r.value,
                    r.std_error,
                    r.method,
                    r.samples,
                    r.new_samples,
                    r.status.label()
                );
            }
            out.push('\n');
        }
        out.push_str("suite,id,status,expected,observed,tolerance\n");
        for c in &self.checks {
            let _ = writeln!(out, "{},{},{},{},{},{}", field(&self.suite), field(&c.id), c.status.label(), field(&c.expected), field(&c.observed), field(&c.tolerance));
        }
        let _ = writeln!(out, "# wall_time_seconds,{}", self.wall_time_seconds);
        out
    }
}
