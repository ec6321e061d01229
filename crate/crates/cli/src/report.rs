use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::time::Duration;

/// Output layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Human-readable sections and tables.
    Table,
    /// One JSON object per line.
    Lines,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Structured result of one command. The process exits non-zero iff a
/// check fails.
#[derive(Debug, Clone, Default)]
pub struct Report {
    command: String,
    inputs: Vec<(String, Value)>,
    results: Vec<(String, Value)>,
    checks: Vec<Check>,
    text: Vec<String>,
    elapsed: Option<Duration>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    pub fn input(&mut self, name: &str, value: impl Serialize) {
        self.inputs.push((name.to_string(), to_value(value)));
    }

    pub fn result(&mut self, name: &str, value: impl Serialize) {
        self.results.push((name.to_string(), to_value(value)));
    }

    /// Human-only text for the table layout.
    pub fn text(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }

    /// Record a check. Names are unique within a report.
    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        assert!(
            self.checks.iter().all(|c| c.name != name),
            "duplicate check name {name:?}"
        );
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn set_elapsed(&mut self, elapsed: Duration) {
        self.elapsed = Some(elapsed);
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Lines => self.render_lines(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.command);
        for (name, value) in &self.inputs {
            let _ = writeln!(out, "  {name:<16} {}", plain(value));
        }
        if !self.text.is_empty() {
            out.push('\n');
            for line in &self.text {
                let _ = writeln!(out, "{line}");
            }
        }
        out.push('\n');
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{status}] {}: {}", c.name, c.detail);
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(out, "{} checks, {failed} failed", self.checks.len());
        if let Some(elapsed) = self.elapsed {
            let _ = writeln!(out, "timing: {:.3} s", elapsed.as_secs_f64());
        }
        out
    }

    fn render_lines(&self) -> String {
        let mut lines = vec![json!({ "type": "report", "command": self.command })];
        lines.extend(
            self.inputs
                .iter()
                .map(|(name, value)| json!({ "type": "input", "name": name, "value": value })),
        );
        lines.extend(
            self.results
                .iter()
                .map(|(name, value)| json!({ "type": "result", "name": name, "value": value })),
        );
        lines.extend(self.checks.iter().map(
            |c| json!({ "type": "check", "name": c.name, "pass": c.pass, "detail": c.detail }),
        ));
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        lines.push(json!({
            "type": "summary",
            "pass": failed == 0,
            "checks": self.checks.len(),
            "failed": failed,
        }));
        if let Some(elapsed) = self.elapsed {
            lines.push(json!({ "type": "timing", "elapsed_ms": elapsed.as_millis() as u64 }));
        }
        lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}

fn plain(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
