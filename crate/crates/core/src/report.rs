//! Scenario reports: labeled checks with verdicts, exact-value tables,
//! JSON serialization and a plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The identity being verified, in formula form.
    pub identity: String,
    pub passed: bool,
    /// Required checks decide the exit status; informational ones record
    /// observations and identities whose hypotheses are not met.
    pub required: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema: u32,
    pub scenario: String,
    pub inputs: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub fn new(scenario: impl Into<String>) -> Self {
        ScenarioReport {
            schema: SCHEMA_VERSION,
            scenario: scenario.into(),
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<String>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn check(&mut self, id: impl Into<String>, identity: impl Into<String>, passed: bool) {
        self.push(id, identity, passed, true, None);
    }

    pub fn check_with(&mut self, id: impl Into<String>, identity: impl Into<String>, passed: bool, witness: Option<String>) {
        self.push(id, identity, passed, true, witness);
    }

    /// Records a statement whose verdict is reported but does not affect
    /// [`ScenarioReport::passed`].
    pub fn inform(&mut self, id: impl Into<String>, identity: impl Into<String>, holds: bool, witness: Option<String>) {
        self.push(id, identity, holds, false, witness);
    }

    fn push(&mut self, id: impl Into<String>, identity: impl Into<String>, passed: bool, required: bool, witness: Option<String>) {
        self.checks.push(Check { id: id.into(), identity: identity.into(), passed, required, witness });
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.required && !c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.scenario);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for c in &self.checks {
            let tag = match (c.passed, c.required) {
                (true, true) => "PASS",
                (false, true) => "FAIL",
                (true, false) => "info: holds",
                (false, false) => "info: fails",
            };
            let _ = write!(out, "[{tag}] {}  {}", c.id, c.identity);
            if let Some(w) = &c.witness {
                let _ = write!(out, "  (witness: {w})");
            }
            out.push('\n');
        }
        for t in &self.tables {
            let _ = writeln!(out, "-- {} --", t.title);
            let _ = writeln!(out, "  {}", t.columns.join(" | "));
            for row in &t.rows {
                let _ = writeln!(out, "  {}", row.join(" | "));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let required = self.checks.iter().filter(|c| c.required).count();
        let passed = self.checks.iter().filter(|c| c.required && c.passed).count();
        let _ = writeln!(out, "{passed}/{required} required checks passed");
        out
    }
}

/// Output of a multi-scenario run, ordered by scenario name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub scenarios: Vec<ScenarioReport>,
}

impl RunReport {
    pub fn new(mut scenarios: Vec<ScenarioReport>) -> Self {
        scenarios.sort_by(|a, b| a.scenario.cmp(&b.scenario));
        RunReport { schema: SCHEMA_VERSION, scenarios }
    }

    pub fn passed(&self) -> bool {
        self.scenarios.iter().all(ScenarioReport::passed)
    }

    pub fn render_text(&self) -> String {
        self.scenarios.iter().map(ScenarioReport::render_text).collect::<Vec<_>>().join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScenarioReport {
        let mut r = ScenarioReport::new("demo");
        r.input("mu", "1/2");
        r.check("a", "x = x", true);
        r.check_with("b", "x = y", false, Some("x = 1".into()));
        r.inform("c", "x = -x", false, None);
        let mut t = Table::new("values", &["k", "v"]);
        t.push(vec!["0".into(), "1/2-3i".into()]);
        r.tables.push(t);
        r
    }

    #[test]
    fn verdict_ignores_informational_checks() {
        let mut r = sample();
        assert!(!r.passed());
        r.checks.retain(|c| c.id != "b");
        assert!(r.passed());
    }

    #[test]
    fn json_round_trip() {
        let run = RunReport::new(vec![sample()]);
        let text = serde_json::to_string_pretty(&run).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, run);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    #[test]
    fn text_marks_each_check() {
        let text = sample().render_text();
        assert!(text.contains("[PASS] a"));
        assert!(text.contains("[FAIL] b  x = y  (witness: x = 1)"));
        assert!(text.contains("[info: fails] c"));
        assert!(text.contains("1/2 required checks passed"));
    }
}
