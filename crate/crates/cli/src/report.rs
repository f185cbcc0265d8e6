use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// One tested comparison. The report's overall flag is the conjunction of
/// these, nothing else.
#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub expected: Value,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Value,
    pub values: Value,
    pub expected: Value,
    pub checks: Vec<Check>,
    /// Oracles that were not run because a cap would be exceeded.
    pub skipped: Vec<String>,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl Report {
    pub fn new(inputs: Value) -> Self {
        Report {
            command: std::env::args().skip(1).collect(),
            inputs,
            values: Value::Null,
            expected: Value::Null,
            checks: Vec::new(),
            skipped: Vec::new(),
            matches: true,
            wall_time_ms: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, value: impl Into<Value>, expected: impl Into<Value>) {
        let (value, expected) = (value.into(), expected.into());
        self.push(name, value.clone(), expected.clone(), value == expected);
    }

    pub fn push(&mut self, name: impl Into<String>, value: Value, expected: Value, matches: bool) {
        self.checks.push(Check {
            name: name.into(),
            value,
            expected,
            matches,
        });
    }

    pub fn finish(mut self, started: Instant, timed: bool) -> Self {
        self.matches = self.checks.iter().all(|c| c.matches);
        if timed {
            self.wall_time_ms = Some(started.elapsed().as_millis());
        }
        self
    }
}
