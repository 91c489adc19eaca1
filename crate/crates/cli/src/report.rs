use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The report printed by every command.
#[derive(Debug, Serialize)]
pub struct Document {
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub results: Vec<Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub truncation: Value,
    pub runtime_ms: Option<u64>,
}

impl Document {
    pub fn new(command: &str, params: Value, seed: u64) -> Self {
        Document {
            command: command.into(),
            params,
            seed,
            results: Vec::new(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            truncation: Value::Null,
            runtime_ms: None,
        }
    }

    pub fn fail_unless(&mut self, ok: bool) {
        if !ok {
            self.verdict = Verdict::Fail;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Text form: headline, then one line per top-level result field.
    pub fn to_text(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        };
        let mut out = format!("{}: {verdict}\n", self.command);
        for (i, r) in self.results.iter().enumerate() {
            if self.results.len() > 1 {
                let _ = writeln!(out, "[{i}]");
            }
            match r {
                Value::Object(map) => {
                    for (k, v) in map {
                        let _ = writeln!(out, "  {k}: {}", short(v));
                    }
                }
                v => {
                    let _ = writeln!(out, "  {}", short(v));
                }
            }
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "witness: {}", short(w));
        }
        if let Some(ms) = self.runtime_ms {
            let _ = writeln!(out, "runtime: {ms} ms");
        }
        out
    }
}

fn short(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        v => {
            let s = v.to_string();
            if s.chars().count() > 160 {
                format!("{}...", s.chars().take(157).collect::<String>())
            } else {
                s
            }
        }
    }
}

/// A failure that stops a command before it produces a verdict.
#[derive(Debug, Serialize)]
pub struct Failure {
    /// Kebab-case reason.
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip)]
    pub exit: i32,
}

impl Failure {
    pub fn usage(code: &str, message: impl Into<String>) -> Self {
        Failure { code: code.into(), message: message.into(), file: None, line: None, column: None, exit: 2 }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Failure { exit: 1, ..Failure::usage("computation-failed", message) }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string(&serde_json::json!({ "error": self })).expect("error serializes");
        }
        let mut at = self.file.clone().unwrap_or_default();
        if let (Some(l), Some(c)) = (self.line, self.column) {
            if !at.is_empty() {
                at.push(':');
            }
            let _ = write!(at, "{l}:{c}");
        }
        if at.is_empty() {
            format!("error [{}]: {}", self.code, self.message)
        } else {
            format!("error [{}] {at}: {}", self.code, self.message)
        }
    }
}
