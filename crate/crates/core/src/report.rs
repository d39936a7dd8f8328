//! Machine-readable run reports.
//!
//! One JSON document per CLI run. The human-readable report is rendered from
//! the same value, so it never carries a fact the JSON lacks. The document
//! shape is published as `schema/report.schema.json`; [`validate_against_schema`]
//! checks a value against the subset of JSON Schema that file uses.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::violation::ViolationRecord;

pub const SCHEMA_ID: &str = "hyperspace-report/v1";
/// The published schema, embedded so validation needs no file access.
pub const SCHEMA_JSON: &str = include_str!("../schema/report.schema.json");

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    InputError,
    BudgetError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_VIOLATIONS,
            Status::InputError => EXIT_INPUT,
            Status::BudgetError => EXIT_BUDGET,
        }
    }

    pub fn from_exit_code(code: i32) -> Status {
        match code {
            EXIT_PASS => Status::Pass,
            EXIT_VIOLATIONS => Status::Fail,
            EXIT_BUDGET => Status::BudgetError,
            _ => Status::InputError,
        }
    }

    /// Status for an error that stopped a run or a check.
    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Budget(_) => Status::BudgetError,
            _ => Status::InputError,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

/// The finite bounds a relative verdict was computed under.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub scalars: Vec<String>,
    pub vectors: Vec<String>,
    pub pool: Vec<String>,
    pub universe: Vec<String>,
    pub probes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub id: String,
    pub verdict: Verdict,
    /// Exit status this check contributes; `budget-error` only for an error verdict.
    pub status: Status,
    pub violations: Vec<ViolationRecord>,
    pub bounds: Option<Bounds>,
    /// Facts that are not violations: discovered constants, logs, counts.
    pub details: Vec<String>,
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            verdict: Verdict::Pass,
            status: Status::Pass,
            violations: vec![],
            bounds: None,
            details: vec![],
            error: None,
        }
    }

    pub fn fail(mut self) -> Self {
        self.verdict = Verdict::Fail;
        self.status = Status::Fail;
        self
    }

    pub fn errored(mut self, e: &Error) -> Self {
        self.verdict = Verdict::Error;
        self.status = Status::of_error(e);
        self.error = Some(e.to_string());
        self
    }

    pub fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub input: Option<String>,
    pub exit_code: i32,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, input: Option<String>) -> Self {
        Report {
            schema: SCHEMA_ID.into(),
            command: command.into(),
            input,
            exit_code: EXIT_PASS,
            status: Status::Pass,
            checks: vec![],
            error: None,
            elapsed_ms: 0,
        }
    }

    /// Records an error that stopped the run.
    pub fn abort(&mut self, e: &Error) {
        self.error = Some(e.to_string());
        self.settle_with(Status::of_error(e));
    }

    /// Recomputes status from the checks: the highest exit code wins.
    pub fn settle(&mut self) {
        self.settle_with(Status::Pass);
    }

    fn settle_with(&mut self, floor: Status) {
        let code = self.checks.iter().map(|c| c.status.exit_code()).chain([floor.exit_code(), self.exit_code]).max();
        self.exit_code = code.unwrap_or(EXIT_PASS);
        self.status = Status::from_exit_code(self.exit_code);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Human-readable rendering of the same facts.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}", self.command);
        if let Some(i) = &self.input {
            let _ = write!(out, " {i}");
        }
        let _ = writeln!(out, ": {} (exit {}, {} ms)", status_word(self.status), self.exit_code, self.elapsed_ms);
        if let Some(e) = &self.error {
            let _ = writeln!(out, "  error: {e}");
        }
        for c in &self.checks {
            let verdict = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Error => "ERROR",
            };
            let _ = writeln!(out, "  [{verdict}] {}", c.id);
            if let Some(e) = &c.error {
                let _ = writeln!(out, "      error: {e}");
            }
            if let Some(b) = &c.bounds {
                for (name, items) in [
                    ("scalars", &b.scalars),
                    ("vectors", &b.vectors),
                    ("pool", &b.pool),
                    ("universe", &b.universe),
                    ("probes", &b.probes),
                ] {
                    if !items.is_empty() {
                        let _ = writeln!(out, "      {name}: {}", items.join(" "));
                    }
                }
            }
            for v in &c.violations {
                let _ = writeln!(out, "      {} at ({}): {} vs {}", v.axiom, v.witness.join(", "), v.left, v.right);
            }
            for d in &c.details {
                let _ = writeln!(out, "      {d}");
            }
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::InputError => "input-error",
        Status::BudgetError => "budget-error",
    }
}

/// Parses a report document strictly: unknown fields, a wrong schema id or
/// an exit code that disagrees with the status are all rejected.
pub fn parse_report(text: &str) -> Result<Report, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let schema: Value = serde_json::from_str(SCHEMA_JSON).map_err(|e| e.to_string())?;
    validate_against_schema(&value, &schema)?;
    let report: Report = serde_json::from_value(value).map_err(|e| e.to_string())?;
    if report.status.exit_code() != report.exit_code {
        return Err(format!("exit_code {} disagrees with status {:?}", report.exit_code, report.status));
    }
    Ok(report)
}

/// Validates `value` against `schema`, supporting `type` (string or list),
/// `const`, `enum`, `properties`, `required`, `additionalProperties: false`,
/// `items`, `minimum` and local `$ref` into `$defs`.
pub fn validate_against_schema(value: &Value, schema: &Value) -> Result<(), String> {
    validate_at(value, schema, schema, "$")
}

fn validate_at(value: &Value, node: &Value, root: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = node.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").ok_or_else(|| format!("unsupported $ref {r}"))?;
        let target = root.get("$defs").and_then(|d| d.get(name)).ok_or_else(|| format!("unknown $ref {r}"))?;
        return validate_at(value, target, root, path);
    }
    if let Some(t) = node.get("type") {
        let allowed: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("bad type keyword at {path}")),
        };
        if !allowed.iter().any(|t| type_matches(value, t)) {
            return Err(format!("{path}: expected {}, found {}", allowed.join(" or "), type_name(value)));
        }
    }
    if let Some(c) = node.get("const") {
        if c != value {
            return Err(format!("{path}: expected constant {c}"));
        }
    }
    if let Some(Value::Array(options)) = node.get("enum") {
        if !options.contains(value) {
            return Err(format!("{path}: {value} is not one of {}", Value::Array(options.clone())));
        }
    }
    if let (Some(min), Some(n)) = (node.get("minimum").and_then(Value::as_f64), value.as_f64()) {
        if n < min {
            return Err(format!("{path}: {n} is below the minimum {min}"));
        }
    }
    if let Value::Object(map) = value {
        if let Some(Value::Array(req)) = node.get("required") {
            for key in req.iter().filter_map(Value::as_str) {
                if !map.contains_key(key) {
                    return Err(format!("{path}: missing required field {key:?}"));
                }
            }
        }
        let props = node.get("properties").and_then(Value::as_object);
        for (k, v) in map {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => validate_at(v, sub, root, &format!("{path}.{k}"))?,
                None if node.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected field {k:?}"));
                }
                None => {}
            }
        }
    }
    if let (Value::Array(items), Some(item_schema)) = (value, node.get("items")) {
        for (i, v) in items.iter().enumerate() {
            validate_at(v, item_schema, root, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn type_matches(v: &Value, t: &str) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("verify", Some("krasner.hyp".into()));
        let mut c = CheckRecord::new("hyperfield").fail();
        c.violations.push(ViolationRecord {
            axiom: "HG.assoc".into(),
            witness: vec!["0".into(), "1".into(), "1".into()],
            left: "{0, 1}".into(),
            right: "{1}".into(),
        });
        c.bounds = Some(Bounds { pool: vec!["-1".into(), "0".into(), "1".into()], ..Default::default() });
        r.checks.push(c);
        r.checks.push(CheckRecord::new("hypergroup").detail("zero = 0"));
        r.settle();
        r
    }

    #[test]
    fn round_trips_and_validates() {
        let r = sample();
        assert_eq!(r.exit_code, EXIT_VIOLATIONS);
        let parsed = parse_report(&r.to_json()).unwrap();
        assert_eq!(parsed, r);
    }

    #[test]
    fn schema_rejects_tampering() {
        let mut v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        v["extra"] = Value::Bool(true);
        assert!(parse_report(&v.to_string()).unwrap_err().contains("extra"));

        let mut v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        v["checks"][0]["verdict"] = Value::String("maybe".into());
        assert!(parse_report(&v.to_string()).is_err());

        let mut v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        v["exit_code"] = Value::from(0);
        assert!(parse_report(&v.to_string()).is_err());

        let mut v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        assert!(parse_report(&v.to_string()).is_err());
    }

    #[test]
    fn highest_exit_code_wins() {
        let mut r = sample();
        r.checks.push(CheckRecord::new("weak-independence").errored(&Error::Budget("universe".into())));
        r.settle();
        assert_eq!((r.exit_code, r.status), (EXIT_BUDGET, Status::BudgetError));
        let mut r = Report::new("verify", None);
        r.abort(&Error::Parse { line: 3, column: 1, message: "x".into() });
        assert_eq!(r.exit_code, EXIT_INPUT);
    }

    #[test]
    fn human_form_mentions_every_violation() {
        let text = sample().render_human();
        assert!(text.contains("[FAIL] hyperfield"));
        assert!(text.contains("HG.assoc at (0, 1, 1): {0, 1} vs {1}"));
        assert!(text.contains("pool: -1 0 1"));
    }
}
