//! Report assembly and rendering. JSON field order is fixed by the struct
//! layout; nested result objects use serde_json's sorted maps.

use profmeasure::report::{LawOutcome, LawReport, Status};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub status: Status,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub laws: Vec<LawOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            version: SCHEMA_VERSION,
            status: Status::NoOp,
            command: command.to_string(),
            subject: None,
            laws: Vec::new(),
            result: None,
        }
    }

    pub fn from_laws(command: &str, report: LawReport) -> Self {
        let mut out = Report::new(command);
        out.status = report.status();
        out.subject = Some(report.subject);
        out.laws = report.laws;
        out
    }

    pub fn push(&mut self, law: LawOutcome) {
        self.laws.push(law);
        self.status = self.laws.iter().fold(Status::NoOp, |acc, l| acc.and(l.status));
    }

    /// A computation with a value and nothing to check.
    pub fn computed(command: &str, result: Value) -> Self {
        let mut out = Report::new(command);
        out.status = Status::Pass;
        out.result = Some(result);
        out
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialise"),
            Format::Text => self.text(),
        }
    }

    fn text(&self) -> String {
        let mut lines = Vec::new();
        if let Some(subject) = &self.subject {
            lines.push(subject.clone());
        }
        for law in &self.laws {
            let mut line = format!("  {:<8} {} ({} checked)", status_word(law.status), law.law, law.checked);
            if let Some(c) = &law.coverage {
                line.push_str(&format!(" [{c}]"));
            }
            lines.push(line);
            if let Some(w) = &law.witness {
                lines.push(format!("           witness {}: {}", w.tuple.join(", "), w.detail));
            }
        }
        if let Some(result) = &self.result {
            text_value(result, 0, &mut lines);
        }
        lines.push(format!("status: {}", status_word(self.status)));
        lines.join("\n")
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Partial => "partial",
        Status::NoOp => "no-op",
    }
}

fn text_value(v: &Value, indent: usize, lines: &mut Vec<String>) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if v.is_object() || v.as_array().is_some_and(|a| a.iter().any(|x| x.is_object())) {
                    lines.push(format!("{pad}{k}:"));
                    text_value(v, indent + 1, lines);
                } else {
                    lines.push(format!("{pad}{k}: {}", compact(v)));
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if item.is_object() {
                    lines.push(format!("{pad}-"));
                    text_value(item, indent + 1, lines);
                } else {
                    lines.push(format!("{pad}- {}", compact(item)));
                }
            }
        }
        other => lines.push(format!("{pad}{}", compact(other))),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use profmeasure::report::Witness;

    #[test]
    fn empty_report_is_no_op() {
        let r = Report::new("props run");
        let json = r.render(Format::Json);
        assert!(json.starts_with("{\n  \"version\": 1,\n  \"status\": \"no-op\""), "{json}");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn failures_carry_witnesses_and_exit_one() {
        let mut r = Report::new("semiring check");
        r.push(LawOutcome::pass("a", 3));
        r.push(LawOutcome::fail("b", 1, Witness::new(vec!["1".into()], "broken")));
        assert_eq!(r.exit_code(), 1);
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["laws"][1]["witness"]["detail"], "broken");
        assert!(r.render(Format::Text).contains("witness 1: broken"));
    }
}
