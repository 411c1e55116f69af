//! Law-check outcomes shared by the validators and oracles.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Checked without failure, but not over the whole domain.
    Partial,
    NoOp,
}

impl Status {
    /// Combines two statuses; a failure dominates, then partial coverage.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Partial, _) | (_, Partial) => Partial,
            (NoOp, s) | (s, NoOp) => s,
            (Pass, Pass) => Pass,
        }
    }
}

/// A concrete counterexample: the offending tuple and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub tuple: Vec<String>,
    pub detail: String,
}

impl Witness {
    pub fn new(tuple: Vec<String>, detail: impl Into<String>) -> Self {
        Witness {
            tuple,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawOutcome {
    pub law: String,
    pub status: Status,
    /// Number of instances evaluated.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl LawOutcome {
    pub fn pass(law: impl Into<String>, checked: u64) -> Self {
        LawOutcome {
            law: law.into(),
            status: Status::Pass,
            checked,
            coverage: None,
            witness: None,
        }
    }

    pub fn fail(law: impl Into<String>, checked: u64, witness: Witness) -> Self {
        LawOutcome {
            law: law.into(),
            status: Status::Fail,
            checked,
            coverage: None,
            witness: Some(witness),
        }
    }

    pub fn with_coverage(mut self, coverage: impl Into<String>) -> Self {
        self.coverage = Some(coverage.into());
        self
    }
}

/// Outcome of checking every law of some structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub subject: String,
    pub laws: Vec<LawOutcome>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport {
            subject: subject.into(),
            laws: Vec::new(),
        }
    }

    pub fn push(&mut self, outcome: LawOutcome) {
        self.laws.push(outcome);
    }

    pub fn status(&self) -> Status {
        self.laws
            .iter()
            .fold(Status::NoOp, |acc, l| acc.and(l.status))
    }

    pub fn is_pass(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawOutcome> {
        self.laws.iter().filter(|l| l.status == Status::Fail)
    }

    pub fn law(&self, name: &str) -> Option<&LawOutcome> {
        self.laws.iter().find(|l| l.law == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_combination() {
        assert_eq!(Status::Pass.and(Status::Fail), Status::Fail);
        assert_eq!(Status::Partial.and(Status::Pass), Status::Partial);
        assert_eq!(Status::NoOp.and(Status::Pass), Status::Pass);
        assert_eq!(LawReport::new("empty").status(), Status::NoOp);
    }
}
