//! Outcomes of identity checks, shared by the verification suites and the CLI.

use serde_json::{json, Value};
use std::fmt;

/// One exact comparison of two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, lhs: impl fmt::Display, rhs: impl fmt::Display, holds: bool) -> Self {
        Check { label: label.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), holds }
    }

    /// Compares two values with `==` and records their displays.
    pub fn eq<T: PartialEq + fmt::Display>(label: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        Check::new(label, lhs, rhs, lhs == rhs)
    }

    pub fn to_json(&self) -> Value {
        json!({ "label": self.label, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "ok" } else { "MISMATCH" };
        write!(f, "[{mark}] {}: {} = {}", self.label, self.lhs, self.rhs)
    }
}

/// True when every check holds.
pub fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}
