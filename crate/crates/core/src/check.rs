//! Inequality records shared by verifiers and suites.

use serde::{Deserialize, Serialize};

/// Slack added to the right-hand side of every one-sided inequality.
pub const SLACK: f64 = 1e-9;

/// Tolerance for equalities between floating-point quantities.
pub const TOL: f64 = 1e-9;

/// One checked statement `lhs <= rhs` (with [`SLACK`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Check {
            label: label.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            pass: lhs <= rhs + SLACK,
        }
    }

    /// `lhs >= rhs`, stored with sides swapped so that `lhs <= rhs` always reads as the claim.
    pub fn ge(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Check::le(label, rhs, lhs)
    }

    /// `|a - b| <= TOL`, stored as `|a - b| <= 0` with the usual slack.
    pub fn close(label: impl Into<String>, a: f64, b: f64) -> Self {
        Check::le(label, (a - b).abs(), 0.0)
    }

    /// A purely combinatorial statement, recorded as `0 <= 0` or `1 <= 0`.
    pub fn holds(label: impl Into<String>, ok: bool) -> Self {
        Check::le(label, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
