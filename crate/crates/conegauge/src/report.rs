//! Structured pass/fail outcomes for the property suites.

use serde::Serialize;

use crate::vector::Vector;

/// Most witnesses ever stored per check; the full failure count is kept
/// separately.
pub const WITNESS_CAP: usize = 32;

/// Outcome of one named check: the worst violation seen and the points that
/// produced failures, in canonical (lexicographic) order so reports are
/// independent of evaluation order.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub max_violation: f64,
    pub violation_count: usize,
    pub witnesses: Vec<Vector>,
}

impl CheckOutcome {
    pub fn passing(name: &str) -> Self {
        Self {
            name: name.to_string(),
            pass: true,
            max_violation: 0.0,
            violation_count: 0,
            witnesses: Vec::new(),
        }
    }
}

/// Accumulates violations for one check and freezes them into an outcome.
#[derive(Debug, Clone)]
pub struct ViolationTracker {
    name: String,
    max_violation: f64,
    worst: Option<Vector>,
    failures: Vec<Vector>,
    failure_count: usize,
    tol: f64,
}

impl ViolationTracker {
    pub fn new(name: &str, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            max_violation: 0.0,
            worst: None,
            failures: Vec::new(),
            failure_count: 0,
            tol,
        }
    }

    /// Records one observation; `violation <= 0` means the sample satisfied
    /// the property exactly.
    pub fn observe(&mut self, violation: f64, witness: &Vector) {
        let v = violation.max(0.0);
        if v > self.max_violation {
            self.max_violation = v;
            self.worst = Some(witness.clone());
        }
        if v > self.tol {
            self.failure_count += 1;
            if self.failures.len() < WITNESS_CAP {
                self.failures.push(witness.clone());
            }
        }
    }

    pub fn max_violation(&self) -> f64 {
        self.max_violation
    }

    pub fn into_outcome(self) -> CheckOutcome {
        let pass = self.max_violation <= self.tol;
        let mut witnesses = if pass {
            Vec::new()
        } else {
            let mut w = self.failures;
            // The worst offender is always reported, even if the cap was hit
            // before it appeared.
            if let Some(worst) = self.worst {
                if !w.iter().any(|x| x == &worst) {
                    if w.len() == WITNESS_CAP {
                        w.pop();
                    }
                    w.push(worst);
                }
            }
            w
        };
        witnesses.sort_by(|a, b| a.lex_cmp(b));
        CheckOutcome {
            name: self.name,
            pass,
            max_violation: self.max_violation,
            violation_count: self.failure_count,
            witnesses,
        }
    }
}

/// Outcome of a property suite over one subject.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub subject: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
