//! Identity reports and their deterministic JSON form.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Residuals above this are what an expected failure has to show.
pub const FAIL_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub suite: String,
    pub identity: String,
    pub paper_tag: String,
    pub max_residual: f64,
    pub samples: usize,
    pub resampled: usize,
    pub tol: f64,
    pub expect: Expect,
    pub pass: bool,
}

impl IdentityEntry {
    pub fn new(
        suite: &str,
        identity: &str,
        paper_tag: &str,
        max_residual: f64,
        samples: usize,
        tol: f64,
        expect: Expect,
    ) -> Self {
        // a NaN residual never passes either way
        let pass = match expect {
            Expect::Pass => max_residual < tol,
            Expect::Fail => max_residual > tol,
        };
        IdentityEntry {
            suite: suite.to_string(),
            identity: identity.to_string(),
            paper_tag: paper_tag.to_string(),
            max_residual: if max_residual.is_finite() {
                max_residual
            } else {
                f64::MAX
            },
            samples,
            resampled: 0,
            tol,
            expect,
            pass,
        }
    }

    pub fn with_resampled(mut self, n: usize) -> Self {
        self.resampled = n;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub suite: String,
    pub environment: BTreeMap<String, String>,
    pub entries: Vec<IdentityEntry>,
}

impl IdentityReport {
    pub fn new(suite: &str) -> Self {
        IdentityReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn env(mut self, key: &str, value: impl ToString) -> Self {
        self.environment.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, entry: IdentityEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: IdentityReport) {
        for (k, v) in other.environment {
            self.environment.entry(k).or_insert(v);
        }
        self.entries.extend(other.entries);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn get(&self, identity: &str) -> Option<&IdentityEntry> {
        self.entries.iter().find(|e| e.identity == identity)
    }

    /// Entries sorted by (suite, identity) so that report bytes do not depend
    /// on evaluation order.
    pub fn sorted(mut self) -> Self {
        self.entries
            .sort_by(|a, b| (&a.suite, &a.identity).cmp(&(&b.suite, &b.identity)));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.clone().sorted()).expect("report serializes")
    }
}

/// max |lhs - rhs| over the largest magnitude among the identity's terms.
pub fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}
