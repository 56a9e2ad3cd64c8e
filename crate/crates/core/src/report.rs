//! Pass/fail records with residual witnesses.

use std::fmt::Display;
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded but not decided (e.g. statements outside the checked scope).
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: Status,
    /// Canonical text of the first nonzero residual, or a value of interest.
    pub residual: Option<String>,
    pub timing_ms: Option<u64>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Ordered list of check results; order is the order of insertion.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check_id: impl Into<String>, status: Status, residual: Option<String>) {
        self.checks.push(CheckResult { check_id: check_id.into(), status, residual, timing_ms: None });
    }

    pub fn pass(&mut self, check_id: impl Into<String>) {
        self.push(check_id, Status::Pass, None);
    }

    pub fn fail(&mut self, check_id: impl Into<String>, witness: impl Into<String>) {
        self.push(check_id, Status::Fail, Some(witness.into()));
    }

    pub fn info(&mut self, check_id: impl Into<String>, note: impl Into<String>) {
        self.push(check_id, Status::Info, Some(note.into()));
    }

    /// Pass when `witness` is `None`.
    pub fn record(&mut self, check_id: impl Into<String>, witness: Option<String>) {
        match witness {
            None => self.pass(check_id),
            Some(w) => self.fail(check_id, w),
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, check_id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_id == check_id)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    /// Times `f` and stamps the elapsed milliseconds on every check it adds.
    pub fn timed(&mut self, f: impl FnOnce(&mut VerificationReport)) {
        let start = Instant::now();
        let first = self.checks.len();
        f(self);
        let ms = start.elapsed().as_millis() as u64;
        for c in &mut self.checks[first..] {
            c.timing_ms = Some(ms);
        }
    }

    pub fn strip_timings(&mut self) {
        for c in &mut self.checks {
            c.timing_ms = None;
        }
    }
}

/// Tracks the first nonzero residual of a family of identities.
#[derive(Debug, Default)]
pub struct Witness {
    first: Option<String>,
    failures: usize,
}

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn offer(&mut self, ok: bool, label: impl FnOnce() -> String) {
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(label());
            }
        }
    }

    pub fn offer_residual<R: Display>(&mut self, residual: Option<R>, at: impl FnOnce() -> String) {
        if let Some(r) = residual {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(format!("{}: {}", at(), r));
            }
        }
    }

    pub fn merge(&mut self, other: Witness) {
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn into_residual(self) -> Option<String> {
        self.first.map(|w| {
            if self.failures > 1 {
                format!("{w} (+{} more)", self.failures - 1)
            } else {
                w
            }
        })
    }
}
