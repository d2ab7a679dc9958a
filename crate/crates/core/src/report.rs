use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

/// Outcome of one exhaustive or sampled check. A failing report carries a
/// counterexample in `detail` that is enough to reproduce the failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    /// Number of cases evaluated.
    pub checked: u64,
    /// Cases that did not meet the check's precondition and were not evaluated.
    pub skipped: u64,
    pub detail: String,
}

impl Report {
    pub fn pass(check: impl Into<String>, checked: u64, detail: impl Into<String>) -> Report {
        Report {
            check: check.into(),
            status: Status::Pass,
            checked,
            skipped: 0,
            detail: detail.into(),
        }
    }

    pub fn fail(check: impl Into<String>, checked: u64, counterexample: impl Into<String>) -> Report {
        Report {
            check: check.into(),
            status: Status::Fail,
            checked,
            skipped: 0,
            detail: counterexample.into(),
        }
    }

    pub fn skip(check: impl Into<String>, reason: impl Into<String>) -> Report {
        Report {
            check: check.into(),
            status: Status::Skip,
            checked: 0,
            skipped: 0,
            detail: reason.into(),
        }
    }

    pub(crate) fn from_sweep(
        check: impl Into<String>,
        outcome: Result<u64, String>,
        detail: impl FnOnce(u64) -> String,
    ) -> Report {
        match outcome {
            Ok(n) => Report::pass(check, n, detail(n)),
            Err(cx) => Report::fail(check, 0, cx),
        }
    }

    pub fn with_skipped(mut self, skipped: u64) -> Report {
        self.skipped = skipped;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.status, self.check, self.detail)
    }
}
