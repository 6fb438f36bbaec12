//! Plain records of verification outcomes. Rendering and serialization live
//! in the companion crate.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Recorded observation that does not count as a failure (used for
    /// statements that are only conjectured, or known to be misstated).
    Finding,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Finding => "finding",
        }
    }
}

/// Outcome of one check: a name, the claim being checked, a status, and
/// witness lines (states are rendered exactly).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub claim: String,
    pub status: Status,
    pub witness: Vec<(String, String)>,
}

impl Outcome {
    pub fn new(name: impl Into<String>, claim: impl Into<String>, status: Status) -> Self {
        Self { name: name.into(), claim: claim.into(), status, witness: Vec::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.witness.push((key.into(), value.into()));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
