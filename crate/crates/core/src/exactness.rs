//! Whether a result over a depth-bounded universe is exact.

use std::fmt;

use serde::Serialize;

/// `Exact` when the finite cut of the universe cannot have changed the
/// answer, otherwise `Truncated` with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    Truncated(String),
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }

    /// Combines two flags; the first truncation reason wins.
    pub fn and(self, other: Exactness) -> Exactness {
        match self {
            Exactness::Exact => other,
            t => t,
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => f.write_str("exact"),
            Exactness::Truncated(reason) => write!(f, "truncated ({reason})"),
        }
    }
}
