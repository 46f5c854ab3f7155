use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};

/// A non-fatal finding produced while extracting or indexing.
///
/// Diagnostics are data, not errors: extraction keeps going and the caller
/// decides what to do with them (the CLI prints them to stderr).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// What the finding is about, e.g. a case id or `"corpus line 7"`.
    pub scope: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(scope: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            scope: scope.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.scope, self.message)
    }
}
