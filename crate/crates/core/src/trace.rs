//! Linear step traces recorded by the multi-step extractors.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn note(&mut self, step: &str, detail: impl Into<String>) {
        self.entries.push(TraceEntry {
            step: step.to_string(),
            holds: true,
            detail: detail.into(),
        });
    }

    /// Records a checked inequality and returns whether it held.
    pub fn check(&mut self, step: &str, holds: bool, detail: impl Into<String>) -> bool {
        self.entries.push(TraceEntry {
            step: step.to_string(),
            holds,
            detail: detail.into(),
        });
        holds
    }

    pub fn failed(&self) -> impl Iterator<Item = &TraceEntry> {
        self.entries.iter().filter(|e| !e.holds)
    }
}
