use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use pff_core::SearchConfig;

/// Budgets in force for a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub first_budget: String,
    pub exhaustive_budget: String,
    pub factor_effort: u64,
}

impl From<&SearchConfig> for Budgets {
    fn from(c: &SearchConfig) -> Self {
        // u128 does not fit a JSON number losslessly in every reader
        Budgets {
            first_budget: c.first_budget.to_string(),
            exhaustive_budget: c.exhaustive_budget.to_string(),
            factor_effort: c.factor_effort,
        }
    }
}

/// Machine-readable record of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    /// Wall-clock milliseconds; only recorded with `--timing` so that
    /// reports stay reproducible by default.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
    pub budgets: Budgets,
    pub seed: u64,
}

impl RunReport {
    /// Pretty JSON with keys in sorted order, so that a parse and re-print
    /// reproduces the bytes exactly.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }
}
