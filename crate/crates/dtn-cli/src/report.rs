//! Machine-readable run reports.
//!
//! Field order is fixed by struct declaration order; numeric values are
//! serialized as decimal scientific-notation strings carrying the digit
//! count of the working precision, so a report round-trips losslessly
//! and two runs with identical inputs differ only in `wall_time_ms`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: String,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub results: Vec<CheckResult>,
    pub precision_bits: u32,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_losslessly() {
        let mut parameters = BTreeMap::new();
        parameters.insert("k".to_string(), "3".to_string());
        let report = Report {
            command: "conjecture".into(),
            parameters,
            results: vec![CheckResult {
                name: "residual".into(),
                value: "1.2345678901234567e-12".into(),
                tolerance: "1.0e-8".into(),
                pass: true,
            }],
            precision_bits: 53,
            wall_time_ms: 7,
        };
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn pass_is_conjunction_of_results() {
        let mk = |pass| CheckResult {
            name: "x".into(),
            value: "0e+0".into(),
            tolerance: "1e-8".into(),
            pass,
        };
        let report = Report {
            command: "t".into(),
            parameters: BTreeMap::new(),
            results: vec![mk(true), mk(false)],
            precision_bits: 53,
            wall_time_ms: 0,
        };
        assert!(!report.pass());
    }
}
