use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Tau,
    Compile,
    Keygen,
    ProveBatch,
    ProveWithdraw,
    Verify,
    Cost,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Tau,
        Scenario::Compile,
        Scenario::Keygen,
        Scenario::ProveBatch,
        Scenario::ProveWithdraw,
        Scenario::Verify,
        Scenario::Cost,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Tau => "tau",
            Scenario::Compile => "compile",
            Scenario::Keygen => "keygen",
            Scenario::ProveBatch => "prove_batch",
            Scenario::ProveWithdraw => "prove_withdraw",
            Scenario::Verify => "verify",
            Scenario::Cost => "cost",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL.into_iter().find(|sc| sc.as_str() == s).ok_or_else(|| format!("unknown scenario {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AuxValue {
    Int(u64),
    Text(String),
}

impl fmt::Display for AuxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxValue::Int(v) => write!(f, "{v}"),
            AuxValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<u64> for AuxValue {
    fn from(v: u64) -> Self {
        AuxValue::Int(v)
    }
}

impl From<usize> for AuxValue {
    fn from(v: usize) -> Self {
        AuxValue::Int(v as u64)
    }
}

impl From<String> for AuxValue {
    fn from(v: String) -> Self {
        AuxValue::Text(v)
    }
}

impl From<&str> for AuxValue {
    fn from(v: &str) -> Self {
        AuxValue::Text(v.to_string())
    }
}

/// Aux key marking a refused run, e.g. a tau size over the memory budget.
pub const STATUS_KEY: &str = "status";
pub const BUDGET_EXCEEDED: &str = "budget_exceeded";

/// One timed observation. `wall_time_ns` carries the full-resolution time the
/// shape checks use; `wall_time_ms` is its rounded-down report value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub scenario: Scenario,
    pub parameter: u64,
    pub repetition: u32,
    pub wall_time_ms: u64,
    pub wall_time_ns: u64,
    pub aux: BTreeMap<String, AuxValue>,
}

impl Measurement {
    pub fn new(scenario: Scenario, parameter: u64, repetition: u32, elapsed: Duration) -> Self {
        let ns = elapsed.as_nanos().min(u64::MAX as u128) as u64;
        Self { scenario, parameter, repetition, wall_time_ms: ns / 1_000_000, wall_time_ns: ns, aux: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<AuxValue>) -> Self {
        self.aux.insert(key.to_string(), value.into());
        self
    }

    pub fn is_refusal(&self) -> bool {
        self.aux.contains_key(STATUS_KEY)
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_nanos(self.wall_time_ns)
    }

    /// Zeroes both time fields, for golden output.
    pub fn without_timing(mut self) -> Self {
        self.wall_time_ms = 0;
        self.wall_time_ns = 0;
        self
    }
}

/// Median wall time in nanoseconds per parameter for one scenario, refusals excluded.
pub fn medians(ms: &[Measurement], scenario: Scenario) -> BTreeMap<u64, u64> {
    medians_by(ms, scenario, |m| Some(m.wall_time_ns))
}

/// Median of an arbitrary per-measurement value, per parameter.
pub fn medians_by(
    ms: &[Measurement],
    scenario: Scenario,
    value: impl Fn(&Measurement) -> Option<u64>,
) -> BTreeMap<u64, u64> {
    let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for m in ms.iter().filter(|m| m.scenario == scenario && !m.is_refusal()) {
        if let Some(v) = value(m) {
            groups.entry(m.parameter).or_default().push(v);
        }
    }
    groups.into_iter().map(|(p, v)| (p, median(v))).collect()
}

/// Lower median for even lengths, so the result is always an observed value.
pub fn median(mut v: Vec<u64>) -> u64 {
    assert!(!v.is_empty(), "median of nothing");
    v.sort_unstable();
    v[(v.len() - 1) / 2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_roundtrip() {
        for s in Scenario::ALL {
            assert_eq!(s.as_str().parse::<Scenario>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        assert!("prove".parse::<Scenario>().is_err());
    }

    #[test]
    fn medians_group_and_skip_refusals() {
        let ms = vec![
            Measurement::new(Scenario::Tau, 12, 0, Duration::from_nanos(30)),
            Measurement::new(Scenario::Tau, 12, 1, Duration::from_nanos(10)),
            Measurement::new(Scenario::Tau, 12, 2, Duration::from_nanos(20)),
            Measurement::new(Scenario::Tau, 20, 0, Duration::ZERO).with(STATUS_KEY, BUDGET_EXCEEDED),
            Measurement::new(Scenario::Verify, 12, 0, Duration::from_nanos(99)),
        ];
        let m = medians(&ms, Scenario::Tau);
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(12, 20)]);
        assert_eq!(median(vec![4, 1, 3, 2]), 2);
    }
}
