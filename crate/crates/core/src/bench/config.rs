use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::algebra::Workers;
use crate::entropy::Entropy;
use crate::groth16::{memory_budget_from_env, DEFAULT_MEMORY_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub tau_ns: Vec<u32>,
    pub batch_sizes: Vec<usize>,
    pub repetitions: u32,
    pub tree_depth: usize,
    pub memory_budget_bytes: u64,
    /// All randomness (ceremony, keys, blinding, workloads) derives from this
    /// seed when set; otherwise the OS RNG is mixed in.
    pub deterministic_seed: Option<String>,
    /// Where tau, prepared parameters and keys persist between runs.
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for MSM/FFT; `None` uses every core.
    pub workers: Option<usize>,
    /// Progress lines on stderr.
    pub verbose: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            tau_ns: (12..=16).collect(),
            batch_sizes: vec![4, 8, 16],
            repetitions: 5,
            tree_depth: 8,
            memory_budget_bytes: DEFAULT_MEMORY_BUDGET,
            deterministic_seed: None,
            cache_dir: None,
            workers: None,
            verbose: false,
        }
    }
}

impl ScenarioConfig {
    /// Defaults with the memory budget taken from the environment.
    pub fn from_env() -> Result<Self, BenchError> {
        Ok(Self { memory_budget_bytes: memory_budget_from_env()?, ..Self::default() })
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Usage(m.to_string()));
        if self.tau_ns.is_empty() {
            return bad("tau_ns is empty");
        }
        if self.batch_sizes.is_empty() || self.batch_sizes.contains(&0) {
            return bad("batch sizes must be positive");
        }
        if self.batch_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("batch sizes must be strictly ascending");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if !(1..=24).contains(&self.tree_depth) {
            return bad("tree depth must be in 1..=24");
        }
        Ok(())
    }

    pub fn entropy(&self) -> Entropy {
        match &self.deterministic_seed {
            Some(seed) => Entropy::deterministic(seed.as_bytes()),
            None => Entropy::system(b"zkrb/bench"),
        }
    }

    pub fn workers(&self) -> Workers {
        self.workers.map_or_else(Workers::available, Workers)
    }
}

/// Parses `12..16` (inclusive), `12..=16`, `12,13,15` or a single number.
pub fn parse_list<T>(s: &str) -> Result<Vec<T>, BenchError>
where
    T: std::str::FromStr + Copy + PartialOrd + std::ops::Add<Output = T> + From<u8>,
{
    let bad = || BenchError::Usage(format!("cannot parse list {s:?}"));
    let num = |t: &str| t.trim().parse::<T>().map_err(|_| bad());
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(bad());
        }
        let mut out = Vec::new();
        let mut x = lo;
        while x <= hi {
            out.push(x);
            x = x + T::from(1);
        }
        return Ok(out);
    }
    s.split(',').map(num).collect()
}
