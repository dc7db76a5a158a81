//! Benchmark scenarios, timing records and report output.

mod artifacts;
mod config;
mod measurement;
mod report;
mod scenarios;
mod workload;

pub use artifacts::{Artifacts, CircuitId, KeyPair};
pub use config::{parse_list, ScenarioConfig};
pub use measurement::{median, medians, medians_by, AuxValue, Measurement, Scenario, BUDGET_EXCEEDED, STATUS_KEY};
pub use report::{emit_report, to_csv, to_json, to_svg, ReportFormat, CSV_HEADER};
pub use scenarios::{
    bench_compile, bench_cost, bench_keygen, bench_prove_verify, bench_tau, Bench, ProvenChain, ScenarioSelection,
    CIRCUIT_KEY,
};
pub use workload::Workload;

use thiserror::Error;

use crate::circuits::CircuitError;
use crate::groth16::Groth16Error;
use crate::l1sim::L1Error;
use crate::rollup::NodeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("scenario {scenario} failed: {reason}")]
    Scenario { scenario: Scenario, reason: String },
    #[error(transparent)]
    Groth16(#[from] Groth16Error),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Node(#[from] NodeError),
    #[error(transparent)]
    L1(#[from] L1Error),
}
