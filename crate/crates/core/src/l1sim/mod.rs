//! Simulated base chain: the rollup contract, an analytic gas model and fiat conversion.

mod contract;
mod gas;

pub use contract::{
    batch_calldata, encode_tx_data, withdrawal_calldata, write_receipts, DepositRecord, Receipt, RollupContract,
    VerifiedBatch, NULLIFIER_SPENT, PROOF_INVALID, ROOT_MISMATCH, UNKNOWN_ROOT,
};
pub use gas::{
    format_decimal, gas_for_submission, parse_decimal, per_tx_cost, rational_to_f64, round_half_even, CostConfig,
    GasSchedule, PriceConfig, TxCost, USD_PLACES,
};

use thiserror::Error;

use crate::groth16::Groth16Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum L1Error {
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Groth16(#[from] Groth16Error),
}
