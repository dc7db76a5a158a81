//! The batch-transfer and withdrawal circuits.
//!
//! Both circuits are reconstructions: each checks the rollup's transfer rules
//! (see [`crate::rollup`]) with the secret-key authorization scheme
//! `key_hash = H(secret, 0)`. The aggregator therefore sees user secrets.

mod batch;
mod withdrawal;

pub use batch::{
    assign_batch_witness, batch_constraint_count, batch_system_with_witness, build_batch_circuit,
    per_tx_constraints, trace_batch, BatchCircuitParams, BatchPublicInputs, BatchTrace, TxWitness,
};
pub use withdrawal::{
    assign_withdrawal_witness, build_withdrawal_circuit, nullifier, withdrawal_constraint_count,
    withdrawal_system_with_witness, WithdrawalPublicInputs, WithdrawalRequest,
};

use thiserror::Error;

use crate::r1cs::R1csError;
use crate::rollup::TxRejection;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("invalid circuit parameters: {0}")]
    Params(String),
    #[error(transparent)]
    R1cs(#[from] R1csError),
    #[error("batch has {got} transactions, circuit expects {expected}")]
    BatchSize { expected: usize, got: usize },
    #[error("transaction {index} is invalid: {reason}")]
    InvalidTx { index: usize, reason: TxRejection },
    #[error("batch roots do not match the replayed state")]
    RootMismatch,
    #[error("account index {index} out of range for depth {depth}")]
    IndexOutOfRange { index: usize, depth: usize },
    #[error("secret does not match the account key")]
    WrongSecret,
    #[error("insufficient balance: have {balance}, withdrawing {amount}")]
    InsufficientBalance { balance: u64, amount: u64 },
}

/// Little-endian direction bits of a leaf index.
pub(crate) fn index_bits(index: usize, depth: usize) -> Vec<bool> {
    (0..depth).map(|i| (index >> i) & 1 == 1).collect()
}
