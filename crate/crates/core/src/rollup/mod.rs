//! Layer-2 node: transaction pool, sequencer, account state tree and aggregator.

mod batch;
mod node;
mod pool;
mod state;
mod tx;

pub use batch::{apply_batch, Batch, Sequencer, SkippedTx};
pub use node::{
    aggregator_prove, withdrawal_prove, Aggregator, NodeError, ProvedBatch, ProvedWithdrawal, RollupNode, SealedBatch,
    WithdrawalProver,
};
pub use pool::{Pool, Ticket};
pub use state::{
    key_hash, leaf_hash, Account, IndexedAccount, MerklePath, MerkleTree, StateSnapshot, StateTree,
    BALANCE_BITS,
};
pub use tx::{apply_tx, replay, Tx, TxRejection, TxStep};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RollupError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("account index {index} out of range (capacity {capacity})")]
    IndexOutOfRange { index: usize, capacity: usize },
    #[error("transaction {index} is invalid: {reason}")]
    InvalidTx { index: usize, reason: TxRejection },
    #[error("transaction rejected: {0}")]
    Rejected(TxRejection),
    #[error("pool already holds a transaction from {from} with nonce {nonce}")]
    DuplicateNonce { from: usize, nonce: u64 },
    #[error("batch pre_root does not match the current state root")]
    RootMismatch,
    #[error("integrity violation: {0}")]
    Integrity(String),
    #[error("i/o: {0}")]
    Io(String),
}
