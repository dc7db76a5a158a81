//! Batches, the sequencer and batch application.

use serde::{Deserialize, Serialize};

use super::pool::{Pool, Ticket};
use super::state::StateTree;
use super::tx::{apply_tx, replay, Tx, TxRejection};
use super::RollupError;
use crate::algebra::{scalar_hex, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub sequence_number: u64,
    pub txs: Vec<Tx>,
    #[serde(with = "scalar_hex")]
    pub pre_root: Scalar,
    #[serde(with = "scalar_hex")]
    pub post_root: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedTx {
    pub ticket: Ticket,
    pub tx: Tx,
    pub reason: TxRejection,
}

/// Forms batches from the pool against a working copy of the state.
#[derive(Debug, Default)]
pub struct Sequencer {
    next_sequence: u64,
}

impl Sequencer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next_sequence(&self) -> u64 {
        self.next_sequence
    }

    /// Drains the pool in FIFO order until `m` transfers apply, skipping (and
    /// consuming) those that do not, then pads with no-ops to exactly `m`.
    /// `state` is left untouched.
    pub fn create_batch(&mut self, pool: &Pool, state: &StateTree, m: usize) -> (Batch, Vec<SkippedTx>) {
        let mut work = state.clone();
        let mut txs = Vec::with_capacity(m);
        let mut skipped = Vec::new();
        while txs.len() < m {
            let Some((ticket, tx)) = pool.pop() else { break };
            match apply_tx(&mut work, &tx) {
                Ok(_) => txs.push(tx),
                Err(reason) => skipped.push(SkippedTx { ticket, tx, reason }),
            }
        }
        while txs.len() < m {
            let pad = Tx::padding();
            apply_tx(&mut work, &pad).expect("no-op always applies");
            txs.push(pad);
        }
        let batch = Batch { sequence_number: self.next_sequence, txs, pre_root: state.root(), post_root: work.root() };
        self.next_sequence += 1;
        (batch, skipped)
    }
}

/// Applies a sealed batch, returning the new state.
pub fn apply_batch(state: &StateTree, batch: &Batch) -> Result<StateTree, RollupError> {
    if batch.pre_root != state.root() {
        return Err(RollupError::RootMismatch);
    }
    let (next, _) = replay(state, &batch.txs).map_err(|e| RollupError::Integrity(e.to_string()))?;
    if next.root() != batch.post_root {
        return Err(RollupError::Integrity("replayed root differs from the batch post_root".into()));
    }
    Ok(next)
}
