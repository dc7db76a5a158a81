//! Transfers and their state-machine semantics.
//!
//! A transfer with `amount = 0` is a no-op: no authorization, nonce or balance
//! change. Padding transactions rely on this. Any other transfer must carry the
//! sender's secret (`H(secret, 0) = key_hash`), the sender's current nonce, and an
//! amount the sender can cover; the receiver's new balance must stay below `2^64`.
//! The sender is debited before the receiver is credited, so a self-transfer only
//! bumps the nonce.

use serde::{Deserialize, Serialize};

use super::state::{key_hash, Account, MerklePath, StateTree, BALANCE_BITS};
use super::RollupError;
use crate::algebra::{scalar_hex, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tx {
    pub from: usize,
    pub to: usize,
    pub amount: u128,
    pub nonce: u64,
    /// Sender secret key. Carried in the clear because the aggregator checks it in-circuit.
    #[serde(with = "scalar_hex")]
    pub secret: Scalar,
}

impl Tx {
    /// Amount-0 self-transfer from account 0.
    pub fn padding() -> Self {
        Self { from: 0, to: 0, amount: 0, nonce: 0, secret: Scalar::from(0u64) }
    }

    pub fn is_noop(&self) -> bool {
        self.amount == 0
    }

    /// Checks that do not depend on state.
    pub fn check_structure(&self, capacity: usize) -> Result<(), TxRejection> {
        if self.from >= capacity || self.to >= capacity {
            return Err(TxRejection::IndexOutOfRange);
        }
        if self.amount >> BALANCE_BITS != 0 {
            return Err(TxRejection::AmountTooLarge);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(rename_all = "snake_case")]
pub enum TxRejection {
    #[error("account index out of range")]
    IndexOutOfRange,
    #[error("amount does not fit in 64 bits")]
    AmountTooLarge,
    #[error("secret does not match the sender key")]
    BadAuth,
    #[error("nonce does not match the sender account")]
    BadNonce,
    #[error("insufficient balance")]
    InsufficientBalance,
    #[error("receiver balance would overflow")]
    ReceiverOverflow,
}

/// Everything the batch circuit needs to re-check one applied transfer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxStep {
    pub tx: Tx,
    pub root_before: Scalar,
    pub sender_before: Account,
    pub sender_path: MerklePath,
    /// Root after the sender leaf is updated.
    pub root_mid: Scalar,
    /// Receiver as seen in the intermediate state.
    pub receiver_before: Account,
    pub receiver_path: MerklePath,
    pub root_after: Scalar,
}

/// Applies `tx` to `state` in place, or leaves `state` untouched and reports why not.
pub fn apply_tx(state: &mut StateTree, tx: &Tx) -> Result<TxStep, TxRejection> {
    tx.check_structure(state.capacity())?;
    let root_before = state.root();
    let sender_before = *state.account(tx.from).expect("checked");
    let amount = tx.amount as u64;
    let mut sender_after = sender_before;
    if !tx.is_noop() {
        if key_hash(tx.secret) != sender_before.key_hash {
            return Err(TxRejection::BadAuth);
        }
        if tx.nonce != sender_before.nonce {
            return Err(TxRejection::BadNonce);
        }
        sender_after.balance = sender_before.balance.checked_sub(amount).ok_or(TxRejection::InsufficientBalance)?;
        sender_after.nonce += 1;
        let receiver_now = if tx.to == tx.from { sender_after } else { *state.account(tx.to).expect("checked") };
        receiver_now.balance.checked_add(amount).ok_or(TxRejection::ReceiverOverflow)?;
    }
    let sender_path = state.path(tx.from).expect("checked");
    state.set_account(tx.from, sender_after).expect("checked");
    let root_mid = state.root();
    let receiver_before = *state.account(tx.to).expect("checked");
    let receiver_path = state.path(tx.to).expect("checked");
    let mut receiver_after = receiver_before;
    receiver_after.balance += amount;
    state.set_account(tx.to, receiver_after).expect("checked");
    Ok(TxStep {
        tx: tx.clone(),
        root_before,
        sender_before,
        sender_path,
        root_mid,
        receiver_before,
        receiver_path,
        root_after: state.root(),
    })
}

/// Replays `txs` in order on a copy of `state`; fails at the first invalid transfer.
pub fn replay(state: &StateTree, txs: &[Tx]) -> Result<(StateTree, Vec<TxStep>), RollupError> {
    let mut st = state.clone();
    let steps = txs
        .iter()
        .enumerate()
        .map(|(index, tx)| apply_tx(&mut st, tx).map_err(|reason| RollupError::InvalidTx { index, reason }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((st, steps))
}
