//! The rollup verifier contract as a native state machine.

use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::gas::{gas_for_submission, GasSchedule};
use super::L1Error;
use crate::algebra::{scalar_hex, scalar_to_bytes, Scalar};
use crate::circuits::{BatchPublicInputs, WithdrawalPublicInputs};
use crate::groth16::{verify, Proof, ProofJson, VerifyingKey};
use crate::rollup::{Account, StateTree, Tx};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Receipt {
    pub accepted: bool,
    pub gas_used: u64,
    pub calldata_bytes: usize,
    pub reason: Option<String>,
    pub batch_seq: Option<u64>,
}

impl Receipt {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

pub fn write_receipts(receipts: &[Receipt], mut out: impl Write) -> Result<(), L1Error> {
    for r in receipts {
        writeln!(out, "{}", r.to_json_line()).map_err(|e| L1Error::Io(e.to_string()))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifiedBatch {
    pub seq: u64,
    #[serde(with = "scalar_hex")]
    pub old_root: Scalar,
    #[serde(with = "scalar_hex")]
    pub new_root: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepositRecord {
    pub index: usize,
    pub amount: u64,
    #[serde(with = "scalar_hex")]
    pub new_root: Scalar,
}

pub const ROOT_MISMATCH: &str = "root mismatch";
pub const PROOF_INVALID: &str = "proof invalid";
pub const NULLIFIER_SPENT: &str = "nullifier spent";
pub const UNKNOWN_ROOT: &str = "unknown root";

#[derive(Debug, Clone)]
pub struct RollupContract {
    vk_batch: VerifyingKey,
    vk_withdrawal: VerifyingKey,
    genesis_root: Scalar,
    current_root: Scalar,
    verified_batches: Vec<VerifiedBatch>,
    deposits: Vec<DepositRecord>,
    /// Every root a withdrawal may reference: genesis, accepted batch outputs, deposit outputs.
    known_roots: HashSet<[u8; 32]>,
    spent_nullifiers: HashSet<[u8; 32]>,
}

/// Calldata of a batch submission: proof bytes followed by the 32-byte publics,
/// then the optional transfer data.
pub fn batch_calldata(proof: &Proof, publics: &BatchPublicInputs, tx_data: &[u8]) -> Vec<u8> {
    let mut out = proof.to_bytes().to_vec();
    for p in publics.to_vec() {
        out.extend_from_slice(&scalar_to_bytes(&p));
    }
    out.extend_from_slice(tx_data);
    out
}

pub fn withdrawal_calldata(proof: &Proof, publics: &WithdrawalPublicInputs) -> Vec<u8> {
    let mut out = proof.to_bytes().to_vec();
    for p in publics.to_vec() {
        out.extend_from_slice(&scalar_to_bytes(&p));
    }
    out
}

/// Per-transfer data for full data availability: from u32, to u32, amount u64, nonce u64.
pub fn encode_tx_data(txs: &[Tx]) -> Vec<u8> {
    let mut out = Vec::with_capacity(txs.len() * 24);
    for tx in txs {
        out.extend_from_slice(&(tx.from as u32).to_be_bytes());
        out.extend_from_slice(&(tx.to as u32).to_be_bytes());
        out.extend_from_slice(&(tx.amount as u64).to_be_bytes());
        out.extend_from_slice(&tx.nonce.to_be_bytes());
    }
    out
}

impl RollupContract {
    pub fn deploy(vk_batch: VerifyingKey, vk_withdrawal: VerifyingKey, genesis_root: Scalar) -> Self {
        Self {
            vk_batch,
            vk_withdrawal,
            genesis_root,
            current_root: genesis_root,
            verified_batches: Vec::new(),
            deposits: Vec::new(),
            known_roots: HashSet::from([scalar_to_bytes(&genesis_root)]),
            spent_nullifiers: HashSet::new(),
        }
    }

    pub fn genesis_root(&self) -> Scalar {
        self.genesis_root
    }

    pub fn current_root(&self) -> Scalar {
        self.current_root
    }

    pub fn verified_batches(&self) -> &[VerifiedBatch] {
        &self.verified_batches
    }

    pub fn deposits(&self) -> &[DepositRecord] {
        &self.deposits
    }

    pub fn is_spent(&self, nullifier: &Scalar) -> bool {
        self.spent_nullifiers.contains(&scalar_to_bytes(nullifier))
    }

    pub fn submit_batch(&mut self, proof: &Proof, publics: &BatchPublicInputs, schedule: &GasSchedule) -> Receipt {
        self.submit_batch_with_data(proof, publics, &[], schedule)
    }

    /// `tx_data` is charged as calldata only when `schedule.post_tx_data` is set.
    pub fn submit_batch_with_data(
        &mut self,
        proof: &Proof,
        publics: &BatchPublicInputs,
        tx_data: &[u8],
        schedule: &GasSchedule,
    ) -> Receipt {
        let data = if schedule.post_tx_data { tx_data } else { &[] };
        let calldata = batch_calldata(proof, publics, data);
        let gas_used = gas_for_submission(2, &calldata, schedule);
        let reject = |reason: &str| Receipt {
            accepted: false,
            gas_used,
            calldata_bytes: calldata.len(),
            reason: Some(reason.to_string()),
            batch_seq: None,
        };
        if publics.old_state_root != self.current_root {
            return reject(ROOT_MISMATCH);
        }
        if !verify(&self.vk_batch, &publics.to_vec(), proof).unwrap_or(false) {
            return reject(PROOF_INVALID);
        }
        let seq = self.verified_batches.len() as u64;
        self.verified_batches.push(VerifiedBatch { seq, old_root: publics.old_state_root, new_root: publics.new_state_root });
        self.known_roots.insert(scalar_to_bytes(&publics.new_state_root));
        self.current_root = publics.new_state_root;
        Receipt { accepted: true, gas_used, calldata_bytes: calldata.len(), reason: None, batch_seq: Some(seq) }
    }

    /// Accepts the JSON proof format; malformed JSON or a wrong public count is a usage error.
    pub fn submit_batch_json(&mut self, json: &str, schedule: &GasSchedule) -> Result<Receipt, L1Error> {
        let (proof, publics) = ProofJson::from_json(json)?.decode()?;
        let [old, new] = publics[..] else {
            return Err(L1Error::Usage(format!("batch proofs carry 2 public inputs, got {}", publics.len())));
        };
        Ok(self.submit_batch(&proof, &BatchPublicInputs { old_state_root: old, new_state_root: new }, schedule))
    }

    pub fn submit_withdrawal(
        &mut self,
        proof: &Proof,
        publics: &WithdrawalPublicInputs,
        schedule: &GasSchedule,
    ) -> Receipt {
        let calldata = withdrawal_calldata(proof, publics);
        let gas_used = gas_for_submission(4, &calldata, schedule);
        let reject = |reason: &str| Receipt {
            accepted: false,
            gas_used,
            calldata_bytes: calldata.len(),
            reason: Some(reason.to_string()),
            batch_seq: None,
        };
        if !self.known_roots.contains(&scalar_to_bytes(&publics.state_root)) {
            return reject(UNKNOWN_ROOT);
        }
        if self.is_spent(&publics.nullifier) {
            return reject(NULLIFIER_SPENT);
        }
        if !verify(&self.vk_withdrawal, &publics.to_vec(), proof).unwrap_or(false) {
            return reject(PROOF_INVALID);
        }
        self.spent_nullifiers.insert(scalar_to_bytes(&publics.nullifier));
        Receipt { accepted: true, gas_used, calldata_bytes: calldata.len(), reason: None, batch_seq: None }
    }

    /// Privileged deposit: credits `index` in the mirrored L2 state outside the proof path
    /// and moves the contract root along. `key_hash` claims an empty slot; for an
    /// occupied slot it must match.
    pub fn deposit(
        &mut self,
        state: &mut StateTree,
        index: usize,
        key_hash: Scalar,
        amount: u64,
        schedule: &GasSchedule,
    ) -> Result<Receipt, L1Error> {
        if state.root() != self.current_root {
            return Err(L1Error::Usage("mirrored state is not at the contract root".into()));
        }
        let current = *state.account(index).map_err(|e| L1Error::Usage(e.to_string()))?;
        let mut next = if current == Account::default() { Account { key_hash, ..current } } else { current };
        if next.key_hash != key_hash {
            return Err(L1Error::Usage(format!("account {index} belongs to another key")));
        }
        next.balance = next.balance.checked_add(amount).ok_or_else(|| L1Error::Usage("deposit overflows balance".into()))?;
        state.set_account(index, next).map_err(|e| L1Error::Usage(e.to_string()))?;
        self.current_root = state.root();
        self.known_roots.insert(scalar_to_bytes(&self.current_root));
        self.deposits.push(DepositRecord { index, amount, new_root: self.current_root });
        Ok(Receipt {
            accepted: true,
            gas_used: schedule.tx_base + schedule.storage_update,
            calldata_bytes: 0,
            reason: None,
            batch_seq: None,
        })
    }
}
