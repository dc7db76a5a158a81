//! Node facade: sequencer and aggregator behind one object, linked by a queue of
//! sealed batches so each side can be timed on its own.

use std::collections::VecDeque;
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use super::batch::{apply_batch, Batch, Sequencer, SkippedTx};
use super::pool::Pool;
use super::state::StateTree;
use super::RollupError;
use crate::algebra::{Scalar, Workers};
use crate::bench::{Measurement, Scenario};
use crate::circuits::{
    assign_batch_witness, assign_withdrawal_witness, build_batch_circuit, build_withdrawal_circuit, BatchCircuitParams,
    BatchPublicInputs, CircuitError, WithdrawalPublicInputs, WithdrawalRequest,
};
use crate::entropy::Entropy;
use crate::groth16::{prove_with, Groth16Error, Proof, ProvingKey};
use crate::l1sim::{GasSchedule, L1Error, Receipt, RollupContract};
use crate::r1cs::ConstraintSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NodeError {
    #[error(transparent)]
    Rollup(#[from] RollupError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Groth16(#[from] Groth16Error),
    #[error(transparent)]
    L1(#[from] L1Error),
}

#[derive(Debug, Clone)]
pub struct ProvedBatch {
    pub sequence_number: u64,
    pub proof: Proof,
    pub publics: BatchPublicInputs,
    /// `prove_batch`, parameter `m`, repetition = sequence number.
    pub measurement: Measurement,
}

#[derive(Debug, Clone)]
pub struct ProvedWithdrawal {
    pub proof: Proof,
    pub publics: WithdrawalPublicInputs,
    pub measurement: Measurement,
}

/// Batch prover holding the compiled circuit and its proving key.
#[derive(Debug, Clone)]
pub struct Aggregator {
    params: BatchCircuitParams,
    cs: Arc<ConstraintSystem>,
    pk: Arc<ProvingKey>,
    entropy: Entropy,
    workers: Workers,
}

impl Aggregator {
    pub fn new(params: BatchCircuitParams, pk: Arc<ProvingKey>, entropy: Entropy) -> Result<Self, NodeError> {
        let cs = Arc::new(build_batch_circuit(&params)?);
        Ok(Self::with_circuit(params, cs, pk, entropy))
    }

    pub fn with_circuit(
        params: BatchCircuitParams,
        cs: Arc<ConstraintSystem>,
        pk: Arc<ProvingKey>,
        entropy: Entropy,
    ) -> Self {
        Self { params, cs, pk, entropy, workers: Workers::available() }
    }

    pub fn with_workers(mut self, workers: Workers) -> Self {
        self.workers = workers;
        self
    }

    pub fn params(&self) -> &BatchCircuitParams {
        &self.params
    }

    /// Witness assignment plus proof; the measurement covers both.
    pub fn prove(&self, batch: &Batch, pre_state: &StateTree) -> Result<ProvedBatch, NodeError> {
        let entropy = self.entropy.derive(&format!("batch/{}", batch.sequence_number));
        let start = Instant::now();
        let w = assign_batch_witness(&self.params, pre_state, batch)?;
        let proof = prove_with(&self.pk, &self.cs, &w, &entropy, self.workers)?;
        let elapsed = start.elapsed();
        let measurement = Measurement::new(
            Scenario::ProveBatch,
            self.params.batch_size as u64,
            batch.sequence_number as u32,
            elapsed,
        )
        .with("batch_seq", batch.sequence_number);
        Ok(ProvedBatch {
            sequence_number: batch.sequence_number,
            proof,
            publics: BatchPublicInputs { old_state_root: batch.pre_root, new_state_root: batch.post_root },
            measurement,
        })
    }
}

/// One-shot batch proof; builds the circuit on each call.
pub fn aggregator_prove(
    batch: &Batch,
    pre_state: &StateTree,
    params: &BatchCircuitParams,
    pk: Arc<ProvingKey>,
    entropy: &Entropy,
) -> Result<ProvedBatch, NodeError> {
    Aggregator::new(*params, pk, entropy.clone())?.prove(batch, pre_state)
}

#[derive(Debug, Clone)]
pub struct WithdrawalProver {
    cs: Arc<ConstraintSystem>,
    pk: Arc<ProvingKey>,
    entropy: Entropy,
    workers: Workers,
    depth: usize,
}

impl WithdrawalProver {
    pub fn new(depth: usize, pk: Arc<ProvingKey>, entropy: Entropy) -> Result<Self, NodeError> {
        let cs = Arc::new(build_withdrawal_circuit(depth)?);
        Ok(Self { cs, pk, entropy, workers: Workers::available(), depth })
    }

    pub fn with_workers(mut self, workers: Workers) -> Self {
        self.workers = workers;
        self
    }

    /// Refuses a wrong secret or an overdraw before proving. `repetition` only
    /// labels the measurement.
    pub fn prove(&self, state: &StateTree, req: &WithdrawalRequest, repetition: u32) -> Result<ProvedWithdrawal, NodeError> {
        let entropy = self.entropy.derive(&format!("withdrawal/{}/{repetition}", req.index));
        let start = Instant::now();
        let (w, publics) = assign_withdrawal_witness(state, req)?;
        let proof = prove_with(&self.pk, &self.cs, &w, &entropy, self.workers)?;
        let measurement = Measurement::new(Scenario::ProveWithdraw, self.depth as u64, repetition, start.elapsed());
        Ok(ProvedWithdrawal { proof, publics, measurement })
    }
}

pub fn withdrawal_prove(
    state: &StateTree,
    index: usize,
    secret: Scalar,
    amount: u64,
    recipient_tag: Scalar,
    pk_w: Arc<ProvingKey>,
    entropy: &Entropy,
) -> Result<ProvedWithdrawal, NodeError> {
    let req = WithdrawalRequest { index, secret, amount, recipient_tag };
    WithdrawalProver::new(state.depth(), pk_w, entropy.clone())?.prove(state, &req, 0)
}

#[derive(Debug, Clone)]
pub struct SealedBatch {
    pub batch: Batch,
    pub pre_state: StateTree,
}

/// Pool, sequencer and the single-writer state. Sealing a batch advances the
/// state and queues the batch for the aggregator, which only reads it.
#[derive(Debug)]
pub struct RollupNode {
    pool: Pool,
    sequencer: Sequencer,
    state: StateTree,
    batch_size: usize,
    sealed: VecDeque<SealedBatch>,
}

impl RollupNode {
    pub fn new(state: StateTree, batch_size: usize) -> Self {
        Self { pool: Pool::new(state.capacity()), sequencer: Sequencer::new(), state, batch_size, sealed: VecDeque::new() }
    }

    pub fn pool(&self) -> &Pool {
        &self.pool
    }

    pub fn state(&self) -> &StateTree {
        &self.state
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    /// Seals the next batch from the pool (padding if short) and applies it.
    pub fn seal_batch(&mut self) -> Result<(u64, Vec<SkippedTx>), NodeError> {
        let (batch, skipped) = self.sequencer.create_batch(&self.pool, &self.state, self.batch_size);
        let next = apply_batch(&self.state, &batch)?;
        let pre_state = std::mem::replace(&mut self.state, next);
        let seq = batch.sequence_number;
        self.sealed.push_back(SealedBatch { batch, pre_state });
        Ok((seq, skipped))
    }

    pub fn pending(&self) -> usize {
        self.sealed.len()
    }

    pub fn next_sealed(&mut self) -> Option<SealedBatch> {
        self.sealed.pop_front()
    }

    pub fn prove_next(&mut self, aggregator: &Aggregator) -> Option<Result<(SealedBatch, ProvedBatch), NodeError>> {
        let sealed = self.next_sealed()?;
        Some(aggregator.prove(&sealed.batch, &sealed.pre_state).map(|p| (sealed, p)))
    }

    /// Privileged L1 deposit mirrored into the state. Only allowed while every
    /// sealed batch has been handed off and the contract is at the node's root.
    pub fn deposit(
        &mut self,
        contract: &mut RollupContract,
        index: usize,
        key_hash: Scalar,
        amount: u64,
        schedule: &GasSchedule,
    ) -> Result<Receipt, NodeError> {
        if !self.sealed.is_empty() {
            return Err(L1Error::Usage("deposit while sealed batches are pending".into()).into());
        }
        Ok(contract.deposit(&mut self.state, index, key_hash, amount, schedule)?)
    }
}
