//! Batch-transfer circuit.
//!
//! Publics: `(old_root, new_root)`. For each of the `m` transfers, against a
//! running root that starts at `old_root`:
//! - `amount` fits in `balance_bits`; `noop = (amount == 0)`
//! - unless `noop`: `H(secret, 0) = sender.key_hash` and `tx_nonce = sender.nonce`
//! - the sender leaf opens under the running root
//! - `sender.balance - amount` fits in `balance_bits` (no underflow)
//! - the updated sender leaf (`nonce + 1 - noop`) gives an intermediate root
//! - the receiver leaf opens under the intermediate root, its new balance fits,
//!   and its updated leaf gives the next running root
//!
//! The final running root must equal `new_root`.

use ark_ff::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{index_bits, CircuitError};
use crate::algebra::{scalar_hex, Scalar};
use crate::r1cs::gadgets::{
    enforce_equal, hash2_lc, is_zero, merkle_root_lc, range_check_constraints, range_check_lc,
    HASH2_CONSTRAINTS, MAX_RANGE_BITS, MERKLE_LEVEL_CONSTRAINTS,
};
use crate::r1cs::{ConstraintSystem, LinearCombination, Variable, Witness};
use crate::rollup::{leaf_hash, replay, Batch, MerkleTree, StateTree, Tx, BALANCE_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchCircuitParams {
    pub batch_size: usize,
    pub tree_depth: usize,
    pub balance_bits: usize,
}

impl BatchCircuitParams {
    pub fn new(batch_size: usize, tree_depth: usize) -> Self {
        Self { batch_size, tree_depth, balance_bits: BALANCE_BITS }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let bad = |msg: String| Err(CircuitError::Params(msg));
        if self.batch_size == 0 {
            return bad("batch size must be at least 1".into());
        }
        if self.tree_depth == 0 || self.tree_depth > 24 {
            return bad(format!("tree depth {} outside 1..=24", self.tree_depth));
        }
        if self.batch_size > 1 << self.tree_depth {
            return bad(format!("batch size {} exceeds 2^{}", self.batch_size, self.tree_depth));
        }
        if self.balance_bits == 0 || self.balance_bits > MAX_RANGE_BITS - 1 {
            return bad(format!("balance bits {} outside 1..={}", self.balance_bits, MAX_RANGE_BITS - 1));
        }
        Ok(())
    }
}

impl Default for BatchCircuitParams {
    fn default() -> Self {
        Self::new(4, 8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchPublicInputs {
    #[serde(with = "scalar_hex")]
    pub old_state_root: Scalar,
    #[serde(with = "scalar_hex")]
    pub new_state_root: Scalar,
}

impl BatchPublicInputs {
    pub fn to_vec(&self) -> Vec<Scalar> {
        vec![self.old_state_root, self.new_state_root]
    }
}

/// Constraints contributed by one transfer.
pub fn per_tx_constraints(params: &BatchCircuitParams) -> usize {
    3 * range_check_constraints(params.balance_bits) // amount, sender and receiver balances
        + 2 // is_zero
        + 2 // key and nonce checks
        + 9 * HASH2_CONSTRAINTS // key hash and four two-hash leaves
        + 4 * params.tree_depth * MERKLE_LEVEL_CONSTRAINTS
        + 2 // sender root, receiver root
}

/// `a * m + b` with `a = per_tx_constraints` and `b = 1` (final root check).
pub fn batch_constraint_count(params: &BatchCircuitParams) -> usize {
    params.batch_size * per_tx_constraints(params) + 1
}

/// Field-level values for one transfer, computed without validity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxWitness {
    pub from: usize,
    pub to: usize,
    pub secret: Scalar,
    pub amount: Scalar,
    pub tx_nonce: Scalar,
    pub sender: [Scalar; 3],
    pub sender_siblings: Vec<Scalar>,
    pub receiver: [Scalar; 3],
    pub receiver_siblings: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchTrace {
    pub publics: BatchPublicInputs,
    pub steps: Vec<TxWitness>,
}

/// Runs the circuit's update rule over `txs` in the field, with no validity checks.
/// The resulting witness satisfies the circuit exactly when every transfer is valid.
pub fn trace_batch(state: &StateTree, txs: &[Tx]) -> Result<BatchTrace, CircuitError> {
    let depth = state.depth();
    let mut accounts: Vec<[Scalar; 3]> = state
        .accounts()
        .iter()
        .map(|a| [a.key_hash, Scalar::from(a.balance), Scalar::from(a.nonce)])
        .collect();
    let mut tree = MerkleTree::new(state.accounts().iter().map(|a| a.leaf()).collect())
        .expect("state tree has a power-of-two leaf count");
    let old_root = tree.root();
    let leaf = |a: &[Scalar; 3]| leaf_hash(a[0], a[1], a[2]);
    let siblings = |tree: &MerkleTree, i| tree.path(i).into_iter().map(|(s, _)| s).collect::<Vec<_>>();

    let mut steps = Vec::with_capacity(txs.len());
    for tx in txs {
        for index in [tx.from, tx.to] {
            if index >= accounts.len() {
                return Err(CircuitError::IndexOutOfRange { index, depth });
            }
        }
        let amount = crate::algebra::scalar_from_u128(tx.amount);
        let noop = if tx.amount == 0 { Scalar::one() } else { Scalar::zero() };
        let sender = accounts[tx.from];
        let sender_siblings = siblings(&tree, tx.from);
        let sender_after = [sender[0], sender[1] - amount, sender[2] + Scalar::one() - noop];
        accounts[tx.from] = sender_after;
        tree.update(tx.from, leaf(&sender_after));
        let receiver = accounts[tx.to];
        let receiver_siblings = siblings(&tree, tx.to);
        let receiver_after = [receiver[0], receiver[1] + amount, receiver[2]];
        accounts[tx.to] = receiver_after;
        tree.update(tx.to, leaf(&receiver_after));
        steps.push(TxWitness {
            from: tx.from,
            to: tx.to,
            secret: tx.secret,
            amount,
            tx_nonce: Scalar::from(tx.nonce),
            sender,
            sender_siblings,
            receiver,
            receiver_siblings,
        });
    }
    Ok(BatchTrace { publics: BatchPublicInputs { old_state_root: old_root, new_state_root: tree.root() }, steps })
}

fn synthesize(params: &BatchCircuitParams, trace: Option<&BatchTrace>) -> Result<ConstraintSystem, CircuitError> {
    params.validate()?;
    if let Some(t) = trace {
        if t.steps.len() != params.batch_size {
            return Err(CircuitError::BatchSize { expected: params.batch_size, got: t.steps.len() });
        }
    }
    let d = params.tree_depth;
    let bits = params.balance_bits;
    let mut cs = ConstraintSystem::new();
    let old_root = cs.alloc_public(trace.map(|t| t.publics.old_state_root))?;
    let new_root = cs.alloc_public(trace.map(|t| t.publics.new_state_root))?;
    let mut running: LinearCombination = old_root.into();

    for i in 0..params.batch_size {
        let step = trace.map(|t| &t.steps[i]);
        let mut priv_ = |f: &dyn Fn(&TxWitness) -> Scalar| cs.alloc_private(step.map(f));
        let amount = priv_(&|s| s.amount)?;
        let secret = priv_(&|s| s.secret)?;
        let tx_nonce = priv_(&|s| s.tx_nonce)?;
        let s_acc = [priv_(&|s| s.sender[0])?, priv_(&|s| s.sender[1])?, priv_(&|s| s.sender[2])?];
        let r_acc = [priv_(&|s| s.receiver[0])?, priv_(&|s| s.receiver[1])?, priv_(&|s| s.receiver[2])?];
        let s_path = alloc_path(&mut cs, step.map(|s| (s.from, s.sender_siblings.as_slice())), d)?;
        let r_path = alloc_path(&mut cs, step.map(|s| (s.to, s.receiver_siblings.as_slice())), d)?;

        range_check_lc(&mut cs, &amount.into(), bits)?;
        let noop = is_zero(&mut cs, &amount.into())?;
        let active = LinearCombination::from(Variable::ONE) - noop;

        let kh = hash2_lc(&mut cs, &secret.into(), &LinearCombination::zero())?;
        cs.enforce(LinearCombination::from(kh) - s_acc[0], &active, LinearCombination::zero())?;
        cs.enforce(LinearCombination::from(tx_nonce) - s_acc[2], &active, LinearCombination::zero())?;

        let leaf = leaf_lc(&mut cs, s_acc[0].into(), s_acc[1].into(), s_acc[2].into())?;
        let root = merkle_root_lc(&mut cs, &leaf, &s_path)?;
        enforce_equal(&mut cs, root, &running)?;

        let s_bal = LinearCombination::from(s_acc[1]) - amount;
        range_check_lc(&mut cs, &s_bal, bits)?;
        let s_nonce = LinearCombination::from(s_acc[2]) + Variable::ONE - noop;
        let leaf = leaf_lc(&mut cs, s_acc[0].into(), s_bal, s_nonce)?;
        let mid = merkle_root_lc(&mut cs, &leaf, &s_path)?;

        let leaf = leaf_lc(&mut cs, r_acc[0].into(), r_acc[1].into(), r_acc[2].into())?;
        let root = merkle_root_lc(&mut cs, &leaf, &r_path)?;
        enforce_equal(&mut cs, root, mid)?;

        let r_bal = LinearCombination::from(r_acc[1]) + amount;
        range_check_lc(&mut cs, &r_bal, bits)?;
        let leaf = leaf_lc(&mut cs, r_acc[0].into(), r_bal, r_acc[2].into())?;
        running = merkle_root_lc(&mut cs, &leaf, &r_path)?.into();
    }
    enforce_equal(&mut cs, running, new_root)?;
    cs.finalize()?;
    Ok(cs)
}

fn leaf_lc(
    cs: &mut ConstraintSystem,
    key_hash: LinearCombination,
    balance: LinearCombination,
    nonce: LinearCombination,
) -> Result<LinearCombination, CircuitError> {
    let inner = hash2_lc(cs, &balance, &nonce)?;
    Ok(hash2_lc(cs, &key_hash, &inner.into())?.into())
}

fn alloc_path(
    cs: &mut ConstraintSystem,
    values: Option<(usize, &[Scalar])>,
    depth: usize,
) -> Result<Vec<(Variable, Variable)>, CircuitError> {
    let bits = values.map(|(idx, _)| index_bits(idx, depth));
    (0..depth)
        .map(|lvl| {
            let sib = cs.alloc_private(values.map(|(_, s)| s[lvl]))?;
            let bit = cs.alloc_private(bits.as_ref().map(|b| Scalar::from(b[lvl] as u64)))?;
            Ok((sib, bit))
        })
        .collect()
}

/// The finalized batch circuit, without a witness.
pub fn build_batch_circuit(params: &BatchCircuitParams) -> Result<ConstraintSystem, CircuitError> {
    synthesize(params, None)
}

/// Synthesizes the circuit with values from `trace`; no validity checks beyond shape.
pub fn batch_system_with_witness(
    params: &BatchCircuitParams,
    trace: &BatchTrace,
) -> Result<(ConstraintSystem, Witness), CircuitError> {
    let cs = synthesize(params, Some(trace))?;
    let w = cs.witness()?;
    Ok((cs, w))
}

/// Witness for a batch that replays cleanly on `pre_state`; the first invalid
/// transfer is reported by index.
pub fn assign_batch_witness(
    params: &BatchCircuitParams,
    pre_state: &StateTree,
    batch: &Batch,
) -> Result<Witness, CircuitError> {
    params.validate()?;
    if pre_state.depth() != params.tree_depth {
        return Err(CircuitError::Params(format!(
            "state depth {} differs from circuit depth {}",
            pre_state.depth(),
            params.tree_depth
        )));
    }
    if batch.txs.len() != params.batch_size {
        return Err(CircuitError::BatchSize { expected: params.batch_size, got: batch.txs.len() });
    }
    let (post, _) = replay(pre_state, &batch.txs).map_err(|e| match e {
        crate::rollup::RollupError::InvalidTx { index, reason } => CircuitError::InvalidTx { index, reason },
        other => CircuitError::Params(other.to_string()),
    })?;
    if batch.pre_root != pre_state.root() || batch.post_root != post.root() {
        return Err(CircuitError::RootMismatch);
    }
    let trace = trace_batch(pre_state, &batch.txs)?;
    Ok(batch_system_with_witness(params, &trace)?.1)
}
