//! Withdrawal circuit.
//!
//! Publics: `(state_root, recipient_tag, amount, nullifier)`. The prover knows a
//! secret whose key hash sits in a leaf under `state_root`, the leaf balance covers
//! `amount`, and `nullifier = H(secret, index)` for the leaf index. The circuit
//! does not depend on any batch size.

use ark_ff::Field;
use serde::{Deserialize, Serialize};

use super::{index_bits, CircuitError};
use crate::algebra::{scalar_hex, Scalar};
use crate::r1cs::gadgets::{
    enforce_equal, hash2, hash2_lc, merkle_root_lc, range_check_constraints, range_check_lc, HASH2_CONSTRAINTS,
    MERKLE_LEVEL_CONSTRAINTS,
};
use crate::r1cs::{ConstraintSystem, LinearCombination, Witness};
use crate::rollup::{key_hash, StateTree, BALANCE_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WithdrawalPublicInputs {
    #[serde(with = "scalar_hex")]
    pub state_root: Scalar,
    #[serde(with = "scalar_hex")]
    pub recipient_tag: Scalar,
    #[serde(with = "scalar_hex")]
    pub amount: Scalar,
    #[serde(with = "scalar_hex")]
    pub nullifier: Scalar,
}

impl WithdrawalPublicInputs {
    pub fn to_vec(&self) -> Vec<Scalar> {
        vec![self.state_root, self.recipient_tag, self.amount, self.nullifier]
    }
}

pub fn nullifier(secret: Scalar, index: usize) -> Scalar {
    hash2(secret, Scalar::from(index as u64))
}

pub fn withdrawal_constraint_count(depth: usize) -> usize {
    4 * HASH2_CONSTRAINTS // key hash, two for the leaf, nullifier
        + depth * MERKLE_LEVEL_CONSTRAINTS
        + 1 // root equality
        + 2 * range_check_constraints(BALANCE_BITS)
        + 1 // nullifier equality
        + 1 // recipient tag binding
}

/// Out-of-circuit request; turned into a witness by [`assign_withdrawal_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WithdrawalRequest {
    pub index: usize,
    pub secret: Scalar,
    pub amount: u64,
    pub recipient_tag: Scalar,
}

struct Values {
    publics: WithdrawalPublicInputs,
    index: usize,
    secret: Scalar,
    balance: Scalar,
    nonce: Scalar,
    siblings: Vec<Scalar>,
}

fn synthesize(depth: usize, v: Option<&Values>) -> Result<ConstraintSystem, CircuitError> {
    if depth == 0 || depth > 24 {
        return Err(CircuitError::Params(format!("tree depth {depth} outside 1..=24")));
    }
    let mut cs = ConstraintSystem::new();
    let root = cs.alloc_public(v.map(|v| v.publics.state_root))?;
    let tag = cs.alloc_public(v.map(|v| v.publics.recipient_tag))?;
    let amount = cs.alloc_public(v.map(|v| v.publics.amount))?;
    let nf = cs.alloc_public(v.map(|v| v.publics.nullifier))?;

    let secret = cs.alloc_private(v.map(|v| v.secret))?;
    let balance = cs.alloc_private(v.map(|v| v.balance))?;
    let nonce = cs.alloc_private(v.map(|v| v.nonce))?;
    let bits = v.map(|v| index_bits(v.index, depth));
    let path = (0..depth)
        .map(|lvl| {
            let sib = cs.alloc_private(v.map(|v| v.siblings[lvl]))?;
            let bit = cs.alloc_private(bits.as_ref().map(|b| Scalar::from(b[lvl] as u64)))?;
            Ok((sib, bit))
        })
        .collect::<Result<Vec<_>, CircuitError>>()?;

    // ties the recipient into a constraint of its own
    let tag_sq = cs.alloc_private(v.map(|v| v.publics.recipient_tag.square()))?;
    cs.enforce(tag, tag, tag_sq)?;

    let kh = hash2_lc(&mut cs, &secret.into(), &LinearCombination::zero())?;
    let inner = hash2_lc(&mut cs, &balance.into(), &nonce.into())?;
    let leaf = hash2_lc(&mut cs, &kh.into(), &inner.into())?;
    let computed = merkle_root_lc(&mut cs, &leaf.into(), &path)?;
    enforce_equal(&mut cs, computed, root)?;

    range_check_lc(&mut cs, &amount.into(), BALANCE_BITS)?;
    range_check_lc(&mut cs, &(LinearCombination::from(balance) - amount), BALANCE_BITS)?;

    let mut index = LinearCombination::zero();
    let mut coeff = Scalar::from(1u64);
    for &(_, bit) in &path {
        index = index + (coeff, bit);
        coeff = coeff + coeff;
    }
    let computed_nf = hash2_lc(&mut cs, &secret.into(), &index)?;
    enforce_equal(&mut cs, computed_nf, nf)?;
    cs.finalize()?;
    Ok(cs)
}

pub fn build_withdrawal_circuit(depth: usize) -> Result<ConstraintSystem, CircuitError> {
    synthesize(depth, None)
}

/// Witness and publics for a withdrawal against the current state; refuses
/// a wrong secret or an amount above the balance before any synthesis.
pub fn assign_withdrawal_witness(
    state: &StateTree,
    req: &WithdrawalRequest,
) -> Result<(Witness, WithdrawalPublicInputs), CircuitError> {
    let account = *state
        .account(req.index)
        .map_err(|_| CircuitError::IndexOutOfRange { index: req.index, depth: state.depth() })?;
    if key_hash(req.secret) != account.key_hash {
        return Err(CircuitError::WrongSecret);
    }
    if req.amount > account.balance {
        return Err(CircuitError::InsufficientBalance { balance: account.balance, amount: req.amount });
    }
    let (cs, w, publics) = withdrawal_system_with_witness(state, req)?;
    debug_assert!(cs.is_satisfied(&w).unwrap_or(false));
    Ok((w, publics))
}

/// Synthesizes with values taken as-is (no refusal checks), for negative tests.
pub fn withdrawal_system_with_witness(
    state: &StateTree,
    req: &WithdrawalRequest,
) -> Result<(ConstraintSystem, Witness, WithdrawalPublicInputs), CircuitError> {
    let account = *state
        .account(req.index)
        .map_err(|_| CircuitError::IndexOutOfRange { index: req.index, depth: state.depth() })?;
    let publics = WithdrawalPublicInputs {
        state_root: state.root(),
        recipient_tag: req.recipient_tag,
        amount: Scalar::from(req.amount),
        nullifier: nullifier(req.secret, req.index),
    };
    let values = Values {
        publics,
        index: req.index,
        secret: req.secret,
        balance: Scalar::from(account.balance),
        nonce: Scalar::from(account.nonce),
        siblings: state.path(req.index).expect("index checked").into_iter().map(|(s, _)| s).collect(),
    };
    let cs = synthesize(state.depth(), Some(&values))?;
    let w = cs.witness()?;
    Ok((cs, w, publics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rollup::Account;

    fn state() -> (StateTree, Scalar) {
        let sk = Scalar::from(99u64);
        (StateTree::with_accounts(3, &[Account::new(Scalar::from(1u64), 5), Account::new(sk, 40)]).unwrap(), sk)
    }

    #[test]
    fn count_is_fixed() {
        for d in [1, 3, 8] {
            assert_eq!(build_withdrawal_circuit(d).unwrap().num_constraints(), withdrawal_constraint_count(d));
        }
        assert_eq!(build_withdrawal_circuit(8).unwrap().num_public(), 4);
    }

    #[test]
    fn valid_and_refused() {
        let (st, sk) = state();
        let req = WithdrawalRequest { index: 1, secret: sk, amount: 40, recipient_tag: Scalar::from(7u64) };
        let (w, publics) = assign_withdrawal_witness(&st, &req).unwrap();
        let cs = build_withdrawal_circuit(3).unwrap();
        assert!(cs.is_satisfied(&w).unwrap());
        assert_eq!(cs.public_inputs(&w).unwrap(), publics.to_vec().as_slice());
        assert_eq!(publics.nullifier, nullifier(sk, 1));

        let over = WithdrawalRequest { amount: 41, ..req.clone() };
        assert_eq!(assign_withdrawal_witness(&st, &over), Err(CircuitError::InsufficientBalance { balance: 40, amount: 41 }));
        let (cs, w, _) = withdrawal_system_with_witness(&st, &over).unwrap();
        assert!(!cs.is_satisfied(&w).unwrap());

        let wrong = WithdrawalRequest { secret: sk + Scalar::from(1u64), ..req.clone() };
        assert_eq!(assign_withdrawal_witness(&st, &wrong), Err(CircuitError::WrongSecret));
        let (cs, w, _) = withdrawal_system_with_witness(&st, &wrong).unwrap();
        assert!(!cs.is_satisfied(&w).unwrap());
    }

    #[test]
    fn wrong_nullifier_unsatisfied() {
        let (st, sk) = state();
        let req = WithdrawalRequest { index: 1, secret: sk, amount: 3, recipient_tag: Scalar::from(7u64) };
        let (cs, mut w, _) = withdrawal_system_with_witness(&st, &req).unwrap();
        w.set(4, nullifier(sk, 2)).unwrap();
        assert!(!cs.is_satisfied(&w).unwrap());
    }
}
