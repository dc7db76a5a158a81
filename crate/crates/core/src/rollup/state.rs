//! Account model and the Merkle state tree.

use serde::{Deserialize, Serialize};

use super::RollupError;
use crate::algebra::{scalar_hex, Scalar, Zero};
use crate::r1cs::gadgets::{hash2, merkle_root};

/// Exclusive upper bound on balances and amounts.
pub const BALANCE_BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Account {
    #[serde(with = "scalar_hex")]
    pub key_hash: Scalar,
    pub balance: u64,
    pub nonce: u64,
}

impl Account {
    pub fn new(secret: Scalar, balance: u64) -> Self {
        Self { key_hash: key_hash(secret), balance, nonce: 0 }
    }

    /// `H(key_hash, H(balance, nonce))`
    pub fn leaf(&self) -> Scalar {
        leaf_hash(self.key_hash, Scalar::from(self.balance), Scalar::from(self.nonce))
    }
}

/// Public key of a secret: `H(secret, 0)`.
pub fn key_hash(secret: Scalar) -> Scalar {
    hash2(secret, Scalar::zero())
}

pub fn leaf_hash(key_hash: Scalar, balance: Scalar, nonce: Scalar) -> Scalar {
    hash2(key_hash, hash2(balance, nonce))
}

/// Merkle path of one leaf: `(sibling, node_is_right_child)` from the leaf level up.
pub type MerklePath = Vec<(Scalar, bool)>;

/// Binary Merkle tree with every level cached. `levels[0]` holds the leaves,
/// `levels[depth]` the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MerkleTree {
    levels: Vec<Vec<Scalar>>,
}

impl MerkleTree {
    pub fn new(leaves: Vec<Scalar>) -> Result<Self, RollupError> {
        if leaves.is_empty() || !leaves.len().is_power_of_two() {
            return Err(RollupError::Malformed(format!("{} leaves is not a power of two", leaves.len())));
        }
        let mut levels = vec![leaves];
        while levels.last().map_or(0, Vec::len) > 1 {
            let prev = levels.last().expect("non-empty");
            let next = prev.chunks(2).map(|p| hash2(p[0], p[1])).collect();
            levels.push(next);
        }
        Ok(Self { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn root(&self) -> Scalar {
        self.levels[self.depth()][0]
    }

    pub fn leaves(&self) -> &[Scalar] {
        &self.levels[0]
    }

    pub fn path(&self, index: usize) -> MerklePath {
        let mut idx = index;
        (0..self.depth())
            .map(|lvl| {
                let sib = self.levels[lvl][idx ^ 1];
                let right = idx & 1 == 1;
                idx >>= 1;
                (sib, right)
            })
            .collect()
    }

    pub fn update(&mut self, index: usize, leaf: Scalar) {
        self.levels[0][index] = leaf;
        let mut idx = index;
        for lvl in 0..self.depth() {
            let pair = idx & !1;
            let parent = hash2(self.levels[lvl][pair], self.levels[lvl][pair + 1]);
            idx >>= 1;
            self.levels[lvl + 1][idx] = parent;
        }
    }
}

/// Accounts plus the tree over their leaves. Every mutation goes through
/// [`StateTree::set_account`], which keeps the root current.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTree {
    accounts: Vec<Account>,
    tree: MerkleTree,
}

impl StateTree {
    pub fn new(depth: usize) -> Result<Self, RollupError> {
        if depth == 0 || depth > 24 {
            return Err(RollupError::Malformed(format!("tree depth {depth} outside 1..=24")));
        }
        let accounts = vec![Account::default(); 1 << depth];
        let empty = Account::default().leaf();
        let tree = MerkleTree::new(vec![empty; 1 << depth])?;
        Ok(Self { accounts, tree })
    }

    /// Builds a tree with `accounts` placed at indices `0..accounts.len()`.
    pub fn with_accounts(depth: usize, accounts: &[Account]) -> Result<Self, RollupError> {
        let mut st = Self::new(depth)?;
        if accounts.len() > st.capacity() {
            return Err(RollupError::Malformed(format!("{} accounts exceed capacity {}", accounts.len(), st.capacity())));
        }
        st.accounts[..accounts.len()].copy_from_slice(accounts);
        st.tree = MerkleTree::new(st.accounts.iter().map(Account::leaf).collect())?;
        Ok(st)
    }

    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    pub fn capacity(&self) -> usize {
        self.accounts.len()
    }

    pub fn root(&self) -> Scalar {
        self.tree.root()
    }

    pub fn account(&self, index: usize) -> Result<&Account, RollupError> {
        self.accounts.get(index).ok_or(RollupError::IndexOutOfRange { index, capacity: self.capacity() })
    }

    pub fn accounts(&self) -> &[Account] {
        &self.accounts
    }

    pub fn path(&self, index: usize) -> Result<MerklePath, RollupError> {
        self.account(index)?;
        Ok(self.tree.path(index))
    }

    pub fn set_account(&mut self, index: usize, account: Account) -> Result<(), RollupError> {
        self.account(index)?;
        self.accounts[index] = account;
        self.tree.update(index, account.leaf());
        Ok(())
    }

    pub fn total_balance(&self) -> u128 {
        self.accounts.iter().map(|a| a.balance as u128).sum()
    }

    /// Recomputes the root from scratch; equals [`StateTree::root`] by invariant.
    pub fn recompute_root(&self) -> Scalar {
        MerkleTree::new(self.accounts.iter().map(Account::leaf).collect()).expect("power of two").root()
    }

    pub fn verify_path(&self, index: usize) -> Result<bool, RollupError> {
        Ok(merkle_root(self.account(index)?.leaf(), &self.path(index)?) == self.root())
    }

    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            depth: self.depth(),
            accounts: self
                .accounts
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != Account::default())
                .map(|(index, a)| IndexedAccount { index, account: *a })
                .collect(),
            leaves: self.tree.leaves().to_vec(),
            root: self.root(),
        }
    }

    pub fn from_snapshot(snap: &StateSnapshot) -> Result<Self, RollupError> {
        let mut st = Self::new(snap.depth)?;
        for ia in &snap.accounts {
            st.account(ia.index)?;
            st.accounts[ia.index] = ia.account;
        }
        st.tree = MerkleTree::new(st.accounts.iter().map(Account::leaf).collect())?;
        if st.root() != snap.root || st.tree.leaves() != snap.leaves.as_slice() {
            return Err(RollupError::Integrity("snapshot leaves or root do not match its accounts".into()));
        }
        Ok(st)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedAccount {
    pub index: usize,
    #[serde(flatten)]
    pub account: Account,
}

/// JSON export of a state tree. Only non-empty accounts are listed; all leaves are.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub depth: usize,
    pub accounts: Vec<IndexedAccount>,
    #[serde(with = "scalar_hex::vec")]
    pub leaves: Vec<Scalar>,
    #[serde(with = "scalar_hex")]
    pub root: Scalar,
}
