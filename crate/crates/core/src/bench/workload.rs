//! Seeded random accounts and valid transfers for benchmarks and tests.

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::Scalar;
use crate::entropy::Entropy;
use crate::rollup::{apply_tx, Account, StateTree, Tx};

#[derive(Debug, Clone)]
pub struct Workload {
    rng: ChaCha20Rng,
    depth: usize,
    secrets: Vec<Scalar>,
}

impl Workload {
    /// `accounts` funded accounts at indices `0..accounts` of a depth-`depth` tree.
    pub fn new(entropy: &Entropy, depth: usize, accounts: usize) -> Self {
        let accounts = accounts.clamp(2, 1 << depth);
        let mut rng = entropy.rng("zkrb/workload");
        let secrets = (0..accounts).map(|_| Scalar::from(rng.gen::<u128>())).collect();
        Self { rng, depth, secrets }
    }

    pub fn secret(&self, index: usize) -> Scalar {
        self.secrets[index]
    }

    pub fn accounts(&self) -> usize {
        self.secrets.len()
    }

    /// Genesis state; balances are uniform in `[10^3, 10^6]`.
    pub fn genesis(&mut self) -> StateTree {
        let accounts: Vec<Account> =
            self.secrets.iter().map(|s| Account::new(*s, self.rng.gen_range(1_000..=1_000_000))).collect();
        StateTree::with_accounts(self.depth, &accounts).expect("depth validated by caller")
    }

    /// `count` transfers that apply in order to `state`. Receivers are mostly
    /// funded accounts, sometimes an empty slot.
    pub fn transfers(&mut self, state: &StateTree, count: usize) -> Vec<Tx> {
        let mut work = state.clone();
        let capacity = work.capacity();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let from = self.rng.gen_range(0..self.secrets.len());
            let sender = *work.account(from).expect("in range");
            if sender.balance == 0 {
                continue;
            }
            let to = if self.rng.gen_bool(0.1) { self.rng.gen_range(0..capacity) } else { self.rng.gen_range(0..self.secrets.len()) };
            let amount = self.rng.gen_range(1..=sender.balance.min(5_000)) as u128;
            let tx = Tx { from, to, amount, nonce: sender.nonce, secret: self.secrets[from] };
            if apply_tx(&mut work, &tx).is_ok() {
                out.push(tx);
            }
        }
        out
    }
}
