//! Groth16 over BN254: powers-of-tau ceremony, QAP reduction, key generation,
//! proving and verification.

mod ceremony;
mod io;
mod keys;
mod prepared;
pub mod qap;
mod prover;
mod verifier;

pub use ceremony::{
    apply_secret, g1_len, g2_len, memory_budget_from_env, parse_bytes, projected_memory, tau_contribute,
    tau_contribute_with, tau_init, tau_init_with_budget, tau_verify_chain, tau_verify_chain_with, TauAccumulator,
    DEFAULT_MEMORY_BUDGET, MAX_TAU_N, MEMORY_BUDGET_ENV, MIN_TAU_N, TAU_MAGIC,
};
pub use io::{sha256, PointEncoding};
pub use keys::{setup, setup_with_prepared, ProvingKey, VerifyingKey};
pub use prepared::{check_capacity, required_tau_n, PreparedTau};
pub use prover::{prove, prove_with, Proof, ProofJson, PROOF_BYTES};
pub use verifier::verify;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::r1cs::R1csError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Groth16Error {
    #[error("tau size n={n} outside {min}..={max}")]
    TauSize { n: u32, min: u32, max: u32 },
    #[error("accumulator for n={n} needs ~{projected} bytes, over the budget of {budget}")]
    BudgetExceeded { n: u32, projected: u64, budget: u64 },
    #[error("accumulator with n={available_n} cannot key a domain of {domain_size}; need n >= {required_n}")]
    Capacity { domain_size: usize, required_n: u32, available_n: u32 },
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("witness does not satisfy the constraint system")]
    Unsatisfied,
    #[error("expected {expected} public inputs, got {got}")]
    PublicInputs { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("malformed encoding: {0}")]
    Format(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    R1cs(#[from] R1csError),
}
