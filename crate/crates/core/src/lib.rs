//! End-to-end ZK-rollup pipeline with a cost benchmark harness.
//!
//! The crate is split along the four stages of a rollup's proving pipeline:
//!
//! - [`algebra`]: BN254 scalar field, groups, pairing, bucketed MSM and radix-2 FFT.
//! - [`r1cs`] and [`circuits`]: constraint-system builder, gadgets, and the batch /
//!   withdrawal circuits.
//! - [`groth16`]: powers-of-tau ceremony, circuit-specific key generation, prover and
//!   verifier.
//! - [`rollup`] and [`l1sim`]: the L2 node (pool, sequencer, aggregator) and the
//!   simulated mainchain contract with its gas model.
//!
//! [`bench`] drives all of them to produce timing and cost reports.

pub mod algebra;
pub mod bench;
pub mod circuits;
pub mod entropy;
pub mod groth16;
pub mod l1sim;
pub mod r1cs;
pub mod rollup;

pub use entropy::{Entropy, RandomnessMode};

pub use algebra::Scalar;

