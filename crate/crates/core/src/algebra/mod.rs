//! Finite-field, group, pairing, MSM and FFT arithmetic over BN254.
//!
//! Field and curve arithmetic are backed by `ark-bn254`; the multi-scalar
//! multiplication and the evaluation-domain FFT used by the prover are
//! implemented here.

mod counters;
mod curve;
mod fft;
mod field;
mod msm;
pub mod params;

pub use ark_bn254::{Bn254, Fq, Fq2, G1Affine, G1Projective, G2Affine, G2Projective};
pub use ark_ec::{AffineRepr, CurveGroup, PrimeGroup};
pub use ark_ff::{Field, One, PrimeField, UniformRand, Zero};

pub use counters::{Counters, CounterSnapshot};
pub use curve::{
    g1_from_bytes, g1_from_raw, g1_generator, g1_to_bytes, g1_to_raw, g2_from_bytes, g2_from_raw, g2_from_raw_on_curve,
    g2_generator, g2_to_bytes, g2_to_raw, group_op, multi_pairing, pairing, GroupOp, Gt,
    G1_COMPRESSED_BYTES, G1_RAW_BYTES, G2_COMPRESSED_BYTES, G2_RAW_BYTES,
};
pub(crate) use fft::distribute_powers;
pub use fft::{fft, fft_in_place, Direction, DomainElement, EvaluationDomain};
pub use field::{
    field_arith, inverse, scalar_from_bytes, scalar_from_hex, scalar_from_u128, scalar_to_bytes,
    scalar_hex, scalar_to_hex, FieldOp, Scalar, SCALAR_BYTES,
};
pub use msm::{msm, msm_window_size, Workers};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("domain size {0} is not a supported power of two")]
    InvalidDomain(usize),
    #[error("invalid encoding: {0}")]
    Encoding(&'static str),
}
