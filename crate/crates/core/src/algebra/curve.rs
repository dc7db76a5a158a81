use ark_bn254::{Bn254, Fq, Fq2, G1Affine, G2Affine};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{AffineRepr, CurveGroup};
use ark_ff::{BigInteger, PrimeField};

use super::{counters::Counters, AlgebraError, Scalar};

/// Target group element, written additively as in `ark-ec`.
pub type Gt = PairingOutput<Bn254>;

/// Compressed G1: 32-byte little-endian x followed by one flag byte.
pub const G1_COMPRESSED_BYTES: usize = 33;
/// Compressed G2: x = (c0, c1), 64 bytes, followed by one flag byte.
pub const G2_COMPRESSED_BYTES: usize = 65;
/// Uncompressed G1: x || y, identity encoded as all zero bytes.
pub const G1_RAW_BYTES: usize = 64;
/// Uncompressed G2: x.c0 || x.c1 || y.c0 || y.c1, identity as all zero bytes.
pub const G2_RAW_BYTES: usize = 128;

const FLAG_SMALLER_Y: u8 = 0;
const FLAG_LARGER_Y: u8 = 1;
const FLAG_IDENTITY: u8 = 2;

pub fn g1_generator() -> G1Affine {
    G1Affine::generator()
}

pub fn g2_generator() -> G2Affine {
    G2Affine::generator()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp<G> {
    Add(G),
    ScalarMul(Scalar),
    Neg,
}

/// Applies a group operation to `p`. Works for both G1 and G2 projective points.
pub fn group_op<G: CurveGroup<ScalarField = Scalar>>(p: G, op: GroupOp<G>) -> G {
    match op {
        GroupOp::Add(q) => p + q,
        GroupOp::ScalarMul(k) => p * k,
        GroupOp::Neg => -p,
    }
}

pub fn pairing(p: &G1Affine, q: &G2Affine) -> Gt {
    Counters::record_pairings(1);
    Bn254::pairing(*p, *q)
}

/// Product of pairings, evaluated with a shared final exponentiation.
pub fn multi_pairing(g1: &[G1Affine], g2: &[G2Affine]) -> Result<Gt, AlgebraError> {
    if g1.len() != g2.len() {
        return Err(AlgebraError::LengthMismatch { left: g1.len(), right: g2.len() });
    }
    Counters::record_pairings(g1.len() as u64);
    Ok(Bn254::multi_pairing(g1.iter().copied(), g2.iter().copied()))
}

fn fq_to_bytes(x: &Fq, out: &mut [u8]) {
    out.copy_from_slice(&x.into_bigint().to_bytes_le());
}

fn fq_from_bytes(bytes: &[u8]) -> Result<Fq, AlgebraError> {
    let mut limbs = [0u64; 4];
    for (i, chunk) in bytes.chunks_exact(8).enumerate() {
        limbs[i] = u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
    }
    Fq::from_bigint(ark_ff::BigInt::new(limbs)).ok_or(AlgebraError::Encoding("coordinate not reduced"))
}

pub fn g1_to_bytes(p: &G1Affine) -> [u8; G1_COMPRESSED_BYTES] {
    let mut out = [0u8; G1_COMPRESSED_BYTES];
    match p.xy() {
        None => out[32] = FLAG_IDENTITY,
        Some((x, y)) => {
            fq_to_bytes(&x, &mut out[..32]);
            out[32] = if y > -y { FLAG_LARGER_Y } else { FLAG_SMALLER_Y };
        }
    }
    out
}

pub fn g1_from_bytes(bytes: &[u8]) -> Result<G1Affine, AlgebraError> {
    if bytes.len() != G1_COMPRESSED_BYTES {
        return Err(AlgebraError::Encoding("G1 point must be 33 bytes"));
    }
    match bytes[32] {
        FLAG_IDENTITY => {
            if bytes[..32].iter().any(|b| *b != 0) {
                return Err(AlgebraError::Encoding("non-canonical identity"));
            }
            Ok(G1Affine::identity())
        }
        flag @ (FLAG_SMALLER_Y | FLAG_LARGER_Y) => {
            let x = fq_from_bytes(&bytes[..32])?;
            let p = G1Affine::get_point_from_x_unchecked(x, flag == FLAG_LARGER_Y)
                .ok_or(AlgebraError::Encoding("x is not on G1"))?;
            check_g1(p)
        }
        _ => Err(AlgebraError::Encoding("bad G1 flag")),
    }
}

pub fn g2_to_bytes(p: &G2Affine) -> [u8; G2_COMPRESSED_BYTES] {
    let mut out = [0u8; G2_COMPRESSED_BYTES];
    match p.xy() {
        None => out[64] = FLAG_IDENTITY,
        Some((x, y)) => {
            fq_to_bytes(&x.c0, &mut out[..32]);
            fq_to_bytes(&x.c1, &mut out[32..64]);
            out[64] = if y > -y { FLAG_LARGER_Y } else { FLAG_SMALLER_Y };
        }
    }
    out
}

pub fn g2_from_bytes(bytes: &[u8]) -> Result<G2Affine, AlgebraError> {
    if bytes.len() != G2_COMPRESSED_BYTES {
        return Err(AlgebraError::Encoding("G2 point must be 65 bytes"));
    }
    match bytes[64] {
        FLAG_IDENTITY => {
            if bytes[..64].iter().any(|b| *b != 0) {
                return Err(AlgebraError::Encoding("non-canonical identity"));
            }
            Ok(G2Affine::identity())
        }
        flag @ (FLAG_SMALLER_Y | FLAG_LARGER_Y) => {
            let x = Fq2::new(fq_from_bytes(&bytes[..32])?, fq_from_bytes(&bytes[32..64])?);
            let p = G2Affine::get_point_from_x_unchecked(x, flag == FLAG_LARGER_Y)
                .ok_or(AlgebraError::Encoding("x is not on G2"))?;
            check_g2(p)
        }
        _ => Err(AlgebraError::Encoding("bad G2 flag")),
    }
}

pub fn g1_to_raw(p: &G1Affine, out: &mut [u8]) {
    debug_assert_eq!(out.len(), G1_RAW_BYTES);
    match p.xy() {
        None => out.fill(0),
        Some((x, y)) => {
            fq_to_bytes(&x, &mut out[..32]);
            fq_to_bytes(&y, &mut out[32..]);
        }
    }
}

pub fn g1_from_raw(bytes: &[u8]) -> Result<G1Affine, AlgebraError> {
    if bytes.len() != G1_RAW_BYTES {
        return Err(AlgebraError::Encoding("raw G1 point must be 64 bytes"));
    }
    if bytes.iter().all(|b| *b == 0) {
        return Ok(G1Affine::identity());
    }
    let p = G1Affine::new_unchecked(fq_from_bytes(&bytes[..32])?, fq_from_bytes(&bytes[32..])?);
    check_g1(p)
}

pub fn g2_to_raw(p: &G2Affine, out: &mut [u8]) {
    debug_assert_eq!(out.len(), G2_RAW_BYTES);
    match p.xy() {
        None => out.fill(0),
        Some((x, y)) => {
            fq_to_bytes(&x.c0, &mut out[..32]);
            fq_to_bytes(&x.c1, &mut out[32..64]);
            fq_to_bytes(&y.c0, &mut out[64..96]);
            fq_to_bytes(&y.c1, &mut out[96..]);
        }
    }
}

pub fn g2_from_raw(bytes: &[u8]) -> Result<G2Affine, AlgebraError> {
    if bytes.len() != G2_RAW_BYTES {
        return Err(AlgebraError::Encoding("raw G2 point must be 128 bytes"));
    }
    if bytes.iter().all(|b| *b == 0) {
        return Ok(G2Affine::identity());
    }
    let x = Fq2::new(fq_from_bytes(&bytes[..32])?, fq_from_bytes(&bytes[32..64])?);
    let y = Fq2::new(fq_from_bytes(&bytes[64..96])?, fq_from_bytes(&bytes[96..])?);
    check_g2(G2Affine::new_unchecked(x, y))
}

/// Like [`g2_from_raw`] without the subgroup check, which dominates decoding time.
/// Only for bytes whose integrity was established by other means.
pub fn g2_from_raw_on_curve(bytes: &[u8]) -> Result<G2Affine, AlgebraError> {
    if bytes.len() != G2_RAW_BYTES {
        return Err(AlgebraError::Encoding("raw G2 point must be 128 bytes"));
    }
    if bytes.iter().all(|b| *b == 0) {
        return Ok(G2Affine::identity());
    }
    let x = Fq2::new(fq_from_bytes(&bytes[..32])?, fq_from_bytes(&bytes[32..64])?);
    let y = Fq2::new(fq_from_bytes(&bytes[64..96])?, fq_from_bytes(&bytes[96..])?);
    let p = G2Affine::new_unchecked(x, y);
    if !p.is_on_curve() {
        return Err(AlgebraError::Encoding("point not on G2 twist"));
    }
    Ok(p)
}

fn check_g1(p: G1Affine) -> Result<G1Affine, AlgebraError> {
    // G1 has cofactor 1, so the curve equation is the whole check.
    if !p.is_on_curve() {
        return Err(AlgebraError::Encoding("point not on G1"));
    }
    Ok(p)
}

fn check_g2(p: G2Affine) -> Result<G2Affine, AlgebraError> {
    if !p.is_on_curve() {
        return Err(AlgebraError::Encoding("point not on G2 twist"));
    }
    if !p.is_in_correct_subgroup_assuming_on_curve() {
        return Err(AlgebraError::Encoding("point not in the order-r subgroup"));
    }
    Ok(p)
}
