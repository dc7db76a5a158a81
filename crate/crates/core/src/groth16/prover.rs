//! Proof generation and the proof encodings.

use std::path::Path;

use serde::{Deserialize, Serialize};
use zeroize::Zeroizing;

use super::io::{read_file, write_file, Reader, Writer};
use super::keys::ProvingKey;
use super::qap::{domain_for, quotient_coefficients, row_evaluations};
use super::Groth16Error;
use crate::algebra::{
    fft_in_place, g1_from_bytes, g1_to_bytes, g2_from_bytes, g2_to_bytes, msm, scalar_from_hex, scalar_to_hex,
    CurveGroup, Direction, G1Affine, G1Projective, G2Affine, G2Projective, Scalar, Workers,
    G1_COMPRESSED_BYTES, G2_COMPRESSED_BYTES,
};
use crate::entropy::Entropy;
use crate::r1cs::{ConstraintSystem, Witness};

/// Compressed `A || B || C`.
pub const PROOF_BYTES: usize = 2 * G1_COMPRESSED_BYTES + G2_COMPRESSED_BYTES;
pub const PROOF_MAGIC: &[u8; 8] = b"ZKRBPROF";
pub const PROOF_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Proof {
    pub a: G1Affine,
    pub b: G2Affine,
    pub c: G1Affine,
}

impl Proof {
    pub fn to_bytes(&self) -> [u8; PROOF_BYTES] {
        let mut out = [0u8; PROOF_BYTES];
        out[..33].copy_from_slice(&g1_to_bytes(&self.a));
        out[33..98].copy_from_slice(&g2_to_bytes(&self.b));
        out[98..].copy_from_slice(&g1_to_bytes(&self.c));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Groth16Error> {
        if bytes.len() != PROOF_BYTES {
            return Err(Groth16Error::Format(format!("proof must be {PROOF_BYTES} bytes")));
        }
        Ok(Self { a: g1_from_bytes(&bytes[..33])?, b: g2_from_bytes(&bytes[33..98])?, c: g1_from_bytes(&bytes[98..])? })
    }

    /// `"ZKRBPROF" | version u32 | proof bytes`
    pub fn save(&self, path: &Path) -> Result<(), Groth16Error> {
        let mut w = Writer::header(PROOF_MAGIC, PROOF_VERSION);
        w.bytes(&self.to_bytes());
        write_file(path, &w.buf)
    }

    pub fn load(path: &Path) -> Result<Self, Groth16Error> {
        let data = read_file(path)?;
        let mut r = Reader::with_header(&data, PROOF_MAGIC, PROOF_VERSION)?;
        let p = Self::from_bytes(r.take(PROOF_BYTES)?)?;
        r.finish()?;
        Ok(p)
    }
}

/// JSON form: lowercase hex of the compressed points and of each public input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofJson {
    pub a: String,
    pub b: String,
    pub c: String,
    pub public_inputs: Vec<String>,
}

impl ProofJson {
    pub fn new(proof: &Proof, publics: &[Scalar]) -> Self {
        Self {
            a: hex::encode(g1_to_bytes(&proof.a)),
            b: hex::encode(g2_to_bytes(&proof.b)),
            c: hex::encode(g1_to_bytes(&proof.c)),
            public_inputs: publics.iter().map(scalar_to_hex).collect(),
        }
    }

    pub fn decode(&self) -> Result<(Proof, Vec<Scalar>), Groth16Error> {
        let bytes = |s: &str| hex::decode(s).map_err(|e| Groth16Error::Format(format!("bad hex: {e}")));
        let proof = Proof {
            a: g1_from_bytes(&bytes(&self.a)?)?,
            b: g2_from_bytes(&bytes(&self.b)?)?,
            c: g1_from_bytes(&bytes(&self.c)?)?,
        };
        let publics = self.public_inputs.iter().map(|s| scalar_from_hex(s)).collect::<Result<_, _>>()?;
        Ok((proof, publics))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain strings serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, Groth16Error> {
        serde_json::from_str(s).map_err(|e| Groth16Error::Format(e.to_string()))
    }
}

pub fn prove(pk: &ProvingKey, cs: &ConstraintSystem, w: &Witness, entropy: &Entropy) -> Result<Proof, Groth16Error> {
    prove_with(pk, cs, w, entropy, Workers::available())
}

/// Refuses unsatisfied witnesses before any group arithmetic.
pub fn prove_with(
    pk: &ProvingKey,
    cs: &ConstraintSystem,
    w: &Witness,
    entropy: &Entropy,
    workers: Workers,
) -> Result<Proof, Groth16Error> {
    let domain = domain_for(cs)?;
    if domain.size != pk.domain_size || cs.num_variables() != pk.num_variables || cs.num_public() != pk.num_public {
        return Err(Groth16Error::Shape("proving key does not belong to this constraint system".into()));
    }
    if !cs.is_satisfied_with(w, workers)? {
        return Err(Groth16Error::Unsatisfied);
    }
    let z = w.assignments();
    let r = entropy.scalar("zkrb/prove/r");
    let s = entropy.scalar("zkrb/prove/s");

    let (a, b, c) = row_evaluations(cs, z, &domain);
    let mut a_coef = a.clone();
    let mut b_coef = b.clone();
    fft_in_place(&mut a_coef, &domain, Direction::Inverse, workers)?;
    fft_in_place(&mut b_coef, &domain, Direction::Inverse, workers)?;
    let h = quotient_coefficients(a, b, c, &domain, workers)?;

    let a_sum: G1Projective = msm(&a_coef, &pk.a_query, workers)?;
    let b_sum_g1: G1Projective = msm(&b_coef, &pk.a_query, workers)?;
    let b_sum_g2: G2Projective = msm(&b_coef, &pk.b_g2_query, workers)?;
    let h_sum: G1Projective = msm(&h, &pk.h_query, workers)?;
    let l_sum: G1Projective = msm(&z[pk.num_public + 1..], &pk.l_query, workers)?;

    let delta_g1 = G1Projective::from(pk.delta_g1);
    let proof_a = a_sum + pk.vk.alpha_g1 + delta_g1 * *r;
    let proof_b = b_sum_g2 + pk.vk.beta_g2 + G2Projective::from(pk.vk.delta_g2) * *s;
    let b_g1 = b_sum_g1 + pk.beta_g1 + delta_g1 * *s;
    let rs = Zeroizing::new(*r * *s);
    let proof_c = l_sum + h_sum + proof_a * *s + b_g1 * *r - delta_g1 * *rs;
    Ok(Proof { a: proof_a.into_affine(), b: proof_b.into_affine(), c: proof_c.into_affine() })
}
