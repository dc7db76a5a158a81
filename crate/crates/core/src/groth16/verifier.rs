use super::keys::VerifyingKey;
use super::prover::Proof;
use super::Groth16Error;
use crate::algebra::{msm, multi_pairing, CurveGroup, G1Projective, Scalar, Workers, Zero};

/// Checks `e(A, B) = e(alpha, beta) e(IC(x), gamma) e(C, delta)` as one
/// four-pair product. Work: an MSM of length `publics + 1` and four Miller loops.
pub fn verify(vk: &VerifyingKey, public_inputs: &[Scalar], proof: &Proof) -> Result<bool, Groth16Error> {
    if public_inputs.len() + 1 != vk.ic.len() {
        return Err(Groth16Error::PublicInputs { expected: vk.ic.len() - 1, got: public_inputs.len() });
    }
    let mut scalars = Vec::with_capacity(vk.ic.len());
    scalars.push(Scalar::from(1u64));
    scalars.extend_from_slice(public_inputs);
    let ic: G1Projective = msm(&scalars, &vk.ic, Workers::SINGLE)?;
    let out = multi_pairing(
        &[proof.a, (-vk.alpha_g1).into(), (-ic).into_affine(), (-proof.c).into()],
        &[proof.b, vk.beta_g2, vk.gamma_g2, vk.delta_g2],
    )?;
    Ok(out.is_zero())
}
