//! MiMC-style keyed permutation over the scalar field and its two-to-one compression.
//!
//! Permutation with key `k`: for each round `i`, `x <- (x + k + c_i)^e`; after the
//! last round the key is added once more, `E_k(x) = x_R + k`.
//!
//! Compression (Miyaguchi–Preneel with the left input as chaining value):
//! `H(l, r) = E_l(r) + l + r`.
//!
//! Parameters follow a fixed rule: `e` is the smallest prime `>= 3` with
//! `gcd(e, r - 1) = 1` (so `x -> x^e` is a bijection), and the round count is
//! `ceil(bits(r) / log2(e))`. For BN254 this gives `e = 5` and 110 rounds. Round
//! constants are SHA-256 in counter mode over [`ROUND_CONSTANT_SEED`], reduced mod `r`.
//! This is a cost model for hashing inside circuits, not a vetted hash.

use std::sync::OnceLock;

use ark_ff::{BigInteger, Field, PrimeField};
use sha2::{Digest, Sha256};

use crate::algebra::Scalar;
use crate::r1cs::{ConstraintSystem, LinearCombination, R1csError, Variable};

pub const MIMC_EXPONENT: u64 = 5;
pub const MIMC_ROUNDS: usize = 110;
/// `t^2`, `t^4`, `t^4 * t`.
pub const MULTS_PER_ROUND: usize = 3;
/// Constraints emitted by one [`gadget_hash2`] call.
pub const HASH2_CONSTRAINTS: usize = MIMC_ROUNDS * MULTS_PER_ROUND;
pub const ROUND_CONSTANT_SEED: &str = "zkrb/mimc-bn254/round-constants/v1";

pub fn round_constants() -> &'static [Scalar] {
    static CONSTANTS: OnceLock<Vec<Scalar>> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        (0..MIMC_ROUNDS as u32)
            .map(|i| {
                let mut h = Sha256::new();
                h.update(ROUND_CONSTANT_SEED.as_bytes());
                h.update(i.to_le_bytes());
                Scalar::from_le_bytes_mod_order(&h.finalize())
            })
            .collect()
    })
}

fn pow5(t: Scalar) -> Scalar {
    let t2 = t.square();
    t2.square() * t
}

/// `E_k(x)`
pub fn permute(key: Scalar, x: Scalar) -> Scalar {
    let mut x = x;
    for c in round_constants() {
        x = pow5(x + key + c);
    }
    x + key
}

/// `H(l, r) = E_l(r) + l + r`
pub fn hash2(left: Scalar, right: Scalar) -> Scalar {
    permute(left, right) + left + right
}

pub fn gadget_hash2(cs: &mut ConstraintSystem, left: Variable, right: Variable) -> Result<Variable, R1csError> {
    hash2_lc(cs, &left.into(), &right.into())
}

/// In-circuit `H(l, r)` over linear combinations; exactly [`HASH2_CONSTRAINTS`]
/// constraints. The output wire is produced by the last round's multiplication.
pub fn hash2_lc(
    cs: &mut ConstraintSystem,
    left: &LinearCombination,
    right: &LinearCombination,
) -> Result<Variable, R1csError> {
    let key_val = cs.eval(left);
    let right_val = cs.eval(right);
    // 2l + r is added to x_R for the output: +l from the permutation, +l + r from the fold.
    let tail = left.clone() + left + right;
    let tail_val = cs.eval(&tail);

    let mut x: LinearCombination = right.clone();
    let mut x_val = right_val;
    let constants = round_constants();
    for (i, c) in constants.iter().enumerate() {
        let t = &(&x + left) + &LinearCombination::constant(*c);
        let t_val = match (x_val, key_val) {
            (Some(x), Some(k)) => Some(x + k + c),
            _ => None,
        };
        let t2 = cs.alloc_private(t_val.map(|t| t.square()))?;
        cs.enforce(&t, &t, t2)?;
        let t4 = cs.alloc_private(cs.value(t2).map(|v| v.square()))?;
        cs.enforce(t2, t2, t4)?;
        let t5_val = match (cs.value(t4), t_val) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        if i + 1 == constants.len() {
            let out_val = match (t5_val, tail_val) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            let out = cs.alloc_private(out_val)?;
            cs.enforce(t4, &t, LinearCombination::from(out) - &tail)?;
            return Ok(out);
        }
        let t5 = cs.alloc_private(t5_val)?;
        cs.enforce(t4, &t, t5)?;
        x = t5.into();
        x_val = t5_val;
    }
    unreachable!("MIMC_ROUNDS > 0")
}

/// Exponent picked by the parameter rule from the modulus.
pub fn derive_exponent() -> u64 {
    let r_minus_one = num_bigint::BigUint::from_bytes_le(&Scalar::MODULUS.to_bytes_le()) - 1u32;
    (3u64..)
        .filter(|e| (2..*e).all(|d| e % d != 0))
        .find(|e| num_integer::Integer::gcd(&r_minus_one, &num_bigint::BigUint::from(*e)) == 1u32.into())
        .expect("some small prime is coprime to r - 1")
}

/// Smallest `R` with `e^R >= 2^bits(r)`, i.e. `ceil(bits(r) / log2(e))`.
pub fn derive_rounds(exponent: u64) -> usize {
    let target = num_bigint::BigUint::from(1u32) << Scalar::MODULUS_BIT_SIZE;
    let e = num_bigint::BigUint::from(exponent);
    let mut acc = num_bigint::BigUint::from(1u32);
    let mut rounds = 0;
    while acc < target {
        acc *= &e;
        rounds += 1;
    }
    rounds
}
