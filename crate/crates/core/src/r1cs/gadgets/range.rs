//! Bit-decomposition range checks: `bits` booleanity constraints plus one packing constraint.

use ark_ff::{AdditiveGroup, BigInteger, PrimeField, Zero};

use crate::algebra::Scalar;
use crate::r1cs::{ConstraintSystem, LinearCombination, R1csError, Variable};

/// Field bit length minus two, so `2^bits` never wraps.
pub const MAX_RANGE_BITS: usize = Scalar::MODULUS_BIT_SIZE as usize - 2;

pub const fn range_check_constraints(bits: usize) -> usize {
    bits + 1
}

/// Enforces `x` in `[0, 2^bits)` and returns the little-endian bit wires.
pub fn range_check_lc(
    cs: &mut ConstraintSystem,
    x: &LinearCombination,
    bits: usize,
) -> Result<Vec<Variable>, R1csError> {
    if bits > MAX_RANGE_BITS {
        return Err(R1csError::RangeTooWide { bits, max: MAX_RANGE_BITS });
    }
    let le = cs.eval(x).map(|v| v.into_bigint().to_bits_le());
    let mut packed = LinearCombination::zero();
    let mut coeff = Scalar::from(1u64);
    let mut out = Vec::with_capacity(bits);
    for i in 0..bits {
        let b = cs.alloc_private(le.as_ref().map(|bs| Scalar::from(bs[i] as u64)))?;
        cs.enforce(b, b, b)?;
        packed = packed + (coeff, b);
        coeff.double_in_place();
        out.push(b);
    }
    cs.enforce(packed - x, Variable::ONE, LinearCombination::zero())?;
    Ok(out)
}

pub fn gadget_range_check(cs: &mut ConstraintSystem, x: Variable, bits: usize) -> Result<(), R1csError> {
    range_check_lc(cs, &x.into(), bits).map(|_| ())
}

/// `x` in `[0, 2^bits)` as an integer, for witness-side checks.
pub fn fits_in_bits(x: Scalar, bits: usize) -> bool {
    x.is_zero() || x.into_bigint().num_bits() as usize <= bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn check(x: Scalar, bits: usize) -> bool {
        let mut cs = ConstraintSystem::new();
        let v = cs.alloc_private(Some(x)).unwrap();
        gadget_range_check(&mut cs, v, bits).unwrap();
        assert_eq!(cs.num_constraints(), range_check_constraints(bits));
        cs.finalize().unwrap();
        cs.is_satisfied(&cs.witness().unwrap()).unwrap()
    }

    #[test]
    fn boundaries() {
        assert!(check(Scalar::from(0u64), 8));
        assert!(check(Scalar::from(255u64), 8));
        assert!(!check(Scalar::from(256u64), 8));
        assert!(check(Scalar::from(u64::MAX), 64));
        assert!(!check(Scalar::from(u64::MAX as u128 + 1), 64));
        assert!(!check(-Scalar::from(1u64), 64));
    }

    #[test]
    fn oversized_rejected() {
        let mut cs = ConstraintSystem::new();
        let v = cs.alloc_private(Some(Scalar::from(1u64))).unwrap();
        assert_eq!(
            gadget_range_check(&mut cs, v, 253),
            Err(R1csError::RangeTooWide { bits: 253, max: 252 })
        );
        assert!(gadget_range_check(&mut cs, v, 252).is_ok());
    }

    #[test]
    fn mutations() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let mut cs = ConstraintSystem::new();
        let v = cs.alloc_private(Some(Scalar::from(0xdead_beefu64))).unwrap();
        gadget_range_check(&mut cs, v, 64).unwrap();
        cs.finalize().unwrap();
        let w = cs.witness().unwrap();
        for _ in 0..100 {
            let idx = rng.gen_range(1..cs.num_variables());
            let mut bad = w.clone();
            bad.set(idx, w.assignments()[idx] + Scalar::from(rng.gen_range(1u64..1000))).unwrap();
            assert!(!cs.is_satisfied(&bad).unwrap());
        }
        assert!(fits_in_bits(Scalar::from(255u64), 8));
        assert!(!fits_in_bits(Scalar::from(256u64), 8));
    }
}
