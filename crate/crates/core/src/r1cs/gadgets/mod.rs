//! Gadgets with fixed, documented constraint costs.

pub mod merkle;
pub mod mimc;
pub mod range;

use ark_ff::{Field, One, Zero};

use super::{ConstraintSystem, LinearCombination, R1csError, Variable};
use crate::algebra::Scalar;

pub use merkle::{gadget_merkle_verify, merkle_root, merkle_root_lc, merkle_verify_constraints, MERKLE_LEVEL_CONSTRAINTS};
pub use mimc::{gadget_hash2, hash2, hash2_lc, HASH2_CONSTRAINTS};
pub use range::{fits_in_bits, gadget_range_check, range_check_constraints, range_check_lc, MAX_RANGE_BITS};

/// `v * v = v`. One constraint.
pub fn enforce_boolean(cs: &mut ConstraintSystem, v: Variable) -> Result<(), R1csError> {
    cs.enforce(v, v, v)
}

/// `(a - b) * 1 = 0`. One constraint.
pub fn enforce_equal(
    cs: &mut ConstraintSystem,
    a: impl Into<LinearCombination>,
    b: impl Into<LinearCombination>,
) -> Result<(), R1csError> {
    cs.enforce(a.into() - b.into(), Variable::ONE, LinearCombination::zero())
}

/// Returns a wire equal to 1 when `x = 0` and 0 otherwise. Two constraints:
/// `x * inv = 1 - out` and `x * out = 0`.
pub fn is_zero(cs: &mut ConstraintSystem, x: &LinearCombination) -> Result<Variable, R1csError> {
    let xv = cs.eval(x);
    let inv = cs.alloc_private(xv.map(|v| v.inverse().unwrap_or(Scalar::zero())))?;
    let out = cs.alloc_private(xv.map(|v| if v.is_zero() { Scalar::one() } else { Scalar::zero() }))?;
    cs.enforce(x, inv, LinearCombination::from(Variable::ONE) - out)?;
    cs.enforce(x, out, LinearCombination::zero())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_zero_gadget() {
        for (x, expect) in [(0u64, 1u64), (5, 0)] {
            let mut cs = ConstraintSystem::new();
            let v = cs.alloc_private(Some(Scalar::from(x))).unwrap();
            let out = is_zero(&mut cs, &v.into()).unwrap();
            assert_eq!(cs.value(out), Some(Scalar::from(expect)));
            cs.finalize().unwrap();
            let mut w = cs.witness().unwrap();
            assert!(cs.is_satisfied(&w).unwrap());
            w.set(out.index(), Scalar::from(1 - expect)).unwrap();
            assert!(!cs.is_satisfied(&w).unwrap());
        }
    }
}
