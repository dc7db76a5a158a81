//! Merkle path verification. Direction bit 0 means the running node is the left child.

use super::{enforce_boolean, enforce_equal, hash2, hash2_lc, HASH2_CONSTRAINTS};
use crate::algebra::Scalar;
use crate::r1cs::{ConstraintSystem, LinearCombination, R1csError, Variable};

/// Constraints per level: booleanity, one select, one hash.
pub const MERKLE_LEVEL_CONSTRAINTS: usize = 2 + HASH2_CONSTRAINTS;

pub const fn merkle_verify_constraints(depth: usize) -> usize {
    depth * MERKLE_LEVEL_CONSTRAINTS + 1
}

/// Out-of-circuit fold of `leaf` along `(sibling, is_right)` pairs.
pub fn merkle_root(leaf: Scalar, path: &[(Scalar, bool)]) -> Scalar {
    path.iter().fold(leaf, |cur, &(sib, right)| if right { hash2(sib, cur) } else { hash2(cur, sib) })
}

/// Computes the root wire of `leaf` along `path` without pinning it.
/// `depth * MERKLE_LEVEL_CONSTRAINTS` constraints; direction bits are boolean-constrained here.
pub fn merkle_root_lc(
    cs: &mut ConstraintSystem,
    leaf: &LinearCombination,
    path: &[(Variable, Variable)],
) -> Result<Variable, R1csError> {
    let mut cur = leaf.clone();
    let mut out = None;
    for &(sib, bit) in path {
        enforce_boolean(cs, bit)?;
        // left = cur + bit * (sib - cur); right = cur + sib - left
        let diff = LinearCombination::from(sib) - &cur;
        let left_val = match (cs.eval(&cur), cs.value(sib), cs.value(bit)) {
            (Some(c), Some(s), Some(b)) => Some(c + b * (s - c)),
            _ => None,
        };
        let left = cs.alloc_private(left_val)?;
        cs.enforce(bit, &diff, LinearCombination::from(left) - &cur)?;
        let right = &(&cur + &LinearCombination::from(sib)) - &LinearCombination::from(left);
        let node = hash2_lc(cs, &left.into(), &right)?;
        cur = node.into();
        out = Some(node);
    }
    match out {
        Some(v) => Ok(v),
        // depth 0: the leaf is the root; materialize it so callers always get a wire
        None => {
            let v = cs.alloc_private(cs.eval(leaf))?;
            enforce_equal(cs, v, leaf)?;
            Ok(v)
        }
    }
}

pub fn gadget_merkle_verify(
    cs: &mut ConstraintSystem,
    leaf: Variable,
    path: &[(Variable, Variable)],
    root: Variable,
) -> Result<(), R1csError> {
    let computed = merkle_root_lc(cs, &leaf.into(), path)?;
    enforce_equal(cs, computed, root)
}
