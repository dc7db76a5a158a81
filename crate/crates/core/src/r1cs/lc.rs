use std::ops::{Add, Mul, Neg, Sub};

use ark_ff::Zero;

use super::Variable;
use crate::algebra::Scalar;

/// Sparse `sum coeff * variable`, kept sorted by variable index with no zero
/// coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearCombination {
    terms: Vec<(Variable, Scalar)>,
}

impl LinearCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c * ONE`
    pub fn constant(c: Scalar) -> Self {
        Self::from((c, Variable::ONE))
    }

    pub fn terms(&self) -> &[(Variable, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, values: &[Scalar]) -> Scalar {
        self.terms.iter().fold(Scalar::zero(), |acc, (v, c)| acc + values[v.index()] * c)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: Scalar| if negate { -c } else { c };
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0.index() < other.terms[j].0.index());
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0.index() < self.terms[i].0.index());
            if take_left {
                out.push(self.terms[i]);
                i += 1;
            } else if take_right {
                out.push((other.terms[j].0, sign(other.terms[j].1)));
                j += 1;
            } else {
                let c = self.terms[i].1 + sign(other.terms[j].1);
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { terms: out }
    }
}

impl From<Variable> for LinearCombination {
    fn from(v: Variable) -> Self {
        Self { terms: vec![(v, Scalar::from(1u64))] }
    }
}

impl From<(Scalar, Variable)> for LinearCombination {
    fn from((c, v): (Scalar, Variable)) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: vec![(v, c)] }
    }
}

impl From<&LinearCombination> for LinearCombination {
    fn from(lc: &LinearCombination) -> Self {
        lc.clone()
    }
}

impl Add<&LinearCombination> for &LinearCombination {
    type Output = LinearCombination;
    fn add(self, rhs: &LinearCombination) -> LinearCombination {
        self.merge(rhs, false)
    }
}

impl Sub<&LinearCombination> for &LinearCombination {
    type Output = LinearCombination;
    fn sub(self, rhs: &LinearCombination) -> LinearCombination {
        self.merge(rhs, true)
    }
}

impl<T: Into<LinearCombination>> Add<T> for LinearCombination {
    type Output = LinearCombination;
    fn add(self, rhs: T) -> LinearCombination {
        self.merge(&rhs.into(), false)
    }
}

impl<T: Into<LinearCombination>> Sub<T> for LinearCombination {
    type Output = LinearCombination;
    fn sub(self, rhs: T) -> LinearCombination {
        self.merge(&rhs.into(), true)
    }
}

impl Mul<Scalar> for LinearCombination {
    type Output = LinearCombination;
    fn mul(self, k: Scalar) -> LinearCombination {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.into_iter().map(|(v, c)| (v, c * k)).collect() }
    }
}

impl Neg for LinearCombination {
    type Output = LinearCombination;
    fn neg(self) -> LinearCombination {
        Self { terms: self.terms.into_iter().map(|(v, c)| (v, -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r1cs::ConstraintSystem;

    #[test]
    fn merge_cancels_and_sorts() {
        let mut cs = ConstraintSystem::new();
        let a = cs.alloc_private(None).unwrap();
        let b = cs.alloc_private(None).unwrap();
        let lc = LinearCombination::from(b) + a + (Scalar::from(2u64), b) - (Scalar::from(3u64), b);
        assert_eq!(lc.terms(), &[(a, Scalar::from(1u64))]);
        let zero = LinearCombination::from(a) - a;
        assert!(zero.is_zero());
        assert!(LinearCombination::from((Scalar::zero(), a)).is_zero());
        assert!((LinearCombination::from(a) * Scalar::zero()).is_zero());
        let neg = -LinearCombination::from(a);
        assert_eq!(neg.evaluate(&[Scalar::from(1u64), Scalar::from(4u64), Scalar::zero()]), -Scalar::from(4u64));
    }
}
