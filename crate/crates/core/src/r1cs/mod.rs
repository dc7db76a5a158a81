//! Rank-1 constraint systems: `<A_i, w> * <B_i, w> = <C_i, w>` for every row `i`.
//!
//! Witness generation runs alongside synthesis: every allocation takes an optional
//! value, and gadgets compute their outputs while they emit constraints. A system
//! built without values has the same shape and is what key generation consumes.

pub mod gadgets;
mod lc;

use std::fmt::Write;

use ark_ff::{One, PrimeField, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use sha2::{Digest, Sha256};

use crate::algebra::{scalar_to_bytes, Scalar, Workers};

pub use lc::LinearCombination;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    ConstantOne,
    Public,
    Private,
}

/// A wire of the system. Index 0 is the constant one, followed by the public inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    index: usize,
    visibility: Visibility,
}

impl Variable {
    pub const ONE: Variable = Variable { index: 0, visibility: Visibility::ConstantOne };

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn visibility(&self) -> Visibility {
        self.visibility
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub a: LinearCombination,
    pub b: LinearCombination,
    pub c: LinearCombination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConstraintStats {
    pub num_constraints: usize,
    pub num_public: usize,
    pub num_private: usize,
    /// Smallest power of two `>= num_constraints + num_public + 1`.
    pub domain_size: usize,
}

impl ConstraintStats {
    pub fn num_variables(&self) -> usize {
        1 + self.num_public + self.num_private
    }
}

/// Full assignment, `w[0] = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    assignments: Vec<Scalar>,
}

impl Witness {
    pub fn new(assignments: Vec<Scalar>) -> Result<Self, R1csError> {
        if assignments.first() != Some(&Scalar::one()) {
            return Err(R1csError::BadConstantSlot);
        }
        Ok(Self { assignments })
    }

    pub fn assignments(&self) -> &[Scalar] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Overwrites one slot. Slot 0 is pinned to one.
    pub fn set(&mut self, index: usize, value: Scalar) -> Result<(), R1csError> {
        if index == 0 {
            return Err(R1csError::BadConstantSlot);
        }
        let len = self.assignments.len();
        let slot = self.assignments.get_mut(index).ok_or(R1csError::UnknownVariable { index, len })?;
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum R1csError {
    #[error("constraint system is finalized")]
    Finalized,
    #[error("constraint system is not finalized")]
    NotFinalized,
    #[error("public variables must be allocated before private ones")]
    PublicAfterPrivate,
    #[error("the constant-one variable cannot be allocated")]
    ConstantAllocation,
    #[error("unknown variable {index} (system has {len})")]
    UnknownVariable { index: usize, len: usize },
    #[error("witness has {got} assignments, system has {expected} variables")]
    IncompleteWitness { expected: usize, got: usize },
    #[error("variable {0} has no assigned value")]
    MissingAssignment(usize),
    #[error("witness slot 0 must hold the constant one")]
    BadConstantSlot,
    #[error("range check of {bits} bits exceeds the maximum of {max}")]
    RangeTooWide { bits: usize, max: usize },
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    constraints: Vec<Constraint>,
    num_public: usize,
    num_private: usize,
    values: Vec<Option<Scalar>>,
    stats: Option<ConstraintStats>,
}

impl Default for ConstraintSystem {
    fn default() -> Self {
        Self::new()
    }
}

impl ConstraintSystem {
    pub fn new() -> Self {
        Self {
            constraints: Vec::new(),
            num_public: 0,
            num_private: 0,
            values: vec![Some(Scalar::one())],
            stats: None,
        }
    }

    pub fn alloc(&mut self, visibility: Visibility, value: Option<Scalar>) -> Result<Variable, R1csError> {
        if self.stats.is_some() {
            return Err(R1csError::Finalized);
        }
        match visibility {
            Visibility::ConstantOne => return Err(R1csError::ConstantAllocation),
            Visibility::Public if self.num_private > 0 => return Err(R1csError::PublicAfterPrivate),
            Visibility::Public => self.num_public += 1,
            Visibility::Private => self.num_private += 1,
        }
        let index = self.values.len();
        self.values.push(value);
        Ok(Variable { index, visibility })
    }

    pub fn alloc_public(&mut self, value: Option<Scalar>) -> Result<Variable, R1csError> {
        self.alloc(Visibility::Public, value)
    }

    pub fn alloc_private(&mut self, value: Option<Scalar>) -> Result<Variable, R1csError> {
        self.alloc(Visibility::Private, value)
    }

    pub fn enforce(
        &mut self,
        a: impl Into<LinearCombination>,
        b: impl Into<LinearCombination>,
        c: impl Into<LinearCombination>,
    ) -> Result<(), R1csError> {
        if self.stats.is_some() {
            return Err(R1csError::Finalized);
        }
        let (a, b, c) = (a.into(), b.into(), c.into());
        let len = self.values.len();
        for lc in [&a, &b, &c] {
            for (v, _) in lc.terms() {
                if v.index >= len {
                    return Err(R1csError::UnknownVariable { index: v.index, len });
                }
            }
        }
        self.constraints.push(Constraint { a, b, c });
        Ok(())
    }

    pub fn value(&self, v: Variable) -> Option<Scalar> {
        self.values.get(v.index).copied().flatten()
    }

    /// Value of a linear combination, if every referenced wire is assigned.
    pub fn eval(&self, lc: &LinearCombination) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (v, c) in lc.terms() {
            acc += self.value(*v)? * c;
        }
        Some(acc)
    }

    pub fn finalize(&mut self) -> Result<ConstraintStats, R1csError> {
        if self.stats.is_some() {
            return Err(R1csError::Finalized);
        }
        let stats = ConstraintStats {
            num_constraints: self.constraints.len(),
            num_public: self.num_public,
            num_private: self.num_private,
            domain_size: (self.constraints.len() + self.num_public + 1).next_power_of_two(),
        };
        self.stats = Some(stats);
        Ok(stats)
    }

    pub fn stats(&self) -> Option<ConstraintStats> {
        self.stats
    }

    pub fn is_finalized(&self) -> bool {
        self.stats.is_some()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_public(&self) -> usize {
        self.num_public
    }

    pub fn num_private(&self) -> usize {
        self.num_private
    }

    pub fn num_variables(&self) -> usize {
        self.values.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Collects the assignment recorded during synthesis.
    pub fn witness(&self) -> Result<Witness, R1csError> {
        let assignments = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or(R1csError::MissingAssignment(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Witness::new(assignments)
    }

    /// The public-input slice `w[1..=num_public]` of a witness.
    pub fn public_inputs<'w>(&self, w: &'w Witness) -> Result<&'w [Scalar], R1csError> {
        self.check_witness(w)?;
        Ok(&w.assignments[1..=self.num_public])
    }

    fn check_witness(&self, w: &Witness) -> Result<(), R1csError> {
        if w.len() != self.values.len() {
            return Err(R1csError::IncompleteWitness { expected: self.values.len(), got: w.len() });
        }
        Ok(())
    }

    pub fn is_satisfied(&self, w: &Witness) -> Result<bool, R1csError> {
        self.is_satisfied_with(w, Workers::SINGLE)
    }

    /// Same as [`is_satisfied`](Self::is_satisfied), optionally spread over worker threads.
    pub fn is_satisfied_with(&self, w: &Witness, workers: Workers) -> Result<bool, R1csError> {
        if !self.is_finalized() {
            return Err(R1csError::NotFinalized);
        }
        self.check_witness(w)?;
        let values = w.assignments();
        let holds = |c: &Constraint| c.a.evaluate(values) * c.b.evaluate(values) == c.c.evaluate(values);
        Ok(if workers.count() > 1 {
            workers.install(|| self.constraints.par_iter().all(holds))
        } else {
            self.constraints.iter().all(holds)
        })
    }

    /// Index of the first violated constraint, for diagnostics.
    pub fn first_unsatisfied(&self, w: &Witness) -> Result<Option<usize>, R1csError> {
        self.check_witness(w)?;
        let values = w.assignments();
        Ok(self
            .constraints
            .iter()
            .position(|c| c.a.evaluate(values) * c.b.evaluate(values) != c.c.evaluate(values)))
    }

    /// SHA-256 over the counts and every constraint's terms; identifies the
    /// circuit shape for key caching.
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"zkrb/r1cs/v1");
        for n in [self.constraints.len(), self.num_public, self.num_private] {
            h.update((n as u64).to_le_bytes());
        }
        for c in &self.constraints {
            for lc in [&c.a, &c.b, &c.c] {
                h.update((lc.terms().len() as u64).to_le_bytes());
                for (v, coeff) in lc.terms() {
                    h.update((v.index as u64).to_le_bytes());
                    h.update(scalar_to_bytes(coeff));
                }
            }
        }
        h.finalize().into()
    }

    /// Line-oriented text dump: a header, then one constraint per line as sparse
    /// `index:coefficient` lists for A, B and C (coefficients in decimal).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# zkrb r1cs v1");
        let _ = writeln!(
            out,
            "# constraints={} public={} private={}",
            self.constraints.len(),
            self.num_public,
            self.num_private
        );
        for c in &self.constraints {
            let _ = writeln!(out, "A {} ; B {} ; C {}", fmt_lc(&c.a), fmt_lc(&c.b), fmt_lc(&c.c));
        }
        out
    }
}

fn fmt_lc(lc: &LinearCombination) -> String {
    if lc.terms().is_empty() {
        return "-".to_string();
    }
    lc.terms()
        .iter()
        .map(|(v, c)| format!("{}:{}", v.index, c.into_bigint()))
        .collect::<Vec<_>>()
        .join(",")
}
