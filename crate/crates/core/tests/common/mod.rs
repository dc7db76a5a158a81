#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use zkrb::algebra::{Scalar, UniformRand};
use zkrb::r1cs::{ConstraintSystem, LinearCombination, Variable, Witness};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn scalar(rng: &mut ChaCha20Rng) -> Scalar {
    Scalar::rand(rng)
}

fn random_lc(rng: &mut ChaCha20Rng, vars: &[Variable]) -> LinearCombination {
    let mut lc = LinearCombination::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let v = vars[rng.gen_range(0..vars.len())];
        let c = if rng.gen_bool(0.5) { Scalar::from(rng.gen_range(1..5u64)) } else { scalar(rng) };
        lc = lc + (c, v);
    }
    if rng.gen_bool(0.3) {
        lc = lc + LinearCombination::constant(scalar(rng));
    }
    lc
}

/// A satisfied random system: each constraint multiplies two random linear
/// combinations of earlier wires into a fresh private wire. The public inputs
/// are pinned by the first constraints.
pub fn random_system(rng: &mut ChaCha20Rng, publics: usize, constraints: usize) -> (ConstraintSystem, Witness) {
    assert!(constraints >= publics);
    let mut cs = ConstraintSystem::new();
    let mut vars = Vec::new();
    for _ in 0..publics {
        vars.push(cs.alloc_public(Some(scalar(rng))).unwrap());
    }
    let seed = cs.alloc_private(Some(scalar(rng))).unwrap();
    vars.push(seed);
    for p in 0..publics {
        // p * seed = fresh
        let v = cs.value(vars[p]).unwrap() * cs.value(seed).unwrap();
        let out = cs.alloc_private(Some(v)).unwrap();
        cs.enforce(vars[p], seed, out).unwrap();
        vars.push(out);
    }
    for _ in publics..constraints {
        let a = random_lc(rng, &vars);
        let b = random_lc(rng, &vars);
        let v = cs.eval(&a).unwrap() * cs.eval(&b).unwrap();
        let out = cs.alloc_private(Some(v)).unwrap();
        cs.enforce(a, b, out).unwrap();
        vars.push(out);
    }
    cs.finalize().unwrap();
    let w = cs.witness().unwrap();
    (cs, w)
}

/// Replaces one non-constant slot with a different random value.
pub fn mutate(rng: &mut ChaCha20Rng, w: &Witness) -> Witness {
    let mut out = w.clone();
    let i = rng.gen_range(1..w.len());
    let mut v = scalar(rng);
    while v == w.assignments()[i] {
        v = scalar(rng);
    }
    out.set(i, v).unwrap();
    out
}
