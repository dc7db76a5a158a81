//! Powers-of-tau accumulator: `[tau^i] G1` for `i < 2^n - 1` and `[tau^i] G2` for `i < 2^n`.
//!
//! File layout (all integers little-endian):
//!
//! ```text
//! magic "ZKRBPTAU" | version u32 = 1 | n u32 | contributions u32
//! g1 points, 64 bytes each: x || y, coordinates 32-byte little-endian; all-zero = identity
//! g2 points, 128 bytes each: x.c0 || x.c1 || y.c0 || y.c1
//! contribution digests, 32 bytes each
//! ```

use std::path::Path;

use ark_ec::scalar_mul::ScalarMul;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use zeroize::Zeroizing;

use super::io::{read_file, read_file_with_digest, write_file, Reader, Writer};
use super::Groth16Error;
use crate::algebra::{
    g1_generator, g1_to_raw, g2_generator, g2_to_raw, msm, multi_pairing, CurveGroup, G1Affine, G1Projective,
    G2Affine, G2Projective, Scalar, Workers, Zero, G1_RAW_BYTES, G2_RAW_BYTES,
};
use crate::entropy::Entropy;

pub const TAU_MAGIC: &[u8; 8] = b"ZKRBPTAU";
pub const TAU_VERSION: u32 = 1;
pub const MIN_TAU_N: u32 = 2;
/// Largest `n`: the scalar field's two-adicity bounds every usable domain.
pub const MAX_TAU_N: u32 = 28;
pub const MEMORY_BUDGET_ENV: &str = "ZKRB_MEMORY_BUDGET";
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauAccumulator {
    n: u32,
    g1: Vec<G1Affine>,
    g2: Vec<G2Affine>,
    log: Vec<[u8; 32]>,
}

pub fn g1_len(n: u32) -> usize {
    (1usize << n) - 1
}

pub fn g2_len(n: u32) -> usize {
    1usize << n
}

/// Peak bytes held while building and contributing to an accumulator of size `n`:
/// affine storage plus one projective working copy per group, plus the scalar powers.
pub fn projected_memory(n: u32) -> u64 {
    use std::mem::size_of;
    let g1 = (size_of::<G1Affine>() + size_of::<G1Projective>()) as u64;
    let g2 = (size_of::<G2Affine>() + size_of::<G2Projective>()) as u64;
    g1_len(n) as u64 * g1 + g2_len(n) as u64 * g2 + g2_len(n) as u64 * size_of::<Scalar>() as u64
}

/// Budget from `ZKRB_MEMORY_BUDGET` (bytes, optional `K`/`M`/`G` suffix), else the default.
pub fn memory_budget_from_env() -> Result<u64, Groth16Error> {
    match std::env::var(MEMORY_BUDGET_ENV) {
        Ok(v) => parse_bytes(&v).ok_or_else(|| Groth16Error::Usage(format!("{MEMORY_BUDGET_ENV}={v} is not a byte count"))),
        Err(_) => Ok(DEFAULT_MEMORY_BUDGET),
    }
}

pub fn parse_bytes(s: &str) -> Option<u64> {
    let s = s.trim();
    let (digits, shift) = match s.char_indices().last()? {
        (i, 'K' | 'k') => (&s[..i], 10),
        (i, 'M' | 'm') => (&s[..i], 20),
        (i, 'G' | 'g') => (&s[..i], 30),
        _ => (s, 0),
    };
    digits.trim().parse::<u64>().ok()?.checked_mul(1 << shift)
}

fn check_n(n: u32, budget: u64) -> Result<(), Groth16Error> {
    if !(MIN_TAU_N..=MAX_TAU_N).contains(&n) {
        return Err(Groth16Error::TauSize { n, min: MIN_TAU_N, max: MAX_TAU_N });
    }
    let projected = projected_memory(n);
    if projected > budget {
        return Err(Groth16Error::BudgetExceeded { n, projected, budget });
    }
    Ok(())
}

/// Fresh accumulator with `tau = 1`, under the environment memory budget.
pub fn tau_init(n: u32) -> Result<TauAccumulator, Groth16Error> {
    tau_init_with_budget(n, memory_budget_from_env()?)
}

/// Refuses before allocating when `projected_memory(n)` exceeds `budget`.
pub fn tau_init_with_budget(n: u32, budget: u64) -> Result<TauAccumulator, Groth16Error> {
    check_n(n, budget)?;
    Ok(TauAccumulator { n, g1: vec![g1_generator(); g1_len(n)], g2: vec![g2_generator(); g2_len(n)], log: Vec::new() })
}

impl TauAccumulator {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g1_powers(&self) -> &[G1Affine] {
        &self.g1
    }

    pub fn g2_powers(&self) -> &[G2Affine] {
        &self.g2
    }

    pub fn contribution_log(&self) -> &[[u8; 32]] {
        &self.log
    }

    /// Largest evaluation domain this accumulator can key: the quotient query
    /// needs `tau^i` up to `2N - 2`, so `N <= 2^(n-1)`.
    pub fn max_domain_size(&self) -> usize {
        1 << (self.n - 1)
    }

    /// Digest identifying the accumulator contents (last contribution, or the size when fresh).
    pub fn digest(&self) -> [u8; 32] {
        match self.log.last() {
            Some(d) => *d,
            None => Sha256::digest(format!("zkrb/tau/fresh/{}", self.n)).into(),
        }
    }

    fn is_fresh(&self) -> bool {
        let (g, h) = (g1_generator(), g2_generator());
        self.g1.iter().all(|p| *p == g) && self.g2.iter().all(|p| *p == h)
    }

    /// Test hook: replace one G1 power.
    #[doc(hidden)]
    pub fn set_g1_power(&mut self, i: usize, p: G1Affine) {
        self.g1[i] = p;
    }

    #[doc(hidden)]
    pub fn set_g2_power(&mut self, i: usize, p: G2Affine) {
        self.g2[i] = p;
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::header(TAU_MAGIC, TAU_VERSION);
        w.u32(self.n);
        w.u32(self.log.len() as u32);
        w.buf.reserve(self.g1.len() * G1_RAW_BYTES + self.g2.len() * G2_RAW_BYTES + self.log.len() * 32);
        let mut b1 = [0u8; G1_RAW_BYTES];
        for p in &self.g1 {
            g1_to_raw(p, &mut b1);
            w.bytes(&b1);
        }
        let mut b2 = [0u8; G2_RAW_BYTES];
        for p in &self.g2 {
            g2_to_raw(p, &mut b2);
            w.bytes(&b2);
        }
        for d in &self.log {
            w.bytes(d);
        }
        w.buf
    }

    /// Parses and validates every point (on curve, in the prime-order subgroup).
    /// Chain consistency is a separate check, [`tau_verify_chain`].
    pub fn from_bytes(data: &[u8]) -> Result<Self, Groth16Error> {
        Self::parse(data, false)
    }

    fn parse(data: &[u8], trusted: bool) -> Result<Self, Groth16Error> {
        let g2_decode = if trusted { crate::algebra::g2_from_raw_on_curve } else { crate::algebra::g2_from_raw };
        let mut r = Reader::with_header(data, TAU_MAGIC, TAU_VERSION)?;
        let n = r.u32()?;
        if !(MIN_TAU_N..=MAX_TAU_N).contains(&n) {
            return Err(Groth16Error::TauSize { n, min: MIN_TAU_N, max: MAX_TAU_N });
        }
        let count = r.u32()? as usize;
        let expected = g1_len(n) * G1_RAW_BYTES + g2_len(n) * G2_RAW_BYTES + count * 32;
        if data.len() != 20 + expected {
            return Err(Groth16Error::Format(format!("accumulator for n={n} must be {} bytes", 20 + expected)));
        }
        let raw1 = r.take(g1_len(n) * G1_RAW_BYTES)?;
        let raw2 = r.take(g2_len(n) * G2_RAW_BYTES)?;
        let g1 = raw1.par_chunks(G1_RAW_BYTES).map(crate::algebra::g1_from_raw).collect::<Result<Vec<_>, _>>()?;
        let g2 = raw2.par_chunks(G2_RAW_BYTES).map(g2_decode).collect::<Result<Vec<_>, _>>()?;
        let log = (0..count).map(|_| r.take(32).map(|d| d.try_into().expect("32 bytes"))).collect::<Result<_, _>>()?;
        r.finish()?;
        Ok(Self { n, g1, g2, log })
    }

    pub fn save(&self, path: &Path) -> Result<(), Groth16Error> {
        write_file(path, &self.to_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, Groth16Error> {
        Self::from_bytes(&read_file(path)?)
    }

    /// Loads a file whose SHA-256 is known, skipping G2 subgroup checks.
    pub fn load_with_digest(path: &Path, digest: &[u8; 32]) -> Result<Self, Groth16Error> {
        Self::parse(&read_file_with_digest(path, digest)?, true)
    }
}

/// Verifies the chain, then multiplies power `i` by `s^i` for a secret `s` drawn from `entropy`.
pub fn tau_contribute(acc: &TauAccumulator, entropy: &Entropy) -> Result<TauAccumulator, Groth16Error> {
    tau_contribute_with(acc, entropy, Workers::available())
}

pub fn tau_contribute_with(acc: &TauAccumulator, entropy: &Entropy, workers: Workers) -> Result<TauAccumulator, Groth16Error> {
    if !tau_verify_chain_with(acc, workers) {
        return Err(Groth16Error::Integrity("accumulator fails the pairing-consistency check".into()));
    }
    let s = entropy.scalar("zkrb/tau/contribution");
    Ok(apply_secret(acc, &s, workers))
}

/// Raw contribution step without the preceding chain check. The caller owns `s`.
pub fn apply_secret(acc: &TauAccumulator, s: &Scalar, workers: Workers) -> TauAccumulator {
    let mut powers = Zeroizing::new(Vec::with_capacity(acc.g2.len()));
    let mut p = Scalar::from(1u64);
    for _ in 0..acc.g2.len() {
        powers.push(p);
        p *= s;
    }
    zeroize::Zeroize::zeroize(&mut p);

    let (g1, g2) = workers.install(|| {
        if acc.is_fresh() {
            // every point is the generator, so fixed-base batch multiplication applies
            let g1 = G1Projective::from(g1_generator()).batch_mul(&powers[..acc.g1.len()]);
            let g2 = G2Projective::from(g2_generator()).batch_mul(&powers);
            (g1, g2)
        } else {
            let g1: Vec<G1Projective> = acc.g1.par_iter().zip(powers.par_iter()).map(|(b, e)| *b * e).collect();
            let g2: Vec<G2Projective> = acc.g2.par_iter().zip(powers.par_iter()).map(|(b, e)| *b * e).collect();
            (G1Projective::normalize_batch(&g1), G2Projective::normalize_batch(&g2))
        }
    });

    let mut h = Sha256::new();
    h.update(b"zkrb/tau/contribution");
    h.update(acc.digest());
    let mut b1 = [0u8; G1_RAW_BYTES];
    g1_to_raw(&g1[1], &mut b1);
    h.update(b1);
    let mut b2 = [0u8; G2_RAW_BYTES];
    g2_to_raw(&g2[1], &mut b2);
    h.update(b2);
    let mut log = acc.log.clone();
    log.push(h.finalize().into());
    TauAccumulator { n: acc.n, g1, g2, log }
}

pub fn tau_verify_chain(acc: &TauAccumulator) -> bool {
    tau_verify_chain_with(acc, Workers::available())
}

/// Checks the accumulator is a geometric sequence in both groups with a common ratio.
///
/// Adjacent-pair equations are folded into one random linear combination per group,
/// with 128-bit coefficients drawn from a hash of the accumulator contents:
/// `e(sum r_i g1[i+1], G2) = e(sum r_i g1[i], g2[1])` and
/// `e(G1, sum s_i g2[i+1]) = e(g1[1], sum s_i g2[i])`, plus `e(g1[1], G2) = e(G1, g2[1])`.
pub fn tau_verify_chain_with(acc: &TauAccumulator, workers: Workers) -> bool {
    let (g, h) = (g1_generator(), g2_generator());
    if acc.g1.len() != g1_len(acc.n) || acc.g2.len() != g2_len(acc.n) || acc.g1[0] != g || acc.g2[0] != h {
        return false;
    }
    if acc.is_fresh() {
        return true;
    }
    if acc.g1[1].infinity || acc.g2[1].infinity {
        return false;
    }
    let seed: [u8; 32] = Sha256::digest(acc.to_bytes()).into();
    let mut rng = rand_chacha::ChaCha20Rng::from_seed(seed);
    let mut coeffs = |k: usize| -> Vec<Scalar> { (0..k).map(|_| Scalar::from(rng.gen::<u128>())).collect() };

    let r = coeffs(acc.g1.len() - 1);
    let s = coeffs(acc.g2.len() - 1);
    let g1_hi: Option<G1Projective> = msm(&r, &acc.g1[1..], workers).ok();
    let g1_lo: Option<G1Projective> = msm(&r, &acc.g1[..acc.g1.len() - 1], workers).ok();
    let g2_hi: Option<G2Projective> = msm(&s, &acc.g2[1..], workers).ok();
    let g2_lo: Option<G2Projective> = msm(&s, &acc.g2[..acc.g2.len() - 1], workers).ok();
    let (Some(g1_hi), Some(g1_lo), Some(g2_hi), Some(g2_lo)) = (g1_hi, g1_lo, g2_hi, g2_lo) else {
        return false;
    };
    let one = |a: [G1Affine; 2], b: [G2Affine; 2]| multi_pairing(&a, &b).map(|r| r.is_zero()).unwrap_or(false);
    let neg_g = -g;
    one([g1_hi.into_affine(), (-g1_lo).into_affine()], [h, acc.g2[1]])
        && one([g, (-acc.g1[1]).into()], [g2_hi.into_affine(), g2_lo.into_affine()])
        && one([acc.g1[1], neg_g], [h, acc.g2[1]])
}
