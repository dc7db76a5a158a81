//! Randomness sources for ceremony contributions, key generation and prover blinding.
//!
//! In deterministic mode all randomness is a pure function of the caller's bytes,
//! which makes golden files byte-stable. In system mode the OS RNG is mixed in.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use zeroize::Zeroizing;

use crate::algebra::{Scalar, UniformRand};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomnessMode {
    Deterministic,
    System,
}

#[derive(Clone)]
pub struct Entropy {
    bytes: Zeroizing<Vec<u8>>,
    mode: RandomnessMode,
}

impl std::fmt::Debug for Entropy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Entropy").field("mode", &self.mode).finish_non_exhaustive()
    }
}

impl Entropy {
    pub fn deterministic(seed: impl AsRef<[u8]>) -> Self {
        Self { bytes: Zeroizing::new(seed.as_ref().to_vec()), mode: RandomnessMode::Deterministic }
    }

    pub fn system(extra: impl AsRef<[u8]>) -> Self {
        Self { bytes: Zeroizing::new(extra.as_ref().to_vec()), mode: RandomnessMode::System }
    }

    pub fn new(bytes: impl AsRef<[u8]>, mode: RandomnessMode) -> Self {
        match mode {
            RandomnessMode::Deterministic => Self::deterministic(bytes),
            RandomnessMode::System => Self::system(bytes),
        }
    }

    pub fn mode(&self) -> RandomnessMode {
        self.mode
    }

    /// Derives an independent entropy value for a sub-task, keeping the mode.
    pub fn derive(&self, label: &str) -> Entropy {
        let mut h = Sha256::new();
        h.update(b"zkrb/entropy/derive");
        h.update(label.as_bytes());
        h.update(&*self.bytes);
        Entropy { bytes: Zeroizing::new(h.finalize().to_vec()), mode: self.mode }
    }

    /// Public identifier of the seed, safe to put in file names.
    pub fn fingerprint(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"zkrb/entropy/fingerprint");
        h.update(&*self.bytes);
        h.finalize().into()
    }

    /// A ChaCha20 stream bound to `domain`. In system mode 32 fresh OS bytes are mixed
    /// into the seed, so two calls never agree.
    pub fn rng(&self, domain: &str) -> ChaCha20Rng {
        let mut h = Sha256::new();
        h.update(b"zkrb/entropy/rng");
        h.update((domain.len() as u64).to_le_bytes());
        h.update(domain.as_bytes());
        h.update(&*self.bytes);
        if self.mode == RandomnessMode::System {
            let mut fresh = Zeroizing::new([0u8; 32]);
            rand::rngs::OsRng.fill_bytes(&mut *fresh);
            h.update(*fresh);
        }
        let mut seed = Zeroizing::new([0u8; 32]);
        seed.copy_from_slice(&h.finalize());
        ChaCha20Rng::from_seed(*seed)
    }

    /// A uniformly random nonzero scalar.
    pub fn scalar(&self, domain: &str) -> Zeroizing<Scalar> {
        let mut rng = self.rng(domain);
        loop {
            let s = Scalar::rand(&mut rng);
            if s != Scalar::from(0u64) {
                return Zeroizing::new(s);
            }
        }
    }
}
