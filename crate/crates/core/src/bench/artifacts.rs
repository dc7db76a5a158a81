//! One-time artifacts (tau accumulator, prepared parameters, compiled circuits,
//! keys) built on first use, kept in memory and optionally persisted.
//!
//! Every cached file has a `.sha256` sidecar written with it. A load checks the
//! digest and then skips G2 subgroup checks, which otherwise dominate load time.
//! Keys are filed under the circuit's structural digest, so a changed circuit
//! never picks up stale keys.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use super::BenchError;
use crate::algebra::Workers;
use crate::circuits::{build_batch_circuit, build_withdrawal_circuit, BatchCircuitParams};
use crate::entropy::Entropy;
use crate::groth16::{
    required_tau_n, setup_with_prepared, sha256, tau_contribute_with, tau_init_with_budget, PointEncoding,
    PreparedTau, ProvingKey, TauAccumulator, VerifyingKey,
};
use crate::r1cs::ConstraintSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircuitId {
    Batch { batch_size: usize, depth: usize },
    Withdrawal { depth: usize },
}

impl CircuitId {
    pub fn label(&self) -> String {
        match self {
            CircuitId::Batch { batch_size, depth } => format!("batch_m{batch_size}_d{depth}"),
            CircuitId::Withdrawal { depth } => format!("withdrawal_d{depth}"),
        }
    }

    pub fn build(&self) -> Result<ConstraintSystem, BenchError> {
        Ok(match *self {
            CircuitId::Batch { batch_size, depth } => build_batch_circuit(&BatchCircuitParams::new(batch_size, depth))?,
            CircuitId::Withdrawal { depth } => build_withdrawal_circuit(depth)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct KeyPair {
    pub pk: Arc<ProvingKey>,
    pub vk: Arc<VerifyingKey>,
}

pub struct Artifacts {
    dir: Option<PathBuf>,
    entropy: Entropy,
    workers: Workers,
    memory_budget: u64,
    verbose: bool,
    tau: Option<Arc<TauAccumulator>>,
    prepared: HashMap<usize, Arc<PreparedTau>>,
    circuits: HashMap<CircuitId, Arc<ConstraintSystem>>,
    keys: HashMap<CircuitId, KeyPair>,
}

impl Artifacts {
    pub fn new(dir: Option<PathBuf>, entropy: Entropy, workers: Workers, memory_budget: u64) -> Self {
        Self {
            dir,
            entropy,
            workers,
            memory_budget,
            verbose: false,
            tau: None,
            prepared: HashMap::new(),
            circuits: HashMap::new(),
            keys: HashMap::new(),
        }
    }

    pub fn verbose(mut self, on: bool) -> Self {
        self.verbose = on;
        self
    }

    pub fn entropy(&self) -> &Entropy {
        &self.entropy
    }

    fn note(&self, msg: impl FnOnce() -> String) {
        if self.verbose {
            eprintln!("[zkrb] {}", msg());
        }
    }

    /// Seed tag for file names: deterministic runs share files per seed.
    fn tag(&self) -> String {
        match self.entropy.mode() {
            crate::RandomnessMode::Deterministic => hex::encode(&self.entropy.fingerprint()[..6]),
            crate::RandomnessMode::System => "random".into(),
        }
    }

    fn path(&self, name: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(name))
    }

    pub fn circuit(&mut self, id: CircuitId) -> Result<Arc<ConstraintSystem>, BenchError> {
        if let Some(cs) = self.circuits.get(&id) {
            return Ok(cs.clone());
        }
        let cs = Arc::new(id.build()?);
        self.circuits.insert(id, cs.clone());
        Ok(cs)
    }

    /// An accumulator large enough for `domain_size`, reusing a larger one when held.
    pub fn tau_for(&mut self, domain_size: usize) -> Result<Arc<TauAccumulator>, BenchError> {
        let n = required_tau_n(domain_size);
        if let Some(t) = self.tau.as_ref().filter(|t| t.n() >= n) {
            return Ok(t.clone());
        }
        let name = format!("tau_n{n}_{}.ptau", self.tag());
        let acc = match self.path(&name).and_then(|p| load_cached(&p, TauAccumulator::load_with_digest)) {
            Some(acc) => {
                self.note(|| format!("loaded {name}"));
                acc
            }
            None => {
                let start = Instant::now();
                let acc = tau_init_with_budget(n, self.memory_budget)?;
                let acc = tau_contribute_with(&acc, &self.entropy.derive("ceremony"), self.workers)?;
                self.note(|| format!("tau n={n} built in {:.1?}", start.elapsed()));
                if let Some(p) = self.path(&name) {
                    save_cached(&p, &acc.to_bytes())?;
                }
                acc
            }
        };
        let acc = Arc::new(acc);
        self.tau = Some(acc.clone());
        Ok(acc)
    }

    /// Installs an accumulator from elsewhere (e.g. a `tau` CLI run).
    pub fn set_tau(&mut self, acc: TauAccumulator) {
        self.tau = Some(Arc::new(acc));
        self.prepared.clear();
    }

    /// Chain check plus Lagrange basis for one domain: the one-time step between
    /// the ceremony and per-circuit setup.
    pub fn prepared(&mut self, domain_size: usize) -> Result<Arc<PreparedTau>, BenchError> {
        if let Some(p) = self.prepared.get(&domain_size) {
            return Ok(p.clone());
        }
        let acc = self.tau_for(domain_size)?;
        let name = format!("prepared_{domain_size}_{}.bin", hex::encode(&acc.digest()[..6]));
        let prepared = match self.path(&name).and_then(|p| load_cached(&p, PreparedTau::load_with_digest)) {
            Some(p) if p.source_digest() == acc.digest() => {
                self.note(|| format!("loaded {name}"));
                p
            }
            _ => {
                let start = Instant::now();
                let p = PreparedTau::new(&acc, domain_size, self.workers)?;
                self.note(|| format!("prepared domain {domain_size} in {:.1?}", start.elapsed()));
                if let Some(path) = self.path(&name) {
                    save_cached(&path, &p.to_bytes())?;
                }
                p
            }
        };
        let prepared = Arc::new(prepared);
        self.prepared.insert(domain_size, prepared.clone());
        Ok(prepared)
    }

    fn key_name(&mut self, id: CircuitId) -> Result<String, BenchError> {
        let cs = self.circuit(id)?;
        let domain = cs.stats().expect("built circuits are finalized").domain_size;
        let acc = self.tau_for(domain)?;
        Ok(format!(
            "{}_{}_{}_{}",
            id.label(),
            hex::encode(&cs.digest()[..6]),
            hex::encode(&acc.digest()[..6]),
            self.tag()
        ))
    }

    /// Runs setup for `id` without touching the key store; `entropy` seeds the toxic waste.
    pub fn setup(&mut self, id: CircuitId, entropy: &Entropy) -> Result<KeyPair, BenchError> {
        let cs = self.circuit(id)?;
        let domain = cs.stats().expect("built circuits are finalized").domain_size;
        let prepared = self.prepared(domain)?;
        let (pk, vk) = setup_with_prepared(&prepared, &cs, entropy, self.workers)?;
        Ok(KeyPair { pk: Arc::new(pk), vk: Arc::new(vk) })
    }

    /// Stores keys as the ones later scenarios use, persisting them when a cache dir is set.
    pub fn set_keys(&mut self, id: CircuitId, keys: KeyPair) -> Result<(), BenchError> {
        if self.dir.is_some() {
            let name = self.key_name(id)?;
            save_cached(&self.path(&format!("{name}.pk")).expect("dir set"), &keys.pk.to_bytes(PointEncoding::Raw))?;
            save_cached(&self.path(&format!("{name}.vk")).expect("dir set"), &keys.vk.to_bytes())?;
        }
        self.keys.insert(id, keys);
        Ok(())
    }

    /// Keys for `id`: memory, then disk, then a fresh setup.
    pub fn keys(&mut self, id: CircuitId) -> Result<KeyPair, BenchError> {
        if let Some(k) = self.keys.get(&id) {
            return Ok(k.clone());
        }
        if self.dir.is_some() {
            let name = self.key_name(id)?;
            let pk = self.path(&format!("{name}.pk")).and_then(|p| load_cached(&p, ProvingKey::load_with_digest));
            let vk = self.path(&format!("{name}.vk")).and_then(|p| load_cached(&p, |p, _| VerifyingKey::load(p)));
            if let (Some(pk), Some(vk)) = (pk, vk) {
                if pk.vk == vk {
                    self.note(|| format!("loaded keys {name}"));
                    let keys = KeyPair { pk: Arc::new(pk), vk: Arc::new(vk) };
                    self.keys.insert(id, keys.clone());
                    return Ok(keys);
                }
            }
        }
        let start = Instant::now();
        let entropy = self.entropy.derive(&format!("setup/{}", id.label()));
        let keys = self.setup(id, &entropy)?;
        self.note(|| format!("keys for {} in {:.1?}", id.label(), start.elapsed()));
        self.set_keys(id, keys.clone())?;
        Ok(keys)
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".sha256");
    PathBuf::from(s)
}

/// `None` on any problem: a missing or corrupt cache entry is rebuilt, never fatal.
fn load_cached<T, E>(path: &Path, load: impl FnOnce(&Path, &[u8; 32]) -> Result<T, E>) -> Option<T> {
    let hex_digest = std::fs::read_to_string(sidecar(path)).ok()?;
    let digest: [u8; 32] = hex::decode(hex_digest.trim()).ok()?.try_into().ok()?;
    load(path, &digest).ok()
}

fn save_cached(path: &Path, bytes: &[u8]) -> Result<(), BenchError> {
    let io = |e: std::io::Error| BenchError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)?;
    std::fs::write(sidecar(path), hex::encode(sha256(bytes))).map_err(io)
}
