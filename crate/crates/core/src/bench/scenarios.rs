//! The benchmark scenarios. Each times only the operation itself; artifacts a
//! scenario depends on come from [`Artifacts`] and are built outside the timer.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;

use super::artifacts::{Artifacts, CircuitId};
use super::{BenchError, Measurement, Scenario, ScenarioConfig, Workload, BUDGET_EXCEEDED, STATUS_KEY};
use crate::algebra::Counters;
use crate::circuits::{BatchCircuitParams, WithdrawalRequest};
use crate::entropy::Entropy;
use crate::groth16::{
    projected_memory, tau_contribute_with, tau_init_with_budget, verify, Groth16Error, PointEncoding, Proof,
};
use crate::l1sim::{encode_tx_data, per_tx_cost, GasSchedule, PriceConfig, RollupContract};
use crate::rollup::{Aggregator, ProvedBatch, RollupNode, StateTree, Tx, WithdrawalProver};

/// Funded accounts in benchmark workloads.
const WORKLOAD_ACCOUNTS: usize = 32;

pub const CIRCUIT_KEY: &str = "circuit";

/// A chain of proven batches from one genesis, reused by the cost scenario.
#[derive(Debug, Clone)]
pub struct ProvenChain {
    pub genesis: StateTree,
    pub batches: Vec<(Vec<Tx>, ProvedBatch)>,
}

pub struct Bench {
    config: ScenarioConfig,
    artifacts: Artifacts,
    entropy: Entropy,
    chains: BTreeMap<usize, ProvenChain>,
}

impl Bench {
    pub fn new(config: ScenarioConfig) -> Result<Self, BenchError> {
        config.validate()?;
        let entropy = config.entropy();
        let artifacts = Artifacts::new(config.cache_dir.clone(), entropy.clone(), config.workers(), config.memory_budget_bytes)
            .verbose(config.verbose);
        Ok(Self { config, artifacts, entropy, chains: BTreeMap::new() })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn artifacts(&mut self) -> &mut Artifacts {
        &mut self.artifacts
    }

    pub fn chain(&self, m: usize) -> Option<&ProvenChain> {
        self.chains.get(&m)
    }

    fn note(&self, msg: impl FnOnce() -> String) {
        if self.config.verbose {
            eprintln!("[zkrb] {}", msg());
        }
    }

    fn batch_id(&self, m: usize) -> CircuitId {
        CircuitId::Batch { batch_size: m, depth: self.config.tree_depth }
    }

    fn withdrawal_id(&self) -> CircuitId {
        CircuitId::Withdrawal { depth: self.config.tree_depth }
    }

    /// Ceremony initialization plus one contribution per `n`; sizes over the memory
    /// budget become `budget_exceeded` records instead of allocations.
    pub fn tau(&mut self) -> Result<Vec<Measurement>, BenchError> {
        let budget = self.config.memory_budget_bytes;
        let workers = self.config.workers();
        let mut out = Vec::new();
        for &n in &self.config.tau_ns {
            for rep in 0..self.config.repetitions {
                let projected = projected_memory(n);
                if projected > budget {
                    out.push(refusal(n, rep, projected, budget));
                    continue;
                }
                let entropy = self.entropy.derive(&format!("tau/{n}/{rep}"));
                let start = Instant::now();
                let acc = match tau_init_with_budget(n, budget) {
                    Ok(acc) => tau_contribute_with(&acc, &entropy, workers)?,
                    Err(Groth16Error::BudgetExceeded { projected, budget, .. }) => {
                        out.push(refusal(n, rep, projected, budget));
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                let elapsed = start.elapsed();
                self.note(|| format!("tau n={n} rep {rep}: {elapsed:.1?}"));
                out.push(
                    Measurement::new(Scenario::Tau, n as u64, rep, elapsed)
                        .with("g1_points", acc.g1_powers().len())
                        .with("g2_points", acc.g2_powers().len())
                        .with("projected_bytes", projected),
                );
            }
        }
        Ok(out)
    }

    /// Batch circuit per `m`, withdrawal circuit once per repetition (parameter 0).
    pub fn compile(&mut self) -> Result<Vec<Measurement>, BenchError> {
        let mut out = Vec::new();
        for rep in 0..self.config.repetitions {
            for &m in &self.config.batch_sizes {
                out.push(time_compile(self.batch_id(m), m as u64, rep)?);
            }
            out.push(time_compile(self.withdrawal_id(), 0, rep)?);
        }
        Ok(out)
    }

    /// Setup per `m` and for the withdrawal circuit (parameter 0). The keys of the
    /// last repetition become the ones later scenarios use.
    pub fn keygen(&mut self) -> Result<Vec<Measurement>, BenchError> {
        let mut out = Vec::new();
        let mut ids: Vec<(CircuitId, u64)> = self.config.batch_sizes.iter().map(|&m| (self.batch_id(m), m as u64)).collect();
        ids.push((self.withdrawal_id(), 0));
        for (id, parameter) in ids {
            // one-time work outside the timer
            let cs = self.artifacts.circuit(id)?;
            let stats = cs.stats().expect("finalized");
            self.artifacts.prepared(stats.domain_size).map_err(|e| scenario_error(Scenario::Keygen, e))?;
            let mut last = None;
            for rep in 0..self.config.repetitions {
                let entropy = self.entropy.derive(&format!("keygen/{}/{rep}", id.label()));
                let start = Instant::now();
                let keys = self.artifacts.setup(id, &entropy).map_err(|e| scenario_error(Scenario::Keygen, e))?;
                let elapsed = start.elapsed();
                self.note(|| format!("keygen {} rep {rep}: {elapsed:.1?}", id.label()));
                out.push(
                    Measurement::new(Scenario::Keygen, parameter, rep, elapsed)
                        .with(CIRCUIT_KEY, circuit_name(id))
                        .with("constraints", stats.num_constraints)
                        .with("domain_size", stats.domain_size)
                        .with("pk_bytes", keys.pk.to_bytes(PointEncoding::Compressed).len())
                        .with("vk_bytes", keys.vk.to_bytes().len()),
                );
                last = Some(keys);
            }
            self.artifacts.set_keys(id, last.expect("repetitions >= 1"))?;
        }
        Ok(out)
    }

    /// Per `m`: a chain of `repetitions` random valid batches, each proven (PrfGenB)
    /// and verified, plus one withdrawal proof (PrfGenW) per repetition against the
    /// state that batch left. Withdrawal proofs run afterwards, round-robin over `m`,
    /// so slow drift in machine speed hits every batch size alike.
    pub fn prove_verify(&mut self) -> Result<Vec<Measurement>, BenchError> {
        let mut out = Vec::new();
        let wid = self.withdrawal_id();
        let wkeys = self.artifacts.keys(wid)?;
        let wprover = WithdrawalProver::new(self.config.tree_depth, wkeys.pk.clone(), self.entropy.derive("prove/withdrawal"))?
            .with_workers(self.config.workers());
        let mut withdrawals = Vec::new();
        for &m in &self.config.batch_sizes.clone() {
            let id = self.batch_id(m);
            let keys = self.artifacts.keys(id)?;
            let cs = self.artifacts.circuit(id)?;
            let params = BatchCircuitParams::new(m, self.config.tree_depth);
            let aggregator = Aggregator::with_circuit(params, cs, keys.pk.clone(), self.entropy.derive(&format!("prove/m{m}")))
                .with_workers(self.config.workers());
            let mut workload = Workload::new(&self.entropy.derive(&format!("workload/m{m}")), self.config.tree_depth, WORKLOAD_ACCOUNTS);
            let genesis = workload.genesis();
            let mut node = RollupNode::new(genesis.clone(), m);
            let mut chain = ProvenChain { genesis, batches: Vec::new() };
            let mut rng = self.entropy.derive(&format!("withdrawals/m{m}")).rng("pick");
            for rep in 0..self.config.repetitions {
                let txs = workload.transfers(node.state(), m);
                for tx in &txs {
                    node.pool().submit(tx.clone()).map_err(|e| scenario_error(Scenario::ProveBatch, e))?;
                }
                let (_, skipped) = node.seal_batch()?;
                if !skipped.is_empty() {
                    return Err(scenario_error(Scenario::ProveBatch, format!("{} generated transfers skipped", skipped.len())));
                }
                let (_, mut proved) = node.prove_next(&aggregator).expect("one batch sealed")?;
                proved.measurement.repetition = rep;
                self.note(|| format!("prove m={m} rep {rep}: {:.1?}", proved.measurement.elapsed()));
                out.push(proved.measurement.clone().with(CIRCUIT_KEY, "batch"));
                out.push(time_verify(&keys.vk, &proved.publics.to_vec(), &proved.proof, m as u64, rep)?);

                let state = node.state();
                let index = rng.gen_range(0..workload.accounts());
                let balance = state.account(index).expect("in range").balance;
                let req = WithdrawalRequest {
                    index,
                    secret: workload.secret(index),
                    amount: rng.gen_range(0..=balance),
                    recipient_tag: crate::Scalar::from(rng.gen::<u64>()),
                };
                withdrawals.push((m, rep, state.clone(), req));
                chain.batches.push((txs, proved));
            }
            self.chains.insert(m, chain);
        }
        let sizes = self.config.batch_sizes.len();
        for k in 0..withdrawals.len() {
            let (m, rep, state, req) = &withdrawals[(k % sizes) * self.config.repetitions as usize + k / sizes];
            let w = wprover.prove(state, req, *rep)?;
            if !verify(&wkeys.vk, &w.publics.to_vec(), &w.proof)? {
                return Err(scenario_error(Scenario::ProveWithdraw, "withdrawal proof failed to verify"));
            }
            self.note(|| format!("withdraw m={m} rep {rep}: {:.1?}", w.measurement.elapsed()));
            let mut wm = w.measurement;
            wm.parameter = *m as u64;
            out.push(wm.with(CIRCUIT_KEY, "withdrawal"));
        }
        Ok(out)
    }

    /// Per `m`: submits every proven batch of the chain to a fresh contract and
    /// records the receipt's gas and per-transaction cost. The timed operation is
    /// the submission itself.
    pub fn cost(&mut self, schedule: &GasSchedule, price: &PriceConfig) -> Result<Vec<Measurement>, BenchError> {
        if self.config.batch_sizes.iter().any(|m| !self.chains.contains_key(m)) {
            self.prove_verify()?;
        }
        let wkeys = self.artifacts.keys(self.withdrawal_id())?;
        let mut out = Vec::new();
        for &m in &self.config.batch_sizes.clone() {
            let keys = self.artifacts.keys(self.batch_id(m))?;
            let chain = &self.chains[&m];
            let mut contract = RollupContract::deploy((*keys.vk).clone(), (*wkeys.vk).clone(), chain.genesis.root());
            for (rep, (txs, proved)) in chain.batches.iter().enumerate() {
                let start = Instant::now();
                let receipt = contract.submit_batch_with_data(&proved.proof, &proved.publics, &encode_tx_data(txs), schedule);
                let elapsed = start.elapsed();
                if !receipt.accepted {
                    return Err(scenario_error(
                        Scenario::Cost,
                        format!("batch {} rejected: {}", proved.sequence_number, receipt.reason.unwrap_or_default()),
                    ));
                }
                let cost = per_tx_cost(receipt.gas_used, m, price)?;
                out.push(
                    Measurement::new(Scenario::Cost, m as u64, rep as u32, elapsed)
                        .with("gas_used", receipt.gas_used)
                        .with("calldata_bytes", receipt.calldata_bytes)
                        .with("gas_per_tx", cost.gas_per_tx_string())
                        .with("usd_per_tx", cost.usd_per_tx_string()),
                );
            }
        }
        Ok(out)
    }

    /// Runs scenarios in the fixed order tau, compile, keygen, prove/verify, cost.
    pub fn run(
        &mut self,
        selection: &ScenarioSelection,
        schedule: &GasSchedule,
        price: &PriceConfig,
    ) -> Result<Vec<Measurement>, BenchError> {
        let mut out = Vec::new();
        if selection.tau {
            out.extend(self.tau()?);
        }
        if selection.compile {
            out.extend(self.compile()?);
        }
        if selection.keygen {
            out.extend(self.keygen()?);
        }
        if selection.prove {
            out.extend(self.prove_verify()?);
        }
        if selection.cost {
            out.extend(self.cost(schedule, price)?);
        }
        Ok(out)
    }
}

/// Which scenario groups to run; `prove` covers prove_batch, prove_withdraw and verify.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScenarioSelection {
    pub tau: bool,
    pub compile: bool,
    pub keygen: bool,
    pub prove: bool,
    pub cost: bool,
}

impl ScenarioSelection {
    pub const ALL: ScenarioSelection = ScenarioSelection { tau: true, compile: true, keygen: true, prove: true, cost: true };

    /// Comma-separated names: `tau`, `compile`, `keygen`, `prove`, `cost`, `all`.
    pub fn parse(s: &str) -> Result<Self, BenchError> {
        let mut sel = Self::default();
        for name in s.split(',').map(str::trim) {
            match name {
                "all" => sel = Self::ALL,
                "tau" => sel.tau = true,
                "compile" => sel.compile = true,
                "keygen" => sel.keygen = true,
                "prove" | "prove_batch" | "prove_withdraw" | "verify" => sel.prove = true,
                "cost" => sel.cost = true,
                other => return Err(BenchError::Usage(format!("unknown scenario {other:?}"))),
            }
        }
        Ok(sel)
    }
}

fn circuit_name(id: CircuitId) -> &'static str {
    match id {
        CircuitId::Batch { .. } => "batch",
        CircuitId::Withdrawal { .. } => "withdrawal",
    }
}

fn refusal(n: u32, rep: u32, projected: u64, budget: u64) -> Measurement {
    Measurement::new(Scenario::Tau, n as u64, rep, std::time::Duration::ZERO)
        .with(STATUS_KEY, BUDGET_EXCEEDED)
        .with("projected_bytes", projected)
        .with("budget_bytes", budget)
}

fn scenario_error(scenario: Scenario, reason: impl ToString) -> BenchError {
    BenchError::Scenario { scenario, reason: reason.to_string() }
}

fn time_compile(id: CircuitId, parameter: u64, rep: u32) -> Result<Measurement, BenchError> {
    let start = Instant::now();
    let cs = id.build()?;
    let elapsed = start.elapsed();
    let stats = cs.stats().expect("finalized");
    Ok(Measurement::new(Scenario::Compile, parameter, rep, elapsed)
        .with(CIRCUIT_KEY, circuit_name(id))
        .with("constraints", stats.num_constraints)
        .with("public_inputs", stats.num_public)
        .with("variables", stats.num_variables()))
}

fn time_verify(
    vk: &crate::groth16::VerifyingKey,
    publics: &[crate::Scalar],
    proof: &Proof,
    m: u64,
    rep: u32,
) -> Result<Measurement, BenchError> {
    Counters::reset();
    let start = Instant::now();
    let ok = verify(vk, publics, proof)?;
    let elapsed = start.elapsed();
    let pairings = Counters::snapshot().pairings;
    if !ok {
        return Err(scenario_error(Scenario::Verify, format!("honest proof for m={m} rejected")));
    }
    Ok(Measurement::new(Scenario::Verify, m, rep, elapsed)
        .with(CIRCUIT_KEY, "batch")
        .with("pairings", pairings)
        .with("proof_bytes", proof.to_bytes().len()))
}

pub fn bench_tau(config: &ScenarioConfig) -> Result<Vec<Measurement>, BenchError> {
    Bench::new(config.clone())?.tau()
}

pub fn bench_compile(config: &ScenarioConfig) -> Result<Vec<Measurement>, BenchError> {
    Bench::new(config.clone())?.compile()
}

pub fn bench_keygen(config: &ScenarioConfig) -> Result<Vec<Measurement>, BenchError> {
    Bench::new(config.clone())?.keygen()
}

pub fn bench_prove_verify(config: &ScenarioConfig) -> Result<Vec<Measurement>, BenchError> {
    Bench::new(config.clone())?.prove_verify()
}

pub fn bench_cost(config: &ScenarioConfig, schedule: &GasSchedule, price: &PriceConfig) -> Result<Vec<Measurement>, BenchError> {
    Bench::new(config.clone())?.cost(schedule, price)
}
