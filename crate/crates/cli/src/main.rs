use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use zkrb::algebra::params as curve_params;
use zkrb::bench::{
    emit_report, medians, parse_list, Bench, Measurement, ReportFormat, Scenario, ScenarioConfig, ScenarioSelection,
    Workload,
};
use zkrb::circuits::{
    batch_constraint_count, build_batch_circuit, withdrawal_constraint_count, BatchCircuitParams, WithdrawalRequest,
};
use zkrb::groth16::{memory_budget_from_env, projected_memory, required_tau_n, verify, ProofJson};
use zkrb::l1sim::{encode_tx_data, per_tx_cost, write_receipts, CostConfig, Receipt, RollupContract};
use zkrb::rollup::{Aggregator, RollupNode, Tx, WithdrawalProver};
use zkrb::Scalar;

#[derive(Parser)]
#[command(name = "zkrb", version, about = "ZK-rollup pipeline and cost benchmark")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Time powers-of-tau initialization plus one contribution per n.
    Tau(TauArgs),
    /// Run benchmark scenarios and write reports.
    Bench(BenchArgs),
    /// One end-to-end pass: pool, batch, proof, L1 submission, withdrawal.
    Demo(DemoArgs),
    /// Circuit sizes, tau requirements and the cost model in effect.
    Params(ParamsArgs),
    /// Curve parameters.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Dump the curve constants.
    Params,
}

#[derive(Args)]
struct Common {
    /// Derive all randomness from this seed (byte-stable output).
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for cached tau, prepared parameters and keys.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Progress on stderr.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct TauArgs {
    /// Sizes, e.g. `12..16` or `12,14`.
    #[arg(long, default_value = "12..16")]
    n: String,
    #[arg(long, default_value_t = 5)]
    reps: u32,
    /// Write reports here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated: tau, compile, keygen, prove, cost, all.
    #[arg(long, default_value = "all")]
    scenario: String,
    #[arg(long, default_value = "4,8,16")]
    sizes: String,
    #[arg(long, default_value = "12..16")]
    tau_ns: String,
    #[arg(long, default_value_t = 5)]
    reps: u32,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value = "report")]
    out: PathBuf,
    #[arg(long, default_value = "csv,json,svg")]
    format: String,
    /// Zero all timings in the reports (golden mode).
    #[arg(long)]
    no_timing: bool,
    /// TOML with `[gas]` and `[price]` tables.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run independent scenario groups concurrently.
    #[arg(long)]
    parallel: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 4)]
    size: usize,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write receipts as JSON lines here instead of stdout.
    #[arg(long)]
    receipts: Option<PathBuf>,
    /// Also write the batch proof in JSON form.
    #[arg(long)]
    proof_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long, default_value = "4,8,16")]
    sizes: String,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the batch constraint system of this size as a text dump to --dump-out.
    #[arg(long, requires = "dump_out")]
    dump: Option<usize>,
    #[arg(long)]
    dump_out: Option<PathBuf>,
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Tau(a) => tau(a),
        Cmd::Bench(a) => bench(a),
        Cmd::Demo(a) => demo(a),
        Cmd::Params(a) => params(a),
        Cmd::Algebra { cmd: AlgebraCmd::Params } => {
            print!("{}", curve_params::dump());
            Ok(())
        }
    }
}

fn base_config(common: &Common) -> Result<ScenarioConfig> {
    Ok(ScenarioConfig {
        memory_budget_bytes: memory_budget_from_env()?,
        deterministic_seed: common.seed.clone(),
        cache_dir: common.cache.clone(),
        workers: common.workers,
        verbose: common.verbose,
        ..ScenarioConfig::default()
    })
}

fn load_cost(path: &Option<PathBuf>) -> Result<CostConfig> {
    Ok(match path {
        Some(p) => CostConfig::load(p)?,
        None => CostConfig::default(),
    })
}

fn print_medians(ms: &[Measurement]) {
    for sc in Scenario::ALL {
        for (p, ns) in medians(ms, sc) {
            println!("{:<15} {p:>3}  median {:>12.3} ms", sc.as_str(), ns as f64 / 1e6);
        }
    }
    for m in ms.iter().filter(|m| m.is_refusal()) {
        let aux = |k: &str| m.aux.get(k).map(|v| v.to_string()).unwrap_or_default();
        println!(
            "{:<15} {:>3}  rep {} refused: projected {} bytes > budget {}",
            m.scenario.as_str(),
            m.parameter,
            m.repetition,
            aux("projected_bytes"),
            aux("budget_bytes")
        );
    }
}

fn tau(a: TauArgs) -> Result<()> {
    let config = ScenarioConfig { tau_ns: parse_list(&a.n)?, repetitions: a.reps, ..base_config(&a.common)? };
    let ms = Bench::new(config)?.tau()?;
    print_medians(&ms);
    if let Some(out) = a.out {
        for p in emit_report(&ms, &[ReportFormat::Csv, ReportFormat::Json, ReportFormat::Svg], &out, false)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let config = ScenarioConfig {
        tau_ns: parse_list(&a.tau_ns)?,
        batch_sizes: parse_list(&a.sizes)?,
        repetitions: a.reps,
        tree_depth: a.depth,
        ..base_config(&a.common)?
    };
    let formats = a.format.split(',').map(|f| f.trim().parse()).collect::<Result<Vec<ReportFormat>, _>>()?;
    let selection = ScenarioSelection::parse(&a.scenario)?;
    let cost = load_cost(&a.config)?;
    let start = Instant::now();
    let ms = if a.parallel {
        eprintln!("warning: scenarios run concurrently; timings are not reliable");
        run_parallel(&config, selection, &cost)?
    } else {
        Bench::new(config)?.run(&selection, &cost.gas, &cost.price)?
    };
    print_medians(&ms);
    for p in emit_report(&ms, &formats, &a.out, a.no_timing)? {
        eprintln!("wrote {}", p.display());
    }
    eprintln!("total {:.1?}", start.elapsed());
    Ok(())
}

/// Tau and compile have no shared state with the key-dependent scenarios, so
/// they run on their own threads.
fn run_parallel(config: &ScenarioConfig, sel: ScenarioSelection, cost: &CostConfig) -> Result<Vec<Measurement>> {
    std::thread::scope(|s| {
        let tau = s.spawn(|| if sel.tau { Bench::new(config.clone())?.tau() } else { Ok(Vec::new()) });
        let compile = s.spawn(|| if sel.compile { Bench::new(config.clone())?.compile() } else { Ok(Vec::new()) });
        let rest = s.spawn(|| {
            let only = ScenarioSelection { tau: false, compile: false, ..sel };
            Bench::new(config.clone())?.run(&only, &cost.gas, &cost.price)
        });
        let mut out = Vec::new();
        for h in [tau, compile, rest] {
            out.extend(h.join().expect("scenario thread panicked")?);
        }
        Ok(out)
    })
}

fn demo(a: DemoArgs) -> Result<()> {
    let config = ScenarioConfig {
        batch_sizes: vec![a.size],
        tree_depth: a.depth,
        deterministic_seed: Some(a.common.seed.clone().unwrap_or_else(|| "zkrb-demo".into())),
        ..base_config(&a.common)?
    };
    config.validate()?;
    let cost = load_cost(&a.config)?;
    let entropy = config.entropy();
    let mut bench = Bench::new(config.clone())?;
    let log = |msg: String| eprintln!("{msg}");

    let mut workload = Workload::new(&entropy.derive("demo/workload"), a.depth, 8);
    let genesis = workload.genesis();
    log(format!("genesis root {}", zkrb::algebra::scalar_to_hex(&genesis.root())));

    let params = BatchCircuitParams::new(a.size, a.depth);
    let batch_id = zkrb::bench::CircuitId::Batch { batch_size: a.size, depth: a.depth };
    let w_id = zkrb::bench::CircuitId::Withdrawal { depth: a.depth };
    let start = Instant::now();
    let keys = bench.artifacts().keys(batch_id)?;
    let wkeys = bench.artifacts().keys(w_id)?;
    log(format!("keys ready in {:.1?}", start.elapsed()));

    let mut contract = RollupContract::deploy((*keys.vk).clone(), (*wkeys.vk).clone(), genesis.root());
    let mut node = RollupNode::new(genesis, a.size);
    let mut txs = workload.transfers(node.state(), a.size);
    // same sender and nonce as the first transfer; the pool turns it away
    let mut stale = txs[0].clone();
    stale.amount = 1;
    txs.insert(1, stale);
    for tx in &txs {
        match node.pool().submit(tx.clone()) {
            Ok(t) => log(format!("pool: ticket {t} {} -> {} amount {}", tx.from, tx.to, tx.amount)),
            Err(e) => log(format!("pool: rejected {} -> {}: {e}", tx.from, tx.to)),
        }
    }
    let (seq, skipped) = node.seal_batch()?;
    for s in &skipped {
        log(format!("sequencer: skipped ticket {}: {}", s.ticket, s.reason));
    }
    let aggregator = Aggregator::with_circuit(params, bench.artifacts().circuit(batch_id)?, keys.pk.clone(), entropy.derive("demo/prove"));
    let (sealed, proved) = node.prove_next(&aggregator).expect("one batch sealed")?;
    log(format!("aggregator: batch {seq} proven in {:.1?}", proved.measurement.elapsed()));
    if let Some(p) = &a.proof_out {
        std::fs::write(p, ProofJson::new(&proved.proof, &proved.publics.to_vec()).to_json())
            .with_context(|| p.display().to_string())?;
    }

    let mut receipts: Vec<Receipt> = Vec::new();
    let applied: Vec<Tx> = sealed.batch.txs.clone();
    let r = contract.submit_batch_with_data(&proved.proof, &proved.publics, &encode_tx_data(&applied), &cost.gas);
    if !r.accepted {
        bail!("honest batch rejected: {:?}", r.reason);
    }
    let c = per_tx_cost(r.gas_used, a.size, &cost.price)?;
    log(format!("l1: batch accepted, gas {} = {} gas/tx = ${} per tx", r.gas_used, c.gas_per_tx_string(), c.usd_per_tx_string()));
    receipts.push(r);
    let replay = contract.submit_batch(&proved.proof, &proved.publics, &cost.gas);
    log(format!("l1: resubmitted batch -> {}", replay.reason.clone().unwrap_or_default()));
    receipts.push(replay);

    let state = node.state();
    let index = (0..workload.accounts()).max_by_key(|i| state.account(*i).map(|a| a.balance).unwrap_or(0)).unwrap_or(0);
    let req = WithdrawalRequest {
        index,
        secret: workload.secret(index),
        amount: state.account(index)?.balance / 2,
        recipient_tag: Scalar::from(0xC0FFEEu64),
    };
    let wprover = WithdrawalProver::new(a.depth, wkeys.pk.clone(), entropy.derive("demo/withdraw"))?;
    let w = wprover.prove(state, &req, 0)?;
    log(format!("withdrawal of {} from account {index} proven in {:.1?}", req.amount, w.measurement.elapsed()));
    debug_assert!(verify(&wkeys.vk, &w.publics.to_vec(), &w.proof)?);
    let r = contract.submit_withdrawal(&w.proof, &w.publics, &cost.gas);
    log(format!("l1: withdrawal accepted = {}", r.accepted));
    receipts.push(r);
    let again = contract.submit_withdrawal(&w.proof, &w.publics, &cost.gas);
    log(format!("l1: replayed withdrawal -> {}", again.reason.clone().unwrap_or_default()));
    receipts.push(again);

    match &a.receipts {
        Some(p) => {
            let f = std::fs::File::create(p).with_context(|| p.display().to_string())?;
            write_receipts(&receipts, std::io::BufWriter::new(f))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_receipts(&receipts, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn params(a: ParamsArgs) -> Result<()> {
    let sizes: Vec<usize> = parse_list(&a.sizes)?;
    let cost = load_cost(&a.config)?;
    println!("tree_depth = {}", a.depth);
    for m in &sizes {
        let p = BatchCircuitParams::new(*m, a.depth);
        let n = batch_constraint_count(&p);
        let domain = (n + 3).next_power_of_two();
        let tau_n = required_tau_n(domain);
        println!(
            "batch m={m}: constraints {n}, domain {domain}, tau n >= {tau_n} (projected {} MiB)",
            projected_memory(tau_n) >> 20
        );
    }
    let w = withdrawal_constraint_count(a.depth);
    let wd = (w + 5).next_power_of_two();
    println!("withdrawal: constraints {w}, domain {wd}, tau n >= {}", required_tau_n(wd));
    println!("memory budget = {} bytes", memory_budget_from_env()?);
    println!("\n[gas]\n{}", cost.gas.to_toml());
    println!(
        "[price]\ngas_price_gwei = \"{}\"\neth_usd = \"{}\"",
        zkrb::l1sim::format_decimal(&cost.price.gas_price_gwei, None),
        zkrb::l1sim::format_decimal(&cost.price.eth_usd, None)
    );
    if let (Some(m), Some(out)) = (a.dump, &a.dump_out) {
        let cs = build_batch_circuit(&BatchCircuitParams::new(m, a.depth))?;
        std::fs::write(out, cs.dump()).with_context(|| out.display().to_string())?;
        eprintln!("wrote {}", out.display());
    }
    Ok(())
}
