//! `awtc`: seeded experiment runner for pseudolinear wiretap codes.

mod commands;
mod output;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "awtc", version, about = "Experiments on adversarial wiretap codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Capacity lower/upper bounds and code-existence thresholds over a rate grid.
    Fig1Data(Fig1Args),
    /// Exact semantic leakage of a code at read-set size rn.
    LeakageExact(LeakageArgs),
    /// Read-set attack on a linear code, with a dependent-column certificate.
    AttackLinear(AttackArgs),
    /// Minimum equivocation and leakage certificate of a coset code.
    CosetAttack(CosetArgs),
    /// BCH column independence and exhaustive k-wise uniformity check.
    KwiseCheck(KwiseArgs),
    /// Soft-covering divergence over random codebooks.
    SoftcoverRun(SoftcoverArgs),
    /// Decoding-error probability under adversary strategies.
    ReliabilitySim(ReliabilityArgs),
    /// Joint secrecy and reliability over sampled pseudolinear codes.
    Theorem2Run(Theorem2Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    Kwise,
    Iid,
}

#[derive(Debug, Args, Serialize)]
struct OutArgs {
    /// Output file; stdout when absent. A `<out>.meta.json` sidecar records
    /// the resolved config, provenance and timestamp.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ScanArgs {
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    /// Read sets drawn in sampled mode.
    #[arg(long, default_value_t = 1000)]
    sets: usize,
}

#[derive(Debug, Args, Serialize)]
struct Fig1Args {
    /// Flip fraction.
    #[arg(long)]
    p: f64,
    /// Grid points on r ∈ [0, 1].
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct LeakageArgs {
    /// Code file (JSON header line plus matrix text). Defaults to the bundled
    /// n = 3 code with G_M = [1 0 0], G_W = [0 1 1].
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    rn: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    scan: ScanArgs,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct RandomCodeArgs {
    /// Code file; when absent a random code is drawn from --n/--mbits/--wbits/--seed.
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    mbits: Option<usize>,
    #[arg(long)]
    wbits: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args, Serialize)]
struct AttackArgs {
    #[command(flatten)]
    #[serde(flatten)]
    code: RandomCodeArgs,
    #[arg(long)]
    rn: usize,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct CosetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    code: RandomCodeArgs,
    #[arg(long)]
    rn: usize,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct KwiseArgs {
    /// Field degree.
    #[arg(long)]
    b: usize,
    /// Independence order.
    #[arg(long)]
    k: usize,
    /// Blocklength for the exhaustive tuple check; skipped when absent.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct SoftcoverArgs {
    /// Comma-separated blocklengths.
    #[arg(long, value_delimiter = ',', default_value = "4,8,12")]
    n: Vec<usize>,
    /// Key bits per codebook; overrides --key-rate.
    #[arg(long)]
    keybits: Option<usize>,
    /// Key bits = round(key_rate · n) when --keybits is absent.
    #[arg(long, default_value_t = 0.5)]
    key_rate: f64,
    #[arg(long, value_enum, default_value_t = Family::Kwise)]
    family: Family,
    /// Independence order for k-wise codebooks (even, ≥ 4).
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// `bsc:<p>` or `file:<path>` (rows of transition probabilities).
    #[arg(long, default_value = "bsc:0.3")]
    channel: String,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Divergence threshold for the tail fraction.
    #[arg(long, default_value_t = 0.01)]
    threshold: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct ReliabilityArgs {
    /// Code file; when absent `--codes` pseudolinear codes are sampled.
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    mbits: usize,
    #[arg(long, default_value_t = 0)]
    wbits: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    codes: usize,
    #[arg(long, default_value_t = 0)]
    pn: usize,
    #[arg(long, default_value_t = 0)]
    rn: usize,
    /// Comma-separated strategies: none, oblivious-exhaustive, z-aware-greedy, random.
    #[arg(long, value_delimiter = ',', default_value = "none,oblivious-exhaustive,z-aware-greedy,random")]
    strategy: Vec<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct Theorem2Args {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    mbits: usize,
    #[arg(long)]
    wbits: usize,
    /// Comma-separated independence orders.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pn: usize,
    #[arg(long, default_value_t = 0)]
    rn: usize,
    /// Codes sampled per k.
    #[arg(long, default_value_t = 20)]
    codes: usize,
    #[arg(long, value_delimiter = ',', default_value = "none,oblivious-exhaustive,z-aware-greedy,random")]
    strategy: Vec<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = awtc::reliability::DEFAULT_LEAK_THRESHOLD)]
    leak_threshold: f64,
    #[arg(long, default_value_t = awtc::reliability::DEFAULT_DELTA)]
    delta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    scan: ScanArgs,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    commands::run(&cli.command)
}
