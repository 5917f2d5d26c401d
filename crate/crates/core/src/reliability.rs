//! Decoding-error probability of minimum-distance decoding under bit-flipping
//! adversaries, and the combined secrecy-plus-reliability experiment.
//!
//! The strategies here are fixed classes, so every reported error is a lower
//! bound on the worst case over all adversaries.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{binomial, enumerate_flip_sets, observe, apply_flips, FlipSet, ReadSet};
use crate::codes::{sample_pseudolinear, Codebook, Decoded, WiretapCode};
use crate::error::{Error, Result};
use crate::leakage::{sem_leakage, ScanMode};
use crate::seed::derive_seed;

/// Largest number of flip sets the exhaustive strategy will enumerate.
pub const MAX_EXHAUSTIVE_FLIP_SETS: u128 = 100_000;

/// Largest `messages · flip sets · keys · codewords` for the exhaustive
/// strategy.
pub const MAX_EXHAUSTIVE_WORK: u128 = 1 << 32;

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_LEAK_THRESHOLD: f64 = 1.0 / 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    /// No flips.
    None,
    /// The flip set maximizing the error averaged over keys, chosen per
    /// message without seeing the codeword.
    ObliviousExhaustive,
    /// Reads `rn` random coordinates, guesses a consistent codeword and pushes
    /// it toward the nearest codeword of another message.
    ZAwareGreedy,
    /// `pn` uniformly random flips.
    Random,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::None,
        StrategyKind::ObliviousExhaustive,
        StrategyKind::ZAwareGreedy,
        StrategyKind::Random,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::None => "none",
            StrategyKind::ObliviousExhaustive => "oblivious-exhaustive",
            StrategyKind::ZAwareGreedy => "z-aware-greedy",
            StrategyKind::Random => "random",
        }
    }

    /// Whether the strategy's error is computed exactly rather than sampled.
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, StrategyKind::None | StrategyKind::ObliviousExhaustive)
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown strategy '{s}'")))
    }
}

/// A strategy class with its budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdversaryStrategy {
    pub kind: StrategyKind,
    /// Flip budget.
    pub pn: usize,
    /// Read budget, used by the z-aware strategy.
    pub rn: usize,
}

impl AdversaryStrategy {
    pub fn new(kind: StrategyKind, pn: usize, rn: usize) -> Self {
        Self { kind, pn, rn }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReliabilityReport {
    pub strategy: AdversaryStrategy,
    /// True when the per-message values are exact rather than sampled.
    pub exact: bool,
    /// Trials per message; for exact strategies the number of keys.
    pub trials: usize,
    /// `P(decode ≠ m | M = m)` for every message.
    pub per_message: Vec<f64>,
    pub max_error: f64,
}

fn is_error(cb: &Codebook, y: &crate::BitVector, m: u64) -> Result<bool> {
    Ok(match cb.min_distance_decode(y)? {
        Decoded::Unique { m: got, .. } => got != m,
        Decoded::Tie { .. } => true,
    })
}

/// Errors averaged over keys for one message and one fixed flip set.
fn key_average(cb: &Codebook, m: u64, f: &FlipSet) -> Result<f64> {
    let mut errors = 0usize;
    for x in cb.message_words(m) {
        if is_error(cb, &apply_flips(x, f)?, m)? {
            errors += 1;
        }
    }
    Ok(errors as f64 / cb.keys() as f64)
}

/// Uniformly random subset of `k` distinct entries of `from`.
fn random_subset<R: Rng>(from: &[usize], k: usize, rng: &mut R) -> Vec<usize> {
    let mut chosen: Vec<usize> = from.choose_multiple(rng, k.min(from.len())).copied().collect();
    chosen.sort_unstable();
    chosen
}

/// One z-aware greedy action against codeword `x` of message `m`.
fn greedy_flips<R: Rng>(cb: &Codebook, m: u64, x: &crate::BitVector, st: &AdversaryStrategy, rng: &mut R) -> Result<FlipSet> {
    let n = cb.n();
    let s = ReadSet::random(n, st.rn, rng)?;
    let z = observe(x, &s)?;
    let consistent: Vec<&crate::BitVector> = cb
        .message_words(m)
        .iter()
        .filter(|c| c.gather(s.zero_based()) == z)
        .collect();
    let guess = consistent.choose(rng).copied().unwrap_or(x);
    // nearest codeword of a different message, first in index order
    let rival = cb
        .words()
        .iter()
        .enumerate()
        .filter(|(i, _)| (*i >> cb.wbits()) as u64 != m)
        .min_by_key(|(_, c)| c.hamming_distance(guess))
        .map(|(_, c)| c);
    let Some(rival) = rival else {
        return Ok(FlipSet::empty(n));
    };
    let differ: Vec<usize> = (0..n).filter(|&i| guess.get(i) != rival.get(i)).collect();
    FlipSet::from_zero_based(n, st.pn, random_subset(&differ, st.pn, rng))
}

/// Per-message decoding error of `cb` under `strategy`. Exhaustive strategies
/// ignore `trials` and `seed`.
pub fn error_prob(cb: &Codebook, strategy: AdversaryStrategy, trials: usize, seed: u64) -> Result<ReliabilityReport> {
    let n = cb.n();
    if strategy.pn > n {
        return Err(Error::Precondition(format!("pn = {} exceeds n = {n}", strategy.pn)));
    }
    if strategy.rn > n {
        return Err(Error::Precondition(format!("rn = {} exceeds n = {n}", strategy.rn)));
    }
    if !strategy.kind.is_exhaustive() && trials == 0 {
        return Err(Error::Precondition("sampled strategies need at least one trial".into()));
    }
    let messages = cb.messages() as u64;
    let mut per_message = Vec::with_capacity(messages as usize);
    match strategy.kind {
        StrategyKind::None => {
            let none = FlipSet::empty(n);
            for m in 0..messages {
                per_message.push(key_average(cb, m, &none)?);
            }
        }
        StrategyKind::ObliviousExhaustive => {
            let sets: u128 = (0..=strategy.pn).map(|w| binomial(n, w)).sum();
            let words = cb.words().len() as u128;
            let work = sets.saturating_mul(words).saturating_mul(words);
            if sets > MAX_EXHAUSTIVE_FLIP_SETS || work > MAX_EXHAUSTIVE_WORK {
                return Err(Error::TooLarge(format!(
                    "{sets} flip sets over {words} codewords for exhaustive search"
                )));
            }
            for m in 0..messages {
                let mut worst = 0.0f64;
                for f in enumerate_flip_sets(n, strategy.pn) {
                    worst = worst.max(key_average(cb, m, &f)?);
                    if worst == 1.0 {
                        break;
                    }
                }
                per_message.push(worst);
            }
        }
        StrategyKind::ZAwareGreedy | StrategyKind::Random => {
            let tag = format!("reliability/{}", strategy.kind.name());
            for m in 0..messages {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &tag, m));
                let mut errors = 0usize;
                for _ in 0..trials {
                    let w = rng.gen_range(0..cb.keys() as u64);
                    let x = cb.word(m, w);
                    let f = if strategy.kind == StrategyKind::Random {
                        let all: Vec<usize> = (0..n).collect();
                        FlipSet::from_zero_based(n, strategy.pn, random_subset(&all, strategy.pn, &mut rng))?
                    } else {
                        greedy_flips(cb, m, x, &strategy, &mut rng)?
                    };
                    if is_error(cb, &apply_flips(x, &f)?, m)? {
                        errors += 1;
                    }
                }
                per_message.push(errors as f64 / trials as f64);
            }
        }
    }
    let max_error = per_message.iter().copied().fold(0.0, f64::max);
    Ok(ReliabilityReport {
        strategy,
        exact: strategy.kind.is_exhaustive(),
        trials: if strategy.kind.is_exhaustive() { cb.keys() } else { trials },
        per_message,
        max_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Params {
    pub n: usize,
    pub mbits: usize,
    pub wbits: usize,
    pub k: usize,
    pub pn: usize,
    pub rn: usize,
    /// Number of sampled codes.
    pub codes: usize,
    /// Trials per message for sampled strategies.
    pub trials: usize,
    pub seed: u64,
    pub strategies: Vec<StrategyKind>,
    pub scan: ScanMode,
    pub leak_threshold: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Sample {
    pub sample: usize,
    pub code_seed: u64,
    /// Semantic leakage (maximum over message laws and scanned read sets).
    pub leakage: f64,
    pub uniform_leakage: f64,
    pub leakage_is_lower_bound: bool,
    pub reliability: Vec<ReliabilityReport>,
    /// Largest error over all strategies.
    pub max_error: f64,
    pub secure: bool,
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub params: Theorem2Params,
    pub samples: Vec<Theorem2Sample>,
    /// Fraction of codes with leakage ≤ threshold and error ≤ δ.
    pub joint_success: f64,
}

/// Seed of the `sample`-th code drawn by [`theorem2_experiment`].
pub fn theorem2_code_seed(master: u64, k: usize, sample: usize) -> u64 {
    derive_seed(master, &format!("theorem2/k{k}"), sample as u64)
}

/// Samples pseudolinear codes and measures both secrecy and reliability.
pub fn theorem2_experiment(p: &Theorem2Params) -> Result<Theorem2Report> {
    if p.codes == 0 {
        return Err(Error::Precondition("at least one code sample is required".into()));
    }
    if p.strategies.is_empty() {
        return Err(Error::Precondition("at least one strategy is required".into()));
    }
    if p.rn > p.n || p.pn > p.n {
        return Err(Error::Precondition(format!(
            "rn = {} and pn = {} must not exceed n = {}",
            p.rn, p.pn, p.n
        )));
    }
    let mut samples = Vec::with_capacity(p.codes);
    for sample in 0..p.codes {
        let code_seed = theorem2_code_seed(p.seed, p.k, sample);
        let cb = sample_pseudolinear(p.n, p.mbits, p.wbits, p.k, code_seed)?.codebook()?;
        let scan = match p.scan {
            ScanMode::Exhaustive => ScanMode::Exhaustive,
            ScanMode::Sampled { sets, seed } => ScanMode::Sampled {
                sets,
                seed: derive_seed(seed, "theorem2/readsets", sample as u64),
            },
        };
        let sem = sem_leakage(&cb, p.rn, scan)?;
        let reliability = p
            .strategies
            .iter()
            .map(|&kind| {
                let s = derive_seed(code_seed, "theorem2/adversary", kind as u64);
                error_prob(&cb, AdversaryStrategy::new(kind, p.pn, p.rn), p.trials, s)
            })
            .collect::<Result<Vec<_>>>()?;
        let max_error = reliability.iter().map(|r| r.max_error).fold(0.0, f64::max);
        let leakage = sem.best.capacity_mi;
        samples.push(Theorem2Sample {
            sample,
            code_seed,
            leakage,
            uniform_leakage: sem.max_uniform_mi,
            leakage_is_lower_bound: sem.lower_bound,
            reliability,
            max_error,
            secure: leakage <= p.leak_threshold,
            reliable: max_error <= p.delta,
        });
    }
    let joint = samples.iter().filter(|s| s.secure && s.reliable).count();
    Ok(Theorem2Report {
        params: p.clone(),
        joint_success: joint as f64 / samples.len() as f64,
        samples,
    })
}
