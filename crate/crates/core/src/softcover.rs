//! Soft-covering experiments: the output law induced by a random codebook
//! through a memoryless channel, its divergence from the i.i.d. output law,
//! the typical-set split of that law, and the tail-bound calculators used to
//! control it.
//!
//! Output sequences `v ∈ 𝒱^n` are indexed little-endian in base `|𝒱|`:
//! symbol `i` is digit `i` of the index.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::channel::Dmc;
use crate::codes::{sample_pseudolinear, WiretapCode};
use crate::error::{Error, Result};
use crate::infotheory::{
    channel_mutual_information, csum, h2_unchecked, renyi_divergence, CompensatedSum, Pmf,
};
use crate::seed::derive_seed;

/// Largest `n · log2 |𝒱|` for exact enumeration of output sequences.
pub const MAX_EXACT_OUTPUT_BITS: f64 = 24.0;

/// Largest key length for k-wise codebooks (the field has degree
/// `keybits + 1`).
pub const MAX_KWISE_KEYBITS: usize = 15;

/// Slack allowed when checking the three-term divergence bound.
pub const LEMMA4_TOL: f64 = 1e-12;

/// A key-indexed codebook of input sequences over `{0, …, alphabet − 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodebookU {
    n: usize,
    alphabet: usize,
    words: Vec<Vec<usize>>,
}

impl CodebookU {
    pub fn new(n: usize, alphabet: usize, words: Vec<Vec<usize>>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Precondition("codebook needs at least one codeword".into()));
        }
        for u in &words {
            if u.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: u.len(),
                });
            }
            if let Some(&bad) = u.iter().find(|&&s| s >= alphabet) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    len: alphabet,
                });
            }
        }
        Ok(Self { n, alphabet, words })
    }

    /// Every sequence in `{0, …, alphabet − 1}^n` once.
    pub fn full(n: usize, alphabet: usize) -> Result<Self> {
        let total = checked_power(alphabet, n)?;
        let words = (0..total).map(|i| digits(i, alphabet, n)).collect();
        Self::new(n, alphabet, words)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }
}

fn checked_power(base: usize, exp: usize) -> Result<usize> {
    if (exp as f64) * (base as f64).log2() > MAX_EXACT_OUTPUT_BITS {
        return Err(Error::TooLarge(format!("{base}^{exp} sequences")));
    }
    Ok(base.pow(exp as u32))
}

/// Base-`base` digits of `index`, least significant first.
pub fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = index % base;
            index /= base;
            d
        })
        .collect()
}

fn check_instance(cb: &CodebookU, ch: &Dmc) -> Result<usize> {
    if cb.alphabet != ch.in_size() {
        return Err(Error::DimensionMismatch {
            expected: ch.in_size(),
            got: cb.alphabet,
        });
    }
    checked_power(ch.out_size(), cb.n)
}

/// Per-sequence likelihoods `Q^n(v | u)` for all `v`, and optionally the
/// information densities `Σ log2 Q(v_i | u_i) / Q_V(v_i)`.
fn expand(u: &[usize], ch: &Dmc, qv: Option<&[f64]>) -> (Vec<f64>, Vec<f64>) {
    let q = ch.out_size();
    let mut lik = vec![1.0];
    let mut dens = vec![0.0];
    for &sym in u {
        let row = ch.row(sym);
        let stride = lik.len();
        let mut nl = vec![0.0; stride * q];
        let mut nd = if qv.is_some() { vec![0.0; stride * q] } else { Vec::new() };
        for v in 0..q {
            let step = qv.map(|m| (row[v] / m[v]).log2());
            for j in 0..stride {
                nl[j + v * stride] = lik[j] * row[v];
                if let Some(s) = step {
                    nd[j + v * stride] = dens[j] + s;
                }
            }
        }
        lik = nl;
        dens = nd;
    }
    (lik, dens)
}

/// `Q_V^n(v)` for every output sequence.
fn product_law(qv: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..n {
        let stride = out.len();
        let mut next = vec![0.0; stride * qv.len()];
        for (v, &p) in qv.iter().enumerate() {
            for j in 0..stride {
                next[j + v * stride] = out[j] * p;
            }
        }
        out = next;
    }
    out
}

/// Accumulates `(1/|𝒲|) Σ_w` of per-codeword vectors with compensation.
struct Mixture {
    sum: Vec<f64>,
    comp: Vec<f64>,
}

impl Mixture {
    fn new(len: usize) -> Self {
        Self {
            sum: vec![0.0; len],
            comp: vec![0.0; len],
        }
    }

    fn add(&mut self, i: usize, x: f64) {
        let s = self.sum[i];
        let t = s + x;
        if s.abs() >= x.abs() {
            self.comp[i] += (s - t) + x;
        } else {
            self.comp[i] += (x - t) + s;
        }
        self.sum[i] = t;
    }

    fn finish(self, scale: f64) -> Vec<f64> {
        self.sum.iter().zip(&self.comp).map(|(s, c)| (s + c) * scale).collect()
    }
}

/// `P_V(v) = (1/|𝒲|) Σ_w Q^n(v | u(w))`, exactly.
pub fn induced_output_pmf(cb: &CodebookU, ch: &Dmc) -> Result<Pmf> {
    let size = check_instance(cb, ch)?;
    let mut mix = Mixture::new(size);
    for u in &cb.words {
        let (lik, _) = expand(u, ch, None);
        for (i, p) in lik.into_iter().enumerate() {
            mix.add(i, p);
        }
    }
    Pmf::new(mix.finish(1.0 / cb.len() as f64))
}

/// `Σ p log2(p / q)` over a possibly unnormalized `p`, with `0 log 0 = 0` and
/// `+∞` when `p > 0 = q`.
fn extended_divergence(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b == 0.0 {
                return f64::INFINITY;
            }
            acc.add(a * (a / b).log2());
        }
    }
    acc.value()
}

/// `D(P_V ‖ Q_V^n)` with `Q_V` the output law of `qu` through `ch`.
pub fn soft_cover_divergence(cb: &CodebookU, ch: &Dmc, qu: &Pmf) -> Result<f64> {
    let p = induced_output_pmf(cb, ch)?;
    let qv = qu.through(ch)?;
    let q = product_law(qv.probs(), cb.n);
    Ok(extended_divergence(p.probs(), &q).max(0.0))
}

/// Typical-set decomposition of the induced output law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoftCoverDiagnostics {
    pub n: usize,
    pub codewords: usize,
    pub epsilon: f64,
    pub mutual_information: f64,
    pub divergence: f64,
    /// Total mass of the atypical part `P_{V,2}`.
    pub p2_mass: f64,
    /// `max_v P_{V,1}(v) / Q_V^n(v)`.
    pub delta1_max: f64,
    /// Extended divergences of the two parts.
    pub d1: f64,
    pub d2: f64,
    /// `H2(p2_mass) + d1 + d2`.
    pub lemma4_rhs: f64,
    pub lemma4_holds: bool,
}

/// Splits `P_V = P_{V,1} + P_{V,2}` by whether the pair `(u(w), v)` is typical,
/// meaning `i(u; v) < (I(U; V) + ε) n` (strict).
pub fn typical_split(cb: &CodebookU, ch: &Dmc, qu: &Pmf, eps: f64) -> Result<SoftCoverDiagnostics> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("epsilon = {eps} must be finite and non-negative")));
    }
    let size = check_instance(cb, ch)?;
    if qu.len() != ch.in_size() {
        return Err(Error::DimensionMismatch {
            expected: ch.in_size(),
            got: qu.len(),
        });
    }
    let mi = channel_mutual_information(qu, ch)?;
    let qv = qu.through(ch)?;
    let threshold = (mi + eps) * cb.n as f64;
    let mut typ = Mixture::new(size);
    let mut atyp = Mixture::new(size);
    for u in &cb.words {
        let (lik, dens) = expand(u, ch, Some(qv.probs()));
        for (i, (&p, &d)) in lik.iter().zip(&dens).enumerate() {
            if p == 0.0 {
                continue;
            }
            if d < threshold {
                typ.add(i, p);
            } else {
                atyp.add(i, p);
            }
        }
    }
    let scale = 1.0 / cb.len() as f64;
    let p1 = typ.finish(scale);
    let p2 = atyp.finish(scale);
    let q = product_law(qv.probs(), cb.n);
    let p: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a + b).collect();
    let divergence = extended_divergence(&p, &q).max(0.0);
    let d1 = extended_divergence(&p1, &q);
    let d2 = extended_divergence(&p2, &q);
    let p2_mass = csum(p2.iter().copied()).clamp(0.0, 1.0);
    let delta1_max = p1
        .iter()
        .zip(&q)
        .filter(|(_, &b)| b > 0.0)
        .map(|(a, b)| a / b)
        .fold(0.0, f64::max);
    let lemma4_rhs = h2_unchecked(p2_mass) + d1 + d2;
    Ok(SoftCoverDiagnostics {
        n: cb.n,
        codewords: cb.len(),
        epsilon: eps,
        mutual_information: mi,
        divergence,
        p2_mass,
        delta1_max,
        d1,
        d2,
        lemma4_rhs,
        lemma4_holds: divergence <= lemma4_rhs + LEMMA4_TOL,
    })
}

/// `Pr_{Q_{UV}^n}(i(U; V) ≥ (I + ε) n)`: the expected atypical mass of a
/// codeword drawn from `Q_U^n`. Computed over joint types, so it is exact
/// for any `n`.
pub fn atypical_probability(qu: &Pmf, ch: &Dmc, n: usize, eps: f64) -> Result<f64> {
    let mi = channel_mutual_information(qu, ch)?;
    let qv = qu.through(ch)?;
    let threshold = (mi + eps) * n as f64;
    // cells (u, v) of positive probability
    let mut cells = Vec::new();
    for u in 0..ch.in_size() {
        for v in 0..ch.out_size() {
            let p = qu.get(u) * ch.prob(u, v);
            if p > 0.0 {
                cells.push((p.ln(), (ch.prob(u, v) / qv.get(v)).log2()));
            }
        }
    }
    let ln_fact: Vec<f64> = (0..=n).map(|i| ln_gamma(i as f64 + 1.0)).collect();
    let mut acc = CompensatedSum::new();
    let mut counts = vec![0usize; cells.len()];
    fn walk(
        cell: usize,
        left: usize,
        counts: &mut [usize],
        cells: &[(f64, f64)],
        ln_fact: &[f64],
        threshold: f64,
        acc: &mut CompensatedSum,
    ) {
        if cell + 1 == cells.len() {
            counts[cell] = left;
            let density: f64 = counts.iter().zip(cells).map(|(&c, &(_, d))| c as f64 * d).sum();
            if density >= threshold {
                let n: usize = counts.iter().sum();
                let ln_p = ln_fact[n]
                    + counts
                        .iter()
                        .zip(cells)
                        .map(|(&c, &(lp, _))| c as f64 * lp - ln_fact[c])
                        .sum::<f64>();
                acc.add(ln_p.exp());
            }
            return;
        }
        for c in 0..=left {
            counts[cell] = c;
            walk(cell + 1, left - c, counts, cells, ln_fact, threshold, acc);
        }
    }
    if cells.is_empty() {
        return Err(Error::InvalidPmf("joint law has no support".into()));
    }
    walk(0, n, &mut counts, &cells, &ln_fact, threshold, &mut acc);
    Ok(acc.value().clamp(0.0, 1.0))
}

/// How codebooks are drawn for tail experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum CodebookFamily {
    /// Pseudolinear codewords, exactly k-wise independent and uniform.
    Kwise { k: usize },
    /// Mutually independent codewords drawn from `Q_U^n`.
    Iid,
}

impl CodebookFamily {
    pub fn tag(&self) -> String {
        match self {
            CodebookFamily::Kwise { k } => format!("kwise{k}"),
            CodebookFamily::Iid => "iid".into(),
        }
    }
}

/// `2^keybits` binary codewords `h(j) G` at the nonzero pair indices
/// `j = 1, …, 2^keybits` of a pseudolinear code over `GF(2^{keybits + 1})`
/// with a seeded uniform generator. Any `k` of them are independent and
/// uniform on `{0,1}^n`.
pub fn sample_kwise_codebook(n: usize, keybits: usize, k: usize, seed: u64) -> Result<CodebookU> {
    if keybits > MAX_KWISE_KEYBITS {
        return Err(Error::Unsupported(format!(
            "keybits = {keybits} exceeds {MAX_KWISE_KEYBITS}"
        )));
    }
    if n > 64 {
        return Err(Error::Unsupported(format!("blocklength {n} above 64")));
    }
    let code = sample_pseudolinear(n, 0, keybits + 1, k, seed)?;
    let words = (1..=1u64 << keybits)
        .map(|j| {
            let x = code.encode_index(j);
            (0..n).map(|i| usize::from(x.get(i))).collect()
        })
        .collect();
    CodebookU::new(n, 2, words)
}

/// `2^keybits` codewords with i.i.d. symbols drawn from `qu`.
pub fn sample_iid_codebook(n: usize, keybits: usize, qu: &Pmf, seed: u64) -> Result<CodebookU> {
    if keybits > 24 {
        return Err(Error::Unsupported(format!("keybits = {keybits} exceeds 24")));
    }
    let dist = WeightedIndex::new(qu.probs()).map_err(|e| Error::InvalidPmf(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = (0..1usize << keybits)
        .map(|_| (0..n).map(|_| dist.sample(&mut rng)).collect())
        .collect();
    CodebookU::new(n, qu.len(), words)
}

/// Draws one codebook of the given family.
pub fn sample_codebook(family: CodebookFamily, n: usize, keybits: usize, qu: &Pmf, seed: u64) -> Result<CodebookU> {
    match family {
        CodebookFamily::Kwise { k } => {
            let uniform = qu.len() == 2 && (qu.get(0) - 0.5).abs() < 1e-12;
            if !uniform {
                return Err(Error::Unsupported(
                    "k-wise codebooks need a uniform binary input law".into(),
                ));
            }
            sample_kwise_codebook(n, keybits, k, seed)
        }
        CodebookFamily::Iid => sample_iid_codebook(n, keybits, qu, seed),
    }
}

/// Parameters of [`divergence_tail_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailParams {
    pub n: usize,
    pub keybits: usize,
    pub family: CodebookFamily,
    pub channel: Dmc,
    pub input: Pmf,
    pub threshold: f64,
    pub eps: f64,
}

/// Per-trial outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub divergence: f64,
    pub p2_mass: f64,
    pub delta1_max: f64,
    pub lemma4_holds: bool,
}

/// Aggregate of [`divergence_tail_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailResult {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub std_err: f64,
    /// Fraction of codebooks with divergence strictly above the threshold.
    pub fraction_above: f64,
    pub records: Vec<TrialRecord>,
}

/// Seed of trial `trial` in a tail experiment.
pub fn trial_seed(master: u64, family: CodebookFamily, n: usize, trial: usize) -> u64 {
    derive_seed(master, &format!("softcover/{}/n{n}", family.tag()), trial as u64)
}

/// Samples `trials` independent codebooks and records their divergence and
/// typical-set diagnostics.
pub fn divergence_tail_experiment(params: &TailParams, trials: usize, seed: u64) -> Result<TailResult> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let mut records = Vec::with_capacity(trials);
    for trial in 0..trials {
        let s = trial_seed(seed, params.family, params.n, trial);
        let cb = sample_codebook(params.family, params.n, params.keybits, &params.input, s)?;
        let d = typical_split(&cb, &params.channel, &params.input, params.eps)?;
        records.push(TrialRecord {
            trial,
            seed: s,
            divergence: d.divergence,
            p2_mass: d.p2_mass,
            delta1_max: d.delta1_max,
            lemma4_holds: d.lemma4_holds,
        });
    }
    let (mean, std_err) = mean_and_std_err(&records.iter().map(|r| r.divergence).collect::<Vec<_>>());
    let above = records.iter().filter(|r| r.divergence > params.threshold).count();
    Ok(TailResult {
        n: params.n,
        trials,
        mean,
        std_err,
        fraction_above: above as f64 / trials as f64,
        records,
    })
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_err(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = csum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = csum(xs.iter().map(|x| (x - mean).powi(2))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Least-squares slope of `log2(mean)` against `n`, negated: an empirical
/// decay exponent. `None` when fewer than two points are positive.
pub fn fit_decay_exponent(ns: &[usize], means: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(means)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&n, &m)| (n as f64, m.log2()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(-sxy / sxx)
}

/// Monte Carlo estimate of `D(P_V ‖ Q_V^n)` for instances too large to
/// enumerate: `v` is drawn from `P_V` and `log2 P_V(v)/Q_V^n(v)` averaged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceEstimate {
    pub estimate: f64,
    pub std_err: f64,
    pub samples: usize,
    /// Always false: the value is an estimate.
    pub exact: bool,
}

pub fn estimate_divergence(cb: &CodebookU, ch: &Dmc, qu: &Pmf, samples: usize, seed: u64) -> Result<DivergenceEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is required".into()));
    }
    if cb.alphabet != ch.in_size() {
        return Err(Error::DimensionMismatch {
            expected: ch.in_size(),
            got: cb.alphabet,
        });
    }
    let qv = qu.through(ch)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = Vec::with_capacity(samples);
    for _ in 0..samples {
        let w = rng.gen_range(0..cb.len());
        let v = ch.sample(&cb.words[w], rng.gen())?;
        let p = csum(cb.words.iter().map(|u| ch.product_likelihood(u, &v).unwrap_or(0.0))) / cb.len() as f64;
        let q: f64 = v.iter().map(|&s| qv.get(s)).product();
        vals.push((p / q).log2());
    }
    let (estimate, std_err) = mean_and_std_err(&vals);
    Ok(DivergenceEstimate {
        estimate,
        std_err,
        samples,
        exact: false,
    })
}

/// Joint law `Q_{UV}` and product `Q_U Q_V`, flattened row-major.
fn joint_and_product(qu: &Pmf, ch: &Dmc) -> Result<(Pmf, Pmf)> {
    let qv = qu.through(ch)?;
    let mut joint = Vec::with_capacity(ch.in_size() * ch.out_size());
    let mut prod = Vec::with_capacity(ch.in_size() * ch.out_size());
    for u in 0..ch.in_size() {
        for v in 0..ch.out_size() {
            joint.push(qu.get(u) * ch.prob(u, v));
            prod.push(qu.get(u) * qv.get(v));
        }
    }
    Ok((Pmf::new(joint)?, Pmf::new(prod)?))
}

/// `α_{λ,ε} = λ (I(U; V) + ε − D_{λ+1}(Q_{UV} ‖ Q_U Q_V))`.
pub fn alpha_lambda_eps(qu: &Pmf, ch: &Dmc, lambda: f64, eps: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda = {lambda} must be positive")));
    }
    let (joint, prod) = joint_and_product(qu, ch)?;
    let mi = channel_mutual_information(qu, ch)?;
    let d = renyi_divergence(&joint, &prod, lambda + 1.0)?;
    Ok(lambda * (mi + eps - d))
}

/// Tail bound for sums of k-wise independent `[0,1]` variables in terms of
/// binomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtBound {
    pub k_star: u64,
    /// `log2` of the unclamped bound.
    pub log2_bound: f64,
    /// `min(bound, 1)`.
    pub bound: f64,
}

/// Exact sum of logs below this many factors; log-gamma above.
const DIRECT_LOG_TERMS: u64 = 100_000;

/// `ln C(x, k)` for real `x > k − 1`.
pub fn ln_binomial(x: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    if !(x > k as f64 - 1.0) {
        return Err(Error::Domain(format!("C({x}, {k}) is not positive")));
    }
    if k <= DIRECT_LOG_TERMS {
        let num = csum((0..k).map(|i| (x - i as f64).ln()));
        let den = csum((1..=k).map(|i| (i as f64).ln()));
        Ok(num - den)
    } else {
        Ok(ln_gamma(x + 1.0) - ln_gamma(x - k as f64 + 1.0) - ln_gamma(k as f64 + 1.0))
    }
}

/// `k*(|𝒲|, μ, τ) = ⌈μτ / (1 − μ/|𝒲|)⌉`.
pub fn schmidt_k_star(w_size: u64, mu: f64, tau: f64) -> Result<u64> {
    if !(mu > 0.0) || !(tau > 0.0) {
        return Err(Error::Domain(format!("mu = {mu} and tau = {tau} must be positive")));
    }
    if mu >= w_size as f64 {
        return Err(Error::Domain(format!("mu = {mu} must be below |W| = {w_size}")));
    }
    Ok((mu * tau / (1.0 - mu / w_size as f64)).ceil() as u64)
}

/// `P(T ≥ μ(1+τ)) ≤ C(|𝒲|, k*) (μ/|𝒲|)^{k*} / C(μ(1+τ), k*)` for
/// k-wise independent terms with `k ≥ k*`, evaluated in log space.
pub fn schmidt_bound(w_size: u64, mu: f64, tau: f64, k: u64) -> Result<SchmidtBound> {
    let k_star = schmidt_k_star(w_size, mu, tau)?;
    if k < k_star {
        return Err(Error::Precondition(format!(
            "independence k = {k} below k* = {k_star}; the bound does not apply"
        )));
    }
    if k_star > w_size {
        return Err(Error::Domain(format!("k* = {k_star} exceeds |W| = {w_size}")));
    }
    let ln_num = ln_binomial(w_size as f64, k_star)? + k_star as f64 * (mu / w_size as f64).ln();
    let ln_den = ln_binomial(mu * (1.0 + tau), k_star)?;
    let log2_bound = (ln_num - ln_den) / std::f64::consts::LN_2;
    Ok(SchmidtBound {
        k_star,
        log2_bound,
        bound: log2_bound.exp2().min(1.0),
    })
}

/// Moment tail bound for sums of k-wise independent `[0,1]` variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellareBound {
    /// `8 ((kμ + k²) / (μτ)²)^{k/2}`.
    pub raw: f64,
    /// `min(raw, 1)`.
    pub bound: f64,
}

pub fn bellare_bound(k: u64, mu: f64, tau: f64) -> Result<BellareBound> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Precondition(format!("k = {k} must be an even integer ≥ 4")));
    }
    if !(mu > 0.0) || !(tau > 0.0) {
        return Err(Error::Domain(format!("mu = {mu} and tau = {tau} must be positive")));
    }
    let kf = k as f64;
    let base = (kf * mu + kf * kf) / (mu * tau).powi(2);
    let raw = 8.0 * base.powf(kf / 2.0);
    Ok(BellareBound {
        raw,
        bound: raw.min(1.0),
    })
}

/// Constants of the high-probability argument and the orderings they must
/// satisfy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofConstants {
    pub alpha: f64,
    pub eta: f64,
    pub pi1: f64,
    pub qn: f64,
    /// Violated orderings, empty when every requirement holds.
    pub violations: Vec<String>,
}

/// `η = (R' − I − ε + 2(β − α))/2`, `π1 = α − β` and
/// `q_n = 2 log2 e + π1 n + n log2 max_v 1/Q_V(v)`.
pub fn proof_constants_from(key_rate: f64, mi: f64, eps: f64, alpha: f64, beta: f64, qv: &Pmf, n: usize) -> ProofConstants {
    let eta = (key_rate - mi - eps + 2.0 * (beta - alpha)) / 2.0;
    let pi1 = alpha - beta;
    let min_q = qv.probs().iter().copied().filter(|&p| p > 0.0).fold(f64::INFINITY, f64::min);
    let nf = n as f64;
    let qn = 2.0 * std::f64::consts::LOG2_E + pi1 * nf + nf * (1.0 / min_q).log2();
    let mut violations = Vec::new();
    if !(alpha > 0.0) {
        violations.push(format!("alpha = {alpha} is not positive"));
    }
    if !(alpha < key_rate) {
        violations.push(format!("alpha = {alpha} is not below the key rate {key_rate}"));
    }
    if !(beta > 0.0) {
        violations.push(format!("beta = {beta} is not positive"));
    }
    if !(pi1 > 0.0) {
        violations.push(format!("pi1 = alpha - beta = {pi1} is not positive"));
    }
    if !(eta > 0.0) {
        violations.push(format!("eta = {eta} is not positive"));
    }
    if !(key_rate > mi) {
        violations.push(format!("key rate {key_rate} does not exceed I(U;V) = {mi}"));
    }
    ProofConstants {
        alpha,
        eta,
        pi1,
        qn,
        violations,
    }
}

/// [`proof_constants_from`] with `α = α_{λ,ε}`, `I` and `Q_V` computed from
/// `(qu, ch)`.
pub fn proof_constants(
    key_rate: f64,
    qu: &Pmf,
    ch: &Dmc,
    eps: f64,
    lambda: f64,
    beta: f64,
    n: usize,
) -> Result<ProofConstants> {
    let alpha = alpha_lambda_eps(qu, ch, lambda, eps)?;
    let mi = channel_mutual_information(qu, ch)?;
    let qv = qu.through(ch)?;
    Ok(proof_constants_from(key_rate, mi, eps, alpha, beta, &qv, n))
}
