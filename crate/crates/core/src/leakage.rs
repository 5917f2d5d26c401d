//! Exact semantic leakage of small codes, the rank formula for linear codes,
//! the read-set attack on linear codes, and coset-code equivocation.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitlinalg::{BitMatrix, BitVector};
use crate::channel::{binomial, enumerate_read_sets, Dmc, ReadSet};
use crate::codes::{Codebook, CosetCode, LinearCode, WiretapCode};
use crate::error::{Error, Result};
use crate::infotheory::{blahut_arimoto, JointPmf, Pmf, BA_DEFAULT_TOL};

/// Largest read-set size for joint PMF construction.
pub const MAX_OBSERVATION_BITS: usize = 16;

/// Largest `mbits + rn` for a dense joint PMF.
pub const MAX_JOINT_BITS: usize = 24;

/// Largest number of read sets scanned exhaustively.
pub const MAX_EXHAUSTIVE_SETS: u128 = 1_000_000;

/// Largest number of subsets the attack enumerates before switching to the
/// certificate-guided choice.
pub const ATTACK_EXHAUSTIVE_SUBSETS: u128 = 1_000_000;

/// Values closer than this count as equal when picking the best read set, so
/// the first set in scan order wins regardless of rounding.
const TIE_TOL: f64 = 1e-12;

fn observation_index(x: &BitVector, s: &ReadSet) -> usize {
    s.zero_based()
        .iter()
        .enumerate()
        .fold(0usize, |acc, (i, &c)| acc | (usize::from(x.get(c)) << i))
}

fn check_observation(cb: &Codebook, s: &ReadSet) -> Result<()> {
    if s.blocklength() != cb.n() {
        return Err(Error::DimensionMismatch {
            expected: cb.n(),
            got: s.blocklength(),
        });
    }
    if s.size() > MAX_OBSERVATION_BITS || cb.mbits() + s.size() > MAX_JOINT_BITS {
        return Err(Error::TooLarge(format!(
            "observation of {} bits with {} message bits",
            s.size(),
            cb.mbits()
        )));
    }
    Ok(())
}

/// `P(z | m) = 2^{−wbits} · |{w : x(m, w)_s = z}|`, with `z` indexed by the
/// integer whose bit `i` is the `i`-th observed coordinate.
pub fn observation_channel(cb: &Codebook, s: &ReadSet) -> Result<Dmc> {
    check_observation(cb, s)?;
    let outputs = 1usize << s.size();
    let scale = 1.0 / cb.keys() as f64;
    let rows = (0..cb.messages() as u64)
        .map(|m| {
            let mut row = vec![0.0; outputs];
            for x in cb.message_words(m) {
                row[observation_index(x, s)] += scale;
            }
            row
        })
        .collect();
    Dmc::new(rows)
}

/// Exact joint law `P(m, z) = P_M(m) P(z | m)`.
pub fn induced_joint(cb: &Codebook, s: &ReadSet, pm: &Pmf) -> Result<JointPmf> {
    if pm.len() != cb.messages() {
        return Err(Error::DimensionMismatch {
            expected: cb.messages(),
            got: pm.len(),
        });
    }
    JointPmf::from_input_and_channel(pm, &observation_channel(cb, s)?)
}

/// `I_s(M; Z)` for uniform `M`, by enumeration.
pub fn leakage_uniform(cb: &Codebook, s: &ReadSet) -> Result<f64> {
    Ok(induced_joint(cb, s, &Pmf::uniform(cb.messages()))?.mutual_information())
}

/// `rank G(s) − rank G_W(s)`: the uniform-message leakage of a normalized
/// linear code in bits.
pub fn lemma1_leakage(c: &LinearCode, s: &ReadSet) -> Result<usize> {
    let g = c.generator().select_columns(s)?;
    let gw = c.gw().select_columns(s)?;
    Ok(g.rank() - gw.rank())
}

/// Leakage at one read set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport {
    pub read_set: ReadSet,
    /// Mutual information for uniform messages (a certified lower bound on
    /// the capacity value).
    pub uniform_mi: f64,
    /// Maximum over message laws, from Blahut–Arimoto.
    pub capacity_mi: f64,
    /// Dependent columns witnessing leakage, 1-based coordinates.
    pub certificate: Option<Vec<usize>>,
}

/// Evaluates both leakage values at one read set.
pub fn leakage_at(cb: &Codebook, s: &ReadSet) -> Result<LeakageReport> {
    let ch = observation_channel(cb, s)?;
    let uniform_mi = JointPmf::from_input_and_channel(&Pmf::uniform(cb.messages()), &ch)?.mutual_information();
    let cap = blahut_arimoto(&ch, BA_DEFAULT_TOL)?;
    Ok(LeakageReport {
        read_set: s.clone(),
        uniform_mi,
        // the uniform law is feasible, so the supremum is never below it
        capacity_mi: cap.capacity.max(uniform_mi),
        certificate: None,
    })
}

/// How read sets are visited by [`sem_leakage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum ScanMode {
    Exhaustive,
    /// `sets` read sets drawn uniformly with replacement.
    Sampled { sets: usize, seed: u64 },
}

/// Semantic leakage of a codebook at a fixed read-set size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemLeakage {
    pub rn: usize,
    pub mode: ScanMode,
    /// True when read sets were sampled: the values are lower bounds.
    pub lower_bound: bool,
    pub read_sets_evaluated: usize,
    /// Read set with the largest capacity value (first in scan order on ties).
    pub best: LeakageReport,
    /// Largest uniform-message leakage and where it occurs.
    pub max_uniform_mi: f64,
    pub max_uniform_read_set: ReadSet,
}

/// `max_{P_M, s} I_s(M; Z)` over read sets of size `rn`.
pub fn sem_leakage(cb: &Codebook, rn: usize, mode: ScanMode) -> Result<SemLeakage> {
    let n = cb.n();
    if rn > n {
        return Err(Error::Precondition(format!("rn = {rn} exceeds n = {n}")));
    }
    let sets: Box<dyn Iterator<Item = ReadSet>> = match mode {
        ScanMode::Exhaustive => {
            let count = binomial(n, rn);
            if count > MAX_EXHAUSTIVE_SETS {
                return Err(Error::TooLarge(format!("{count} read sets for an exhaustive scan")));
            }
            Box::new(enumerate_read_sets(n, rn))
        }
        ScanMode::Sampled { sets, seed } => {
            if sets == 0 {
                return Err(Error::Precondition("sampled mode needs at least one read set".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let drawn = (0..sets)
                .map(|_| ReadSet::random(n, rn, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            Box::new(drawn.into_iter())
        }
    };
    let mut best: Option<LeakageReport> = None;
    let mut max_uniform: Option<(f64, ReadSet)> = None;
    let mut evaluated = 0;
    for s in sets {
        evaluated += 1;
        let r = leakage_at(cb, &s)?;
        if max_uniform.as_ref().is_none_or(|(u, _)| r.uniform_mi > *u + TIE_TOL) {
            max_uniform = Some((r.uniform_mi, s.clone()));
        }
        if best.as_ref().is_none_or(|b| r.capacity_mi > b.capacity_mi + TIE_TOL) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one read set");
    let (max_uniform_mi, max_uniform_read_set) = max_uniform.expect("at least one read set");
    Ok(SemLeakage {
        rn,
        mode,
        lower_bound: matches!(mode, ScanMode::Sampled { .. }),
        read_sets_evaluated: evaluated,
        best,
        max_uniform_mi,
        max_uniform_read_set,
    })
}

/// How the attack picked its read set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackSearch {
    /// `rn` covers an information set: the whole message is exposed.
    FullView,
    Exhaustive,
    CertificateGuided,
}

/// Result of [`converse_attack`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttackReport {
    pub rn: usize,
    /// Information set of `G` (leftmost greedy), 1-based.
    pub info_set: Vec<usize>,
    pub read_set: ReadSet,
    pub rank_g: usize,
    pub rank_gw: usize,
    /// `rank G(S*) − rank G_W(S*)` in bits.
    pub leakage: usize,
    /// Smallest set of dependent columns of `G_W` restricted to the
    /// information set, 1-based coordinates; `None` when there is none of
    /// size at most `rn`.
    pub certificate: Option<Vec<usize>>,
    /// False when the instance was too large for the certificate search.
    pub certificate_searched: bool,
    pub search: AttackSearch,
}

/// Read-set attack on a full-rank linear code.
///
/// The adversary restricts attention to the leftmost information set `V` of
/// `G`, where `G(S)` has rank `|S|` for every `S ⊆ V`, and picks `S* ⊆ V` of
/// size `rn` minimizing `rank G_W(S*)`. Columns of `G_W(V)` that are
/// dependent reduce that rank, so a dependent set of at most `rn` columns
/// guarantees at least one leaked bit.
pub fn converse_attack(c: &LinearCode, rn: usize) -> Result<AttackReport> {
    let n = c.n();
    if rn > n {
        return Err(Error::Precondition(format!("rn = {rn} exceeds n = {n}")));
    }
    let g = c.generator();
    let rows = c.mbits() + c.wbits();
    if g.rank() != rows {
        return Err(Error::Precondition("stacked generator is not full rank".into()));
    }
    let info = g.independent_columns();
    let gw_info = c.gw().select_column_indices(&info)?;

    let fill = |chosen: Vec<usize>| -> Result<ReadSet> {
        let mut all = chosen;
        all.sort_unstable();
        ReadSet::from_zero_based(n, all)
    };

    if rn >= info.len() {
        let mut chosen = info.clone();
        chosen.extend((0..n).filter(|i| !info.contains(i)).take(rn - info.len()));
        let s = fill(chosen)?;
        let rank_g = g.select_columns(&s)?.rank();
        let rank_gw = c.gw().select_columns(&s)?.rank();
        return Ok(AttackReport {
            rn,
            info_set: info.iter().map(|i| i + 1).collect(),
            read_set: s,
            rank_g,
            rank_gw,
            leakage: rank_g - rank_gw,
            certificate: None,
            certificate_searched: false,
            search: AttackSearch::FullView,
        });
    }

    let (certificate_pos, certificate_searched) = match gw_info.min_dependent_columns(rn) {
        Ok(found) => (found, true),
        Err(Error::TooLarge(_)) => (None, false),
        Err(e) => return Err(e),
    };
    let map_to_coords = |pos: &[usize]| pos.iter().map(|&p| info[p]).collect::<Vec<_>>();

    let (positions, search) = if binomial(info.len(), rn) <= ATTACK_EXHAUSTIVE_SUBSETS {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for subset in (0..info.len()).combinations(rn) {
            let r = gw_info.select_column_indices(&subset)?.rank();
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, subset));
            }
        }
        (best.expect("rn ≤ |V|").1, AttackSearch::Exhaustive)
    } else {
        // certificate columns first, then the leftmost remaining columns of V
        let mut chosen = certificate_pos.clone().unwrap_or_default();
        let extra: Vec<usize> = (0..info.len())
            .filter(|p| !chosen.contains(p))
            .take(rn.saturating_sub(chosen.len()))
            .collect();
        chosen.extend(extra);
        chosen.sort_unstable();
        chosen.truncate(rn);
        (chosen, AttackSearch::CertificateGuided)
    };
    let s = fill(map_to_coords(&positions))?;
    let rank_g = g.select_columns(&s)?.rank();
    let rank_gw = c.gw().select_columns(&s)?.rank();
    Ok(AttackReport {
        rn,
        info_set: info.iter().map(|i| i + 1).collect(),
        read_set: s,
        rank_g,
        rank_gw,
        leakage: rank_g - rank_gw,
        certificate: certificate_pos.map(|p| map_to_coords(&p).iter().map(|i| i + 1).collect()),
        certificate_searched,
        search,
    })
}

/// Minimum equivocation of a coset code and an unread set attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equivocation {
    pub delta: usize,
    /// Unread coordinates `ℐ` of size `n − rn`, 1-based.
    pub unread: Vec<usize>,
    pub read_set: ReadSet,
}

/// `Δ = min_{|ℐ| = n − rn} rank H(ℐ)`: the adversary's remaining uncertainty
/// about a uniform message when it reads the complement of `ℐ`.
pub fn ozarow_equivocation(h: &BitMatrix, rn: usize) -> Result<Equivocation> {
    let n = h.cols();
    if rn > n {
        return Err(Error::Precondition(format!("rn = {rn} exceeds n = {n}")));
    }
    let count = binomial(n, n - rn);
    if count > MAX_EXHAUSTIVE_SETS {
        return Err(Error::TooLarge(format!("{count} unread sets")));
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for unread in (0..n).combinations(n - rn) {
        let r = h.select_column_indices(&unread)?.rank();
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, unread));
        }
    }
    let (delta, unread) = best.expect("at least one subset");
    let read: Vec<usize> = (0..n).filter(|i| !unread.contains(i)).collect();
    Ok(Equivocation {
        delta,
        unread: unread.iter().map(|i| i + 1).collect(),
        read_set: ReadSet::from_zero_based(n, read)?,
    })
}

/// `max{mbits − Δ, 0}`, a lower bound on the semantic leakage.
pub fn coset_leakage_lb(c: &CosetCode, rn: usize) -> Result<usize> {
    let delta = ozarow_equivocation(c.parity_check(), rn)?.delta;
    Ok(c.mbits().saturating_sub(delta))
}

/// A nonzero word of `rowspace(H)` of weight at most `rn`, found as a
/// dependent column set of the key generator (a parity-check matrix of
/// `rowspace(H)`). Reading its support reveals one parity of the message, so
/// its existence forces `Δ ≤ mbits − 1`. Coordinates are 1-based.
pub fn coset_dual_certificate(c: &CosetCode, rn: usize) -> Result<Option<Vec<usize>>> {
    let found = c.as_linear().gw().min_dependent_columns(rn.min(c.n()))?;
    Ok(found.map(|cols| cols.iter().map(|i| i + 1).collect()))
}
