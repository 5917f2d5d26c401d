//! Linear, coset and pseudolinear wiretap codes.
//!
//! A message `m` and key `w` are integers; their bit vectors come from
//! [`BitVector::from_u64`]. The pair index packs `m` into the high bits:
//! `index = m << wbits | w`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitlinalg::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::gf2m::{syndromes_for, Field, MAX_DEGREE};

/// Largest `mbits + wbits` for which a codebook is materialized.
pub const CODEBOOK_MAX_BITS: usize = 20;

/// Largest codebook for pairwise minimum-distance computation.
pub const PAIRWISE_MAX_WORDS: usize = 1 << 14;

/// Largest generator (row count) for exhaustive minimum-weight search.
pub const MIN_WEIGHT_MAX_ROWS: usize = 24;

pub fn pair_index(m: u64, w: u64, wbits: usize) -> u64 {
    m << wbits | w
}

fn check_pair(m: &BitVector, w: &BitVector, mbits: usize, wbits: usize) -> Result<()> {
    if m.len() != mbits {
        return Err(Error::DimensionMismatch {
            expected: mbits,
            got: m.len(),
        });
    }
    if w.len() != wbits {
        return Err(Error::DimensionMismatch {
            expected: wbits,
            got: w.len(),
        });
    }
    Ok(())
}

fn check_codebook_size(mbits: usize, wbits: usize) -> Result<()> {
    if mbits + wbits > CODEBOOK_MAX_BITS {
        return Err(Error::TooLarge(format!(
            "codebook with mbits + wbits = {} > {CODEBOOK_MAX_BITS}",
            mbits + wbits
        )));
    }
    Ok(())
}

/// Common interface of the three code families.
pub trait WiretapCode {
    fn n(&self) -> usize;
    fn mbits(&self) -> usize;
    fn wbits(&self) -> usize;

    /// Codeword of the pair with the given packed index.
    fn encode_index(&self, index: u64) -> BitVector;

    fn encode(&self, m: &BitVector, w: &BitVector) -> Result<BitVector> {
        check_pair(m, w, self.mbits(), self.wbits())?;
        if self.mbits() + self.wbits() > 64 {
            return Err(Error::TooLarge("pair index wider than 64 bits".into()));
        }
        Ok(self.encode_index(pair_index(m.to_u64(), w.to_u64(), self.wbits())))
    }

    /// Every codeword, indexed by the packed pair index.
    fn codebook(&self) -> Result<Codebook> {
        check_codebook_size(self.mbits(), self.wbits())?;
        let words = (0..1u64 << (self.mbits() + self.wbits()))
            .map(|i| self.encode_index(i))
            .collect();
        Codebook::new(self.n(), self.mbits(), self.wbits(), words)
    }
}

/// `x(m, w) = [m w] G` with `G = [G_M; G_W]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    gm: BitMatrix,
    gw: BitMatrix,
}

impl LinearCode {
    pub fn new(gm: BitMatrix, gw: BitMatrix) -> Result<Self> {
        if gm.cols() != gw.cols() {
            return Err(Error::DimensionMismatch {
                expected: gm.cols(),
                got: gw.cols(),
            });
        }
        Ok(Self { gm, gw })
    }

    /// Uniformly random `G_M` and `G_W`.
    pub fn random<R: Rng + ?Sized>(n: usize, mbits: usize, wbits: usize, rng: &mut R) -> Self {
        Self {
            gm: BitMatrix::random(mbits, n, rng),
            gw: BitMatrix::random(wbits, n, rng),
        }
    }

    /// Uniformly random code whose stacked generator has full row rank.
    pub fn random_full_rank<R: Rng + ?Sized>(
        n: usize,
        mbits: usize,
        wbits: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if mbits + wbits > n {
            return Err(Error::Precondition(format!(
                "full row rank needs mbits + wbits = {} ≤ n = {n}",
                mbits + wbits
            )));
        }
        loop {
            let c = Self::random(n, mbits, wbits, rng);
            if c.generator().rank() == mbits + wbits {
                return Ok(c);
            }
        }
    }

    pub fn gm(&self) -> &BitMatrix {
        &self.gm
    }

    pub fn gw(&self) -> &BitMatrix {
        &self.gw
    }

    /// The stacked generator `[G_M; G_W]`.
    pub fn generator(&self) -> BitMatrix {
        self.gm.stack(&self.gw).expect("column counts agree")
    }

    pub fn is_full_rank(&self) -> bool {
        self.generator().rank() == self.mbits() + self.wbits()
    }
}

impl WiretapCode for LinearCode {
    fn n(&self) -> usize {
        self.gm.cols()
    }

    fn mbits(&self) -> usize {
        self.gm.rows()
    }

    fn wbits(&self) -> usize {
        self.gw.rows()
    }

    fn encode_index(&self, index: u64) -> BitVector {
        let wbits = self.wbits();
        let mut x = BitVector::zeros(self.n());
        for (i, row) in self.gw.row_vectors().iter().enumerate() {
            if index >> i & 1 == 1 {
                x ^= row;
            }
        }
        for (i, row) in self.gm.row_vectors().iter().enumerate() {
            if index >> (wbits + i) & 1 == 1 {
                x ^= row;
            }
        }
        x
    }

    fn codebook(&self) -> Result<Codebook> {
        check_codebook_size(self.mbits(), self.wbits())?;
        let wbits = self.wbits();
        let total = 1usize << (self.mbits() + wbits);
        let mut words = Vec::with_capacity(total);
        words.push(BitVector::zeros(self.n()));
        // each word differs from an earlier one by the generator row of its lowest set bit
        for i in 1..total {
            let low = i.trailing_zeros() as usize;
            let row = if low < wbits {
                self.gw.row(low)
            } else {
                self.gm.row(low - wbits)
            };
            let word = &words[i & (i - 1)] ^ row;
            words.push(word);
        }
        Codebook::new(self.n(), self.mbits(), wbits, words)
    }
}

/// Outcome of [`normalize_linear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    /// A code with full-rank stacked generator and the same codeword set and
    /// message-conditional codeword law.
    Code {
        code: LinearCode,
        removed_key_bits: usize,
    },
    /// The stacked generator stays rank-deficient after key reduction, so two
    /// messages share a codeword and the maximum error probability is at
    /// least 1/2.
    ErrorAtLeastHalf { stacked_rank: usize, rows: usize },
}

/// Drops redundant key rows, keeping the topmost independent rows of `G_W`,
/// then checks that the stacked generator has full row rank.
pub fn normalize_linear(c: &LinearCode) -> Normalized {
    let keep = c.gw.independent_rows();
    let removed_key_bits = c.wbits() - keep.len();
    let gw = c.gw.select_rows(&keep);
    let code = LinearCode {
        gm: c.gm.clone(),
        gw,
    };
    let rows = code.mbits() + code.wbits();
    let stacked_rank = code.generator().rank();
    if stacked_rank < rows {
        Normalized::ErrorAtLeastHalf { stacked_rank, rows }
    } else {
        Normalized::Code {
            code,
            removed_key_bits,
        }
    }
}

/// Ozarow–Wyner coset code: the message is the syndrome `x Hᵀ`, and the
/// transmitted word is uniform over the coset of solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCode {
    h: BitMatrix,
    linear: LinearCode,
}

impl CosetCode {
    pub fn new(h: BitMatrix) -> Result<Self> {
        if h.rank() != h.rows() {
            return Err(Error::Precondition("parity-check matrix must have full row rank".into()));
        }
        let n = h.cols();
        let ht = h.transpose();
        // particular solutions for unit syndromes give a linear message part
        let gm_rows = (0..h.rows())
            .map(|i| {
                ht.solve_one(&BitVector::unit(h.rows(), i))?
                    .ok_or(Error::NoSolution)
            })
            .collect::<Result<Vec<_>>>()?;
        let gm = BitMatrix::from_rows(n, gm_rows)?;
        let gw = BitMatrix::from_rows(n, ht.left_null_space_basis())?;
        Ok(Self {
            linear: LinearCode::new(gm, gw)?,
            h,
        })
    }

    /// Random full-rank `mbits × n` parity-check matrix.
    pub fn random<R: Rng + ?Sized>(n: usize, mbits: usize, rng: &mut R) -> Result<Self> {
        if mbits > n {
            return Err(Error::Precondition(format!("mbits = {mbits} exceeds n = {n}")));
        }
        loop {
            let h = BitMatrix::random(mbits, n, rng);
            if h.rank() == mbits {
                return Self::new(h);
            }
        }
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// The equivalent linear code: `G_M` holds particular solutions, `G_W`
    /// a basis of the null space of `x ↦ x Hᵀ`.
    pub fn as_linear(&self) -> &LinearCode {
        &self.linear
    }

    /// A uniformly random solution of `x Hᵀ = m`.
    pub fn encode_random(&self, m: &BitVector, seed: u64) -> Result<BitVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = BitVector::from_bools(&(0..self.wbits()).map(|_| rng.gen::<bool>()).collect::<Vec<_>>());
        self.linear.encode(m, &w)
    }

    pub fn decode(&self, x: &BitVector) -> Result<BitVector> {
        self.h.transpose().left_mul(x)
    }
}

impl WiretapCode for CosetCode {
    fn n(&self) -> usize {
        self.h.cols()
    }

    fn mbits(&self) -> usize {
        self.h.rows()
    }

    fn wbits(&self) -> usize {
        self.linear.wbits()
    }

    fn encode_index(&self, index: u64) -> BitVector {
        self.linear.encode_index(index)
    }

    fn codebook(&self) -> Result<Codebook> {
        self.linear.codebook()
    }
}

/// `x(m, w) = h(index(m, w)) G` with `h` the BCH column map over
/// `GF(2^{mbits + wbits})` and `G` a `t·b × n` generator, `t = ⌈k/2⌉`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudolinearCode {
    mbits: usize,
    wbits: usize,
    k: usize,
    field: Field,
    g: BitMatrix,
}

impl PseudolinearCode {
    pub fn new(mbits: usize, wbits: usize, k: usize, g: BitMatrix) -> Result<Self> {
        let field = pseudolinear_field(mbits, wbits, k)?;
        Self::with_field(mbits, wbits, k, field, g)
    }

    pub fn with_field(mbits: usize, wbits: usize, k: usize, field: Field, g: BitMatrix) -> Result<Self> {
        if field.degree() as usize != mbits + wbits {
            return Err(Error::DimensionMismatch {
                expected: mbits + wbits,
                got: field.degree() as usize,
            });
        }
        let rows = syndromes_for(k) * (mbits + wbits);
        if g.rows() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: g.rows(),
            });
        }
        Ok(Self {
            mbits,
            wbits,
            k,
            field,
            g,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        syndromes_for(self.k)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    /// The BCH row `h(index)`.
    pub fn h(&self, index: u64) -> BitVector {
        self.field.bch_column(index as u32, self.t())
    }
}

fn pseudolinear_field(mbits: usize, wbits: usize, k: usize) -> Result<Field> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let b = mbits + wbits;
    if b == 0 || b > MAX_DEGREE as usize {
        return Err(Error::Unsupported(format!(
            "field degree mbits + wbits = {b} outside [1, {MAX_DEGREE}]"
        )));
    }
    Field::new(b as u32)
}

impl WiretapCode for PseudolinearCode {
    fn n(&self) -> usize {
        self.g.cols()
    }

    fn mbits(&self) -> usize {
        self.mbits
    }

    fn wbits(&self) -> usize {
        self.wbits
    }

    fn encode_index(&self, index: u64) -> BitVector {
        self.g.left_mul(&self.h(index)).expect("h has t·b bits")
    }
}

/// Samples a pseudolinear code with a generator of fair bits drawn from a
/// ChaCha8 stream seeded with `seed`.
pub fn sample_pseudolinear(n: usize, mbits: usize, wbits: usize, k: usize, seed: u64) -> Result<PseudolinearCode> {
    let field = pseudolinear_field(mbits, wbits, k)?;
    let rows = syndromes_for(k) * (mbits + wbits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = BitMatrix::random(rows, n, &mut rng);
    PseudolinearCode::with_field(mbits, wbits, k, field, g)
}

/// Decision of the minimum-distance decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    Unique { m: u64, w: u64, distance: usize },
    /// Two or more messages attain the minimum distance.
    Tie { distance: usize },
}

impl Decoded {
    pub fn message(&self) -> Option<u64> {
        match self {
            Decoded::Unique { m, .. } => Some(*m),
            Decoded::Tie { .. } => None,
        }
    }
}

/// A materialized codebook, indexed by the packed pair index.
#[derive(Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    mbits: usize,
    wbits: usize,
    words: Vec<BitVector>,
}

impl Codebook {
    pub fn new(n: usize, mbits: usize, wbits: usize, words: Vec<BitVector>) -> Result<Self> {
        check_codebook_size(mbits, wbits)?;
        if words.len() != 1 << (mbits + wbits) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (mbits + wbits),
                got: words.len(),
            });
        }
        if let Some(bad) = words.iter().find(|x| x.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(Self { n, mbits, wbits, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mbits(&self) -> usize {
        self.mbits
    }

    pub fn wbits(&self) -> usize {
        self.wbits
    }

    pub fn messages(&self) -> usize {
        1 << self.mbits
    }

    pub fn keys(&self) -> usize {
        1 << self.wbits
    }

    pub fn word(&self, m: u64, w: u64) -> &BitVector {
        &self.words[pair_index(m, w, self.wbits) as usize]
    }

    pub fn words(&self) -> &[BitVector] {
        &self.words
    }

    /// Codewords of message `m`, in key order.
    pub fn message_words(&self, m: u64) -> &[BitVector] {
        let start = (m as usize) << self.wbits;
        &self.words[start..start + self.keys()]
    }

    /// Nearest codeword in Hamming distance. A tie within one message is
    /// resolved to the smallest key; a tie across messages is a failure.
    pub fn min_distance_decode(&self, y: &BitVector) -> Result<Decoded> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let mut best = usize::MAX;
        let mut best_index = 0usize;
        let mut tie = false;
        for (i, x) in self.words.iter().enumerate() {
            let d = x.hamming_distance(y);
            if d < best {
                best = d;
                best_index = i;
                tie = false;
            } else if d == best && i >> self.wbits != best_index >> self.wbits {
                tie = true;
            }
        }
        Ok(if tie {
            Decoded::Tie { distance: best }
        } else {
            Decoded::Unique {
                m: (best_index >> self.wbits) as u64,
                w: (best_index & (self.keys() - 1)) as u64,
                distance: best,
            }
        })
    }
}

impl fmt::Debug for Codebook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Codebook")
            .field("n", &self.n)
            .field("mbits", &self.mbits)
            .field("wbits", &self.wbits)
            .field("words", &self.words.len())
            .finish()
    }
}

/// Minimum pairwise Hamming distance over all codeword pairs.
pub fn code_min_distance(cb: &Codebook) -> Result<usize> {
    let words = cb.words();
    if words.len() < 2 {
        return Err(Error::Precondition("minimum distance needs two codewords".into()));
    }
    if words.len() > PAIRWISE_MAX_WORDS {
        return Err(Error::TooLarge(format!("{} codewords for pairwise search", words.len())));
    }
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(a.hamming_distance(b));
        }
    }
    Ok(best)
}

/// Minimum weight of a nonzero word in the row space of `g`, or `None` when
/// the row space is trivial. For a full-rank generator this equals
/// [`code_min_distance`] of its codebook.
pub fn linear_min_weight(g: &BitMatrix) -> Result<Option<usize>> {
    if g.rows() > MIN_WEIGHT_MAX_ROWS {
        return Err(Error::TooLarge(format!("{} generator rows", g.rows())));
    }
    let mut x = BitVector::zeros(g.cols());
    let mut best: Option<usize> = None;
    // Gray-code walk over all combinations of rows
    for i in 1u64..1 << g.rows() {
        x ^= g.row(i.trailing_zeros() as usize);
        if !x.is_zero() {
            let w = x.weight();
            best = Some(best.map_or(w, |b| b.min(w)));
        }
    }
    Ok(best)
}

/// Outcome of [`exhaustive_kwise_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KwiseReport {
    pub b: usize,
    pub k: usize,
    pub n: usize,
    pub primitive_poly: u32,
    pub generators: u64,
    pub tuples_checked: usize,
    /// Index tuples whose joint codeword law is not uniform (1-based pair
    /// indices are not used here: entries are the raw pair indices).
    pub violations: Vec<Vec<u32>>,
}

impl KwiseReport {
    pub fn uniform(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest `ℓ·n` for exhaustive generator enumeration.
pub const KWISE_MAX_GENERATOR_BITS: usize = 16;

/// Enumerates every `t·b × n` generator and checks that, for every set of `k`
/// distinct nonzero pair indices, the tuple of codewords is exactly uniform on
/// `({0,1}^n)^k`.
pub fn exhaustive_kwise_check(b: usize, k: usize, n: usize) -> Result<KwiseReport> {
    let field = pseudolinear_field(b, 0, k)?;
    let t = syndromes_for(k);
    let ell = t * b;
    if ell * n > KWISE_MAX_GENERATOR_BITS {
        return Err(Error::TooLarge(format!(
            "ℓ·n = {} > {KWISE_MAX_GENERATOR_BITS}",
            ell * n
        )));
    }
    if k * n > ell * n {
        return Err(Error::Precondition(format!(
            "k·n = {} exceeds the generator entropy ℓ·n = {}",
            k * n,
            ell * n
        )));
    }
    let nonzero = (1u32 << b) - 1;
    if (k as u32) > nonzero {
        return Err(Error::Precondition(format!("k = {k} exceeds the {nonzero} nonzero indices")));
    }
    let hs: Vec<u64> = (0..=nonzero).map(|j| field.bch_column_word(j, t)).collect();
    let mask = (1u64 << n) - 1;
    let generators = 1u64 << (ell * n);
    let expected = 1u64 << (ell * n - k * n);
    let mut violations = Vec::new();
    let mut tuples_checked = 0;
    let mut counts = vec![0u64; 1 << (k * n)];
    for tuple in itertools::Itertools::combinations(1..=nonzero, k) {
        tuples_checked += 1;
        counts.iter_mut().for_each(|c| *c = 0);
        for g in 0..generators {
            let mut key = 0u64;
            for (slot, &j) in tuple.iter().enumerate() {
                let h = hs[j as usize];
                let mut x = 0u64;
                for r in 0..ell {
                    if h >> r & 1 == 1 {
                        x ^= g >> (r * n) & mask;
                    }
                }
                key |= x << (slot * n);
            }
            counts[key as usize] += 1;
        }
        if counts.iter().any(|&c| c != expected) {
            violations.push(tuple);
        }
    }
    Ok(KwiseReport {
        b,
        k,
        n,
        primitive_poly: field.primitive_poly(),
        generators,
        tuples_checked,
        violations,
    })
}

/// Family tag in a code file header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Linear,
    Coset,
    Pseudolinear,
}

/// First line of a code file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeHeader {
    pub kind: CodeKind,
    pub n: usize,
    pub mbits: usize,
    pub wbits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primitive_poly: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A code loaded from or written to a code file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyCode {
    Linear(LinearCode),
    Coset(CosetCode),
    Pseudolinear(PseudolinearCode),
}

impl AnyCode {
    pub fn as_dyn(&self) -> &dyn WiretapCode {
        match self {
            AnyCode::Linear(c) => c,
            AnyCode::Coset(c) => c,
            AnyCode::Pseudolinear(c) => c,
        }
    }

    pub fn header(&self, seed: Option<u64>) -> CodeHeader {
        let c = self.as_dyn();
        let mut h = CodeHeader {
            kind: match self {
                AnyCode::Linear(_) => CodeKind::Linear,
                AnyCode::Coset(_) => CodeKind::Coset,
                AnyCode::Pseudolinear(_) => CodeKind::Pseudolinear,
            },
            n: c.n(),
            mbits: c.mbits(),
            wbits: c.wbits(),
            k: None,
            b: None,
            primitive_poly: None,
            seed,
        };
        if let AnyCode::Pseudolinear(p) = self {
            h.k = Some(p.k());
            h.b = Some(p.field().degree() as usize);
            h.primitive_poly = Some(p.field().primitive_poly());
        }
        h
    }

    fn matrix(&self) -> BitMatrix {
        match self {
            AnyCode::Linear(c) => c.generator(),
            AnyCode::Coset(c) => c.parity_check().clone(),
            AnyCode::Pseudolinear(c) => c.generator().clone(),
        }
    }

    /// Code file text: a one-line JSON header followed by the matrix text
    /// (`[G_M; G_W]`, `H`, or the pseudolinear `G`).
    pub fn to_file_text(&self, seed: Option<u64>) -> String {
        let header = serde_json::to_string(&self.header(seed)).expect("header serializes");
        format!("{header}\n{}", self.matrix().to_text())
    }

    pub fn from_file_text(text: &str) -> Result<(Self, CodeHeader)> {
        let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
        let header: CodeHeader = serde_json::from_str(first.trim()).map_err(|e| Error::Parse {
            line: 1,
            msg: format!("bad code header: {e}"),
        })?;
        let matrix = BitMatrix::from_text(rest).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Parse { line: line + 1, msg },
            other => other,
        })?;
        if matrix.cols() != header.n {
            return Err(Error::DimensionMismatch {
                expected: header.n,
                got: matrix.cols(),
            });
        }
        let code = match header.kind {
            CodeKind::Linear => {
                if matrix.rows() != header.mbits + header.wbits {
                    return Err(Error::DimensionMismatch {
                        expected: header.mbits + header.wbits,
                        got: matrix.rows(),
                    });
                }
                let gm = matrix.select_rows(&(0..header.mbits).collect::<Vec<_>>());
                let gw = matrix.select_rows(&(header.mbits..matrix.rows()).collect::<Vec<_>>());
                AnyCode::Linear(LinearCode::new(gm, gw)?)
            }
            CodeKind::Coset => {
                let c = CosetCode::new(matrix)?;
                if c.mbits() != header.mbits {
                    return Err(Error::DimensionMismatch {
                        expected: header.mbits,
                        got: c.mbits(),
                    });
                }
                AnyCode::Coset(c)
            }
            CodeKind::Pseudolinear => {
                let k = header.k.ok_or(Error::Parse {
                    line: 1,
                    msg: "pseudolinear header needs k".into(),
                })?;
                let b = (header.mbits + header.wbits) as u32;
                let field = match header.primitive_poly {
                    Some(poly) => Field::with_polynomial(b, poly)?,
                    None => Field::new(b)?,
                };
                AnyCode::Pseudolinear(PseudolinearCode::with_field(header.mbits, header.wbits, k, field, matrix)?)
            }
        };
        Ok((code, header))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, HashMap};

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_bits(rows).unwrap()
    }

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn example_code() -> LinearCode {
        LinearCode::new(m(&[&[1, 0, 0]]), m(&[&[0, 1, 1]])).unwrap()
    }

    fn hamming74() -> LinearCode {
        let g = m(&[
            &[1, 0, 0, 0, 1, 1, 0],
            &[0, 1, 0, 0, 1, 0, 1],
            &[0, 0, 1, 0, 0, 1, 1],
            &[0, 0, 0, 1, 1, 1, 1],
        ]);
        LinearCode::new(g, BitMatrix::zeros(0, 7)).unwrap()
    }

    #[test]
    fn linear_encode_examples() {
        let c = example_code();
        assert_eq!(c.encode(&bv("0"), &bv("0")).unwrap(), bv("000"));
        assert_eq!(c.encode(&bv("1"), &bv("1")).unwrap(), bv("111"));
        assert_eq!(c.encode(&bv("1"), &bv("0")).unwrap(), bv("100"));
        assert!(c.encode(&bv("10"), &bv("0")).is_err());
    }

    #[test]
    fn linear_codebook_matches_encoder() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = LinearCode::random(9, 3, 4, &mut rng);
        let cb = c.codebook().unwrap();
        for i in 0..1u64 << 7 {
            assert_eq!(cb.words()[i as usize], c.encode_index(i));
        }
        let via_trait = (0..1u64 << 7).map(|i| c.encode_index(i)).collect::<Vec<_>>();
        assert_eq!(cb.words(), &via_trait[..]);
    }

    #[test]
    fn linear_encoding_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = LinearCode::random(10, 3, 3, &mut rng);
        for _ in 0..200 {
            let (m1, m2) = (rng.gen_range(0..8u64), rng.gen_range(0..8u64));
            let (w1, w2) = (rng.gen_range(0..8u64), rng.gen_range(0..8u64));
            let lhs = c.encode_index(pair_index(m1 ^ m2, w1 ^ w2, 3));
            let rhs = &c.encode_index(pair_index(m1, w1, 3)) ^ &c.encode_index(pair_index(m2, w2, 3));
            assert_eq!(lhs, rhs);
        }
    }

    fn conditional_law(cb: &Codebook) -> BTreeMap<(u64, BitVector), usize> {
        let mut law = BTreeMap::new();
        for mm in 0..cb.messages() as u64 {
            for x in cb.message_words(mm) {
                *law.entry((mm, x.clone())).or_insert(0) += 1;
            }
        }
        law
    }

    #[test]
    fn normalize_examples() {
        let c = example_code();
        assert_eq!(
            normalize_linear(&c),
            Normalized::Code {
                code: c.clone(),
                removed_key_bits: 0
            }
        );

        let dup = LinearCode::new(m(&[&[1, 0, 0, 0]]), m(&[&[0, 1, 1, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]])).unwrap();
        let Normalized::Code { code, removed_key_bits } = normalize_linear(&dup) else {
            panic!("expected a normalized code");
        };
        assert_eq!(removed_key_bits, 1);
        assert_eq!(code.wbits(), 2);
        let before: std::collections::BTreeSet<BitVector> = dup.codebook().unwrap().words().iter().cloned().collect();
        let after: std::collections::BTreeSet<BitVector> = code.codebook().unwrap().words().iter().cloned().collect();
        assert_eq!(before, after);

        let clash = LinearCode::new(m(&[&[1]]), m(&[&[1]])).unwrap();
        assert_eq!(
            normalize_linear(&clash),
            Normalized::ErrorAtLeastHalf {
                stacked_rank: 1,
                rows: 2
            }
        );
    }

    #[test]
    fn normalize_preserves_codewords_and_conditional_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut normalized = 0;
        for _ in 0..300 {
            let n = rng.gen_range(1..=10);
            let mbits = rng.gen_range(0..=3);
            let wbits = rng.gen_range(0..=4);
            let c = LinearCode::random(n, mbits, wbits, &mut rng);
            if let Normalized::Code { code, removed_key_bits } = normalize_linear(&c) {
                normalized += 1;
                assert!(code.is_full_rank());
                // every codeword of a message is hit 2^{removed} times as often before reduction
                let before = conditional_law(&c.codebook().unwrap());
                let after = conditional_law(&code.codebook().unwrap());
                assert_eq!(before.len(), after.len());
                for (key, count) in &after {
                    assert_eq!(before[key], count << removed_key_bits);
                }
            }
        }
        assert!(normalized > 50);
    }

    #[test]
    fn coset_examples() {
        let c = CosetCode::new(m(&[&[1]])).unwrap();
        for seed in 0..10 {
            assert_eq!(c.encode_random(&bv("1"), seed).unwrap(), bv("1"));
        }
        let c = CosetCode::new(m(&[&[1, 1]])).unwrap();
        let mut counts = HashMap::new();
        for seed in 0..4000 {
            let x = c.encode_random(&bv("0"), seed).unwrap();
            *counts.entry(x.to_string()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 2);
        assert!((counts["00"] as f64 / 4000.0 - 0.5).abs() < 0.03);
        let c = CosetCode::new(m(&[&[1, 1, 0]])).unwrap();
        assert_eq!(c.decode(&bv("110")).unwrap(), bv("0"));
        assert_eq!(c.decode(&bv("000")).unwrap(), bv("0"));
        assert!(CosetCode::new(m(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn coset_round_trip_and_codebook() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let c = CosetCode::random(7, 3, &mut rng).unwrap();
            assert_eq!(c.wbits(), 4);
            let cb = c.codebook().unwrap();
            for mm in 0..8u64 {
                let mv = BitVector::from_u64(mm, 3);
                for x in cb.message_words(mm) {
                    assert_eq!(c.decode(x).unwrap(), mv);
                }
                // each message owns its whole coset exactly once
                let set: std::collections::BTreeSet<_> = cb.message_words(mm).iter().collect();
                assert_eq!(set.len(), 16);
                let x = c.encode_random(&mv, rng.gen()).unwrap();
                assert_eq!(c.decode(&x).unwrap(), mv);
            }
        }
    }

    #[test]
    fn coset_encoder_is_uniform_on_its_coset() {
        let h = m(&[&[1, 0, 1, 1, 0], &[0, 1, 1, 0, 1]]);
        let c = CosetCode::new(h).unwrap();
        let mv = bv("10");
        let draws = 16_000;
        let mut counts: HashMap<BitVector, usize> = HashMap::new();
        for seed in 0..draws {
            *counts.entry(c.encode_random(&mv, seed).unwrap()).or_default() += 1;
        }
        assert_eq!(counts.len(), 8);
        let expected = draws as f64 / 8.0;
        let chi2: f64 = counts.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        // 7 degrees of freedom, 0.999 quantile
        assert!(chi2 < 24.32, "chi-square {chi2}");
    }

    #[test]
    fn pseudolinear_examples() {
        let g = BitMatrix::identity(2);
        let c = PseudolinearCode::new(1, 1, 1, g).unwrap();
        assert_eq!(c.encode_index(0), bv("00"));
        let alpha = c.field().element_bits(c.field().alpha());
        assert_eq!(c.encode_index(1), alpha);
        let zero = PseudolinearCode::new(1, 1, 1, BitMatrix::zeros(2, 5)).unwrap();
        assert!(zero.codebook().unwrap().words().iter().all(BitVector::is_zero));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = PseudolinearCode::new(2, 2, 3, BitMatrix::random(8, 6, &mut rng)).unwrap();
        assert_eq!(c.encode(&bv("00"), &bv("00")).unwrap(), BitVector::zeros(6));
    }

    #[test]
    fn pseudolinear_sampling() {
        let a = sample_pseudolinear(8, 2, 3, 4, 42).unwrap();
        let b = sample_pseudolinear(8, 2, 3, 4, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_pseudolinear(8, 2, 3, 4, 43).unwrap();
        assert_ne!(a.generator(), c.generator());
        let d = sample_pseudolinear(4, 1, 1, 2, 1).unwrap();
        assert_eq!((d.generator().rows(), d.generator().cols()), (2, 4));
        assert!(matches!(sample_pseudolinear(4, 9, 8, 2, 0), Err(Error::Unsupported(_))));
        assert!(sample_pseudolinear(4, 1, 1, 0, 0).is_err());
    }

    #[test]
    fn decode_examples() {
        let rep = LinearCode::new(m(&[&[1, 1, 1]]), BitMatrix::zeros(0, 3)).unwrap();
        let cb = rep.codebook().unwrap();
        assert_eq!(cb.min_distance_decode(&bv("001")).unwrap().message(), Some(0));
        assert_eq!(
            cb.min_distance_decode(&bv("111")).unwrap(),
            Decoded::Unique { m: 1, w: 0, distance: 0 }
        );
        let even = LinearCode::new(m(&[&[1, 1]]), BitMatrix::zeros(0, 2)).unwrap();
        let cb = even.codebook().unwrap();
        assert_eq!(cb.min_distance_decode(&bv("10")).unwrap(), Decoded::Tie { distance: 1 });
        // a tie inside one message is not a failure
        let keyed = LinearCode::new(m(&[&[1, 1, 1, 1]]), m(&[&[1, 1, 0, 0]])).unwrap();
        let cb = keyed.codebook().unwrap();
        assert_eq!(cb.min_distance_decode(&bv("1000")).unwrap().message(), Some(0));
    }

    #[test]
    fn min_distance_examples() {
        let rep = LinearCode::new(m(&[&[1, 1, 1]]), BitMatrix::zeros(0, 3)).unwrap();
        assert_eq!(code_min_distance(&rep.codebook().unwrap()).unwrap(), 3);
        let rep5 = LinearCode::new(m(&[&[1, 1, 1, 1, 1]]), BitMatrix::zeros(0, 5)).unwrap();
        assert_eq!(code_min_distance(&rep5.codebook().unwrap()).unwrap(), 5);
        let h = hamming74();
        assert_eq!(code_min_distance(&h.codebook().unwrap()).unwrap(), 3);
        assert_eq!(linear_min_weight(&h.generator()).unwrap(), Some(3));
        let single = Codebook::new(2, 0, 0, vec![bv("01")]).unwrap();
        assert!(code_min_distance(&single).is_err());
        assert_eq!(linear_min_weight(&BitMatrix::zeros(2, 3)).unwrap(), None);
    }

    #[test]
    fn min_distance_paths_agree_on_full_rank_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(2..=12);
            let rows = rng.gen_range(1..=n.min(8));
            let c = LinearCode::random_full_rank(n, rows, 0, &mut rng).unwrap();
            assert_eq!(
                Some(code_min_distance(&c.codebook().unwrap()).unwrap()),
                linear_min_weight(&c.generator()).unwrap()
            );
        }
    }

    #[test]
    fn kwise_exhaustive_small_instances() {
        for (b, k, n) in [(2, 2, 4), (3, 2, 5), (2, 3, 4), (3, 4, 2), (4, 2, 4), (2, 1, 8)] {
            let r = exhaustive_kwise_check(b, k, n).unwrap();
            assert!(r.uniform(), "b={b} k={k} n={n}: {:?}", r.violations);
            assert!(r.tuples_checked > 0);
        }
        assert!(exhaustive_kwise_check(4, 4, 3).is_err());
    }

    #[test]
    fn kwise_check_detects_dependent_columns() {
        // with t = 1 three columns can sum to zero, so k = 3 samples are not independent
        let field = Field::new(2).unwrap();
        let sum = (1..4).fold(0u64, |acc, j| acc ^ field.bch_column_word(j, 1));
        assert_eq!(sum, 0);
    }

    #[test]
    fn code_file_round_trip() {
        let lin = AnyCode::Linear(example_code());
        let text = lin.to_file_text(Some(9));
        assert!(text.starts_with("{\"kind\":\"linear\""));
        let (back, header) = AnyCode::from_file_text(&text).unwrap();
        assert_eq!(back, lin);
        assert_eq!(header.seed, Some(9));

        let coset = AnyCode::Coset(CosetCode::new(m(&[&[1, 0, 1, 1], &[0, 1, 1, 0]])).unwrap());
        let (back, _) = AnyCode::from_file_text(&coset.to_file_text(None)).unwrap();
        assert_eq!(back, coset);

        let pl = AnyCode::Pseudolinear(sample_pseudolinear(6, 2, 2, 4, 5).unwrap());
        let text = pl.to_file_text(Some(5));
        let (back, header) = AnyCode::from_file_text(&text).unwrap();
        assert_eq!(back, pl);
        assert_eq!(header.b, Some(4));
        assert_eq!(header.primitive_poly, Some(0b10011));

        assert!(AnyCode::from_file_text("not json\n1 1\n1\n").is_err());
        assert!(AnyCode::from_file_text("{\"kind\":\"linear\",\"n\":2,\"mbits\":1,\"wbits\":0}\n1 3\n101\n").is_err());
    }
}
