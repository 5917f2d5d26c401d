//! The type II adversary's interface (read sets and flip sets) and discrete
//! memoryless channels.
//!
//! Coordinates are 1-based at every external boundary (constructors taking
//! `one_based`, JSON serialization) and 0-based inside the crate.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::bitlinalg::BitVector;
use crate::error::{Error, Result};

/// Row-sum tolerance for stochastic matrices.
pub const STOCHASTIC_TOL: f64 = 1e-12;

fn validate_coords(n: usize, zero_based: &[usize]) -> Result<()> {
    if zero_based.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedIndices);
    }
    if let Some(&bad) = zero_based.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange {
            index: bad + 1,
            len: n,
        });
    }
    Ok(())
}

fn to_zero_based(indices: &[usize]) -> Result<Vec<usize>> {
    indices
        .iter()
        .map(|&i| {
            i.checked_sub(1).ok_or(Error::IndexOutOfRange {
                index: 0,
                len: indices.len(),
            })
        })
        .collect()
}

/// The coordinates the adversary reads: a strictly increasing subset of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReadSet {
    n: usize,
    idx: Vec<usize>,
}

impl ReadSet {
    pub fn from_one_based(n: usize, indices: &[usize]) -> Result<Self> {
        Self::from_zero_based(n, to_zero_based(indices)?)
    }

    pub fn from_zero_based(n: usize, idx: Vec<usize>) -> Result<Self> {
        validate_coords(n, &idx)?;
        Ok(Self { n, idx })
    }

    /// All `n` coordinates.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            idx: (0..n).collect(),
        }
    }

    pub fn blocklength(&self) -> usize {
        self.n
    }

    /// Number of coordinates read (`rn`).
    pub fn size(&self) -> usize {
        self.idx.len()
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.idx
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.idx.iter().map(|i| i + 1).collect()
    }

    /// Coordinates not in the set.
    pub fn complement(&self) -> ReadSet {
        let idx = (0..self.n).filter(|i| self.idx.binary_search(i).is_err()).collect();
        ReadSet { n: self.n, idx }
    }

    /// Uniformly random subset of size `rn`, returned sorted.
    pub fn random<R: Rng + ?Sized>(n: usize, rn: usize, rng: &mut R) -> Result<Self> {
        if rn > n {
            return Err(Error::Domain(format!("rn = {rn} exceeds n = {n}")));
        }
        let mut idx = rand::seq::index::sample(rng, n, rn).into_vec();
        idx.sort_unstable();
        Ok(Self { n, idx })
    }
}

impl Serialize for ReadSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// The coordinates the adversary flips, at most `pn` of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlipSet {
    n: usize,
    idx: Vec<usize>,
}

impl FlipSet {
    pub fn from_one_based(n: usize, budget: usize, indices: &[usize]) -> Result<Self> {
        Self::from_zero_based(n, budget, to_zero_based(indices)?)
    }

    pub fn from_zero_based(n: usize, budget: usize, idx: Vec<usize>) -> Result<Self> {
        validate_coords(n, &idx)?;
        if idx.len() > budget {
            return Err(Error::Precondition(format!(
                "{} flips exceed budget pn = {budget}",
                idx.len()
            )));
        }
        Ok(Self { n, idx })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, idx: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.idx.len()
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.idx
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.idx.iter().map(|i| i + 1).collect()
    }
}

impl Serialize for FlipSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// The adversary's observation `x(S)`.
pub fn observe(x: &BitVector, s: &ReadSet) -> Result<BitVector> {
    if s.blocklength() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: s.blocklength(),
            got: x.len(),
        });
    }
    Ok(x.gather(s.zero_based()))
}

/// `x` with the bits in `f` complemented.
pub fn apply_flips(x: &BitVector, f: &FlipSet) -> Result<BitVector> {
    if f.n != x.len() {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            got: x.len(),
        });
    }
    let mut y = x.clone();
    for &i in f.zero_based() {
        y.flip(i);
    }
    Ok(y)
}

/// All `C(n, rn)` read sets in lexicographic order. The iterator is `Clone`,
/// so a scan can be restarted or split.
pub fn enumerate_read_sets(n: usize, rn: usize) -> impl Iterator<Item = ReadSet> + Clone {
    assert!(rn <= n, "rn = {rn} exceeds n = {n}");
    (0..n)
        .combinations(rn)
        .map(move |idx| ReadSet { n, idx })
}

/// All flip sets of size at most `pn`, smallest first.
pub fn enumerate_flip_sets(n: usize, pn: usize) -> impl Iterator<Item = FlipSet> + Clone {
    (0..=pn.min(n)).flat_map(move |w| (0..n).combinations(w).map(move |idx| FlipSet { n, idx }))
}

/// `C(n, k)` as `u128`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// A discrete memoryless channel `Q_{V|U}` given by a row-stochastic matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dmc {
    in_size: usize,
    out_size: usize,
    matrix: Vec<Vec<f64>>,
}

impl Dmc {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let in_size = matrix.len();
        if in_size == 0 {
            return Err(Error::InvalidPmf("channel has no input symbols".into()));
        }
        let out_size = matrix[0].len();
        for (u, row) in matrix.iter().enumerate() {
            if row.len() != out_size {
                return Err(Error::DimensionMismatch {
                    expected: out_size,
                    got: row.len(),
                });
            }
            if row.iter().any(|&q| !(q >= 0.0) || !q.is_finite()) {
                return Err(Error::InvalidPmf(format!("row {u} has a negative or non-finite entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidPmf(format!("row {u} sums to {sum}")));
            }
        }
        Ok(Self {
            in_size,
            out_size,
            matrix,
        })
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("crossover {p} outside [0, 1]")));
        }
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Noiseless channel on `size` symbols.
    pub fn identity(size: usize) -> Self {
        let matrix = (0..size)
            .map(|u| (0..size).map(|v| if u == v { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(matrix).expect("identity rows are stochastic")
    }

    pub fn in_size(&self) -> usize {
        self.in_size
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    pub fn prob(&self, u: usize, v: usize) -> f64 {
        self.matrix[u][v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.matrix[u]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    /// `Q^n_{V|U}(v | u)` for equal-length sequences.
    pub fn product_likelihood(&self, u: &[usize], v: &[usize]) -> Result<f64> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                got: v.len(),
            });
        }
        let mut p = 1.0;
        for (&a, &b) in u.iter().zip(v) {
            if a >= self.in_size {
                return Err(Error::IndexOutOfRange {
                    index: a,
                    len: self.in_size,
                });
            }
            if b >= self.out_size {
                return Err(Error::IndexOutOfRange {
                    index: b,
                    len: self.out_size,
                });
            }
            p *= self.matrix[a][b];
        }
        Ok(p)
    }

    /// Draws `v ~ Q^n_{V|U}(· | u)` from a generator seeded with `seed`.
    pub fn sample(&self, u: &[usize], seed: u64) -> Result<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        u.iter()
            .map(|&a| {
                if a >= self.in_size {
                    return Err(Error::IndexOutOfRange {
                        index: a,
                        len: self.in_size,
                    });
                }
                let x: f64 = rng.gen();
                let row = &self.matrix[a];
                let mut acc = 0.0;
                for (b, &q) in row.iter().enumerate() {
                    acc += q;
                    if x < acc {
                        return Ok(b);
                    }
                }
                // rounding left a sliver above the cumulative sum
                Ok(row.iter().rposition(|&q| q > 0.0).unwrap_or(0))
            })
            .collect()
    }

    /// Parses a channel file: a `in out` header line, then one line of `out`
    /// whitespace-separated probabilities per input symbol.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_line = |(line, s): (usize, &str)| -> Result<Vec<f64>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad number {t:?}"),
                    })
                })
                .collect()
        };
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `in out` header".into(),
        })?;
        let dims = parse_line(header)?;
        let [i, o] = dims[..] else {
            return Err(Error::Parse {
                line: header.0,
                msg: "header must be `in out`".into(),
            });
        };
        let matrix = lines.map(parse_line).collect::<Result<Vec<_>>>()?;
        if matrix.len() != i as usize || matrix.iter().any(|r| r.len() != o as usize) {
            return Err(Error::Parse {
                line: header.0,
                msg: format!("expected a {i}x{o} matrix"),
            });
        }
        Self::new(matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn observe_examples() {
        let x = bv("101");
        assert_eq!(observe(&x, &ReadSet::full(3)).unwrap(), x);
        assert_eq!(
            observe(&x, &ReadSet::from_one_based(3, &[1, 3]).unwrap()).unwrap(),
            bv("11")
        );
        assert_eq!(
            observe(&x, &ReadSet::from_one_based(3, &[2]).unwrap()).unwrap(),
            bv("0")
        );
        assert!(ReadSet::from_one_based(3, &[4]).is_err());
        assert!(ReadSet::from_one_based(3, &[0]).is_err());
        assert_eq!(ReadSet::from_one_based(3, &[2, 1]), Err(Error::UnsortedIndices));
    }

    #[test]
    fn flip_examples() {
        let x = bv("000");
        assert_eq!(apply_flips(&x, &FlipSet::empty(3)).unwrap(), x);
        let f = FlipSet::from_one_based(3, 2, &[1, 2]).unwrap();
        let y = apply_flips(&x, &f).unwrap();
        assert_eq!(y, bv("110"));
        assert_eq!(apply_flips(&y, &f).unwrap(), x);
        assert!(FlipSet::from_one_based(3, 1, &[1, 2]).is_err());
    }

    #[test]
    fn read_set_enumeration() {
        let all: Vec<_> = enumerate_read_sets(3, 3).collect();
        assert_eq!(all, vec![ReadSet::full(3)]);
        let singles: Vec<Vec<usize>> = enumerate_read_sets(3, 1).map(|s| s.one_based()).collect();
        assert_eq!(singles, vec![vec![1], vec![2], vec![3]]);
        let pairs: Vec<_> = enumerate_read_sets(5, 2).collect();
        assert_eq!(pairs.len(), 10);
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_read_sets(4, 0).count(), 1);
        assert_eq!(enumerate_flip_sets(4, 2).count(), 1 + 4 + 6);
    }

    #[test]
    fn read_set_json_is_one_based() {
        let s = ReadSet::from_one_based(5, &[2, 4]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,4]");
        assert_eq!(s.complement().one_based(), vec![1, 3, 5]);
    }

    #[test]
    fn likelihood_examples() {
        let bsc = Dmc::bsc(0.3).unwrap();
        assert_eq!(bsc.product_likelihood(&[], &[]).unwrap(), 1.0);
        assert!((bsc.product_likelihood(&[0], &[0]).unwrap() - 0.7).abs() < 1e-15);
        assert!((bsc.product_likelihood(&[0, 0], &[0, 1]).unwrap() - 0.21).abs() < 1e-15);
        assert!(bsc.product_likelihood(&[0, 2], &[0, 1]).is_err());
        assert!(bsc.product_likelihood(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn likelihood_sums_to_one() {
        let ch = Dmc::new(vec![vec![0.2, 0.5, 0.3], vec![0.6, 0.1, 0.3]]).unwrap();
        for n in 0..=6usize {
            let u: Vec<usize> = (0..n).map(|i| i % 2).collect();
            let total: f64 = (0..3usize.pow(n as u32))
                .map(|mut idx| {
                    let v: Vec<usize> = (0..n)
                        .map(|_| {
                            let s = idx % 3;
                            idx /= 3;
                            s
                        })
                        .collect();
                    ch.product_likelihood(&u, &v).unwrap()
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "n = {n}: {total}");
        }
    }

    #[test]
    fn sample_examples() {
        let u: Vec<usize> = (0..200).map(|i| (i * 7) % 3).collect();
        assert_eq!(Dmc::identity(3).sample(&u, 1).unwrap(), u);
        let bits: Vec<usize> = u.iter().map(|&s| s % 2).collect();
        assert_eq!(Dmc::bsc(0.0).unwrap().sample(&bits, 9).unwrap(), bits);

        let zeros = vec![0usize; 100_000];
        let v = Dmc::bsc(0.3).unwrap().sample(&zeros, 42).unwrap();
        let frac = v.iter().sum::<usize>() as f64 / zeros.len() as f64;
        assert!((frac - 0.3).abs() < 0.01, "flip fraction {frac}");
        assert_eq!(v, Dmc::bsc(0.3).unwrap().sample(&zeros, 42).unwrap());
    }

    #[test]
    fn dmc_validation_and_text() {
        assert!(Dmc::new(vec![vec![0.5, 0.4]]).is_err());
        assert!(Dmc::new(vec![vec![1.5, -0.5]]).is_err());
        assert!(Dmc::bsc(1.2).is_err());
        let ch = Dmc::from_text("# ternary erasure\n2 3\n0.9 0.1 0\n0 0.1 0.9\n").unwrap();
        assert_eq!(ch.in_size(), 2);
        assert_eq!(ch.out_size(), 3);
        assert!(Dmc::from_text("2 2\n1 0\n").is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    proptest! {
        /// Reading and flipping commute with relabelling the coordinates.
        #[test]
        fn permutation_equivariance(bits in any::<u16>(), perm_seed in any::<u64>(), rmask in any::<u16>(), fmask in any::<u16>()) {
            let n = 10;
            let x = BitVector::from_u64(bits as u64, n);
            let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            let permute = |v: &BitVector| {
                let mut out = BitVector::zeros(n);
                for i in 0..n {
                    out.set(perm[i], v.get(i));
                }
                out
            };
            let pick = |mask: u16| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
            let mut fl = pick(fmask);
            fl.truncate(3);
            let f = FlipSet::from_zero_based(n, 3, fl.clone()).unwrap();
            let mut pf: Vec<usize> = fl.iter().map(|&i| perm[i]).collect();
            pf.sort_unstable();
            let f_perm = FlipSet::from_zero_based(n, 3, pf).unwrap();
            let y = apply_flips(&x, &f).unwrap();
            prop_assert_eq!(permute(&y), apply_flips(&permute(&x), &f_perm).unwrap());

            // observation at S equals observation of the permuted word at perm(S), as multisets of (coord, bit)
            let s = pick(rmask);
            let z = observe(&y, &ReadSet::from_zero_based(n, s.clone()).unwrap()).unwrap();
            let py = permute(&y);
            for (k, &i) in s.iter().enumerate() {
                prop_assert_eq!(z.get(k), py.get(perm[i]));
            }
        }
    }
}
