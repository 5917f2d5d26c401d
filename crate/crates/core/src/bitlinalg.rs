//! Dense GF(2) vectors and matrices.
//!
//! Bits are packed little-endian into `u64` words: bit `i` lives in word
//! `i / 64` at position `i % 64`. Matrices are row-major lists of
//! [`BitVector`] rows and are never mutated after construction.
//!
//! Row reduction is deterministic: rows are inserted top to bottom and each
//! surviving row pivots on its leftmost set bit. Every certificate the crate
//! emits (solutions, null-space bases, dependent column sets) is therefore
//! reproducible from the input alone.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use crate::channel::ReadSet;
use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Bit `i` of the vector is bit `i` of `value`. `len` must be at most 64.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Leftmost (lowest index) set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.ones_indices() {
            out.set(i, true);
        }
        for i in other.ones_indices() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Sub-vector at the given 0-based positions, in the order given.
    pub fn gather(&self, positions: &[usize]) -> Self {
        let mut out = Self::zeros(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(k, true);
            }
        }
        out
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<bool> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line: 1,
                    msg: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<_>>()?;
        Ok(Self::from_bools(&bits))
    }
}

/// A dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| BitVector::unit(n, i)).collect())
            .expect("identity rows have consistent length")
    }

    /// Builds a matrix from rows of length `cols`. `cols` is explicit so that
    /// matrices with zero rows keep their width.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Convenience constructor from nested 0/1 literals.
    pub fn from_bits(bits: &[&[u8]]) -> Result<Self> {
        let cols = bits.first().map_or(0, |r| r.len());
        let rows = bits
            .iter()
            .map(|r| BitVector::from_bools(&r.iter().map(|&b| b != 0).collect::<Vec<_>>()))
            .collect();
        Self::from_rows(cols, rows)
    }

    /// Reads `rows` words of `cols` bits each from the generator.
    pub fn random<R: rand::Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows)
            .map(|_| {
                let mut v = BitVector::zeros(cols);
                for j in 0..cols {
                    v.set(j, rng.gen::<bool>());
                }
                v
            })
            .collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.get(j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols).map(|j| self.column(j)).collect();
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self::from_rows(self.cols, data)
    }

    /// Sub-matrix formed by the given rows (0-based).
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            rows: rows.len(),
            cols: self.cols,
            data: rows.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    /// Sub-matrix formed by the given 0-based columns, which must be strictly
    /// increasing and in range.
    pub fn select_column_indices(&self, cols: &[usize]) -> Result<Self> {
        if cols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedIndices);
        }
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange {
                index: bad + 1,
                len: self.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: cols.len(),
            data: self.data.iter().map(|r| r.gather(cols)).collect(),
        })
    }

    /// Columns indexed by a read set.
    pub fn select_columns(&self, s: &ReadSet) -> Result<Self> {
        self.select_column_indices(s.zero_based())
    }

    /// Row-vector product `v · self`.
    pub fn left_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for i in v.ones_indices() {
            out ^= &self.data[i];
        }
        Ok(out)
    }

    /// Incremental echelon form of the rows, in row order.
    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            e.insert(row.clone(), BitVector::unit(self.rows, i));
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Dimension of the null space of `v ↦ v · self`, i.e. `rows − rank`.
    pub fn nullity(&self) -> usize {
        self.rows - self.rank()
    }

    /// Number of `v` with `v · self = b`: either 0 or `2^nullity`.
    pub fn count_solutions(&self, b: &BitVector) -> Result<u128> {
        self.check_rhs(b)?;
        let e = self.echelon();
        if e.reduce(b.clone()).0.is_zero() {
            let nullity = self.rows - e.rank();
            if nullity >= 128 {
                return Err(Error::TooLarge(format!("2^{nullity} solutions")));
            }
            Ok(1u128 << nullity)
        } else {
            Ok(0)
        }
    }

    /// Some `v` with `v · self = b`, or `None` when `b` is outside the row space.
    pub fn solve_one(&self, b: &BitVector) -> Result<Option<BitVector>> {
        self.check_rhs(b)?;
        let (residual, combo) = self.echelon().reduce(b.clone());
        Ok(residual.is_zero().then_some(combo))
    }

    /// Basis of `{v : v · self = 0}`, one vector per dependent row.
    pub fn left_null_space_basis(&self) -> Vec<BitVector> {
        let mut e = Echelon::new(self.cols, self.rows);
        let mut basis = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            if let Some(combo) = e.insert(row.clone(), BitVector::unit(self.rows, i)) {
                basis.push(combo);
            }
        }
        basis
    }

    /// Leftmost rows that form a basis for the row space.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut e = Echelon::new(self.cols, self.rows);
        (0..self.rows)
            .filter(|&i| {
                e.insert(self.data[i].clone(), BitVector::unit(self.rows, i))
                    .is_none()
            })
            .collect()
    }

    /// Leftmost columns that form a basis for the column space (greedy scan).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.transpose().independent_rows()
    }

    /// A smallest linearly dependent set of at most `budget` columns, with the
    /// default instance cap. Indices are 0-based.
    pub fn min_dependent_columns(&self, budget: usize) -> Result<Option<Vec<usize>>> {
        self.min_dependent_columns_capped(budget, SearchCap::default())
    }

    /// Weight-ordered exhaustive search: all column subsets of size 1, then 2,
    /// and so on up to `budget`, in lexicographic order. The first subset whose
    /// columns sum to zero is returned; a smallest dependent set is always a
    /// circuit, so it sums to zero.
    pub fn min_dependent_columns_capped(
        &self,
        budget: usize,
        cap: SearchCap,
    ) -> Result<Option<Vec<usize>>> {
        if budget > self.cols {
            return Err(Error::Precondition(format!(
                "budget {budget} exceeds column count {}",
                self.cols
            )));
        }
        if self.cols > cap.max_cols || budget > cap.max_budget {
            return Err(Error::TooLarge(format!(
                "dependent-column search over {} columns with budget {budget} exceeds cap ({} columns, budget {})",
                self.cols, cap.max_cols, cap.max_budget
            )));
        }
        let columns: Vec<BitVector> = (0..self.cols).map(|j| self.column(j)).collect();
        let mut chosen = Vec::with_capacity(budget);
        for size in 1..=budget {
            let acc = BitVector::zeros(self.rows);
            if search_zero_sum(&columns, size, 0, &acc, &mut chosen) {
                return Ok(Some(chosen));
            }
        }
        Ok(None)
    }

    fn check_rhs(&self, b: &BitVector) -> Result<()> {
        if b.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: b.len(),
            });
        }
        Ok(())
    }

    /// Renders the matrix text format: a `rows cols` line followed by one line
    /// of `0`/`1` characters per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for row in &self.data {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the matrix text format. Blank lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `rows cols` header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: hline,
                    msg: format!("bad dimension {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `rows cols`".into(),
            });
        };
        if cols == 0 {
            return Ok(Self::zeros(rows, 0));
        }
        let mut data = Vec::with_capacity(rows);
        for (lineno, line) in lines {
            let v: BitVector = line.parse().map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: lineno, msg },
                other => other,
            })?;
            if v.len() != cols {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("row has {} bits, expected {cols}", v.len()),
                });
            }
            data.push(v);
        }
        if data.len() != rows {
            return Err(Error::Parse {
                line: hline,
                msg: format!("expected {rows} rows, found {}", data.len()),
            });
        }
        Self::from_rows(cols, data)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

/// Instance cap for [`BitMatrix::min_dependent_columns_capped`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCap {
    pub max_cols: usize,
    pub max_budget: usize,
}

impl Default for SearchCap {
    fn default() -> Self {
        Self {
            max_cols: 24,
            max_budget: 8,
        }
    }
}

fn search_zero_sum(
    columns: &[BitVector],
    remaining: usize,
    start: usize,
    acc: &BitVector,
    chosen: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        return acc.is_zero();
    }
    for j in start..=columns.len().saturating_sub(remaining) {
        chosen.push(j);
        let next = acc ^ &columns[j];
        if search_zero_sum(columns, remaining - 1, j + 1, &next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Pivot rows kept in insertion order. Each stored row is zero at the pivot
/// columns of every earlier row, so a single ordered pass fully reduces.
struct Echelon {
    pivots: Vec<(usize, BitVector, BitVector)>,
    width: usize,
    combo_len: usize,
}

impl Echelon {
    fn new(width: usize, combo_len: usize) -> Self {
        Self {
            pivots: Vec::new(),
            width,
            combo_len,
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut v: BitVector) -> (BitVector, BitVector) {
        debug_assert_eq!(v.len(), self.width);
        let mut combo = BitVector::zeros(self.combo_len);
        for (col, row, c) in &self.pivots {
            if v.get(*col) {
                v ^= row;
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Inserts a row tagged with `combo`. Returns `None` when the row was
    /// independent, or the combination that reduces it to zero otherwise.
    fn insert(&mut self, row: BitVector, mut combo: BitVector) -> Option<BitVector> {
        let mut v = row;
        for (col, prow, c) in &self.pivots {
            if v.get(*col) {
                v ^= prow;
                combo ^= c;
            }
        }
        match v.first_one() {
            Some(col) => {
                self.pivots.push((col, v, combo));
                None
            }
            None => Some(combo),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(bits: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_bits(bits).unwrap()
    }

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(2, 3).rank(), 0);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn nullity_examples() {
        assert_eq!(BitMatrix::identity(3).nullity(), 0);
        assert_eq!(BitMatrix::zeros(2, 3).nullity(), 2);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).nullity(), 1);
    }

    #[test]
    fn select_columns_examples() {
        let a = m(&[&[1, 0, 0], &[0, 1, 1]]);
        let s12 = ReadSet::from_one_based(3, &[1, 2]).unwrap();
        assert_eq!(a.select_columns(&s12).unwrap(), m(&[&[1, 0], &[0, 1]]));
        let s23 = ReadSet::from_one_based(3, &[2, 3]).unwrap();
        assert_eq!(a.select_columns(&s23).unwrap(), m(&[&[0, 0], &[1, 1]]));
        let all = ReadSet::from_one_based(3, &[1, 2, 3]).unwrap();
        assert_eq!(a.select_columns(&all).unwrap(), a);
        assert!(matches!(
            a.select_column_indices(&[0, 3]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert_eq!(a.select_column_indices(&[1, 0]), Err(Error::UnsortedIndices));
    }

    #[test]
    fn count_solutions_examples() {
        let z = BitMatrix::zeros(2, 3);
        assert_eq!(z.count_solutions(&bv("000")).unwrap(), 4);
        assert_eq!(z.count_solutions(&bv("100")).unwrap(), 0);
        let a = m(&[&[1, 0], &[1, 0]]);
        assert_eq!(a.count_solutions(&bv("10")).unwrap(), 2);
        assert!(matches!(
            a.count_solutions(&bv("1")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_one_examples() {
        let id = BitMatrix::identity(4);
        let b = bv("1011");
        assert_eq!(id.solve_one(&b).unwrap(), Some(b));
        assert_eq!(BitMatrix::zeros(3, 3).solve_one(&bv("010")).unwrap(), None);
        let a = m(&[&[1, 0], &[1, 0]]);
        let v = a.solve_one(&bv("10")).unwrap().unwrap();
        assert!(v == bv("10") || v == bv("01"));
        assert_eq!(a.left_mul(&v).unwrap(), bv("10"));
    }

    #[test]
    fn min_dependent_columns_examples() {
        let with_zero = m(&[&[1, 0, 1], &[0, 0, 1]]);
        assert_eq!(with_zero.min_dependent_columns(1).unwrap(), Some(vec![1]));
        assert_eq!(BitMatrix::identity(3).min_dependent_columns(2).unwrap(), None);
        // the third column is zero, so a single column beats the pair {1, 2}
        let parity = m(&[&[1, 1, 0]]);
        assert_eq!(parity.min_dependent_columns(2).unwrap(), Some(vec![2]));
        let pair = m(&[&[1, 1, 1]]);
        assert_eq!(pair.min_dependent_columns(2).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn min_dependent_columns_cap() {
        let wide = BitMatrix::zeros(2, 30);
        assert!(matches!(wide.min_dependent_columns(2), Err(Error::TooLarge(_))));
        let cap = SearchCap {
            max_cols: 32,
            max_budget: 8,
        };
        assert_eq!(
            wide.min_dependent_columns_capped(2, cap).unwrap(),
            Some(vec![0])
        );
        assert!(matches!(
            BitMatrix::identity(3).min_dependent_columns(4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn text_format() {
        let a = m(&[&[1, 0, 0], &[0, 1, 1]]);
        let text = a.to_text();
        assert_eq!(text, "2 3\n100\n011\n");
        assert_eq!(BitMatrix::from_text(&text).unwrap(), a);
        let empty = BitMatrix::zeros(0, 5);
        assert_eq!(BitMatrix::from_text(&empty.to_text()).unwrap(), empty);
        assert!(BitMatrix::from_text("2 3\n100\n").is_err());
        assert!(BitMatrix::from_text("1 3\n1x0\n").is_err());
        assert!(BitMatrix::from_text("1 3\n10\n").is_err());
        assert!(BitMatrix::from_text("").is_err());
    }

    #[test]
    fn left_null_space_basis_annihilates() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let basis = a.left_null_space_basis();
        assert_eq!(basis.len(), a.nullity());
        for v in &basis {
            assert!(a.left_mul(v).unwrap().is_zero());
        }
        assert_eq!(BitMatrix::from_rows(4, basis).unwrap().rank(), a.nullity());
    }

    fn small_matrix() -> impl Strategy<Value = BitMatrix> {
        (0usize..=6, 0usize..=7, any::<u64>()).prop_map(|(r, c, seed)| {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            BitMatrix::random(r, c, &mut rng)
        })
    }

    fn enumerate_solutions(a: &BitMatrix, b: &BitVector) -> u128 {
        (0..1u64 << a.rows())
            .filter(|&x| a.left_mul(&BitVector::from_u64(x, a.rows())).unwrap() == *b)
            .count() as u128
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            prop_assert_eq!(a.rank() + a.nullity(), a.rows());
            prop_assert!(a.rank() <= a.rows().min(a.cols()));
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn count_solutions_matches_enumeration(a in small_matrix(), bits in any::<u64>()) {
            let b = BitVector::from_u64(bits, a.cols());
            let counted = a.count_solutions(&b).unwrap();
            prop_assert_eq!(counted, enumerate_solutions(&a, &b));
            prop_assert!(counted == 0 || counted == 1u128 << a.nullity());
            match a.solve_one(&b).unwrap() {
                Some(v) => prop_assert_eq!(a.left_mul(&v).unwrap(), b),
                None => prop_assert_eq!(counted, 0),
            }
        }

        #[test]
        fn column_superset_rank(a in small_matrix(), m1 in any::<u8>(), m2 in any::<u8>()) {
            let pick = |mask: u8| (0..a.cols()).filter(|j| mask >> j & 1 == 1).collect::<Vec<_>>();
            let s1 = pick(m1);
            let union = pick(m1 | m2);
            prop_assert!(
                a.select_column_indices(&union).unwrap().rank()
                    >= a.select_column_indices(&s1).unwrap().rank()
            );
        }

        #[test]
        fn min_dependent_is_minimal(a in small_matrix()) {
            let budget = a.cols();
            let found = a.min_dependent_columns(budget).unwrap();
            // brute force: smallest nonempty subset with zero column sum
            let mut best: Option<usize> = None;
            for mask in 1u32..(1 << a.cols()) {
                let cols: Vec<usize> = (0..a.cols()).filter(|j| mask >> j & 1 == 1).collect();
                let sum = cols.iter().fold(BitVector::zeros(a.rows()), |acc, &j| &acc ^ &a.column(j));
                if sum.is_zero() {
                    best = Some(best.map_or(cols.len(), |b: usize| b.min(cols.len())));
                }
            }
            match found {
                Some(cols) => {
                    let sum = cols.iter().fold(BitVector::zeros(a.rows()), |acc, &j| &acc ^ &a.column(j));
                    prop_assert!(sum.is_zero());
                    prop_assert_eq!(Some(cols.len()), best);
                }
                None => prop_assert_eq!(best, None),
            }
        }

        #[test]
        fn text_round_trip(a in small_matrix()) {
            prop_assert_eq!(BitMatrix::from_text(&a.to_text()).unwrap(), a);
        }
    }
}
