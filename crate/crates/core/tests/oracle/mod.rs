//! Reference computations written independently of the library: direct
//! encoding from generator entries, mutual information from exact counts,
//! and textbook finite-field arithmetic.

#![allow(dead_code)]

use std::collections::HashMap;

use awtc::BitMatrix;

/// `Σ_i a_i G[i]` with `a` given as an integer, bit `i` selecting row `i`,
/// returned as a bitmask over columns.
pub fn combine_rows(g: &BitMatrix, a: u64) -> u64 {
    let mut x = 0u64;
    for i in 0..g.rows() {
        if a >> i & 1 == 1 {
            for j in 0..g.cols() {
                if g.get(i, j) {
                    x ^= 1 << j;
                }
            }
        }
    }
    x
}

/// Codeword `m G_M + w G_W` as a column bitmask.
pub fn linear_codeword(gm: &BitMatrix, gw: &BitMatrix, m: u64, w: u64) -> u64 {
    combine_rows(gm, m) ^ combine_rows(gw, w)
}

/// Bits of `x` at the given positions, packed in order.
pub fn pack(x: u64, positions: &[usize]) -> u64 {
    positions.iter().enumerate().fold(0, |z, (i, &p)| z | (x >> p & 1) << i)
}

/// `I(A; B)` in bits for equally weighted samples `(a, b)`.
pub fn mi_from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> f64 {
    let mut joint: HashMap<(u64, u64), u64> = HashMap::new();
    let mut ma: HashMap<u64, u64> = HashMap::new();
    let mut mb: HashMap<u64, u64> = HashMap::new();
    let mut total = 0u64;
    for (a, b) in pairs {
        *joint.entry((a, b)).or_default() += 1;
        *ma.entry(a).or_default() += 1;
        *mb.entry(b).or_default() += 1;
        total += 1;
    }
    let n = total as f64;
    joint
        .iter()
        .map(|(&(a, b), &c)| {
            let c = c as f64;
            c / n * (c * n / (ma[&a] as f64 * mb[&b] as f64)).log2()
        })
        .sum()
}

/// `H(A)` in bits for equally weighted samples.
pub fn entropy_of(samples: impl IntoIterator<Item = u64>) -> f64 {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut total = 0u64;
    for s in samples {
        *counts.entry(s).or_default() += 1;
        total += 1;
    }
    let n = total as f64;
    counts.values().map(|&c| -(c as f64 / n) * (c as f64 / n).log2()).sum()
}

/// Exact uniform-message leakage of a linear code at read set `s`
/// (0-based), by enumerating every (m, w).
pub fn linear_leakage(gm: &BitMatrix, gw: &BitMatrix, s: &[usize]) -> f64 {
    let (mb, wb) = (gm.rows(), gw.rows());
    mi_from_pairs((0..1u64 << mb).flat_map(|m| {
        (0..1u64 << wb).map(move |w| (m, pack(linear_codeword(gm, gw, m, w), s)))
    }))
}

/// Carry-less product of field elements modulo the given polynomial
/// (bit `b` of `poly` set).
pub fn gf_mul(mut a: u64, mut b: u64, poly: u64, degree: u32) -> u64 {
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> degree & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

pub fn gf_pow(a: u64, e: u64, poly: u64, degree: u32) -> u64 {
    (0..e).fold(1, |acc, _| gf_mul(acc, a, poly, degree))
}

/// Concatenated odd powers `(a, a³, …, a^{2t−1})`, each `degree` bits.
pub fn odd_powers(a: u64, t: usize, poly: u64, degree: u32) -> u64 {
    (0..t).fold(0, |acc, i| {
        acc | gf_pow(a, 2 * i as u64 + 1, poly, degree) << (i as u32 * degree)
    })
}

/// Rank over GF(2) of vectors packed in `u64`s.
pub fn rank_u64(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Calls `f` on every subset of `0..n` of the given size, in lexicographic
/// order.
pub fn for_each_subset(n: usize, size: usize, mut f: impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if left == 0 {
            f(cur);
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            go(i + 1, n, left - 1, cur, f);
            cur.pop();
        }
    }
    if size <= n {
        go(0, n, size, &mut Vec::new(), &mut f);
    }
}
