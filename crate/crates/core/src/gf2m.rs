//! Arithmetic in GF(2^b) and the BCH syndrome map used as the first stage of
//! pseudolinear encoding.
//!
//! Elements are integers in `[0, 2^b)` read as polynomials in the primitive
//! element α, bit `i` holding the coefficient of α^i.

use serde::Serialize;

use crate::bitlinalg::BitVector;
use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Primitive polynomials indexed by degree, leading term included.
const PRIMITIVE_POLYS: [u32; 17] = [
    0,
    0b11,      // x + 1
    0b111,     // x^2 + x + 1
    0b1011,    // x^3 + x + 1
    0b1_0011,  // x^4 + x + 1
    0b10_0101, // x^5 + x^2 + 1
    0x43,      // x^6 + x + 1
    0x83,      // x^7 + x + 1
    0x11D,     // x^8 + x^4 + x^3 + x^2 + 1
    0x211,     // x^9 + x^4 + 1
    0x409,     // x^10 + x^3 + 1
    0x805,     // x^11 + x^2 + 1
    0x1053,    // x^12 + x^6 + x^4 + x + 1
    0x201B,    // x^13 + x^4 + x^3 + x + 1
    0x4443,    // x^14 + x^10 + x^6 + x + 1
    0x8003,    // x^15 + x + 1
    0x1100B,   // x^16 + x^12 + x^3 + x + 1
];

/// An element of GF(2^b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    pub fn value(self) -> u32 {
        self.0
    }
}

/// GF(2^b) defined by a primitive polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Field {
    b: u32,
    primitive_poly: u32,
}

impl Field {
    /// The field of degree `b` from the built-in table.
    pub fn new(b: u32) -> Result<Self> {
        if b == 0 || b > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "extension degree {b} outside [1, {MAX_DEGREE}]"
            )));
        }
        Self::with_polynomial(b, PRIMITIVE_POLYS[b as usize])
    }

    /// A field from an explicit polynomial, rejected unless x has
    /// multiplicative order exactly `2^b − 1` modulo it.
    pub fn with_polynomial(b: u32, primitive_poly: u32) -> Result<Self> {
        if b == 0 || b > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "extension degree {b} outside [1, {MAX_DEGREE}]"
            )));
        }
        if primitive_poly >> b != 1 {
            return Err(Error::Domain(format!(
                "polynomial {primitive_poly:#x} does not have degree {b}"
            )));
        }
        let field = Self { b, primitive_poly };
        let alpha = field.alpha();
        let order = field.order();
        let mut acc = alpha;
        let mut k = 1u32;
        while acc != FieldElement::ONE {
            if k > order {
                break;
            }
            acc = field.mul(acc, alpha);
            k += 1;
        }
        if k != order {
            return Err(Error::Domain(format!(
                "polynomial {primitive_poly:#x} is not primitive (order of x is not {order})"
            )));
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.b
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of field elements, `2^b`.
    pub fn size(&self) -> u32 {
        1 << self.b
    }

    /// Size of the multiplicative group, `2^b − 1`.
    pub fn order(&self) -> u32 {
        (1 << self.b) - 1
    }

    /// The primitive element: the class of x (equal to 1 when b = 1).
    pub fn alpha(&self) -> FieldElement {
        self.reduce(2)
    }

    fn reduce(&self, mut v: u32) -> FieldElement {
        // v has degree at most b here
        if v >> self.b & 1 == 1 {
            v ^= self.primitive_poly;
        }
        FieldElement(v)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    /// Shift-and-add multiplication modulo the primitive polynomial.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.size() && b.0 < self.size());
        let mut acc = 0u32;
        let mut x = a.0;
        let mut y = b.0;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            y >>= 1;
            x = self.reduce(x << 1).0;
        }
        FieldElement(acc)
    }

    /// `α^e`, exponent taken modulo `2^b − 1`; negative exponents are inverses.
    pub fn pow_alpha(&self, e: i64) -> FieldElement {
        let order = i64::from(self.order());
        let mut exp = e.rem_euclid(order) as u64;
        let mut base = self.alpha();
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Bit representation of an element, coefficient of α^0 first.
    pub fn element_bits(&self, a: FieldElement) -> BitVector {
        BitVector::from_u64(u64::from(a.0), self.b as usize)
    }

    /// Column `j` of the narrow-sense binary BCH parity-check matrix with `t`
    /// odd syndromes: the concatenated bits of α^j, α^{3j}, …, α^{(2t−1)j}.
    /// Column 0 is the all-zero vector of length `t·b`.
    pub fn bch_column(&self, j: u32, t: usize) -> BitVector {
        assert!(j < self.size(), "column index {j} outside the field");
        assert!(t >= 1, "at least one syndrome is required");
        let b = self.b as usize;
        let mut out = BitVector::zeros(t * b);
        if j == 0 {
            return out;
        }
        let order = u64::from(self.order());
        for i in 0..t {
            let e = (u64::from(j) * (2 * i as u64 + 1)) % order;
            let value = self.pow_alpha(e as i64).0;
            for bit in 0..b {
                if value >> bit & 1 == 1 {
                    out.set(i * b + bit, true);
                }
            }
        }
        out
    }

    /// Same as [`Field::bch_column`], packed into an integer (bit `i` of the
    /// result is bit `i` of the column). Requires `t·b ≤ 64`.
    pub fn bch_column_word(&self, j: u32, t: usize) -> u64 {
        self.bch_column(j, t).to_u64()
    }
}

/// Syndrome count for a pseudolinear independence parameter `k`: `t = ⌈k/2⌉`,
/// giving design distance `2t + 1 ≥ k + 1`.
pub fn syndromes_for(k: usize) -> usize {
    k.div_ceil(2)
}

/// A witness that some `2t` or fewer nonzero columns are dependent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyWitness {
    pub first: Vec<u32>,
    pub second: Vec<u32>,
}

/// Exhaustively checks that every set of at most `2t` distinct nonzero BCH
/// columns is linearly independent. Returns a witness when some set is not.
/// Requires `t·b ≤ 64`.
pub fn verify_bch_independence(field: &Field, t: usize) -> Result<Option<DependencyWitness>> {
    let width = t * field.degree() as usize;
    if width > 64 {
        return Err(Error::TooLarge(format!("{width}-bit columns")));
    }
    let cols: Vec<u64> = (1..field.size()).map(|j| field.bch_column_word(j, t)).collect();
    find_sum_collision(&cols, t)
}

/// Looks for two distinct subsets of at most `half` columns with equal sums.
///
/// A set of at most `2·half` columns is dependent exactly when such a pair
/// exists (split a minimal dependent set in two; conversely the symmetric
/// difference of a colliding pair is a nonempty zero-sum set). Witness
/// entries are 1-based column positions.
pub fn find_sum_collision(cols: &[u64], half: usize) -> Result<Option<DependencyWitness>> {
    if half > 4 || cols.len() >= 0xFFFF {
        return Err(Error::Unsupported(format!(
            "collision search with half = {half} over {} columns",
            cols.len()
        )));
    }
    let total: u128 = (0..=half).map(|s| crate::channel::binomial(cols.len(), s)).sum();
    if total > 50_000_000 {
        return Err(Error::TooLarge(format!("{total} subset sums")));
    }
    // subsets are packed as up to four 16-bit (position + 1) slots
    fn walk(cols: &[u64], start: usize, left: usize, acc: u64, code: u64, out: &mut Vec<(u64, u64)>) {
        out.push((acc, code));
        if left == 0 {
            return;
        }
        for j in start..cols.len() {
            walk(cols, j + 1, left - 1, acc ^ cols[j], code << 16 | (j as u64 + 1), out);
        }
    }
    let mut sums = Vec::with_capacity(total as usize);
    walk(cols, 0, half, 0, 0, &mut sums);
    sums.sort_unstable();
    let decode = |code: u64| {
        let mut idx = Vec::new();
        let mut c = code;
        while c != 0 {
            idx.push((c & 0xFFFF) as u32);
            c >>= 16;
        }
        idx.reverse();
        idx
    };
    Ok(sums.windows(2).find(|w| w[0].0 == w[1].0).map(|w| DependencyWitness {
        first: decode(w[0].1),
        second: decode(w[1].1),
    }))
}
