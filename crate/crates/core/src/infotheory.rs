//! Exact information measures on dense PMFs, Blahut–Arimoto capacity, and the
//! closed-form rate bounds for the type II wiretap channel.
//!
//! Every logarithm is base 2 and `0 · log 0 = 0`.

use serde::Serialize;

use crate::channel::Dmc;
use crate::error::{Error, Result};

/// Tolerance on the total mass of a PMF.
pub const PMF_TOL: f64 = 1e-12;

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator.
pub fn csum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

fn xlog2x_over(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * (p / q).log2()
    }
}

/// A probability mass function on `{0, …, len − 1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPmf("empty support".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidPmf(format!("entry {bad}")));
        }
        let total = csum(probs.iter().copied());
        if (total - 1.0).abs() > PMF_TOL {
            return Err(Error::InvalidPmf(format!("total mass {total}")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0, "uniform PMF needs a nonempty support");
        Self {
            probs: vec![1.0 / len as f64; len],
        }
    }

    /// Bernoulli(`p`) on `{0, 1}`: `P(1) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p])
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn entropy(&self) -> f64 {
        -csum(self.probs.iter().map(|&p| if p > 0.0 { p * p.log2() } else { 0.0 }))
    }

    /// Output law `Q_V` when the input of `ch` is drawn from `self`.
    pub fn through(&self, ch: &Dmc) -> Result<Pmf> {
        if ch.in_size() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: ch.in_size(),
                got: self.len(),
            });
        }
        let probs = (0..ch.out_size())
            .map(|v| csum((0..ch.in_size()).map(|u| self.probs[u] * ch.prob(u, v))))
            .collect();
        Ok(Pmf { probs })
    }
}

/// A joint PMF of a row variable (messages) and a column variable
/// (observations), stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointPmf {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: probs.len(),
            });
        }
        // reuse the PMF checks on the flattened table
        let flat = Pmf::new(probs)?;
        Ok(Self {
            rows,
            cols,
            probs: flat.probs,
        })
    }

    /// `P(m, z) = P_M(m) · P(z | m)`.
    pub fn from_input_and_channel(pm: &Pmf, ch: &Dmc) -> Result<Self> {
        if pm.len() != ch.in_size() {
            return Err(Error::DimensionMismatch {
                expected: ch.in_size(),
                got: pm.len(),
            });
        }
        let mut probs = Vec::with_capacity(ch.in_size() * ch.out_size());
        for m in 0..ch.in_size() {
            probs.extend(ch.row(m).iter().map(|&q| pm.get(m) * q));
        }
        Self::new(ch.in_size(), ch.out_size(), probs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.probs[r * self.cols + c]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|r| csum(self.probs[r * self.cols..(r + 1) * self.cols].iter().copied()))
            .collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|c| csum((0..self.rows).map(|r| self.get(r, c))))
            .collect()
    }

    /// `I(row; col)` in bits.
    pub fn mutual_information(&self) -> f64 {
        let pr = self.row_marginal();
        let pc = self.col_marginal();
        let mut acc = CompensatedSum::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let p = self.get(r, c);
                if p > 0.0 {
                    acc.add(p * (p / (pr[r] * pc[c])).log2());
                }
            }
        }
        // exact independence can round to a tiny negative value
        acc.value().max(0.0)
    }

    /// `H(row | col)` in bits.
    pub fn conditional_entropy_rows_given_cols(&self) -> f64 {
        let pc = self.col_marginal();
        let mut acc = CompensatedSum::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let p = self.get(r, c);
                if p > 0.0 {
                    acc.add(-p * (p / pc[c]).log2());
                }
            }
        }
        acc.value().max(0.0)
    }
}

/// Binary entropy.
pub fn h2(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(h2_unchecked(x))
}

pub(crate) fn h2_unchecked(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

pub fn mutual_information(joint: &JointPmf) -> f64 {
    joint.mutual_information()
}

/// `D(P‖Q)` in bits; `f64::INFINITY` when `supp(P) ⊄ supp(Q)`.
pub fn relative_entropy(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    if p.probs.iter().zip(&q.probs).any(|(&a, &b)| a > 0.0 && b == 0.0) {
        return Ok(f64::INFINITY);
    }
    Ok(csum(p.probs.iter().zip(&q.probs).map(|(&a, &b)| xlog2x_over(a, b))).max(0.0))
}

/// Rényi divergence of order `alpha` in bits. Order 1 is the relative entropy.
pub fn renyi_divergence(p: &Pmf, q: &Pmf, alpha: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("Rényi order {alpha} must be positive and finite")));
    }
    if p.probs.iter().zip(&q.probs).any(|(&a, &b)| a > 0.0 && b == 0.0) {
        return Err(Error::Domain("supp(P) is not contained in supp(Q)".into()));
    }
    if alpha == 1.0 {
        return relative_entropy(p, q);
    }
    let s = alpha - 1.0;
    // Σ P (P/Q)^s − 1 = Σ P ((P/Q)^s − 1), kept accurate near s = 0
    let excess = csum(
        p.probs
            .iter()
            .zip(&q.probs)
            .filter(|(&a, _)| a > 0.0)
            .map(|(&a, &b)| a * (s * (a / b).ln()).exp_m1()),
    );
    Ok(excess.ln_1p() / (s * std::f64::consts::LN_2))
}

/// `i(u; v) = log2 Q_{V|U}(v|u) / Q_V(v)`, with `Q_V` the output law of `qu`
/// through `ch`.
pub fn information_density(qu: &Pmf, ch: &Dmc, u: usize, v: usize) -> Result<f64> {
    let qv = qu.through(ch)?;
    scalar_density(&qv, ch, u, v)
}

fn scalar_density(qv: &Pmf, ch: &Dmc, u: usize, v: usize) -> Result<f64> {
    if u >= ch.in_size() || v >= ch.out_size() {
        return Err(Error::IndexOutOfRange {
            index: u.max(v),
            len: ch.in_size().max(ch.out_size()),
        });
    }
    let marginal = qv.get(v);
    if marginal == 0.0 {
        return Err(Error::Domain(format!("output symbol {v} has zero probability")));
    }
    Ok((ch.prob(u, v) / marginal).log2())
}

/// Information density of a sequence pair: the sum of per-symbol densities.
pub fn sequence_information_density(qu: &Pmf, ch: &Dmc, u: &[usize], v: &[usize]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let qv = qu.through(ch)?;
    let mut acc = CompensatedSum::new();
    for (&a, &b) in u.iter().zip(v) {
        acc.add(scalar_density(&qv, ch, a, b)?);
    }
    Ok(acc.value())
}

/// `I(U; V)` for `U ~ qu` through `ch`.
pub fn channel_mutual_information(qu: &Pmf, ch: &Dmc) -> Result<f64> {
    Ok(JointPmf::from_input_and_channel(qu, ch)?.mutual_information())
}

/// Result of [`blahut_arimoto`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    /// Certified lower estimate of the capacity in bits.
    pub capacity: f64,
    /// Upper bound from the same iterate; `upper − capacity` is the gap.
    pub upper: f64,
    pub input: Pmf,
    pub iterations: usize,
    pub converged: bool,
}

pub const BA_DEFAULT_TOL: f64 = 1e-9;
pub const BA_MAX_ITERATIONS: usize = 100_000;

/// Blahut–Arimoto alternating maximization of `I(X; Y)` over input laws.
///
/// Each iterate `p` yields `log2 Σ p(x) 2^{d(x)} ≤ C ≤ max d(x)` with
/// `d(x) = D(W(·|x) ‖ pW)`; iteration stops once the two bounds are within
/// `tol`.
pub fn blahut_arimoto(ch: &Dmc, tol: f64) -> Result<CapacityResult> {
    blahut_arimoto_with_limit(ch, tol, BA_MAX_ITERATIONS)
}

pub fn blahut_arimoto_with_limit(ch: &Dmc, tol: f64, max_iter: usize) -> Result<CapacityResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let nx = ch.in_size();
    let ny = ch.out_size();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut d = vec![0.0; nx];
    let mut q = vec![0.0; ny];
    let mut lower = 0.0;
    let mut upper = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        for (y, qy) in q.iter_mut().enumerate() {
            *qy = csum((0..nx).map(|x| p[x] * ch.prob(x, y)));
        }
        for (x, dx) in d.iter_mut().enumerate() {
            *dx = csum(ch.row(x).iter().zip(&q).map(|(&w, &qy)| xlog2x_over(w, qy)));
        }
        // shift by the max exponent so 2^d never overflows
        let dmax = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = p.iter().zip(&d).map(|(&px, &dx)| px * (dx - dmax).exp2()).collect();
        let z = csum(weights.iter().copied());
        lower = dmax + z.log2();
        upper = dmax;
        if upper - lower < tol {
            break;
        }
        for (px, w) in p.iter_mut().zip(&weights) {
            *px = w / z;
        }
    }
    let converged = upper - lower < tol;
    let total = csum(p.iter().copied());
    p.iter_mut().for_each(|x| *x /= total);
    Ok(CapacityResult {
        capacity: lower.max(0.0),
        upper: upper.max(0.0),
        input: Pmf { probs: p },
        iterations,
        converged,
    })
}

/// Lower and upper bounds on the semantic-secrecy capacity `C(p, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityBounds {
    pub lower: f64,
    pub upper: f64,
    /// Minimizer of `f` on `[0, 1]`.
    pub argmin: f64,
    pub min_f: f64,
}

/// `f(x) = H2((2p − 1)x + 1 − p) − H2(p) − r·H2(x)`.
pub fn gap_function(p: f64, r: f64, x: f64) -> f64 {
    let hx = h2_unchecked(x);
    h2_unchecked((2.0 * p - 1.0) * x + 1.0 - p) - h2_unchecked(p) - r * hx
}

const GRID_STEPS: usize = 10_000;
const GOLDEN_TOL: f64 = 1e-8;

/// `max{1 − H2(p) − r, 0} ≤ C(p, r) ≤ 1 − H2(p) − r − min_x f(x)`.
///
/// The minimum of `f` is located on a grid of step `1e−4` and refined by
/// golden-section search inside the bracket around the best grid point.
pub fn capacity_bounds(p: f64, r: f64) -> Result<CapacityBounds> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1/2]")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("r = {r} outside [0, 1]")));
    }
    let f = |x: f64| gap_function(p, r, x);
    let (best_i, mut best_f) = (0..=GRID_STEPS)
        .map(|i| (i, f(i as f64 / GRID_STEPS as f64)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let mut argmin = best_i as f64 / GRID_STEPS as f64;
    let lo = best_i.saturating_sub(1) as f64 / GRID_STEPS as f64;
    let hi = (best_i + 1).min(GRID_STEPS) as f64 / GRID_STEPS as f64;
    let (gx, gf) = golden_section(f, lo, hi, GOLDEN_TOL);
    if gf < best_f {
        best_f = gf;
        argmin = gx;
    }
    let base = 1.0 - h2_unchecked(p) - r;
    // f(0) = 0 and f(1/2) = base hold exactly; rounding in H2 must not lift
    // the computed minimum above them
    if 0.0 < best_f {
        best_f = 0.0;
        argmin = 0.0;
    }
    if base < best_f {
        best_f = base;
        argmin = 0.5;
    }
    Ok(CapacityBounds {
        lower: base.max(0.0),
        upper: base - best_f,
        argmin,
        min_f: best_f,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

/// Asymptotic Plotkin rate bound `1 − 2δ` for relative distance `δ`.
/// The vanishing finite-length slack is not quantified.
pub fn plotkin_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("relative distance {delta} outside (0, 1/2]")));
    }
    Ok(1.0 - 2.0 * delta)
}

/// Rate above which linear codes fail at read fraction `r`, from the Plotkin
/// bound: `max{1 − 2r, 0}`.
pub fn plotkin_threshold(r: f64) -> f64 {
    (1.0 - 2.0 * r).max(0.0)
}

/// Elias–Bassalygo form of the same threshold:
/// `max{1 − H2((1 − √(1 − 2r))/2), 0}`, extended by 0 for `r > 1/2`.
pub fn eb_threshold(r: f64) -> Result<f64> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::Domain(format!("r = {r} is negative")));
    }
    if r >= 0.5 {
        return Ok(0.0);
    }
    let x = (1.0 - (1.0 - 2.0 * r).sqrt()) / 2.0;
    Ok((1.0 - h2_unchecked(x)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn h2_examples() {
        assert_eq!(h2(0.0).unwrap(), 0.0);
        assert_eq!(h2(1.0).unwrap(), 0.0);
        assert_eq!(h2(0.5).unwrap(), 1.0);
        assert!((h2(0.11).unwrap() - 0.499_915_958).abs() < 1e-5);
        assert!(h2(-0.1).is_err());
        assert!(h2(1.5).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let product = JointPmf::new(2, 3, vec![0.1, 0.2, 0.1, 0.15, 0.3, 0.15]).unwrap();
        assert!(product.mutual_information().abs() < 1e-15);
        let diag = JointPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((diag.mutual_information() - 1.0).abs() < 1e-15);
        assert!((diag.conditional_entropy_rows_given_cols()).abs() < 1e-15);
        assert!(JointPmf::new(2, 2, vec![0.5, 0.5, 0.5, 0.0]).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        assert_eq!(relative_entropy(&p, &p).unwrap(), 0.0);
        assert!((relative_entropy(&pmf(&[1.0, 0.0]), &pmf(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            relative_entropy(&pmf(&[0.5, 0.5]), &pmf(&[1.0, 0.0])).unwrap(),
            f64::INFINITY
        );
        assert!(relative_entropy(&pmf(&[1.0]), &pmf(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn renyi_examples() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        assert!(renyi_divergence(&p, &p, 2.0).unwrap().abs() < 1e-15);
        let b2 = pmf(&[0.5, 0.5]);
        let b4 = pmf(&[0.75, 0.25]);
        assert!((renyi_divergence(&b2, &b4, 2.0).unwrap() - (4.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!(renyi_divergence(&b2, &pmf(&[1.0, 0.0]), 2.0).is_err());
        assert!(renyi_divergence(&b2, &b4, 0.0).is_err());
    }

    #[test]
    fn renyi_order_one_limit() {
        // nearly equal laws: each one-sided order is within 1e-6
        let p = pmf(&[0.5, 0.5]);
        let q = pmf(&[0.49, 0.51]);
        let kl = relative_entropy(&p, &q).unwrap();
        for a in [1.0 - 1e-4, 1.0 + 1e-4] {
            assert!((renyi_divergence(&p, &q, a).unwrap() - kl).abs() < 1e-6);
        }
        // generic laws: the first-order term cancels in the symmetric mean
        let p = pmf(&[0.1, 0.6, 0.3]);
        let q = pmf(&[0.4, 0.2, 0.4]);
        let kl = relative_entropy(&p, &q).unwrap();
        let lo = renyi_divergence(&p, &q, 1.0 - 1e-4).unwrap();
        let hi = renyi_divergence(&p, &q, 1.0 + 1e-4).unwrap();
        assert!(lo <= kl && kl <= hi);
        assert!(((lo + hi) / 2.0 - kl).abs() < 1e-6);
        assert_eq!(renyi_divergence(&p, &q, 1.0).unwrap(), kl);
    }

    #[test]
    fn information_density_examples() {
        let u = Pmf::uniform(2);
        assert!((information_density(&u, &Dmc::identity(2), 1, 1).unwrap() - 1.0).abs() < 1e-15);
        let half = Dmc::bsc(0.5).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!(information_density(&u, &half, a, b).unwrap().abs() < 1e-15);
        }
        let bsc = Dmc::bsc(0.25).unwrap();
        assert!((information_density(&u, &bsc, 0, 0).unwrap() - 1.5f64.log2()).abs() < 1e-15);
        let seq = sequence_information_density(&u, &bsc, &[0, 1, 0], &[0, 1, 1]).unwrap();
        assert!((seq - (2.0 * 1.5f64.log2() + 0.5f64.log2())).abs() < 1e-14);
        let skew = Dmc::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(information_density(&u, &skew, 0, 1).is_err());
    }

    #[test]
    fn blahut_arimoto_examples() {
        let c = blahut_arimoto(&Dmc::identity(2), 1e-9).unwrap();
        assert!((c.capacity - 1.0).abs() < 1e-9);
        assert!((c.input.get(0) - 0.5).abs() < 1e-9);
        let same = Dmc::new(vec![vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap();
        assert!(blahut_arimoto(&same, 1e-9).unwrap().capacity.abs() < 1e-9);
        let bsc = blahut_arimoto(&Dmc::bsc(0.11).unwrap(), 1e-9).unwrap();
        assert!((bsc.capacity - (1.0 - h2(0.11).unwrap())).abs() < 1e-4);
        assert!((bsc.capacity - 0.500_084).abs() < 1e-4);
        assert!(blahut_arimoto(&same, 0.0).is_err());
    }

    #[test]
    fn blahut_arimoto_asymmetric_channel() {
        // Z-channel with crossover 1/2: C = log2(5/4), optimal P(1) = 2/5
        let z = Dmc::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let c = blahut_arimoto(&z, 1e-10).unwrap();
        assert!(c.converged);
        assert!((c.capacity - 1.25f64.log2()).abs() < 1e-9);
        assert!((c.input.get(1) - 0.4).abs() < 1e-4);
    }

    #[test]
    fn capacity_bound_examples() {
        let b = capacity_bounds(0.0, 0.3).unwrap();
        assert!((b.lower - 0.7).abs() < 1e-12 && (b.upper - 0.7).abs() < 1e-12);
        assert_eq!(capacity_bounds(0.5, 0.4).unwrap().lower, 0.0);
        let b = capacity_bounds(0.11, 0.0).unwrap();
        assert!((b.lower - 0.500_07).abs() < 1e-4);
        assert!((b.upper - b.lower).abs() < 1e-4);
        assert!(capacity_bounds(0.6, 0.1).is_err());
        assert!(capacity_bounds(0.1, 1.1).is_err());
    }

    #[test]
    fn distance_bound_examples() {
        assert_eq!(plotkin_bound(0.5).unwrap(), 0.0);
        assert_eq!(plotkin_bound(0.25).unwrap(), 0.5);
        assert!((plotkin_bound(0.3).unwrap() - 0.4).abs() < 1e-15);
        assert!(plotkin_bound(0.0).is_err());
        assert!(plotkin_bound(0.6).is_err());
        assert_eq!(eb_threshold(0.0).unwrap(), 1.0);
        assert!(eb_threshold(0.5).unwrap().abs() < 1e-15);
        assert!((eb_threshold(0.32).unwrap() - (1.0 - h2(0.2).unwrap())).abs() < 1e-12);
        assert!((eb_threshold(0.32).unwrap() - 0.278_07).abs() < 1e-5);
        assert_eq!(eb_threshold(0.7).unwrap(), 0.0);
        assert!(eb_threshold(-0.1).is_err());
    }

    #[test]
    fn renyi_is_monotone_in_order() {
        let p = pmf(&[0.1, 0.6, 0.3]);
        let q = pmf(&[0.4, 0.2, 0.4]);
        let orders = [0.1, 0.3, 0.5, 0.8, 0.99, 1.0, 1.01, 1.5, 2.0, 3.0, 5.0, 10.0];
        let vals: Vec<f64> = orders.iter().map(|&a| renyi_divergence(&p, &q, a).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1] + 1e-15), "{vals:?}");
    }

    fn random_joint() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(0.0f64..1.0, r * c))
        })
    }

    proptest! {
        #[test]
        fn mutual_information_nonnegative_and_zero_on_products((r, c, raw) in random_joint()) {
            let total: f64 = raw.iter().sum::<f64>() + 1e-9;
            let probs: Vec<f64> = raw.iter().map(|x| (x + 1e-9 / (r * c) as f64) / total).collect();
            let j = JointPmf::new(r, c, probs).unwrap();
            prop_assert!(j.mutual_information() >= 0.0);
            // factorization repair: replace the joint with the product of its marginals
            let pr = j.row_marginal();
            let pc = j.col_marginal();
            let prod: Vec<f64> = pr.iter().flat_map(|&a| pc.iter().map(move |&b| a * b)).collect();
            let sum: f64 = prod.iter().sum();
            let prod = JointPmf::new(r, c, prod.iter().map(|x| x / sum).collect()).unwrap();
            prop_assert!(prod.mutual_information() < 1e-12);
            let h = Pmf::new(pr.clone()).unwrap().entropy();
            prop_assert!((h - j.conditional_entropy_rows_given_cols() - j.mutual_information()).abs() < 1e-12);
        }

        #[test]
        fn bounds_are_ordered(p in 0.0f64..=0.5, r in 0.0f64..=1.0) {
            let b = capacity_bounds(p, r).unwrap();
            prop_assert!(b.lower <= b.upper + 1e-12);
            prop_assert!(b.min_f <= 1e-15);
        }
    }
}
