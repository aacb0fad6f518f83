//! Explainable discrete Gaussian sampling over Z and over lattice cosets.
//!
//! The 1-D sampler is plain inversion sampling against a fixed-point CDF
//! table; its inverse, `explain`, picks a uniform word inside the output's
//! CDF bucket. The lattice sampler is Klein's nearest-plane walk driven by
//! one table draw per coordinate, and its inverse recovers the unique Klein
//! coefficients of a coset vector and explains each coordinate in turn.
//! Everything is a pure function of its inputs plus consumed tape words, so
//! replaying a tape replays the sample.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{LrsError, Result};
use crate::tape::WordSource;
use crate::zq::{mulmod, next_prime, solve_particular, GsoF64, IntBasis, IntMatrix, ZqMatrix, ZqVector};

/// Default tail cut: mass beyond `tau` standard-ish deviations is below
/// 2^-100 and is dropped rather than renormalized away silently.
pub const DEFAULT_TAU: f64 = 12.0;

/// Largest tolerated support size for one CDF table.
const SUPPORT_CAP: u64 = 1 << 22;

const FULL_MASS: u128 = 1u128 << 64;

/// Default width multiplier applied to Gram-Schmidt norms when validating a
/// Gaussian parameter against a basis of dimension `m`.
pub fn default_omega(m: usize) -> f64 {
    3.0 * (m.max(2) as f64).log2().sqrt()
}

/// Fixed-point CDF table for the discrete Gaussian on the integer interval
/// `[ceil(c - tau*sigma), floor(c + tau*sigma)]` with parameter `sigma` and
/// center `c`.
///
/// Bucket widths are 64-bit fixed point with every bucket at least 1, so the
/// CDF is strictly increasing and inversion has a unique answer for every
/// word; the final entry is exactly the full 2^64 mass. Construction is
/// deterministic, and weights are evaluated from the squared distance so a
/// centered table is exactly symmetric.
#[derive(Debug, Clone)]
pub struct Gauss1DTable {
    sigma: f64,
    center: f64,
    tau: f64,
    support_min: i64,
    cdf: Vec<u128>,
}

impl Gauss1DTable {
    pub fn new(sigma: f64, center: f64, tau: f64) -> Result<Self> {
        assert!(sigma > 0.0 && sigma.is_finite());
        assert!(tau > 0.0 && center.is_finite());
        let nearest = center.round() as i64;
        let lo = ((center - tau * sigma).ceil() as i64).min(nearest);
        let hi = ((center + tau * sigma).floor() as i64).max(nearest);
        let len = (hi - lo + 1) as u64;
        if len > SUPPORT_CAP {
            return Err(LrsError::SupportTooLarge(len));
        }
        let len = len as usize;
        let inv_s2 = 1.0 / (sigma * sigma);
        // Weights rho(d) = exp(-pi d^2 / sigma^2), built outward from the
        // nearest integer with the exact ratio recurrence
        // rho(d+1) = rho(d) * exp(-pi (2d+1) / sigma^2), whose step factors
        // form a geometric sequence. Two multiplies per entry instead of an
        // exp call, and for an integer center the left and right factor
        // sequences coincide, so a centered table is exactly symmetric.
        let mut weights = vec![0.0f64; len];
        let pivot = (nearest - lo) as usize;
        let d0 = nearest as f64 - center;
        let step = (-2.0 * PI * inv_s2).exp();
        weights[pivot] = (-PI * d0 * d0 * inv_s2).exp();
        let mut factor = (-PI * (2.0 * d0 + 1.0) * inv_s2).exp();
        for i in pivot + 1..len {
            weights[i] = weights[i - 1] * factor;
            factor *= step;
        }
        let mut factor = (-PI * (1.0 - 2.0 * d0) * inv_s2).exp();
        for i in (0..pivot).rev() {
            weights[i] = weights[i + 1] * factor;
            factor *= step;
        }
        let sum: f64 = weights.iter().sum();
        // Budget leaves one unit per bucket plus slack for float rounding, so
        // the +1 floor trick below cannot overshoot the full mass. The slack
        // grows with the table because the accumulated rounding error of
        // `sum` is proportional to the number of entries.
        let slack = (1u128 << 20) + (len as u128) * (1u128 << 16);
        let budget = (FULL_MASS - len as u128 - slack) as f64;
        let scale = budget / sum;
        let mut cdf = Vec::with_capacity(len);
        let mut acc: u128 = 0;
        let mut arg_max = 0usize;
        for (i, &w) in weights.iter().enumerate() {
            acc += (w * scale) as u128 + 1;
            cdf.push(acc);
            if w > weights[arg_max] {
                arg_max = i;
            }
        }
        // Put the leftover mass on the heaviest bucket (first on ties).
        let leftover = FULL_MASS - acc;
        for entry in cdf.iter_mut().skip(arg_max) {
            *entry += leftover;
        }
        debug_assert_eq!(*cdf.last().unwrap(), FULL_MASS);
        Ok(Gauss1DTable {
            sigma,
            center,
            tau,
            support_min: lo,
            cdf,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn support_min(&self) -> i64 {
        self.support_min
    }

    pub fn support_max(&self) -> i64 {
        self.support_min + self.cdf.len() as i64 - 1
    }

    pub fn support_len(&self) -> usize {
        self.cdf.len()
    }

    fn bucket(&self, z: i64) -> Option<(u128, u128)> {
        if z < self.support_min || z > self.support_max() {
            return None;
        }
        let idx = (z - self.support_min) as usize;
        let lo = if idx == 0 { 0 } else { self.cdf[idx - 1] };
        Some((lo, self.cdf[idx]))
    }

    /// Inversion sampling: consumes one word `u` and returns the unique `z`
    /// with `cdf(z-1) <= u < cdf(z)`.
    pub fn sample(&self, tape: &mut impl WordSource) -> i64 {
        let u = tape.next_word() as u128;
        // First index whose cdf exceeds u.
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.support_min + idx as i64
    }

    /// Inverse of [`Self::sample`]: a word uniform over `z`'s CDF bucket,
    /// derived from one fresh tape word. Feeding the result back into
    /// `sample` returns `z`.
    pub fn explain(&self, z: i64, tape: &mut impl WordSource) -> Result<u64> {
        let (lo, hi) = self.bucket(z).ok_or(LrsError::OutOfSupport(z))?;
        let width = hi - lo;
        let fresh = tape.next_word() as u128;
        Ok((lo + ((fresh * width) >> 64)) as u64)
    }
}

/// Free-function form of [`Gauss1DTable::sample`].
pub fn dgauss1d_sample(table: &Gauss1DTable, tape: &mut impl WordSource) -> i64 {
    table.sample(tape)
}

/// Free-function form of [`Gauss1DTable::explain`].
pub fn dgauss1d_explain(table: &Gauss1DTable, z: i64, tape: &mut impl WordSource) -> Result<u64> {
    table.explain(z, tape)
}

/// Klein sampler over the coset `{ x : A x = y (mod q) }`, reusable across
/// draws from the same basis.
///
/// The Gram-Schmidt data is floating point but computed in a fixed order, so
/// the whole pipeline is deterministic and the explain path replays the exact
/// centers the sampling path used.
pub struct CosetSampler {
    a: ZqMatrix,
    basis: IntMatrix,
    gso: GsoF64,
    sigma: f64,
    tau: f64,
}

impl CosetSampler {
    /// Validates the trapdoor (`A*S = 0 (mod q)`, nonsingular over the
    /// rationals via Gram-Schmidt) and the parameter quality
    /// `sigma >= gs_norm(S) * omega`.
    pub fn new(a: &ZqMatrix, s: &IntBasis, sigma: f64, tau: f64, omega: f64) -> Result<Self> {
        if a.cols() != s.dim() {
            return Err(LrsError::DimensionMismatch("coset sampler shape".into()));
        }
        if !a.mul_int(s.matrix())?.is_zero() {
            return Err(LrsError::BadTrapdoor);
        }
        let gso = GsoF64::compute(s.matrix()).map_err(|_| LrsError::BadTrapdoor)?;
        let required = gso.max_norm() * omega;
        if sigma < required {
            return Err(LrsError::SigmaTooSmall { sigma, required });
        }
        Ok(CosetSampler {
            a: a.clone(),
            basis: s.matrix().clone(),
            gso,
            sigma,
            tau,
        })
    }

    pub fn dim(&self) -> usize {
        self.gso.dim
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// One coset sample: `x = x0 + v` with `x0` the deterministic particular
    /// solution and `v` a Klein draw over the lattice targeting `-x0`.
    /// Consumes one word per coordinate, highest coordinate first.
    pub fn sample(&self, y: &ZqVector, tape: &mut impl WordSource) -> Result<IntMatrix> {
        let x0 = solve_particular(&self.a, y)?;
        let m = self.dim();
        let mut target: Vec<f64> = (0..m).map(|r| -(x0.get(r, 0) as f64)).collect();
        let mut v = vec![0i128; m];
        for i in (0..m).rev() {
            let tilde = self.gso.tilde_col(i);
            let mut dot = 0.0;
            for r in 0..m {
                dot += target[r] * tilde[r];
            }
            let c_i = dot / self.gso.norms_sq[i];
            let sigma_i = self.sigma / self.gso.norms_sq[i].sqrt();
            let table = Gauss1DTable::new(sigma_i, c_i, self.tau)?;
            let z_i = table.sample(tape);
            for r in 0..m {
                let col = self.basis.get(r, i);
                target[r] -= z_i as f64 * col as f64;
                v[r] += z_i as i128 * col;
            }
        }
        let mut x = IntMatrix::zero(m, 1);
        for r in 0..m {
            x.set(r, 0, x0.get(r, 0) + v[r]);
        }
        Ok(x)
    }

    /// Inverse of [`Self::sample`]: recovers the Klein coefficients of
    /// `x - x0` exactly, replays the deterministic centers, and explains each
    /// 1-D draw with a fresh tape word. Running `sample` on the returned
    /// words reproduces `x` bit-exactly.
    pub fn explain(
        &self,
        x: &IntMatrix,
        y: &ZqVector,
        fresh: &mut impl WordSource,
    ) -> Result<Vec<u64>> {
        let m = self.dim();
        if x.rows() != m || x.cols() != 1 {
            return Err(LrsError::DimensionMismatch("explain target shape".into()));
        }
        let ax = self.a.mul_int(x)?;
        for r in 0..self.a.rows() {
            if ax.get(r, 0) != y.get(r) as u64 {
                return Err(LrsError::NotInCoset);
            }
        }
        let x0 = solve_particular(&self.a, y)?;
        let v: Vec<i128> = (0..m).map(|r| x.get(r, 0) - x0.get(r, 0)).collect();
        let z = solve_integer(&self.basis, &v)?;
        // Replay the Klein walk with the known coefficients.
        let mut target: Vec<f64> = (0..m).map(|r| -(x0.get(r, 0) as f64)).collect();
        let mut words = Vec::with_capacity(m);
        for i in (0..m).rev() {
            let tilde = self.gso.tilde_col(i);
            let mut dot = 0.0;
            for r in 0..m {
                dot += target[r] * tilde[r];
            }
            let c_i = dot / self.gso.norms_sq[i];
            let sigma_i = self.sigma / self.gso.norms_sq[i].sqrt();
            let table = Gauss1DTable::new(sigma_i, c_i, self.tau)?;
            let z_i: i64 = z[i]
                .try_into()
                .map_err(|_| LrsError::TailExceeded(i64::MAX))?;
            let u = table
                .explain(z_i, fresh)
                .map_err(|_| LrsError::TailExceeded(z_i))?;
            words.push(u);
            for r in 0..m {
                target[r] -= z_i as f64 * self.basis.get(r, i) as f64;
            }
        }
        Ok(words)
    }
}

/// Exact solution of `S z = v` over the integers.
///
/// Fast path: if the columns of `S` are triangular under some row
/// permutation (true for the canonical bases produced by basis
/// randomization), forward substitution with exact divisibility checks.
/// Otherwise: CRT over large primes with an exact verification pass.
/// `NotInCoset` signals that `v` is not an integer combination of the
/// columns.
pub fn solve_integer(s: &IntMatrix, v: &[i128]) -> Result<Vec<i128>> {
    let m = s.rows();
    assert_eq!(s.cols(), m);
    assert_eq!(v.len(), m);
    if let Some(z) = solve_triangular(s, v)? {
        return Ok(z);
    }
    solve_crt(s, v)
}

/// Attempts a permuted-triangular forward substitution. Returns Ok(None)
/// when the structure is absent.
fn solve_triangular(s: &IntMatrix, v: &[i128]) -> Result<Option<Vec<i128>>> {
    let m = s.rows();
    // Pivot row: first nonzero entry of each column.
    let mut pivot = vec![usize::MAX; m];
    for c in 0..m {
        match (0..m).find(|&r| s.get(r, c) != 0) {
            Some(r) => pivot[c] = r,
            None => return Ok(None),
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&c| pivot[c]);
    let mut seen = vec![false; m];
    for &c in &order {
        if seen[pivot[c]] {
            return Ok(None);
        }
        seen[pivot[c]] = true;
    }
    // Triangularity: every later column must vanish on this column's pivot
    // row, so each pivot row involves only already-resolved unknowns.
    for (j, &c) in order.iter().enumerate() {
        for &c2 in &order[j + 1..] {
            if s.get(pivot[c], c2) != 0 {
                return Ok(None);
            }
        }
    }
    let mut residual = v.to_vec();
    let mut z = vec![0i128; m];
    for &c in &order {
        let r = pivot[c];
        let d = s.get(r, c);
        if residual[r] % d != 0 {
            return Err(LrsError::NotInCoset);
        }
        let zc = residual[r] / d;
        z[c] = zc;
        if zc != 0 {
            for row in 0..m {
                let e = s.get(row, c);
                if e != 0 {
                    residual[row] = residual[row]
                        .checked_sub(zc.checked_mul(e).ok_or(LrsError::Overflow("solve"))?)
                        .ok_or(LrsError::Overflow("solve"))?;
                }
            }
        }
    }
    if residual.iter().any(|&e| e != 0) {
        return Err(LrsError::NotInCoset);
    }
    Ok(Some(z))
}

fn solve_mod_p(s: &IntMatrix, v: &[i128], p: u64) -> Option<Vec<u64>> {
    let m = s.rows();
    let mut aug: Vec<Vec<u64>> = (0..m)
        .map(|r| {
            let mut row: Vec<u64> = (0..m)
                .map(|c| s.get(r, c).rem_euclid(p as i128) as u64)
                .collect();
            row.push(v[r].rem_euclid(p as i128) as u64);
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).find(|&r| aug[r][col] != 0)?;
        aug.swap(col, piv);
        let inv = crate::zq::invmod(aug[col][col], p);
        for j in col..=m {
            aug[col][j] = mulmod(aug[col][j], inv, p);
        }
        for r in 0..m {
            if r != col && aug[r][col] != 0 {
                let f = aug[r][col];
                for j in col..=m {
                    aug[r][j] = (aug[r][j] + mulmod(p - f, aug[col][j], p)) % p;
                }
            }
        }
    }
    Some((0..m).map(|r| aug[r][m]).collect())
}

fn solve_crt(s: &IntMatrix, v: &[i128]) -> Result<Vec<i128>> {
    let mut prime = next_prime(1u64 << 62);
    let mut residues: Vec<(u64, Vec<u64>)> = Vec::new();
    for _ in 0..6 {
        if let Some(sol) = solve_mod_p(s, v, prime) {
            residues.push((prime, sol));
            if residues.len() >= 2 {
                if let Some(z) = crt_lift_verify(s, v, &residues)? {
                    return Ok(z);
                }
            }
        }
        prime = next_prime(prime + 1);
    }
    Err(LrsError::NotInCoset)
}

/// Combines modular solutions, recenters, and verifies `S z = v` exactly.
fn crt_lift_verify(
    s: &IntMatrix,
    v: &[i128],
    residues: &[(u64, Vec<u64>)],
) -> Result<Option<Vec<i128>>> {
    let m = s.rows();
    let mut modulus = BigInt::from(1);
    for &(p, _) in residues {
        modulus *= BigInt::from(p);
    }
    let half = &modulus / 2;
    let mut z = Vec::with_capacity(m);
    for i in 0..m {
        // CRT per coordinate.
        let mut acc = BigInt::zero();
        for &(p, ref sol) in residues {
            let mp = &modulus / BigInt::from(p);
            // mp^{-1} mod p via Fermat.
            let mp_mod_p = (&mp % BigInt::from(p)).to_u64().unwrap();
            let inv = crate::zq::invmod(mp_mod_p, p);
            acc += mp * BigInt::from(mulmod(sol[i], inv, p));
        }
        acc %= &modulus;
        if acc > half {
            acc -= &modulus;
        }
        match acc.to_i128() {
            Some(val) => z.push(val),
            None => return Ok(None),
        }
    }
    // Exact verification; on failure the caller adds another prime.
    for r in 0..m {
        let mut acc = BigInt::zero();
        for c in 0..m {
            acc += BigInt::from(s.get(r, c)) * BigInt::from(z[c]);
        }
        if acc != BigInt::from(v[r]) {
            return Ok(None);
        }
    }
    Ok(Some(z))
}

/// Samples `x` with `A x = y (mod q)`, Gaussian with parameter `sigma` around
/// the coset, using the trapdoor basis `S`. Default tail cut and width
/// multiplier; build a [`CosetSampler`] directly to override them.
pub fn sample_gaussian(
    a: &ZqMatrix,
    s: &IntBasis,
    y: &ZqVector,
    sigma: f64,
    tape: &mut impl WordSource,
) -> Result<IntMatrix> {
    CosetSampler::new(a, s, sigma, DEFAULT_TAU, default_omega(s.dim()))?.sample(y, tape)
}

/// Inverse of [`sample_gaussian`]: emits tape words under which
/// `sample_gaussian` returns exactly `x`. Needs a source of fresh words to
/// pick positions inside each CDF bucket.
pub fn explain_gaussian(
    a: &ZqMatrix,
    s: &IntBasis,
    x: &IntMatrix,
    sigma: f64,
    y: &ZqVector,
    fresh: &mut impl WordSource,
) -> Result<Vec<u64>> {
    CosetSampler::new(a, s, sigma, DEFAULT_TAU, default_omega(s.dim()))?.explain(x, y, fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tape::RandomTape;

    fn tape(label: &str) -> RandomTape {
        RandomTape::from_seed([5; 32], label)
    }

    #[test]
    fn table_invariants() {
        let t = Gauss1DTable::new(2.0, 0.3, 12.0).unwrap();
        assert!(t.support_min() <= 0 && t.support_max() >= 0);
        let mut prev = 0u128;
        for i in 0..t.support_len() {
            let z = t.support_min() + i as i64;
            let (lo, hi) = t.bucket(z).unwrap();
            assert_eq!(lo, prev);
            assert!(hi > lo);
            prev = hi;
        }
        assert_eq!(prev, FULL_MASS);
    }

    #[test]
    fn zero_word_hits_leftmost() {
        let t = Gauss1DTable::new(1.0, 0.0, 12.0).unwrap();
        let mut z = RandomTape::from_words(vec![0]);
        assert_eq!(t.sample(&mut z), t.support_min());
        assert_eq!(t.support_min(), -12);
    }

    #[test]
    fn explain_leftmost_with_zero_fresh_word() {
        let t = Gauss1DTable::new(3.0, 0.0, 12.0).unwrap();
        let mut z = RandomTape::from_words(vec![0]);
        assert_eq!(t.explain(t.support_min(), &mut z).unwrap(), 0);
    }

    #[test]
    fn explain_rejects_out_of_support() {
        let t = Gauss1DTable::new(1.0, 0.0, 6.0).unwrap();
        let mut f = tape("oos");
        assert!(matches!(
            t.explain(1000, &mut f),
            Err(LrsError::OutOfSupport(1000))
        ));
    }

    #[test]
    fn reflection_of_symmetric_table() {
        let t = Gauss1DTable::new(2.5, 0.0, 12.0).unwrap();
        let mut src = tape("reflect");
        for _ in 0..2000 {
            let u = src.next_word();
            let mut a = RandomTape::from_words(vec![u]);
            let mut b = RandomTape::from_words(vec![u64::MAX - u]);
            assert_eq!(t.sample(&mut a), -t.sample(&mut b));
        }
    }

    #[test]
    fn one_dim_frequencies_match_mass_oracle() {
        let sigma = 2.0;
        let t = Gauss1DTable::new(sigma, 0.0, 12.0).unwrap();
        let lo = t.support_min();
        let len = t.support_len();
        let mut counts = vec![0u64; len];
        let mut src = tape("freq");
        let draws = 1_000_000;
        for _ in 0..draws {
            counts[(t.sample(&mut src) - lo) as usize] += 1;
        }
        // Brute-force normalized masses over the same support.
        let mass: Vec<f64> = (0..len)
            .map(|i| {
                let z = (lo + i as i64) as f64;
                (-PI * z * z / (sigma * sigma)).exp()
            })
            .collect();
        let total: f64 = mass.iter().sum();
        let expected: Vec<f64> = mass.iter().map(|m| m / total * draws as f64).collect();
        let p = crate::stats::chi_square_p(&counts, &expected);
        assert!(p > 0.001, "chi-square p = {p}");
    }

    #[test]
    fn round_trip_many_tables() {
        let mut src = tape("roundtrip");
        for trial in 0..1000 {
            let sigma = 0.8 + (trial % 17) as f64 * 0.37;
            let center = (trial % 29) as f64 * 0.21 - 3.0;
            let t = Gauss1DTable::new(sigma, center, 12.0).unwrap();
            let z = t.sample(&mut src);
            let u = t.explain(z, &mut src).unwrap();
            let mut replay = RandomTape::from_words(vec![u]);
            assert_eq!(t.sample(&mut replay), z);
        }
    }

    fn toy_instance() -> (ZqMatrix, IntBasis) {
        // Lambda^perp of [0 ... 0] mod 5 is all of Z^d; the identity times a
        // skewed unimodular matrix is a basis. Use a handmade full-rank pair
        // instead: A = [1 2 4] mod 5, basis of its kernel lattice.
        let a = ZqMatrix::from_entries(1, 3, 5, vec![1, 2, 4]);
        // Columns annihilate A mod 5: (5,0,0), (-2,1,0), (-4,0,1).
        let s = IntMatrix::from_entries(3, 3, vec![5, -2, -4, 0, 1, 0, 0, 0, 1]);
        (a, IntBasis::new(s))
    }

    #[test]
    fn coset_membership_holds() {
        let (a, s) = toy_instance();
        let mut src = tape("coset");
        for _ in 0..100 {
            let y = ZqVector::uniform(1, 5, &mut src);
            let x = sample_gaussian(&a, &s, &y, 40.0, &mut src).unwrap();
            assert_eq!(a.mul_int(&x).unwrap().get(0, 0), y.get(0));
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let (a, s) = toy_instance();
        let y = ZqVector::from_entries(5, vec![3]);
        let mut t1 = tape("det");
        let mut t2 = tape("det");
        let x1 = sample_gaussian(&a, &s, &y, 40.0, &mut t1).unwrap();
        let x2 = sample_gaussian(&a, &s, &y, 40.0, &mut t2).unwrap();
        assert_eq!(x1, x2);
    }

    #[test]
    fn sigma_quality_is_enforced() {
        let (a, s) = toy_instance();
        let y = ZqVector::from_entries(5, vec![0]);
        let mut src = tape("small");
        assert!(matches!(
            sample_gaussian(&a, &s, &y, 0.5, &mut src),
            Err(LrsError::SigmaTooSmall { .. })
        ));
    }

    #[test]
    fn bad_trapdoor_is_rejected() {
        let (a, _) = toy_instance();
        let s = IntBasis::new(IntMatrix::identity(3));
        let y = ZqVector::from_entries(5, vec![0]);
        let mut src = tape("bad");
        assert!(matches!(
            sample_gaussian(&a, &s, &y, 40.0, &mut src),
            Err(LrsError::BadTrapdoor)
        ));
    }

    #[test]
    fn explain_replays_bit_exactly() {
        let (a, s) = toy_instance();
        let mut src = tape("replay");
        let mut fresh = tape("replay-fresh");
        for _ in 0..200 {
            let y = ZqVector::uniform(1, 5, &mut src);
            let x = sample_gaussian(&a, &s, &y, 40.0, &mut src).unwrap();
            let words = explain_gaussian(&a, &s, &x, 40.0, &y, &mut fresh).unwrap();
            let mut replay = RandomTape::from_words(words);
            let x2 = sample_gaussian(&a, &s, &y, 40.0, &mut replay).unwrap();
            assert_eq!(x, x2);
        }
    }

    #[test]
    fn explain_zero_lattice_component() {
        let (a, s) = toy_instance();
        let y = ZqVector::from_entries(5, vec![4]);
        let x0 = solve_particular(&a, &y).unwrap();
        let mut fresh = tape("x0");
        let words = explain_gaussian(&a, &s, &x0, 40.0, &y, &mut fresh).unwrap();
        let mut replay = RandomTape::from_words(words);
        let back = sample_gaussian(&a, &s, &y, 40.0, &mut replay).unwrap();
        assert_eq!(back, x0);
    }

    #[test]
    fn explain_rejects_wrong_coset() {
        let (a, s) = toy_instance();
        let y = ZqVector::from_entries(5, vec![1]);
        let x = IntMatrix::from_column(&[0, 0, 0]);
        let mut fresh = tape("wrong");
        assert!(matches!(
            explain_gaussian(&a, &s, &x, 40.0, &y, &mut fresh),
            Err(LrsError::NotInCoset)
        ));
    }

    #[test]
    fn explain_rejects_overlong_vector() {
        let (a, s) = toy_instance();
        let y = ZqVector::from_entries(5, vec![0]);
        // In the lattice (multiple of column 1) but far past the tail cut.
        let x = IntMatrix::from_column(&[5 * 100_000, 0, 0]);
        let mut fresh = tape("long");
        assert!(matches!(
            explain_gaussian(&a, &s, &x, 40.0, &y, &mut fresh),
            Err(LrsError::TailExceeded(_))
        ));
    }

    #[test]
    fn cross_trapdoor_explain() {
        let (a, s0) = toy_instance();
        // A second basis of the same lattice: column operations preserve it.
        let m0 = s0.matrix();
        let mut m1 = m0.clone();
        for r in 0..3 {
            m1.set(r, 0, m0.get(r, 0) + 2 * m0.get(r, 1) - m0.get(r, 2));
            m1.set(r, 2, m0.get(r, 2) + m0.get(r, 1));
        }
        let s1 = IntBasis::new(m1);
        let mut src = tape("cross");
        let mut fresh = tape("cross-fresh");
        for _ in 0..100 {
            let y = ZqVector::uniform(1, 5, &mut src);
            let x = sample_gaussian(&a, &s0, &y, 40.0, &mut src).unwrap();
            let words = explain_gaussian(&a, &s1, &x, 40.0, &y, &mut fresh).unwrap();
            let mut replay = RandomTape::from_words(words);
            let x2 = sample_gaussian(&a, &s1, &y, 40.0, &mut replay).unwrap();
            assert_eq!(x, x2);
        }
    }

    #[test]
    fn solve_integer_crt_path() {
        // Non-triangular basis forces the CRT route.
        let s = IntMatrix::from_entries(3, 3, vec![3, 1, 4, 1, 5, 9, 2, 6, 6]);
        let z_true = vec![7i128, -3, 11];
        let mut v = vec![0i128; 3];
        for r in 0..3 {
            for c in 0..3 {
                v[r] += s.get(r, c) * z_true[c];
            }
        }
        assert!(solve_triangular(&s, &v).unwrap().is_none());
        assert_eq!(solve_integer(&s, &v).unwrap(), z_true);
    }

    #[test]
    fn solve_integer_triangular_path() {
        let s = IntMatrix::from_entries(3, 3, vec![0, 1, 0, 5, 3, 0, 0, 2, 1]);
        let z_true = vec![-2i128, 4, 9];
        let mut v = vec![0i128; 3];
        for r in 0..3 {
            for c in 0..3 {
                v[r] += s.get(r, c) * z_true[c];
            }
        }
        assert_eq!(solve_triangular(&s, &v).unwrap().unwrap(), z_true);
    }

    #[test]
    fn tail_fraction_is_small() {
        let (a, s) = toy_instance();
        let y = ZqVector::from_entries(5, vec![0]);
        let sigma = 40.0;
        let sampler = CosetSampler::new(&a, &s, sigma, 12.0, default_omega(3)).unwrap();
        let mut src = tape("tail");
        let mut exceed = 0;
        let trials = 2000;
        for _ in 0..trials {
            let x = sampler.sample(&y, &mut src).unwrap();
            if x.column_l2() > sigma * (3.0f64).sqrt() {
                exceed += 1;
            }
        }
        assert!((exceed as f64) < 0.01 * trials as f64, "{exceed} tail events");
    }
}
