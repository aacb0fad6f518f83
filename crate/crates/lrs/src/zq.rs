//! Exact linear algebra over Z_q, over the integers, and over the rationals.
//!
//! [`ZqMatrix`] and [`ZqVector`] carry the modular side (public keys,
//! syndromes). [`IntMatrix`] carries signed integer data (trapdoors, tracked
//! R matrices, signature vectors) in 128-bit entries with overflow checks.
//! [`RationalMatrix`] holds exact Gram-Schmidt output. Floating-point
//! Gram-Schmidt lives in [`GsoF64`] for the sampler hot path; it is
//! deterministic, which is all replay needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{LrsError, Result};
use crate::tape::WordSource;

/// `a * b mod q` without overflow for any `a, b < 2^64`.
#[inline]
pub fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    (a as u128 * b as u128 % q as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1u64 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, q);
        }
        base = mulmod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse mod a prime.
#[inline]
pub fn invmod(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    powmod(a, q - 2, q)
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n % 2 == 0 {
        n += 1;
    }
    while !is_prime(n) {
        n += 2;
    }
    n
}

/// Dense row-major matrix over Z_q, entries reduced into `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZqMatrix {
    rows: usize,
    cols: usize,
    q: u64,
    entries: Vec<u64>,
}

impl ZqMatrix {
    pub fn zero(rows: usize, cols: usize, q: u64) -> Self {
        assert!(q >= 3, "modulus must be at least 3");
        ZqMatrix {
            rows,
            cols,
            q,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, q: u64) -> Self {
        let mut m = Self::zero(n, n, q);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from raw entries, reducing each into `[0, q)`.
    pub fn from_entries(rows: usize, cols: usize, q: u64, entries: Vec<u64>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        assert!(q >= 3);
        let entries = entries.into_iter().map(|e| e % q).collect();
        ZqMatrix {
            rows,
            cols,
            q,
            entries,
        }
    }

    /// Reduction of an integer matrix into `[0, q)`.
    pub fn from_int(m: &IntMatrix, q: u64) -> Self {
        let entries = m
            .entries
            .iter()
            .map(|&e| (e.rem_euclid(q as i128)) as u64)
            .collect();
        ZqMatrix {
            rows: m.rows,
            cols: m.cols,
            q,
            entries,
        }
    }

    /// Entries drawn uniformly from the tape, row-major.
    pub fn uniform(rows: usize, cols: usize, q: u64, tape: &mut impl WordSource) -> Self {
        let entries = (0..rows * cols).map(|_| tape.next_below(q)).collect();
        ZqMatrix {
            rows,
            cols,
            q,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.q;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_mul(&self, rows: usize, label: &str) -> Result<()> {
        if self.cols != rows {
            return Err(LrsError::DimensionMismatch(format!(
                "{}: {}x{} by {} rows",
                label, self.rows, self.cols, rows
            )));
        }
        Ok(())
    }

    /// `self * other mod q`.
    pub fn mul(&self, other: &ZqMatrix) -> Result<ZqMatrix> {
        self.check_mul(other.rows, "mat_mul_mod")?;
        assert_eq!(self.q, other.q);
        let mut out = ZqMatrix::zero(self.rows, other.cols, self.q);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.entries[i * other.cols + j] =
                        (cur + mulmod(a, other.get(k, j), self.q)) % self.q;
                }
            }
        }
        Ok(out)
    }

    /// `self * other mod q` where `other` has signed integer entries; they are
    /// reduced mod q before use.
    pub fn mul_int(&self, other: &IntMatrix) -> Result<ZqMatrix> {
        self.check_mul(other.rows, "mat_mul_mod")?;
        self.mul(&ZqMatrix::from_int(other, self.q))
    }

    pub fn mul_vec(&self, v: &ZqVector) -> Result<ZqVector> {
        self.check_mul(v.len(), "mat_vec_mod")?;
        let mut out = vec![0u64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u128;
            for k in 0..self.cols {
                acc += self.get(i, k) as u128 * v.entries[k] as u128;
                if acc >= 1u128 << 120 {
                    acc %= self.q as u128;
                }
            }
            out[i] = (acc % self.q as u128) as u64;
        }
        Ok(ZqVector {
            q: self.q,
            entries: out,
        })
    }

    pub fn add(&self, other: &ZqMatrix) -> Result<ZqMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LrsError::DimensionMismatch("add".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + b) % self.q)
            .collect();
        Ok(ZqMatrix {
            rows: self.rows,
            cols: self.cols,
            q: self.q,
            entries,
        })
    }

    pub fn sub(&self, other: &ZqMatrix) -> Result<ZqMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LrsError::DimensionMismatch("sub".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + self.q - b) % self.q)
            .collect();
        Ok(ZqMatrix {
            rows: self.rows,
            cols: self.cols,
            q: self.q,
            entries,
        })
    }

    /// Horizontal concatenation in the given order.
    pub fn hstack(blocks: &[&ZqMatrix]) -> Result<ZqMatrix> {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        let q = blocks[0].q;
        if blocks.iter().any(|b| b.rows != rows || b.q != q) {
            return Err(LrsError::DimensionMismatch("hstack".into()));
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = ZqMatrix::zero(rows, cols, q);
        for i in 0..rows {
            let mut at = 0;
            for b in blocks {
                for j in 0..b.cols {
                    out.entries[i * cols + at + j] = b.get(i, j);
                }
                at += b.cols;
            }
        }
        Ok(out)
    }

    /// Copy of columns `range.start..range.end`.
    pub fn columns(&self, range: std::ops::Range<usize>) -> ZqMatrix {
        assert!(range.end <= self.cols);
        let cols = range.len();
        let mut out = ZqMatrix::zero(self.rows, cols, self.q);
        for i in 0..self.rows {
            for (j, c) in range.clone().enumerate() {
                out.entries[i * cols + j] = self.get(i, c);
            }
        }
        out
    }

    pub fn column_vec(&self, c: usize) -> ZqVector {
        ZqVector {
            q: self.q,
            entries: (0..self.rows).map(|i| self.get(i, c)).collect(),
        }
    }

    /// Rank over Z_q by row elimination.
    pub fn row_rank(&self) -> usize {
        let mut span = EchelonSpan::new(self.cols, self.q);
        for i in 0..self.rows {
            let row: Vec<u64> = (0..self.cols).map(|j| self.get(i, j)).collect();
            span.insert(&row);
        }
        span.rank()
    }
}

/// Vector over Z_q, entries in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZqVector {
    q: u64,
    entries: Vec<u64>,
}

impl ZqVector {
    pub fn zero(len: usize, q: u64) -> Self {
        ZqVector {
            q,
            entries: vec![0; len],
        }
    }

    pub fn from_entries(q: u64, entries: Vec<u64>) -> Self {
        ZqVector {
            q,
            entries: entries.into_iter().map(|e| e % q).collect(),
        }
    }

    pub fn uniform(len: usize, q: u64, tape: &mut impl WordSource) -> Self {
        ZqVector {
            q,
            entries: (0..len).map(|_| tape.next_below(q)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u64 {
        self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
}

/// Incremental span of vectors over F_p kept in reduced column echelon form.
///
/// `insert` reduces the candidate against the current echelon set and either
/// absorbs it (rank grows, returns true) or rejects it as dependent. The
/// stored set is canonical: it depends only on the span, not on insertion
/// order, once the span is fixed. Used for rank checks and for the
/// deterministic lattice-basis construction in basis randomization.
#[derive(Debug, Clone)]
pub struct EchelonSpan {
    dim: usize,
    p: u64,
    /// Sorted by pivot position; each vector has 1 at its pivot and 0 at every
    /// other vector's pivot.
    vectors: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonSpan {
    pub fn new(dim: usize, p: u64) -> Self {
        EchelonSpan {
            dim,
            p,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.vectors
    }

    /// Inserts `v` (entries any u64, reduced mod p here) if independent.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|&e| e % p).collect();
        for (vec, &piv) in self.vectors.iter().zip(&self.pivots) {
            let c = w[piv];
            if c != 0 {
                for j in 0..self.dim {
                    w[j] = (w[j] + mulmod(p - c, vec[j], p)) % p;
                }
            }
        }
        let pivot = match w.iter().position(|&e| e != 0) {
            Some(i) => i,
            None => return false,
        };
        let inv = invmod(w[pivot], p);
        for e in w.iter_mut() {
            *e = mulmod(*e, inv, p);
        }
        // Back-reduce existing vectors so every stored pivot column is clean.
        for vec in self.vectors.iter_mut() {
            let c = vec[pivot];
            if c != 0 {
                for j in 0..self.dim {
                    vec[j] = (vec[j] + mulmod(p - c, w[j], p)) % p;
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < pivot);
        self.pivots.insert(at, pivot);
        self.vectors.insert(at, w);
        true
    }
}

/// Deterministic particular solution of `A x = y (mod q)`.
///
/// Gaussian elimination with lowest-column-index pivoting and free variables
/// set to zero; part of the external contract because signing and explaining
/// must derive the same coset representative. Entries of the output lie in
/// `[0, q)`.
pub fn solve_particular(a: &ZqMatrix, y: &ZqVector) -> Result<IntMatrix> {
    if a.rows() != y.len() {
        return Err(LrsError::DimensionMismatch("solve_particular".into()));
    }
    let q = a.modulus();
    let (n, m) = (a.rows(), a.cols());
    // Augmented [A | y], row echelon with rows swapped into pivot order.
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut r: Vec<u64> = (0..m).map(|j| a.get(i, j)).collect();
            r.push(y.get(i));
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(pr) = (r..n).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = invmod(rows[r][col], q);
        for j in col..=m {
            rows[r][j] = mulmod(rows[r][j], inv, q);
        }
        for i in 0..n {
            if i != r && rows[i][col] != 0 {
                let c = rows[i][col];
                for j in col..=m {
                    rows[i][j] = (rows[i][j] + mulmod(q - c, rows[r][j], q)) % q;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == n {
            break;
        }
    }
    if r < n {
        // Remaining rows are zero in A; they must be zero in y too, and the
        // contract demands a spanning A regardless.
        return Err(LrsError::RankDeficient);
    }
    let mut x = IntMatrix::zero(m, 1);
    for (i, &col) in pivot_cols.iter().enumerate() {
        x.set(col, 0, rows[i][m] as i128);
    }
    Ok(x)
}

/// Dense row-major signed integer matrix.
///
/// Entries are 128-bit; every product is overflow-checked. Toy-scale data
/// (trapdoors, tracked R matrices up to moderate circuit depth, signatures)
/// fits with a huge margin, and a hard panic on overflow beats silently wrong
/// arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i128>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<i128>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Lift from Z_q representatives in `[0, q)` without recentering.
    pub fn from_zq(m: &ZqMatrix) -> Self {
        IntMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|&e| e as i128).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[i128] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(LrsError::DimensionMismatch(format!(
                "int mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a
                        .checked_mul(other.get(k, j))
                        .and_then(|t| out.get(i, j).checked_add(t))
                        .unwrap_or_else(|| panic!("integer matrix product overflowed"));
                    out.entries[i * other.cols + j] = term;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LrsError::DimensionMismatch("int add".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a.checked_add(b).expect("integer matrix sum overflowed"))
            .collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&e| -e).collect(),
        }
    }

    /// Stack `[self; other]` vertically.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(LrsError::DimensionMismatch("vstack".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn hstack(blocks: &[&IntMatrix]) -> Result<IntMatrix> {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(LrsError::DimensionMismatch("int hstack".into()));
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            let mut at = 0;
            for b in blocks {
                for j in 0..b.cols {
                    out.entries[i * cols + at + j] = b.get(i, j);
                }
                at += b.cols;
            }
        }
        Ok(out)
    }

    pub fn column(&self, c: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.get(i, c)).collect()
    }

    pub fn from_column(col: &[i128]) -> IntMatrix {
        IntMatrix {
            rows: col.len(),
            cols: 1,
            entries: col.to_vec(),
        }
    }

    /// Largest column l2 norm.
    pub fn max_column_norm(&self) -> f64 {
        (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| {
                        let e = self.get(r, c) as f64;
                        e * e
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> i128 {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// l2 norm of a single-column matrix.
    pub fn column_l2(&self) -> f64 {
        assert_eq!(self.cols, 1);
        self.entries
            .iter()
            .map(|&e| {
                let f = e as f64;
                f * f
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Rank over F_p for a prime `p` not dividing any relevant minor; used as
    /// a fast nonsingularity probe.
    pub fn rank_mod(&self, p: u64) -> usize {
        let mut span = EchelonSpan::new(self.rows, p);
        for c in 0..self.cols {
            let col: Vec<u64> = (0..self.rows)
                .map(|r| self.get(r, c).rem_euclid(p as i128) as u64)
                .collect();
            span.insert(&col);
        }
        span.rank()
    }

    /// Exact nonsingularity over the rationals. Tries cheap modular probes
    /// first and falls back to exact elimination only when both fail.
    pub fn is_nonsingular(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for p in [2305843009213693951u64, 4611686018427387847] {
            if self.rank_mod(p) == self.rows {
                return true;
            }
        }
        gram_schmidt_exact(self).is_ok()
    }
}

/// Square integer matrix whose columns form a lattice basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntBasis(pub IntMatrix);

impl IntBasis {
    pub fn new(m: IntMatrix) -> Self {
        assert_eq!(m.rows(), m.cols(), "basis must be square");
        IntBasis(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    /// Checks `A * S == 0 (mod q)` and nonsingularity.
    pub fn check_trapdoor(&self, a: &ZqMatrix) -> Result<()> {
        if a.cols() != self.dim() {
            return Err(LrsError::DimensionMismatch("trapdoor shape".into()));
        }
        if !a.mul_int(&self.0)?.is_zero() || !self.0.is_nonsingular() {
            return Err(LrsError::BadTrapdoor);
        }
        Ok(())
    }
}

/// Exact rational matrix, used to report Gram-Schmidt data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn column_dot(&self, a: usize, b: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for r in 0..self.rows {
            acc += self.get(r, a) * self.get(r, b);
        }
        acc
    }
}

/// Exact Gram-Schmidt orthogonalization of the columns of `b`.
///
/// Returns the orthogonalized columns and the projection coefficients
/// `mu[i][j]` (coefficient of column j in column i, j < i).
pub fn gram_schmidt_exact(b: &IntMatrix) -> Result<(RationalMatrix, Vec<Vec<BigRational>>)> {
    let (rows, cols) = (b.rows(), b.cols());
    let mut tilde = RationalMatrix::zero(rows, cols);
    let mut norms_sq: Vec<BigRational> = Vec::with_capacity(cols);
    let mut mu: Vec<Vec<BigRational>> = Vec::with_capacity(cols);
    for i in 0..cols {
        let mut col: Vec<BigRational> = (0..rows)
            .map(|r| BigRational::from(BigInt::from(b.get(r, i))))
            .collect();
        let mut mu_i = Vec::with_capacity(i);
        for j in 0..i {
            // <b_i, tilde_j> / <tilde_j, tilde_j>
            let mut dot = BigRational::zero();
            for r in 0..rows {
                dot += BigRational::from(BigInt::from(b.get(r, i))) * tilde.get(r, j);
            }
            let coeff = dot / &norms_sq[j];
            for r in 0..rows {
                let t = tilde.get(r, j) * &coeff;
                col[r] -= t;
            }
            mu_i.push(coeff);
        }
        let mut nsq = BigRational::zero();
        for c in col.iter() {
            nsq += c * c;
        }
        if nsq.is_zero() {
            return Err(LrsError::LinearlyDependent);
        }
        for (r, c) in col.into_iter().enumerate() {
            tilde.set(r, i, c);
        }
        norms_sq.push(nsq);
        mu.push(mu_i);
    }
    Ok((tilde, mu))
}

/// Exact squared Gram-Schmidt norm: `max_i ||b~_i||^2` as a rational.
pub fn gs_norm_exact_sq(b: &IntMatrix) -> Result<BigRational> {
    let (tilde, _) = gram_schmidt_exact(b)?;
    let mut best = BigRational::zero();
    for i in 0..b.cols() {
        let nsq = tilde.column_dot(i, i);
        if nsq > best {
            best = nsq;
        }
    }
    Ok(best)
}

/// Floating-point Gram-Schmidt data for the sampler hot path.
///
/// Deterministic (fixed operation order), so signing and explaining agree
/// bit for bit even though the values are approximate.
#[derive(Debug, Clone)]
pub struct GsoF64 {
    pub dim: usize,
    /// Column i of the orthogonalization, stored contiguously.
    pub tilde: Vec<f64>,
    pub norms_sq: Vec<f64>,
}

impl GsoF64 {
    pub fn compute(b: &IntMatrix) -> Result<GsoF64> {
        if b.rows() != b.cols() {
            return Err(LrsError::DimensionMismatch("gso needs square basis".into()));
        }
        let d = b.rows();
        let mut tilde = vec![0.0f64; d * d];
        let mut norms_sq = vec![0.0f64; d];
        for i in 0..d {
            let (head, tail) = tilde.split_at_mut(i * d);
            let col = &mut tail[..d];
            for r in 0..d {
                col[r] = b.get(r, i) as f64;
            }
            for j in 0..i {
                let prev = &head[j * d..j * d + d];
                let mut dot = 0.0;
                for r in 0..d {
                    dot += b.get(r, i) as f64 * prev[r];
                }
                let coeff = dot / norms_sq[j];
                for r in 0..d {
                    col[r] -= coeff * prev[r];
                }
            }
            let nsq: f64 = col.iter().map(|x| x * x).sum();
            if nsq <= 0.0 || !nsq.is_finite() {
                return Err(LrsError::LinearlyDependent);
            }
            norms_sq[i] = nsq;
        }
        Ok(GsoF64 {
            dim: d,
            tilde,
            norms_sq,
        })
    }

    pub fn tilde_col(&self, i: usize) -> &[f64] {
        &self.tilde[i * self.dim..(i + 1) * self.dim]
    }

    pub fn max_norm(&self) -> f64 {
        self.norms_sq.iter().cloned().fold(0.0, f64::max).sqrt()
    }
}

/// Gram-Schmidt norm `max_i ||b~_i||` as a float; also defined for
/// non-square column sets.
pub fn gs_norm_f64(b: &IntMatrix) -> Result<f64> {
    let (rows, cols) = (b.rows(), b.cols());
    let mut tilde = vec![0.0f64; rows * cols];
    let mut norms_sq = vec![0.0f64; cols];
    for i in 0..cols {
        let (head, tail) = tilde.split_at_mut(i * rows);
        let col = &mut tail[..rows];
        for r in 0..rows {
            col[r] = b.get(r, i) as f64;
        }
        for j in 0..i {
            let prev = &head[j * rows..j * rows + rows];
            let mut dot = 0.0;
            for r in 0..rows {
                dot += b.get(r, i) as f64 * prev[r];
            }
            let coeff = dot / norms_sq[j];
            for r in 0..rows {
                col[r] -= coeff * prev[r];
            }
        }
        let nsq: f64 = col.iter().map(|x| x * x).sum();
        if nsq <= 0.0 || !nsq.is_finite() {
            return Err(LrsError::LinearlyDependent);
        }
        norms_sq[i] = nsq;
    }
    Ok(norms_sq.iter().cloned().fold(0.0, f64::max).sqrt())
}

/// Rational to nearest f64, good enough for reporting.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::MAX);
    let d = r.denom().to_f64().unwrap_or(f64::MAX);
    n / d
}
