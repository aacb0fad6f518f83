//! Gadget matrix machinery and the basis algorithms: trapdoor generation,
//! basis extension to wider matrices, basis randomization, and the
//! shifted-gadget extension used by the simulation signing path.

use std::ops::Range;

use crate::error::{LrsError, Result};
use crate::gauss::{default_omega, CosetSampler, DEFAULT_TAU};
use crate::tape::WordSource;
use crate::zq::{solve_particular, EchelonSpan, IntBasis, IntMatrix, ZqMatrix, ZqVector};

/// Matrix with a short trapdoor basis: `A * S = 0 (mod q)`, `S` nonsingular.
#[derive(Debug, Clone)]
pub struct TrapdoorPair {
    pub a: ZqMatrix,
    pub s: IntBasis,
}

/// The public gadget matrix together with its short public basis.
#[derive(Debug, Clone)]
pub struct GadgetPair {
    pub g: ZqMatrix,
    pub s_g: IntBasis,
    n: usize,
    k: usize,
}

/// Bits per gadget entry: `ceil(log2 q)`.
pub fn gadget_bits(q: u64) -> usize {
    64 - (q - 1).leading_zeros() as usize
}

/// Gadget block width `n * ceil(log2 q)`.
pub fn gadget_width(n: usize, q: u64) -> usize {
    n * gadget_bits(q)
}

/// Builds `G = [I_n (x) (1, 2, ..., 2^{k-1}) | 0]` of shape n x m along with
/// the standard short basis of its kernel lattice: per block, bidiagonal
/// (2, -1) columns plus the binary expansion of q, extended by identity
/// columns on the zero padding.
pub fn gadget(n: usize, q: u64, m: usize) -> Result<GadgetPair> {
    let k = gadget_bits(q);
    let w = n * k;
    if m < w {
        return Err(LrsError::DimensionTooSmall(w));
    }
    let mut g = ZqMatrix::zero(n, m, q);
    for i in 0..n {
        for l in 0..k {
            g.set(i, i * k + l, 1u64 << l);
        }
    }
    let mut s = IntMatrix::zero(m, m);
    for i in 0..n {
        let base = i * k;
        for j in 0..k - 1 {
            s.set(base + j, base + j, 2);
            s.set(base + j + 1, base + j, -1);
        }
        for l in 0..k {
            s.set(base + l, base + k - 1, (q >> l & 1) as i128);
        }
    }
    for j in w..m {
        s.set(j, j, 1);
    }
    Ok(GadgetPair {
        g,
        s_g: IntBasis::new(s),
        n,
        k,
    })
}

impl GadgetPair {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.g.cols()
    }

    /// Bit decomposition: binary matrix `X` with `G * X = M (mod q)`.
    /// Padding rows are zero.
    pub fn g_inverse(&self, m: &ZqMatrix) -> IntMatrix {
        assert_eq!(m.rows(), self.n, "g_inverse row count");
        let out_rows = self.g.cols();
        let mut out = IntMatrix::zero(out_rows, m.cols());
        for i in 0..self.n {
            for c in 0..m.cols() {
                let e = m.get(i, c);
                for l in 0..self.k {
                    out.set(i * self.k + l, c, (e >> l & 1) as i128);
                }
            }
        }
        out
    }
}

/// Quality cap asserted on generated trapdoors; empirical with generous
/// margin over the ternary-R construction below.
pub fn trap_quality_bound(n: usize, q: u64) -> f64 {
    7.0 * (n as f64 * (q as f64).log2()).sqrt()
}

/// Samples a near-uniform `A` with a short basis of its kernel lattice.
///
/// `A = [Abar | G - Abar * R]` with `Abar` uniform and `R` ternary from the
/// tape (`Abar` entries first, then `R` row-major); the basis comes from the
/// shifted-gadget extension. Retries (fresh tape words) when `A` fails to
/// span or the basis quality check fails.
pub fn trap_gen(n: usize, m: usize, q: u64, tape: &mut impl WordSource) -> Result<TrapdoorPair> {
    let w = gadget_width(n, q);
    if m < 2 * w {
        return Err(LrsError::DimensionTooSmall(2 * w));
    }
    let ghat = gadget(n, q, w)?;
    let bound = trap_quality_bound(n, q);
    for _ in 0..64 {
        let abar = ZqMatrix::uniform(n, m - w, q, tape);
        let mut r = IntMatrix::zero(m - w, w);
        for i in 0..m - w {
            for j in 0..w {
                r.set(i, j, tape.next_below(3) as i128 - 1);
            }
        }
        let tail = ghat.g.sub(&abar.mul_int(&r)?)?;
        let a = ZqMatrix::hstack(&[&abar, &tail])?;
        if a.row_rank() < n {
            continue;
        }
        let s = match basis_ext_abb(&abar, &ghat.g, &r.neg(), &ghat.s_g) {
            Ok(s) => s,
            Err(_) => continue,
        };
        debug_assert!(a.mul_int(s.matrix())?.is_zero());
        if crate::zq::gs_norm_f64(s.matrix())? > bound {
            continue;
        }
        return Ok(TrapdoorPair { a, s });
    }
    Err(LrsError::RankFailure(64))
}

/// Extends a trapdoor for the block `A2` of `A' = [A1 | A2 | A3]` to a
/// trapdoor for all of `A'`, preserving the Gram-Schmidt norm exactly.
///
/// Output column order: the embedded `S2` columns first, then one column per
/// outside index `j` of the form `e_j + embed(w_j)` with `A2 * w_j = -a_j`.
/// Orthogonalization removes the embedded part of those columns completely,
/// so their Gram-Schmidt vectors are unit vectors and the norm is `S2`'s.
pub fn basis_ext(aprime: &ZqMatrix, block: Range<usize>, s2: &IntBasis) -> Result<IntBasis> {
    let mp = aprime.cols();
    if block.end > mp || block.len() != s2.dim() {
        return Err(LrsError::DimensionMismatch("basis_ext block".into()));
    }
    let a2 = aprime.columns(block.clone());
    if a2.row_rank() < a2.rows() {
        return Err(LrsError::BlockNotSpanning);
    }
    s2.check_trapdoor(&a2)?;
    let q = aprime.modulus();
    let mut s = IntMatrix::zero(mp, mp);
    for (c, _) in block.clone().enumerate() {
        for (r, row) in block.clone().enumerate() {
            s.set(row, c, s2.matrix().get(r, c));
        }
    }
    let mut col = block.len();
    for j in (0..mp).filter(|j| !block.contains(j)) {
        let aj = aprime.column_vec(j);
        let neg: Vec<u64> = aj.entries().iter().map(|&e| (q - e) % q).collect();
        let w = solve_particular(&a2, &ZqVector::from_entries(q, neg))?;
        s.set(j, col, 1);
        for (r, row) in block.clone().enumerate() {
            s.set(row, col, w.get(r, 0));
        }
        col += 1;
    }
    let s = IntBasis::new(s);
    debug_assert!(aprime.mul_int(s.matrix())?.is_zero());
    Ok(s)
}

/// Large prime used as a rational-independence proxy field.
const INDEP_PRIME: u64 = 2305843009213693951;

/// Draws Gaussian lattice vectors through the given trapdoor until they span
/// the kernel lattice, then emits the canonical basis of that lattice:
/// the reduced column echelon of the drawn vectors mod q, lifted, plus
/// `q * e_r` for each non-pivot row, columns ordered by pivot row.
///
/// The canonical form depends only on the lattice and the drawn span, not on
/// the input trapdoor, which is what makes two holders of different
/// trapdoors reach bit-identical output from the same tape words.
pub fn basis_rand(
    aprime: &ZqMatrix,
    sprime: &IntBasis,
    sigma: f64,
    tape: &mut impl WordSource,
) -> Result<IntBasis> {
    basis_rand_with(
        aprime,
        sprime,
        sigma,
        DEFAULT_TAU,
        default_omega(sprime.dim()),
        tape,
    )
}

/// [`basis_rand`] with explicit tail cut and width multiplier.
pub fn basis_rand_with(
    aprime: &ZqMatrix,
    sprime: &IntBasis,
    sigma: f64,
    tau: f64,
    omega: f64,
    tape: &mut impl WordSource,
) -> Result<IntBasis> {
    let mp = aprime.cols();
    let q = aprime.modulus();
    let sampler = CosetSampler::new(aprime, sprime, sigma, tau, omega)?;
    let rank = aprime.row_rank();
    let kernel_dim = mp - rank;
    let zero = ZqVector::zero(aprime.rows(), q);
    let mut over_q = EchelonSpan::new(mp, q);
    let mut over_p = EchelonSpan::new(mp, INDEP_PRIME);
    let cap = 4 * mp;
    let mut draws = 0;
    while over_p.rank() < mp || over_q.rank() < kernel_dim {
        if draws >= cap {
            return Err(LrsError::IndependenceTimeout(cap));
        }
        draws += 1;
        let x = sampler.sample(&zero, tape)?;
        let modp: Vec<u64> = (0..mp)
            .map(|r| x.get(r, 0).rem_euclid(INDEP_PRIME as i128) as u64)
            .collect();
        if over_p.insert(&modp) {
            let modq: Vec<u64> = (0..mp)
                .map(|r| x.get(r, 0).rem_euclid(q as i128) as u64)
                .collect();
            over_q.insert(&modq);
        }
    }
    // Canonical basis: lifted echelon vectors at their pivot rows plus q*e_r
    // on the remaining rows, merged in pivot order.
    let mut basis = IntMatrix::zero(mp, mp);
    let mut col = 0;
    let mut ech = over_q.pivots().iter().zip(over_q.vectors()).peekable();
    for row in 0..mp {
        if let Some(&(&piv, vec)) = ech.peek() {
            if piv == row {
                for r in 0..mp {
                    basis.set(r, col, vec[r] as i128);
                }
                ech.next();
                col += 1;
                continue;
            }
        }
        basis.set(row, col, q as i128);
        col += 1;
    }
    debug_assert_eq!(col, mp);
    let basis = IntBasis::new(basis);
    debug_assert!(aprime.mul_int(basis.matrix())?.is_zero());
    Ok(basis)
}

/// Trapdoor for `F = [A | A*R + B]` from a trapdoor for `B`.
///
/// Column order: `[-R s_i; s_i]` for each basis column of `S_B`, then
/// `[e_j - R w_j; w_j]` with `B w_j = -a_j` for each column of `A`. The
/// Gram-Schmidt norm satisfies `gs_norm(S_F) <= (||R|| + 1) * gs_norm(S_B)`
/// with the spectral norm of `R`.
pub fn basis_ext_abb(
    a: &ZqMatrix,
    b: &ZqMatrix,
    r: &IntMatrix,
    s_b: &IntBasis,
) -> Result<IntBasis> {
    let (p, w) = (a.cols(), b.cols());
    if b.rows() != a.rows() || r.rows() != p || r.cols() != w {
        return Err(LrsError::DimensionMismatch("basis_ext_abb shapes".into()));
    }
    if b.row_rank() < b.rows() {
        return Err(LrsError::BlockNotSpanning);
    }
    s_b.check_trapdoor(b)?;
    let q = a.modulus();
    let dim = p + w;
    let mut s = IntMatrix::zero(dim, dim);
    for c in 0..w {
        let sc = s_b.matrix().column(c);
        for i in 0..p {
            let mut acc: i128 = 0;
            for j in 0..w {
                acc += r.get(i, j) * sc[j];
            }
            s.set(i, c, -acc);
        }
        for (j, &v) in sc.iter().enumerate() {
            s.set(p + j, c, v);
        }
    }
    for j in 0..p {
        let aj = a.column_vec(j);
        let neg: Vec<u64> = aj.entries().iter().map(|&e| (q - e) % q).collect();
        let wj = solve_particular(b, &ZqVector::from_entries(q, neg))?;
        let col = w + j;
        s.set(j, col, 1);
        for i in 0..p {
            let mut acc: i128 = 0;
            for l in 0..w {
                acc += r.get(i, l) * wj.get(l, 0);
            }
            let cur = s.get(i, col);
            s.set(i, col, cur - acc);
        }
        for l in 0..w {
            s.set(p + l, col, wj.get(l, 0));
        }
    }
    let f = ZqMatrix::hstack(&[a, &a.mul_int(r)?.add(b)?])?;
    let s = IntBasis::new(s);
    if !f.mul_int(s.matrix())?.is_zero() {
        return Err(LrsError::BadTrapdoor);
    }
    Ok(s)
}

/// Spectral norm by deterministic power iteration on `R^T R`.
pub fn spectral_norm(r: &IntMatrix) -> f64 {
    let (rows, cols) = (r.rows(), r.cols());
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let mut v = vec![1.0f64; cols];
    let mut est = 0.0;
    for _ in 0..200 {
        // u = R v, v' = R^T u.
        let mut u = vec![0.0f64; rows];
        for i in 0..rows {
            for j in 0..cols {
                u[i] += r.get(i, j) as f64 * v[j];
            }
        }
        let mut vn = vec![0.0f64; cols];
        for j in 0..cols {
            for i in 0..rows {
                vn[j] += r.get(i, j) as f64 * u[i];
            }
        }
        let norm = vn.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for x in vn.iter_mut() {
            *x /= norm;
        }
        let new_est = norm.sqrt();
        let done = (new_est - est).abs() <= 1e-9 * new_est.max(1.0);
        est = new_est;
        v = vn;
        if done {
            break;
        }
    }
    est
}
