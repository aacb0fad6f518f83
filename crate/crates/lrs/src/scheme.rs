//! The ring signature: parameter setup, key generation, signing,
//! verification, and the claim-explanation operation that lets any ring
//! member produce signing randomness attributing an existing signature to
//! themselves.
//!
//! Signing targets the concatenated matrix
//! `F' = [A^(1) | A_b^(1) - A_C^(1) | ... | A^(N) | A_b^(N) - A_C^(N)]`
//! where `A_C^(i)` is the homomorphic evaluation of the PRF circuit over the
//! member's key-encoding matrices. A signature is a short nonzero integer
//! vector in the kernel of `F'` mod q for one of the two PRF output bits.
//! Because the kernel does not depend on who signed, any member holding a
//! trapdoor for their own block can re-derive randomness that yields the
//! same vector, which is the unclaimability mechanism exercised by
//! [`explain_sign`].

use sha2::{Digest, Sha256};

use crate::error::{LrsError, Result};
use crate::gauss::CosetSampler;
use crate::prf::{prf_eval, toy_prf, PrfSpec};
use crate::tape::{RandomTape, RecordingTape, WordSource};
use crate::trapdoor::{
    basis_ext, basis_ext_abb, basis_rand_with, gadget, gadget_bits, trap_gen, trap_quality_bound,
};
use crate::zq::{gs_norm_f64, next_prime, IntBasis, IntMatrix, ZqMatrix, ZqVector};

/// Largest ring size the presets provision Gaussian widths for.
pub const PROVISIONED_RING_MAX: usize = 5;

/// Key and message bit lengths used by the shipped presets.
pub const PRESET_KEY_BITS: usize = 4;
pub const PRESET_MSG_BITS: usize = 4;

/// Public parameters shared by every party.
#[derive(Debug, Clone, PartialEq)]
pub struct PublicParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub t: usize,
    pub q: u64,
    pub sigma: f64,
    pub sigma_prime: f64,
    pub omega_const: f64,
    pub tau: f64,
    pub prf: PrfSpec,
    pub preset: String,
    pub toy: bool,
    pub setup_commitment: [u8; 32],
}

impl PublicParams {
    /// Smoothing-style width multiplier applied to Gram-Schmidt norms before
    /// they are compared against sigma; grows with the largest provisioned
    /// signing dimension `2 * PROVISIONED_RING_MAX * m`.
    pub fn omega_factor(&self) -> f64 {
        let dim = 2.0 * PROVISIONED_RING_MAX as f64 * self.m as f64;
        self.omega_const * dim.log2().sqrt()
    }

    /// True when the parameters are sized for actual execution rather than
    /// asymptotic reporting.
    pub fn executable(&self) -> bool {
        self.m >= 2 * self.n * gadget_bits(self.q) && self.sigma_prime.is_finite()
    }
}

/// Parameter preset selector for [`setup`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// Small executable parameters: `q` the smallest prime at least `n^4`,
    /// `m = 2n ceil(log2 q) + ceil(log2 q)`, and Gaussian widths sized from
    /// the measured trapdoor quality rather than the asymptotic growth terms.
    Toy,
    /// The asymptotic relations taken literally (`m = 6 n^{1+delta}` and the
    /// circuit-depth-driven sigma growth). Produces parameters for reporting
    /// only; the widths are far beyond what fixed-width arithmetic executes.
    PaperAsymptotic { delta: f64 },
}

/// Derives public parameters for security parameter `n` under the chosen
/// preset. Deterministic; the setup tape is only committed to, not consumed.
pub fn setup(n: usize, preset: Preset, tape: &RandomTape) -> Result<PublicParams> {
    if n < 2 {
        return Err(LrsError::UnsatisfiableParams(format!(
            "n = {n} is below the minimum of 2"
        )));
    }
    let (k, t) = (PRESET_KEY_BITS, PRESET_MSG_BITS);
    // One masking round per input so the AND pairs rotate through key-message
    // cross terms; PRF bit agreement between two keys then varies with the
    // message instead of being a fixed offset.
    let prf = toy_prf(k, t, k + t);
    let q = next_prime((n as u64).pow(4));
    let omega_const = 1.0;
    let tau = 6.0;
    match preset {
        Preset::Toy => {
            let kbits = gadget_bits(q);
            let m = 2 * n * kbits + kbits;
            let dim = 2.0 * PROVISIONED_RING_MAX as f64 * m as f64;
            let omega1 = omega_const * dim.log2().sqrt();
            // sigma must cover the signer's extended trapdoor quality and be
            // large enough that the randomized canonical basis (entries
            // bounded by q) stays within sigma * sqrt(m') for the smallest
            // provisioned ring, N = 2.
            let root_n1 = ((n + 1) as f64).sqrt();
            let sigma = 1.05
                * f64::max(
                    trap_quality_bound(n, q) * omega1,
                    q as f64 * root_n1 / (4.0 * m as f64).sqrt(),
                );
            let sigma_prime = f64::max(1.05 * q as f64 * root_n1 * omega1, sigma);
            Ok(PublicParams {
                n,
                m,
                k,
                t,
                q,
                sigma,
                sigma_prime,
                omega_const,
                tau,
                prf,
                preset: "toy".into(),
                toy: true,
                setup_commitment: tape.commitment(),
            })
        }
        Preset::PaperAsymptotic { delta } => {
            if delta <= 0.0 {
                return Err(LrsError::UnsatisfiableParams(format!(
                    "delta = {delta} must be positive"
                )));
            }
            let m = (6.0 * (n as f64).powf(1.0 + delta)).round() as usize;
            let ell = (k + t) as f64;
            let c = prf.circuit().depth() as f64 / ell.log2();
            let growth = ell.powf(2.0 * c);
            let dim = PROVISIONED_RING_MAX as f64 * m as f64;
            let omega1 = omega_const * dim.log2().sqrt();
            let sigma = growth * (m as f64).powf(1.5) * omega1;
            let sigma_prime =
                (PROVISIONED_RING_MAX as f64).sqrt() * growth * (m as f64).powi(2) * omega1 * omega1;
            Ok(PublicParams {
                n,
                m,
                k,
                t,
                q,
                sigma,
                sigma_prime,
                omega_const,
                tau,
                prf,
                preset: "paper-asymptotic".into(),
                toy: false,
                setup_commitment: tape.commitment(),
            })
        }
    }
}

/// A ring member's public key.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationKey {
    pub a: ZqMatrix,
    pub a0: ZqMatrix,
    pub a1: ZqMatrix,
    pub b: Vec<ZqMatrix>,
    pub c0: ZqMatrix,
    pub c1: ZqMatrix,
    pub fingerprint: [u8; 32],
}

impl VerificationKey {
    /// Digest over the serialized key content; binds the signing key to its
    /// public key and identifies members inside a ring.
    pub fn compute_fingerprint(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"LRS-vk");
        h.update((self.a.rows() as u64).to_le_bytes());
        h.update((self.a.cols() as u64).to_le_bytes());
        h.update(self.a.modulus().to_le_bytes());
        h.update((self.b.len() as u64).to_le_bytes());
        for mat in self.matrices() {
            for &e in mat.entries() {
                h.update(e.to_le_bytes());
            }
        }
        h.finalize().into()
    }

    /// All key matrices in serialization order.
    pub fn matrices(&self) -> Vec<&ZqMatrix> {
        let mut out = vec![&self.a, &self.a0, &self.a1];
        out.extend(self.b.iter());
        out.push(&self.c0);
        out.push(&self.c1);
        out
    }
}

/// A ring member's secret key: the trapdoor for `A` and the PRF key,
/// bound to the public key by fingerprint.
#[derive(Debug, Clone)]
pub struct SigningKey {
    pub s: IntBasis,
    pub prf_key: Vec<bool>,
    pub vk_fingerprint: [u8; 32],
}

/// Generates a key pair. Tape consumption order is normative: trapdoor
/// generation first, then `k` PRF key bits, then the uniform matrices
/// `A0, A1, C0, C1, B_1 ... B_k` in that exact order.
pub fn keygen(pp: &PublicParams, tape: &mut impl WordSource) -> Result<(VerificationKey, SigningKey)> {
    let (n, m, q) = (pp.n, pp.m, pp.q);
    let td = trap_gen(n, m, q, tape)?;
    let prf_key = tape.next_bits(pp.k);
    let a0 = ZqMatrix::uniform(n, m, q, tape);
    let a1 = ZqMatrix::uniform(n, m, q, tape);
    let c0 = ZqMatrix::uniform(n, m, q, tape);
    let c1 = ZqMatrix::uniform(n, m, q, tape);
    let b = (0..pp.k).map(|_| ZqMatrix::uniform(n, m, q, tape)).collect();
    let mut vk = VerificationKey {
        a: td.a,
        a0,
        a1,
        b,
        c0,
        c1,
        fingerprint: [0; 32],
    };
    vk.fingerprint = vk.compute_fingerprint();
    let sk = SigningKey {
        s: td.s,
        prf_key,
        vk_fingerprint: vk.fingerprint,
    };
    Ok((vk, sk))
}

/// An ordered list of distinct verification keys.
#[derive(Debug, Clone)]
pub struct Ring {
    keys: Vec<VerificationKey>,
}

impl Ring {
    /// Validates ring invariants: at least two members, matching shapes,
    /// distinct fingerprints, and full row rank for every `A`.
    pub fn new(keys: Vec<VerificationKey>) -> Result<Self> {
        let err = |detail: String| LrsError::Format {
            kind: "ring",
            detail,
        };
        if keys.len() < 2 {
            return Err(err(format!("ring needs at least 2 members, got {}", keys.len())));
        }
        let first = &keys[0].a;
        for (i, vk) in keys.iter().enumerate() {
            if vk.fingerprint != vk.compute_fingerprint() {
                return Err(err(format!("member {i} fingerprint does not match content")));
            }
            for mat in vk.matrices() {
                if mat.rows() != first.rows()
                    || mat.cols() != first.cols()
                    || mat.modulus() != first.modulus()
                {
                    return Err(err(format!("member {i} has inconsistent matrix shapes")));
                }
            }
            if vk.a.row_rank() < vk.a.rows() {
                return Err(LrsError::BlockNotSpanning);
            }
            for other in &keys[..i] {
                if other.fingerprint == vk.fingerprint {
                    return Err(err(format!("member {i} duplicates an earlier fingerprint")));
                }
            }
        }
        Ok(Ring { keys })
    }

    pub fn keys(&self) -> &[VerificationKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn position_of(&self, fingerprint: &[u8; 32]) -> Result<usize> {
        let mut found = None;
        for (i, vk) in self.keys.iter().enumerate() {
            if &vk.fingerprint == fingerprint {
                if found.is_some() {
                    return Err(LrsError::AmbiguousSigner);
                }
                found = Some(i);
            }
        }
        found.ok_or(LrsError::SignerNotInRing)
    }
}

/// A ring signature: a short integer vector of length `2 N m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub x: IntMatrix,
    pub ring_size: usize,
}

impl Signature {
    pub fn norm(&self) -> f64 {
        self.x.column_l2()
    }
}

/// The concatenated verification matrix
/// `F_b = [A^(i) | A_b^(i) - A_C^(i)]` over all ring members, where
/// `A_C^(i)` is the public homomorphic evaluation of the PRF circuit on the
/// member's `B` matrices (key wires) and the message-selected `C` matrices.
pub fn derive_f(pp: &PublicParams, ring: &Ring, msg: &[bool], b: bool) -> Result<ZqMatrix> {
    if msg.len() != pp.t {
        return Err(LrsError::ArityMismatch {
            expected: pp.t,
            got: msg.len(),
        });
    }
    let gp = gadget(pp.n, pp.q, pp.m)?;
    let mut blocks = Vec::with_capacity(2 * ring.len());
    for vk in ring.keys() {
        let mut wires: Vec<ZqMatrix> = vk.b.clone();
        for &bit in msg {
            wires.push(if bit { vk.c1.clone() } else { vk.c0.clone() });
        }
        let a_c = pp.prf.circuit().eval_public(&gp, &wires)?;
        let key_side = if b { &vk.a1 } else { &vk.a0 };
        blocks.push(vk.a.clone());
        blocks.push(key_side.sub(&a_c)?);
    }
    let refs: Vec<&ZqMatrix> = blocks.iter().collect();
    ZqMatrix::hstack(&refs)
}

/// Core of [`sign`] and [`sign_simulated`]: extend the member trapdoor to
/// all of `f`, randomize it, and draw the signature from the kernel coset.
fn sign_with_trapdoor(
    pp: &PublicParams,
    f: &ZqMatrix,
    block: std::ops::Range<usize>,
    trapdoor: &IntBasis,
    ring_size: usize,
    tape: &mut impl WordSource,
) -> Result<Signature> {
    let omega = pp.omega_factor();
    let s_ext = basis_ext(f, block, trapdoor)?;
    // The trapdoor quality bound is sized into pp.sigma for honestly
    // generated keys; the simulation path can exceed it, so widen locally.
    let sigma = f64::max(pp.sigma, 1.05 * gs_norm_f64(s_ext.matrix())? * omega);
    let s_f = basis_rand_with(f, &s_ext, sigma, pp.tau, omega, tape)?;
    let sampler = CosetSampler::new(f, &s_f, pp.sigma_prime, pp.tau, omega)?;
    let zero = ZqVector::zero(pp.n, pp.q);
    let x = sampler.sample(&zero, tape)?;
    Ok(Signature { x, ring_size })
}

/// Signs `msg` for the ring, locating the signer by the signing key's
/// verification-key fingerprint. Tape consumption order is normative: all
/// basis-randomization words first, then exactly `2 N m` sampler words.
pub fn sign(
    pp: &PublicParams,
    msg: &[bool],
    ring: &Ring,
    sk: &SigningKey,
    tape: &mut impl WordSource,
) -> Result<Signature> {
    let idx = ring.position_of(&sk.vk_fingerprint)?;
    let b = prf_eval(&pp.prf, &sk.prf_key, msg)?;
    let f = derive_f(pp, ring, msg, !b)?;
    let block = idx * 2 * pp.m..idx * 2 * pp.m + pp.m;
    sign_with_trapdoor(pp, &f, block, &sk.s, ring.len(), tape)
}

/// Reason a signature was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    MessageLength,
    SignatureLength,
    NormBound,
    ZeroVector,
    RingEquation,
}

impl RejectReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::MessageLength => "message-length",
            RejectReason::SignatureLength => "signature-length",
            RejectReason::NormBound => "norm-bound",
            RejectReason::ZeroVector => "zero-vector",
            RejectReason::RingEquation => "ring-equation",
        }
    }
}

/// Verification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Verifies a signature. Total and pure: malformed input is a reject with a
/// reason code, never an error.
pub fn verify(pp: &PublicParams, msg: &[bool], ring: &Ring, sig: &Signature) -> Verdict {
    if msg.len() != pp.t {
        return Verdict::Reject(RejectReason::MessageLength);
    }
    let len = 2 * ring.len() * pp.m;
    if sig.x.rows() != len || sig.x.cols() != 1 || sig.ring_size != ring.len() {
        return Verdict::Reject(RejectReason::SignatureLength);
    }
    if sig.norm() > pp.sigma_prime * (len as f64).sqrt() {
        return Verdict::Reject(RejectReason::NormBound);
    }
    if sig.x.is_zero() {
        return Verdict::Reject(RejectReason::ZeroVector);
    }
    for b in [false, true] {
        let f = match derive_f(pp, ring, msg, b) {
            Ok(f) => f,
            Err(_) => return Verdict::Reject(RejectReason::RingEquation),
        };
        match f.mul_int(&sig.x) {
            Ok(prod) if prod.is_zero() => return Verdict::Accept,
            _ => {}
        }
    }
    Verdict::Reject(RejectReason::RingEquation)
}

/// An explained signing tape: the fresh basis-randomization segment followed
/// by the explained sampler words. Feeding [`Self::tape`] back into [`sign`]
/// with the explaining member's key reproduces the signature bit for bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigningTape {
    pub basis_word_count: usize,
    pub words: Vec<u64>,
}

impl SigningTape {
    pub fn tape(&self) -> RandomTape {
        RandomTape::from_words(self.words.clone())
    }

    /// Tape file image; the header field records the basis segment length.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&(self.basis_word_count as u64).to_le_bytes());
        RandomTape::from_words_with_seed(self.words.clone(), seed).to_bytes()
    }
}

/// Produces signing randomness that attributes `sig` to `sk_other`'s ring
/// member: fresh basis-randomization words are drawn (and recorded) from the
/// fresh tape, then each 1-D Gaussian draw of the sampler is explained so
/// that replaying the combined tape through [`sign`] lands on `sig` exactly.
///
/// Fails with [`LrsError::PrfBitMismatch`] when `sk_other`'s PRF bit selects
/// the verification matrix that does not annihilate the signature.
pub fn explain_sign(
    pp: &PublicParams,
    msg: &[bool],
    ring: &Ring,
    sig: &Signature,
    sk_other: &SigningKey,
    fresh: &mut RandomTape,
) -> Result<SigningTape> {
    if !verify(pp, msg, ring, sig).accepted() {
        return Err(LrsError::Format {
            kind: "signature",
            detail: "cannot explain a signature that does not verify".into(),
        });
    }
    let idx = ring.position_of(&sk_other.vk_fingerprint)?;
    let b = prf_eval(&pp.prf, &sk_other.prf_key, msg)?;
    let f = derive_f(pp, ring, msg, !b)?;
    if !f.mul_int(&sig.x)?.is_zero() {
        return Err(LrsError::PrfBitMismatch);
    }
    let omega = pp.omega_factor();
    let block = idx * 2 * pp.m..idx * 2 * pp.m + pp.m;
    let s_ext = basis_ext(&f, block, &sk_other.s)?;
    let mut recorder = RecordingTape::new(fresh);
    let s_f = basis_rand_with(&f, &s_ext, pp.sigma, pp.tau, omega, &mut recorder)?;
    let basis_words = recorder.recorded;
    let sampler = CosetSampler::new(&f, &s_f, pp.sigma_prime, pp.tau, omega)?;
    let zero = ZqVector::zero(pp.n, pp.q);
    let sampler_words = sampler.explain(&sig.x, &zero, fresh)?;
    let basis_word_count = basis_words.len();
    let mut words = basis_words;
    words.extend_from_slice(&sampler_words);
    Ok(SigningTape {
        basis_word_count,
        words,
    })
}

/// Per-member secrets of the simulation key form `X = A R_X + bit * G`.
#[derive(Debug, Clone)]
pub struct SimSecrets {
    pub r_a0: IntMatrix,
    pub r_a1: IntMatrix,
    pub r_b: Vec<IntMatrix>,
    pub r_c0: IntMatrix,
    pub r_c1: IntMatrix,
}

fn sign_matrix(rows: usize, cols: usize, tape: &mut impl WordSource) -> IntMatrix {
    let mut r = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            r.set(i, j, if tape.next_below(2) == 0 { -1 } else { 1 });
        }
    }
    r
}

/// Test-harness key generation for the simulation signing path: every key
/// matrix is `A R + bit * G` with known sign-matrix `R`, the `B_j` encode
/// the bits of a global PRF key, and `C_0 / C_1` encode the constants 0 / 1.
pub fn keygen_simulated(
    pp: &PublicParams,
    global_key: &[bool],
    tape: &mut impl WordSource,
) -> Result<(VerificationKey, SimSecrets)> {
    if global_key.len() != pp.k {
        return Err(LrsError::ArityMismatch {
            expected: pp.k,
            got: global_key.len(),
        });
    }
    let (n, m, q) = (pp.n, pp.m, pp.q);
    let gp = gadget(n, q, m)?;
    let a = ZqMatrix::uniform(n, m, q, tape);
    let encode = |r: &IntMatrix, bit: bool| -> Result<ZqMatrix> {
        let mut e = a.mul_int(r)?;
        if bit {
            e = e.add(&gp.g)?;
        }
        Ok(e)
    };
    let r_a0 = sign_matrix(m, m, tape);
    let r_a1 = sign_matrix(m, m, tape);
    let r_c0 = sign_matrix(m, m, tape);
    let r_c1 = sign_matrix(m, m, tape);
    let r_b: Vec<IntMatrix> = (0..pp.k).map(|_| sign_matrix(m, m, tape)).collect();
    let a0 = encode(&r_a0, false)?;
    let a1 = encode(&r_a1, true)?;
    let c0 = encode(&r_c0, false)?;
    let c1 = encode(&r_c1, true)?;
    let mut b_mats = Vec::with_capacity(pp.k);
    for (r, &bit) in r_b.iter().zip(global_key) {
        b_mats.push(encode(r, bit)?);
    }
    let mut vk = VerificationKey {
        a,
        a0,
        a1,
        b: b_mats,
        c0,
        c1,
        fingerprint: [0; 32],
    };
    vk.fingerprint = vk.compute_fingerprint();
    let secrets = SimSecrets {
        r_a0,
        r_a1,
        r_b,
        r_c0,
        r_c1,
    };
    Ok((vk, secrets))
}

/// Signs through the simulator's gadget trapdoor instead of a real key:
/// tracks `R_C` through the PRF circuit, forms `Rbar = R_{1-b} - R_C` so the
/// signer's companion block equals `A Rbar + (1 - 2b) G`, and derives its
/// trapdoor from the public gadget basis. Everything after the block
/// trapdoor matches the honest signing path.
pub fn sign_simulated(
    pp: &PublicParams,
    msg: &[bool],
    ring: &Ring,
    secrets: &[SimSecrets],
    signer: usize,
    global_key: &[bool],
    tape: &mut impl WordSource,
) -> Result<Signature> {
    if secrets.len() != ring.len() || signer >= ring.len() {
        return Err(LrsError::SignerNotInRing);
    }
    let b = prf_eval(&pp.prf, global_key, msg)?;
    let f = derive_f(pp, ring, msg, !b)?;
    let gp = gadget(pp.n, pp.q, pp.m)?;
    let vk = &ring.keys()[signer];
    let sec = &secrets[signer];
    let mut rs: Vec<IntMatrix> = sec.r_b.clone();
    let mut bits: Vec<bool> = global_key.to_vec();
    for &bit in msg {
        rs.push(if bit { sec.r_c1.clone() } else { sec.r_c0.clone() });
        bits.push(bit);
    }
    let (r_c, b_c) = pp.prf.circuit().eval_track(&gp, &vk.a, &rs, &bits)?;
    if b_c != b {
        return Err(LrsError::PrfBitMismatch);
    }
    let r_key = if b { &sec.r_a0 } else { &sec.r_a1 };
    let r_bar = r_key.sub(&r_c)?;
    // The companion block is A*Rbar + G for b = 0 and A*Rbar - G for b = 1.
    let g_signed = if b {
        ZqMatrix::zero(pp.n, pp.m, pp.q).sub(&gp.g)?
    } else {
        gp.g.clone()
    };
    let s_block = basis_ext_abb(&vk.a, &g_signed, &r_bar, &gp.s_g)?;
    let block = signer * 2 * pp.m..(signer + 1) * 2 * pp.m;
    sign_with_trapdoor(pp, &f, block, &s_block, ring.len(), tape)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_pp(n: usize) -> PublicParams {
        let tape = RandomTape::from_seed([5; 32], "setup");
        setup(n, Preset::Toy, &tape).unwrap()
    }

    fn toy_ring(pp: &PublicParams, count: usize, seed: u8) -> (Ring, Vec<SigningKey>) {
        let mut tape = RandomTape::from_seed([seed; 32], "keygen");
        let mut vks = Vec::new();
        let mut sks = Vec::new();
        for _ in 0..count {
            let (vk, sk) = keygen(pp, &mut tape).unwrap();
            vks.push(vk);
            sks.push(sk);
        }
        (Ring::new(vks).unwrap(), sks)
    }

    #[test]
    fn setup_toy_formulas() {
        let pp = toy_pp(4);
        assert_eq!(pp.q, 257);
        assert_eq!(pp.m, 2 * 4 * 9 + 9);
        assert!(pp.sigma_prime >= pp.sigma);
        assert!(pp.toy);
        let pp2 = toy_pp(2);
        assert_eq!(pp2.q, 17);
        assert_eq!(pp2.m, 25);
    }

    #[test]
    fn setup_is_deterministic_and_validates() {
        let tape = RandomTape::from_seed([5; 32], "setup");
        assert_eq!(setup(4, Preset::Toy, &tape).unwrap(), toy_pp(4));
        assert!(setup(1, Preset::Toy, &tape).is_err());
        assert!(setup(4, Preset::PaperAsymptotic { delta: -0.5 }, &tape).is_err());
    }

    #[test]
    fn setup_asymptotic_m_formula() {
        let tape = RandomTape::from_seed([5; 32], "setup");
        let pp = setup(4, Preset::PaperAsymptotic { delta: 0.5 }, &tape).unwrap();
        assert_eq!(pp.m, 48);
        assert!(!pp.toy);
        assert!(!pp.executable());
        assert!(pp.sigma_prime >= pp.sigma);
    }

    #[test]
    fn keygen_is_deterministic_and_bound() {
        let pp = toy_pp(2);
        let mut t1 = RandomTape::from_seed([9; 32], "kg");
        let mut t2 = RandomTape::from_seed([9; 32], "kg");
        let (vk1, sk1) = keygen(&pp, &mut t1).unwrap();
        let (vk2, _) = keygen(&pp, &mut t2).unwrap();
        assert_eq!(vk1, vk2);
        assert_eq!(vk1.fingerprint, vk1.compute_fingerprint());
        sk1.s.check_trapdoor(&vk1.a).unwrap();
        assert_eq!(sk1.prf_key.len(), pp.k);
        assert_eq!(sk1.vk_fingerprint, vk1.fingerprint);
    }

    #[test]
    fn ring_rejects_duplicates_and_small_rings() {
        let pp = toy_pp(2);
        let (ring, _) = toy_ring(&pp, 2, 10);
        assert!(Ring::new(vec![ring.keys()[0].clone()]).is_err());
        assert!(Ring::new(vec![ring.keys()[0].clone(), ring.keys()[0].clone()]).is_err());
    }

    #[test]
    fn sign_verify_round_trip() {
        let pp = toy_pp(2);
        let (ring, sks) = toy_ring(&pp, 2, 11);
        let msg = vec![true, false, true, true];
        let mut tape = RandomTape::from_seed([12; 32], "sign");
        let sig = sign(&pp, &msg, &ring, &sks[0], &mut tape).unwrap();
        assert_eq!(sig.x.rows(), 2 * 2 * pp.m);
        assert!(verify(&pp, &msg, &ring, &sig).accepted());
        assert!(sig.norm() <= pp.sigma_prime * ((2 * 2 * pp.m) as f64).sqrt());
        // Deterministic replay.
        let mut tape2 = RandomTape::from_seed([12; 32], "sign");
        assert_eq!(sign(&pp, &msg, &ring, &sks[0], &mut tape2).unwrap(), sig);
    }

    #[test]
    fn verify_rejects_tampering_and_degenerates() {
        let pp = toy_pp(2);
        let (ring, sks) = toy_ring(&pp, 2, 13);
        let msg = vec![false, false, true, false];
        let mut tape = RandomTape::from_seed([14; 32], "sign");
        let sig = sign(&pp, &msg, &ring, &sks[1], &mut tape).unwrap();
        let mut wrong_msg = msg.clone();
        wrong_msg[2] = !wrong_msg[2];
        assert!(!verify(&pp, &wrong_msg, &ring, &sig).accepted());
        let mut bumped = sig.clone();
        bumped.x.set(0, 0, bumped.x.get(0, 0) + 1);
        assert!(!verify(&pp, &msg, &ring, &bumped).accepted());
        let zero = Signature {
            x: IntMatrix::zero(2 * 2 * pp.m, 1),
            ring_size: 2,
        };
        assert_eq!(
            verify(&pp, &msg, &ring, &zero),
            Verdict::Reject(RejectReason::ZeroVector)
        );
        let short = Signature {
            x: IntMatrix::zero(3, 1),
            ring_size: 2,
        };
        assert_eq!(
            verify(&pp, &msg, &ring, &short),
            Verdict::Reject(RejectReason::SignatureLength)
        );
        assert_eq!(
            verify(&pp, &[true], &ring, &sig),
            Verdict::Reject(RejectReason::MessageLength)
        );
    }

    #[test]
    fn signer_must_be_in_ring() {
        let pp = toy_pp(2);
        let (ring, _) = toy_ring(&pp, 2, 15);
        let (_, outsider) = {
            let mut t = RandomTape::from_seed([99; 32], "kg-out");
            keygen(&pp, &mut t).unwrap()
        };
        let mut tape = RandomTape::from_seed([16; 32], "sign");
        assert!(matches!(
            sign(&pp, &[false; 4], &ring, &outsider, &mut tape),
            Err(LrsError::SignerNotInRing)
        ));
    }

    /// First message on which both members' PRF bits agree; explanation
    /// across a bit disagreement is a contractual PrfBitMismatch.
    fn agreeing_message(pp: &PublicParams, sks: &[SigningKey]) -> Vec<bool> {
        for v in 0..1u64 << pp.t {
            let msg: Vec<bool> = (0..pp.t).map(|i| v >> i & 1 == 1).collect();
            let bits: Vec<bool> = sks
                .iter()
                .map(|sk| prf_eval(&pp.prf, &sk.prf_key, &msg).unwrap())
                .collect();
            if bits.iter().all(|&b| b == bits[0]) {
                return msg;
            }
        }
        panic!("no message with agreeing PRF bits");
    }

    #[test]
    fn explain_replays_for_other_member() {
        let pp = toy_pp(2);
        let (ring, sks) = toy_ring(&pp, 2, 17);
        let msg = agreeing_message(&pp, &sks);
        let mut tape = RandomTape::from_seed([18; 32], "sign");
        let sig = sign(&pp, &msg, &ring, &sks[0], &mut tape).unwrap();
        let mut fresh = RandomTape::from_seed([19; 32], "explain");
        let gamma = explain_sign(&pp, &msg, &ring, &sig, &sks[1], &mut fresh).unwrap();
        assert_eq!(
            gamma.words.len(),
            gamma.basis_word_count + 2 * 2 * pp.m
        );
        let mut replay = gamma.tape();
        let resigned = sign(&pp, &msg, &ring, &sks[1], &mut replay).unwrap();
        assert_eq!(resigned, sig);
    }

    #[test]
    fn explain_self_replays_too() {
        let pp = toy_pp(2);
        let (ring, sks) = toy_ring(&pp, 2, 20);
        let msg = vec![false, true, false, true];
        let mut tape = RandomTape::from_seed([21; 32], "sign");
        let sig = sign(&pp, &msg, &ring, &sks[1], &mut tape).unwrap();
        let mut fresh = RandomTape::from_seed([22; 32], "explain");
        let gamma = explain_sign(&pp, &msg, &ring, &sig, &sks[1], &mut fresh).unwrap();
        let mut replay = gamma.tape();
        assert_eq!(sign(&pp, &msg, &ring, &sks[1], &mut replay).unwrap(), sig);
    }

    #[test]
    fn explain_rejects_invalid_signature() {
        let pp = toy_pp(2);
        let (ring, sks) = toy_ring(&pp, 2, 23);
        let msg = vec![false; 4];
        let bogus = Signature {
            x: IntMatrix::zero(2 * 2 * pp.m, 1),
            ring_size: 2,
        };
        let mut fresh = RandomTape::from_seed([24; 32], "explain");
        assert!(explain_sign(&pp, &msg, &ring, &bogus, &sks[0], &mut fresh).is_err());
    }

    #[test]
    fn signing_tape_round_trips() {
        let st = SigningTape {
            basis_word_count: 3,
            words: vec![1, 2, 3, 4, 5],
        };
        let bytes = st.to_bytes();
        let tape = RandomTape::from_bytes(&bytes).unwrap();
        assert_eq!(
            u64::from_le_bytes(tape.seed()[..8].try_into().unwrap()),
            3
        );
        let mut t = tape;
        assert_eq!(t.next_word(), 1);
    }

    #[test]
    fn simulated_signature_verifies() {
        // The simulation path inherits the tracked R_C of the PRF circuit in
        // its trapdoor quality, so it runs with the shallow harness circuit.
        let mut pp = toy_pp(2);
        pp.prf = crate::prf::shallow_prf(pp.k, pp.t);
        let global_key = vec![true, false, true, true];
        let mut tape = RandomTape::from_seed([25; 32], "kg-sim");
        let mut vks = Vec::new();
        let mut secrets = Vec::new();
        for _ in 0..2 {
            let (vk, sec) = keygen_simulated(&pp, &global_key, &mut tape).unwrap();
            vks.push(vk);
            secrets.push(sec);
        }
        let ring = Ring::new(vks).unwrap();
        let msg = vec![true, false, false, true];
        let mut stape = RandomTape::from_seed([26; 32], "sign-sim");
        let sig = sign_simulated(&pp, &msg, &ring, &secrets, 0, &global_key, &mut stape).unwrap();
        assert!(verify(&pp, &msg, &ring, &sig).accepted());
    }
}
