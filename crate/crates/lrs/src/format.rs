//! File formats for every artifact the command-line tool reads and writes:
//! public parameters, verification and signing keys, rings, and signatures.
//! All integers are little-endian; every format opens with a short magic
//! string so files are self-identifying.

use crate::error::{LrsError, Result};
use crate::prf::PrfSpec;
use crate::scheme::{PublicParams, Ring, Signature, SigningKey, VerificationKey};
use crate::trapdoor::gadget_bits;
use crate::zq::{is_prime, IntBasis, IntMatrix, ZqMatrix};

pub const PARAMS_MAGIC: &[u8; 7] = b"LRSPAR1";
pub const VK_MAGIC: &[u8; 7] = b"LRSVK01";
pub const SK_MAGIC: &[u8; 7] = b"LRSSK01";
pub const RING_MAGIC: &[u8; 8] = b"LRSRING1";
pub const SIG_MAGIC: &[u8; 7] = b"LRSSIG1";

fn fmt_err(kind: &'static str, detail: impl Into<String>) -> LrsError {
    LrsError::Format {
        kind,
        detail: detail.into(),
    }
}

/// Cursor over a byte slice with bounds-checked little-endian reads.
struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
    kind: &'static str,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], kind: &'static str) -> Self {
        Reader { bytes, at: 0, kind }
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.at + len > self.bytes.len() {
            return Err(fmt_err(self.kind, "truncated file"));
        }
        let out = &self.bytes[self.at..self.at + len];
        self.at += len;
        Ok(out)
    }

    fn magic(&mut self, expected: &[u8]) -> Result<()> {
        if self.take(expected.len())? != expected {
            return Err(fmt_err(self.kind, "bad magic"));
        }
        Ok(())
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| fmt_err(self.kind, "count out of range"))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn digest(&mut self) -> Result<[u8; 32]> {
        Ok(self.take(32)?.try_into().unwrap())
    }

    fn finish(&self) -> Result<()> {
        if self.at != self.bytes.len() {
            return Err(fmt_err(self.kind, "trailing bytes"));
        }
        Ok(())
    }
}

/// Bytes per matrix entry: `ceil(log2 q)` bits rounded up to whole bytes.
pub fn entry_width(q: u64) -> usize {
    gadget_bits(q).div_ceil(8)
}

fn pack_matrix(m: &ZqMatrix, out: &mut Vec<u8>) {
    let width = entry_width(m.modulus());
    for &e in m.entries() {
        out.extend_from_slice(&e.to_le_bytes()[..width]);
    }
}

fn unpack_matrix(
    r: &mut Reader,
    rows: usize,
    cols: usize,
    q: u64,
) -> Result<ZqMatrix> {
    let width = entry_width(q);
    let raw = r.take(rows * cols * width)?;
    let mut entries = Vec::with_capacity(rows * cols);
    for chunk in raw.chunks_exact(width) {
        let mut buf = [0u8; 8];
        buf[..width].copy_from_slice(chunk);
        let e = u64::from_le_bytes(buf);
        if e >= q {
            return Err(fmt_err(r.kind, format!("entry {e} not reduced mod {q}")));
        }
        entries.push(e);
    }
    Ok(ZqMatrix::from_entries(rows, cols, q, entries))
}

fn pack_bits(bits: &[bool], out: &mut Vec<u8>) {
    let mut byte = 0u8;
    for (i, &b) in bits.iter().enumerate() {
        if b {
            byte |= 1 << (i % 8);
        }
        if i % 8 == 7 {
            out.push(byte);
            byte = 0;
        }
    }
    if bits.len() % 8 != 0 {
        out.push(byte);
    }
}

fn unpack_bits(r: &mut Reader, len: usize) -> Result<Vec<bool>> {
    let raw = r.take(len.div_ceil(8))?;
    let bits: Vec<bool> = (0..len).map(|i| raw[i / 8] >> (i % 8) & 1 == 1).collect();
    for i in len..raw.len() * 8 {
        if raw[i / 8] >> (i % 8) & 1 == 1 {
            return Err(fmt_err(r.kind, "nonzero padding bits"));
        }
    }
    Ok(bits)
}

/// Serializes public parameters: magic, the scalar fields in declared order,
/// the PRF circuit in its own embedded format followed by its name, then the
/// preset name, the toy flag, and the setup tape commitment.
pub fn params_to_bytes(pp: &PublicParams) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(PARAMS_MAGIC);
    for v in [pp.n as u64, pp.m as u64, pp.k as u64, pp.t as u64, pp.q] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in [pp.sigma, pp.sigma_prime, pp.omega_const, pp.tau] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&pp.prf.to_bytes());
    for s in [pp.prf.name(), pp.preset.as_str()] {
        out.extend_from_slice(&(s.len() as u32).to_le_bytes());
        out.extend_from_slice(s.as_bytes());
    }
    out.push(pp.toy as u8);
    out.extend_from_slice(&pp.setup_commitment);
    out
}

pub fn params_from_bytes(bytes: &[u8]) -> Result<PublicParams> {
    let mut r = Reader::new(bytes, "params");
    r.magic(PARAMS_MAGIC)?;
    let n = r.usize()?;
    let m = r.usize()?;
    let k = r.usize()?;
    let t = r.usize()?;
    let q = r.u64()?;
    let sigma = r.f64()?;
    let sigma_prime = r.f64()?;
    let omega_const = r.f64()?;
    let tau = r.f64()?;
    // The circuit block is self-delimiting: its header carries the gate count.
    let circ_start = r.at;
    r.take(7 + 4 + 4)?;
    let gates = r.u32()? as usize;
    r.take(8 * gates)?;
    let circ_bytes = &bytes[circ_start..r.at];
    let mut strings = Vec::new();
    for _ in 0..2 {
        let len = r.u32()? as usize;
        let raw = r.take(len)?;
        strings.push(
            String::from_utf8(raw.to_vec()).map_err(|_| fmt_err("params", "non-utf8 string"))?,
        );
    }
    let prf = PrfSpec::from_bytes(circ_bytes, &strings[0])?;
    let toy = match r.take(1)?[0] {
        0 => false,
        1 => true,
        v => return Err(fmt_err("params", format!("bad toy flag {v}"))),
    };
    let setup_commitment = r.digest()?;
    r.finish()?;
    if !is_prime(q) {
        return Err(fmt_err("params", format!("modulus {q} is not prime")));
    }
    if prf.key_len() != k || prf.msg_len() != t {
        return Err(fmt_err("params", "circuit arity disagrees with k, t"));
    }
    if sigma_prime < sigma || !(sigma > 0.0) || !(tau > 0.0) {
        return Err(fmt_err("params", "inconsistent gaussian widths"));
    }
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
        preset: strings[1].clone(),
        toy,
        setup_commitment,
    })
}

fn vk_record_bytes(vk: &VerificationKey, out: &mut Vec<u8>) {
    out.extend_from_slice(VK_MAGIC);
    for v in [vk.a.rows() as u64, vk.a.cols() as u64, vk.a.modulus()] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(vk.b.len() as u64).to_le_bytes());
    for mat in vk.matrices() {
        pack_matrix(mat, out);
    }
    out.extend_from_slice(&vk.fingerprint);
}

/// Serializes a verification key: magic, n, m, q, the count of `B` matrices,
/// then `A, A0, A1, B_1..B_k, C0, C1` packed at `ceil(log2 q)` bits rounded
/// up to whole bytes per entry, then the fingerprint.
pub fn vk_to_bytes(vk: &VerificationKey) -> Vec<u8> {
    let mut out = Vec::new();
    vk_record_bytes(vk, &mut out);
    out
}

fn vk_record_from(r: &mut Reader) -> Result<VerificationKey> {
    r.magic(VK_MAGIC)?;
    let n = r.usize()?;
    let m = r.usize()?;
    let q = r.u64()?;
    let k = r.usize()?;
    if n == 0 || m == 0 || !is_prime(q) {
        return Err(fmt_err(r.kind, "bad key header"));
    }
    let a = unpack_matrix(r, n, m, q)?;
    let a0 = unpack_matrix(r, n, m, q)?;
    let a1 = unpack_matrix(r, n, m, q)?;
    let b = (0..k)
        .map(|_| unpack_matrix(r, n, m, q))
        .collect::<Result<Vec<_>>>()?;
    let c0 = unpack_matrix(r, n, m, q)?;
    let c1 = unpack_matrix(r, n, m, q)?;
    let fingerprint = r.digest()?;
    let vk = VerificationKey {
        a,
        a0,
        a1,
        b,
        c0,
        c1,
        fingerprint,
    };
    if vk.compute_fingerprint() != fingerprint {
        return Err(fmt_err(r.kind, "fingerprint does not match content"));
    }
    Ok(vk)
}

pub fn vk_from_bytes(bytes: &[u8]) -> Result<VerificationKey> {
    let mut r = Reader::new(bytes, "vk");
    let vk = vk_record_from(&mut r)?;
    r.finish()?;
    Ok(vk)
}

/// Serializes a signing key: magic, the trapdoor dimension and PRF key
/// length, the trapdoor entries as signed 64-bit values, the packed PRF key
/// bits, and the bound verification key fingerprint.
pub fn sk_to_bytes(sk: &SigningKey) -> Result<Vec<u8>> {
    let m = sk.s.dim();
    let mut out = Vec::new();
    out.extend_from_slice(SK_MAGIC);
    out.extend_from_slice(&(m as u64).to_le_bytes());
    out.extend_from_slice(&(sk.prf_key.len() as u64).to_le_bytes());
    for &e in sk.s.matrix().entries() {
        let v = i64::try_from(e).map_err(|_| LrsError::Overflow("trapdoor entry exceeds 64 bits"))?;
        out.extend_from_slice(&v.to_le_bytes());
    }
    pack_bits(&sk.prf_key, &mut out);
    out.extend_from_slice(&sk.vk_fingerprint);
    Ok(out)
}

pub fn sk_from_bytes(bytes: &[u8]) -> Result<SigningKey> {
    let mut r = Reader::new(bytes, "sk");
    r.magic(SK_MAGIC)?;
    let m = r.usize()?;
    let k = r.usize()?;
    let mut s = IntMatrix::zero(m, m);
    for i in 0..m {
        for j in 0..m {
            s.set(i, j, r.i64()? as i128);
        }
    }
    let prf_key = unpack_bits(&mut r, k)?;
    let vk_fingerprint = r.digest()?;
    r.finish()?;
    Ok(SigningKey {
        s: IntBasis::new(s),
        prf_key,
        vk_fingerprint,
    })
}

/// Serializes a ring: magic, member count, then the members' verification
/// key records in ring order.
pub fn ring_to_bytes(ring: &Ring) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(RING_MAGIC);
    out.extend_from_slice(&(ring.len() as u64).to_le_bytes());
    for vk in ring.keys() {
        vk_record_bytes(vk, &mut out);
    }
    out
}

pub fn ring_from_bytes(bytes: &[u8]) -> Result<Ring> {
    let mut r = Reader::new(bytes, "ring");
    r.magic(RING_MAGIC)?;
    let count = r.usize()?;
    let keys = (0..count)
        .map(|_| vk_record_from(&mut r))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ring::new(keys)
}

/// Serializes a signature: magic, ring size N, block width m, then the
/// `2 N m` vector entries as signed 64-bit values.
pub fn sig_to_bytes(sig: &Signature, m: usize) -> Result<Vec<u8>> {
    if sig.x.rows() != 2 * sig.ring_size * m || sig.x.cols() != 1 {
        return Err(fmt_err("signature", "vector length disagrees with N and m"));
    }
    let mut out = Vec::new();
    out.extend_from_slice(SIG_MAGIC);
    out.extend_from_slice(&(sig.ring_size as u64).to_le_bytes());
    out.extend_from_slice(&(m as u64).to_le_bytes());
    for &e in sig.x.entries() {
        let v =
            i64::try_from(e).map_err(|_| LrsError::Overflow("signature entry exceeds 64 bits"))?;
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn sig_from_bytes(bytes: &[u8]) -> Result<Signature> {
    let mut r = Reader::new(bytes, "signature");
    r.magic(SIG_MAGIC)?;
    let ring_size = r.usize()?;
    let m = r.usize()?;
    let len = 2 * ring_size * m;
    let mut x = IntMatrix::zero(len, 1);
    for i in 0..len {
        x.set(i, 0, r.i64()? as i128);
    }
    r.finish()?;
    Ok(Signature { x, ring_size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{keygen, setup, sign, Preset, Ring};
    use crate::tape::RandomTape;

    fn fixture() -> (PublicParams, Ring, Vec<SigningKey>) {
        let tape = RandomTape::from_seed([5; 32], "setup");
        let pp = setup(2, Preset::Toy, &tape).unwrap();
        let mut kg = RandomTape::from_seed([6; 32], "keygen");
        let mut vks = Vec::new();
        let mut sks = Vec::new();
        for _ in 0..2 {
            let (vk, sk) = keygen(&pp, &mut kg).unwrap();
            vks.push(vk);
            sks.push(sk);
        }
        (pp, Ring::new(vks).unwrap(), sks)
    }

    #[test]
    fn params_round_trip() {
        let (pp, _, _) = fixture();
        let bytes = params_to_bytes(&pp);
        assert_eq!(&bytes[..7], PARAMS_MAGIC);
        assert_eq!(params_from_bytes(&bytes).unwrap(), pp);
        // Determinism.
        assert_eq!(bytes, params_to_bytes(&pp));
    }

    #[test]
    fn params_rejects_corruption() {
        let (pp, _, _) = fixture();
        let mut bytes = params_to_bytes(&pp);
        bytes[0] = b'X';
        assert!(params_from_bytes(&bytes).is_err());
        let mut truncated = params_to_bytes(&pp);
        truncated.pop();
        assert!(params_from_bytes(&truncated).is_err());
    }

    #[test]
    fn vk_round_trip_and_fingerprint_guard() {
        let (_, ring, _) = fixture();
        let vk = &ring.keys()[0];
        let bytes = vk_to_bytes(vk);
        assert_eq!(&vk_from_bytes(&bytes).unwrap(), vk);
        // Flipping a matrix byte breaks the fingerprint binding.
        let mut bad = bytes.clone();
        bad[40] ^= 1;
        assert!(vk_from_bytes(&bad).is_err());
    }

    #[test]
    fn sk_round_trip() {
        let (_, _, sks) = fixture();
        let bytes = sk_to_bytes(&sks[0]).unwrap();
        let back = sk_from_bytes(&bytes).unwrap();
        assert_eq!(back.s.matrix(), sks[0].s.matrix());
        assert_eq!(back.prf_key, sks[0].prf_key);
        assert_eq!(back.vk_fingerprint, sks[0].vk_fingerprint);
    }

    #[test]
    fn ring_round_trip() {
        let (_, ring, _) = fixture();
        let bytes = ring_to_bytes(&ring);
        let back = ring_from_bytes(&bytes).unwrap();
        assert_eq!(back.len(), ring.len());
        for (a, b) in back.keys().iter().zip(ring.keys()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sig_round_trip_and_size_shape() {
        let (pp, ring, sks) = fixture();
        let msg = vec![true, false, false, true];
        let mut tape = RandomTape::from_seed([7; 32], "sign");
        let sig = sign(&pp, &msg, &ring, &sks[0], &mut tape).unwrap();
        let bytes = sig_to_bytes(&sig, pp.m).unwrap();
        assert_eq!(bytes.len(), 7 + 8 + 8 + 8 * 2 * ring.len() * pp.m);
        assert_eq!(sig_from_bytes(&bytes).unwrap(), sig);
    }
}
