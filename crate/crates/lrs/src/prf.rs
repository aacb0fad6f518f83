//! Keyed single-bit PRF presented as a NAND circuit over key and message
//! bits, key wires first. The construction here is a toy: a balanced XOR
//! tree over all inputs followed by nonlinear masking rounds. It exists to
//! exercise the homomorphic evaluation pipeline with the right interface and
//! carries no cryptographic strength claim.

use crate::error::{LrsError, Result};
use crate::homeval::NandCircuit;

const CIRCUIT_MAGIC: &[u8; 7] = b"LRSCIR1";

/// A keyed Boolean function and its circuit form over `key || msg` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrfSpec {
    key_len: usize,
    msg_len: usize,
    circuit: NandCircuit,
    name: String,
}

impl PrfSpec {
    pub fn new(key_len: usize, msg_len: usize, circuit: NandCircuit, name: &str) -> Result<Self> {
        if circuit.inputs() != key_len + msg_len {
            return Err(LrsError::ArityMismatch {
                expected: key_len + msg_len,
                got: circuit.inputs(),
            });
        }
        Ok(PrfSpec {
            key_len,
            msg_len,
            circuit,
            name: name.to_string(),
        })
    }

    pub fn key_len(&self) -> usize {
        self.key_len
    }

    pub fn msg_len(&self) -> usize {
        self.msg_len
    }

    pub fn circuit(&self) -> &NandCircuit {
        &self.circuit
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Circuit file image: magic, then k, t, gate count and the gate list as
    /// little-endian 32-bit values.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(CIRCUIT_MAGIC);
        out.extend_from_slice(&(self.key_len as u32).to_le_bytes());
        out.extend_from_slice(&(self.msg_len as u32).to_le_bytes());
        out.extend_from_slice(&(self.circuit.gates().len() as u32).to_le_bytes());
        for &(u, v) in self.circuit.gates() {
            out.extend_from_slice(&u.to_le_bytes());
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], name: &str) -> Result<Self> {
        let err = |detail: &str| LrsError::Format {
            kind: "circuit",
            detail: detail.to_string(),
        };
        if bytes.len() < 19 || &bytes[..7] != CIRCUIT_MAGIC {
            return Err(err("missing LRSCIR1 header"));
        }
        let rd = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let k = rd(7) as usize;
        let t = rd(11) as usize;
        let count = rd(15) as usize;
        if bytes.len() != 19 + 8 * count {
            return Err(err("gate list length mismatch"));
        }
        let gates = (0..count)
            .map(|g| (rd(19 + 8 * g), rd(23 + 8 * g)))
            .collect();
        let circuit = NandCircuit::new(k + t, gates)?;
        PrfSpec::new(k, t, circuit, name)
    }
}

/// Evaluates the PRF: `eval_bits(circuit, key || msg)`.
pub fn prf_eval(spec: &PrfSpec, key: &[bool], msg: &[bool]) -> Result<bool> {
    if key.len() != spec.key_len || msg.len() != spec.msg_len {
        return Err(LrsError::ArityMismatch {
            expected: spec.key_len + spec.msg_len,
            got: key.len() + msg.len(),
        });
    }
    let mut bits = key.to_vec();
    bits.extend_from_slice(msg);
    spec.circuit.eval_bits(&bits)
}

/// Deterministic toy PRF circuit over `k` key bits and `t` message bits.
///
/// Structure: a balanced XOR tree over all inputs (XOR as 4 NANDs), then
/// `rounds` masking rounds, each XORing in the AND of two rotating input
/// wires. Every input stays influential: the parity path flips the output
/// whenever the AND partners of the flipped bit are held at zero.
pub fn toy_prf(k: usize, t: usize, rounds: usize) -> PrfSpec {
    assert!(k >= 1 && t >= 1, "toy_prf needs nonempty key and message");
    assert!(rounds >= 2, "toy_prf needs at least two rounds");
    let inputs = k + t;

    struct Builder {
        inputs: usize,
        gates: Vec<(u32, u32)>,
    }
    impl Builder {
        fn nand(&mut self, u: u32, v: u32) -> u32 {
            self.gates.push((u, v));
            (self.inputs + self.gates.len() - 1) as u32
        }
        fn xor(&mut self, a: u32, b: u32) -> u32 {
            let n1 = self.nand(a, b);
            let n2 = self.nand(a, n1);
            let n3 = self.nand(b, n1);
            self.nand(n2, n3)
        }
    }
    let mut bld = Builder {
        inputs,
        gates: Vec::new(),
    };
    // Balanced XOR tree.
    let mut layer: Vec<u32> = (0..inputs as u32).collect();
    while layer.len() > 1 {
        let mut nextlayer = Vec::with_capacity(layer.len() / 2 + 1);
        for pair in layer.chunks(2) {
            if pair.len() == 2 {
                nextlayer.push(bld.xor(pair[0], pair[1]));
            } else {
                nextlayer.push(pair[0]);
            }
        }
        layer = nextlayer;
    }
    let mut x = layer[0];
    // Masking rounds: x ^= input[r % l] & input[(r + 1) % l].
    for r in 0..rounds {
        let a = (r % inputs) as u32;
        let b = ((r + 1) % inputs) as u32;
        let n = bld.nand(a, b);
        let and = bld.nand(n, n);
        x = bld.xor(x, and);
    }
    debug_assert_eq!(x as usize, inputs + bld.gates.len() - 1);
    let circuit = NandCircuit::new(inputs, bld.gates).expect("toy circuit is well formed");
    PrfSpec::new(k, t, circuit, &format!("toy-xor-mask-k{k}-t{t}-r{rounds}")).unwrap()
}

/// Minimal keyed function: a single NAND of the first key bit and the first
/// message bit. Exists for harness paths (simulation-form signing) where the
/// homomorphic norm growth of a deep circuit would exceed what small
/// Gaussian widths can absorb; carries no mixing at all.
pub fn shallow_prf(k: usize, t: usize) -> PrfSpec {
    assert!(k >= 1 && t >= 1, "shallow_prf needs nonempty key and message");
    let circuit = NandCircuit::new(k + t, vec![(0, k as u32)]).unwrap();
    PrfSpec::new(k, t, circuit, &format!("nand-k{k}-t{t}")).unwrap()
}
