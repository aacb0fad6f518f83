//! Fan-in-2 NAND circuits and their key-homomorphic evaluation.
//!
//! A wire carries either a plain bit or an n x m matrix encoding
//! `A_i = A * R_i + b_i * G`. The public gate rule
//! `A_w = G - A_u * ginv(A_v)` mirrors NAND on the encoded bits, and the
//! tracking variant follows the short matrix `R` and the bit through every
//! gate so tests and the simulation path can open the final encoding.

use crate::error::{LrsError, Result};
use crate::trapdoor::GadgetPair;
use crate::zq::{IntMatrix, ZqMatrix};

/// Acyclic NAND circuit. Wires `0..inputs` are the inputs; wire
/// `inputs + g` is the output of gate `g`; the final gate is the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NandCircuit {
    inputs: usize,
    gates: Vec<(u32, u32)>,
}

impl NandCircuit {
    /// Validates that every gate references strictly earlier wires.
    pub fn new(inputs: usize, gates: Vec<(u32, u32)>) -> Result<Self> {
        let err = |detail: String| LrsError::Format {
            kind: "circuit",
            detail,
        };
        if inputs == 0 {
            return Err(err("circuit needs at least one input".into()));
        }
        for (g, &(u, v)) in gates.iter().enumerate() {
            let wire = inputs + g;
            if u as usize >= wire || v as usize >= wire {
                return Err(err(format!("gate {g} references wire >= {wire}")));
            }
        }
        Ok(NandCircuit { inputs, gates })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn gates(&self) -> &[(u32, u32)] {
        &self.gates
    }

    pub fn wire_count(&self) -> usize {
        self.inputs + self.gates.len()
    }

    /// Output wire: the last gate, or input 0 for a gateless circuit.
    pub fn output_wire(&self) -> usize {
        if self.gates.is_empty() {
            0
        } else {
            self.wire_count() - 1
        }
    }

    /// Longest input-to-output path measured in gates.
    pub fn depth(&self) -> usize {
        let mut d = vec![0usize; self.wire_count()];
        for (g, &(u, v)) in self.gates.iter().enumerate() {
            d[self.inputs + g] = 1 + d[u as usize].max(d[v as usize]);
        }
        d[self.output_wire()]
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.inputs {
            return Err(LrsError::ArityMismatch {
                expected: self.inputs,
                got,
            });
        }
        Ok(())
    }

    /// Plain Boolean evaluation; gate `w = NAND(u, v)`.
    pub fn eval_bits(&self, bits: &[bool]) -> Result<bool> {
        self.check_arity(bits.len())?;
        let mut wires = bits.to_vec();
        for &(u, v) in &self.gates {
            wires.push(!(wires[u as usize] && wires[v as usize]));
        }
        Ok(wires[self.output_wire()])
    }

    /// Homomorphic evaluation on encoded wires:
    /// `A_w = G - A_u * ginv(A_v) (mod q)` in gate order.
    pub fn eval_public(&self, gp: &GadgetPair, wires: &[ZqMatrix]) -> Result<ZqMatrix> {
        self.check_arity(wires.len())?;
        let g = &gp.g;
        for w in wires {
            if w.rows() != g.rows() || w.cols() != g.cols() {
                return Err(LrsError::DimensionMismatch("encoded wire shape".into()));
            }
        }
        let mut enc: Vec<ZqMatrix> = wires.to_vec();
        for &(u, v) in &self.gates {
            let prod = enc[u as usize].mul_int(&gp.g_inverse(&enc[v as usize]))?;
            enc.push(g.sub(&prod)?);
        }
        Ok(enc[self.output_wire()].clone())
    }

    /// Tracked evaluation for wires defined as `A_i = A * R_i + b_i * G`:
    /// follows `R_w = -R_u * ginv(A_v) - b_u * R_v` and `b_w = NAND(b_u, b_v)`
    /// so that the output satisfies `eval_public = A * R_C + b_C * G (mod q)`.
    pub fn eval_track(
        &self,
        gp: &GadgetPair,
        a: &ZqMatrix,
        rs: &[IntMatrix],
        bits: &[bool],
    ) -> Result<(IntMatrix, bool)> {
        self.check_arity(rs.len())?;
        self.check_arity(bits.len())?;
        let g = &gp.g;
        let mut enc = Vec::with_capacity(self.wire_count());
        let mut tracked: Vec<(IntMatrix, bool)> = Vec::with_capacity(self.wire_count());
        for (r, &b) in rs.iter().zip(bits) {
            let mut e = a.mul_int(r)?;
            if b {
                e = e.add(g)?;
            }
            enc.push(e);
            tracked.push((r.clone(), b));
        }
        for &(u, v) in &self.gates {
            let ginv = gp.g_inverse(&enc[v as usize]);
            let (r_u, b_u) = &tracked[u as usize];
            let (r_v, b_v) = &tracked[v as usize];
            let mut r_w = r_u.mul(&ginv)?.neg();
            if *b_u {
                r_w = r_w.sub(r_v)?;
            }
            let b_w = !(*b_u && *b_v);
            let prod = enc[u as usize].mul_int(&ginv)?;
            enc.push(g.sub(&prod)?);
            tracked.push((r_w, b_w));
        }
        Ok(tracked[self.output_wire()].clone())
    }

    /// Per-gate growth recurrence `N_w = m * N_u + N_v` folded over the
    /// circuit with every input at `input_norm`; the assertion threshold for
    /// the tracked `R` norm.
    pub fn eval_norm_bound(&self, input_norm: f64, m: usize) -> f64 {
        let mut n = vec![input_norm; self.inputs];
        for &(u, v) in &self.gates {
            n.push(m as f64 * n[u as usize] + n[v as usize]);
        }
        n[self.output_wire()]
    }
}
