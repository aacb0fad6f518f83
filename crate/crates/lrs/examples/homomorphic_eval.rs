//! Homomorphic circuit evaluation over gadget-encoded bits: public matrix
//! evaluation of a NAND circuit agrees with the tracked encoding
//! `A R_C + b_C G`, where `b_C` is the plain Boolean result.
//!
//! Run with `cargo run --example homomorphic_eval`.

use lrs::homeval::NandCircuit;
use lrs::tape::{RandomTape, WordSource};
use lrs::trapdoor::{gadget, gadget_width};
use lrs::zq::{IntMatrix, ZqMatrix};

fn main() {
    let (n, q) = (2, 17);
    let m = gadget_width(n, q);
    let gp = gadget(n, q, m).unwrap();
    let mut t = RandomTape::from_seed([7; 32], "demo");

    // XOR of two wires, written in NAND gates.
    let circuit = NandCircuit::new(2, vec![(0, 1), (0, 2), (1, 2), (3, 4)]).unwrap();
    println!("circuit: 2 inputs, {} gates, depth {}", circuit.gates().len(), circuit.depth());

    let a = ZqMatrix::uniform(n, m, q, &mut t);
    for bits in [[false, false], [false, true], [true, false], [true, true]] {
        // Encode each input bit as A R + bit G with a fresh +-1 matrix R.
        let mut rs = Vec::new();
        let mut wires = Vec::new();
        for &bit in &bits {
            let mut r = IntMatrix::zero(m, m);
            for i in 0..m {
                for j in 0..m {
                    r.set(i, j, if t.next_below(2) == 0 { -1 } else { 1 });
                }
            }
            let mut enc = a.mul_int(&r).unwrap();
            if bit {
                enc = enc.add(&gp.g).unwrap();
            }
            wires.push(enc);
            rs.push(r);
        }

        let public = circuit.eval_public(&gp, &wires).unwrap();
        let (r_c, b_c) = circuit.eval_track(&gp, &a, &rs, &bits).unwrap();
        let mut expect = a.mul_int(&r_c).unwrap();
        if b_c {
            expect = expect.add(&gp.g).unwrap();
        }
        assert_eq!(public, expect);
        assert_eq!(b_c, bits[0] ^ bits[1]);
        println!(
            "inputs {:?}: result bit {}, |R_C| = {:.1} (bound {:.0})",
            bits,
            b_c as u8,
            r_c.max_column_norm(),
            circuit.eval_norm_bound((m as f64).sqrt(), m)
        );
    }
}
