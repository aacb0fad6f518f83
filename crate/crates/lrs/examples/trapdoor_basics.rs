//! Trapdoor toolbox tour: generating a matrix with a short basis of its
//! kernel lattice, extending that basis into a wider matrix without quality
//! loss, and rerandomizing it into a canonically distributed basis.
//!
//! Run with `cargo run --example trapdoor_basics`.

use lrs::tape::RandomTape;
use lrs::trapdoor::{basis_ext, basis_rand, trap_gen};
use lrs::zq::{gs_norm_f64, ZqMatrix};

fn main() {
    let (n, m, q) = (2, 25, 17);
    let mut t = RandomTape::from_seed([5; 32], "demo");

    // A together with a short basis S of the lattice { x : A x = 0 (mod q) }.
    let td = trap_gen(n, m, q, &mut t).unwrap();
    let gs = gs_norm_f64(td.s.matrix()).unwrap();
    println!("trap_gen: A is {}x{} mod {}, Gram-Schmidt norm {:.2}", n, m, q, gs);
    assert!(td.a.mul_int(td.s.matrix()).unwrap().is_zero());

    // Extend to [L | A | R]: the new basis spans the wider kernel lattice
    // with exactly the same Gram-Schmidt norm.
    let left = ZqMatrix::uniform(n, 4, q, &mut t);
    let right = ZqMatrix::uniform(n, 6, q, &mut t);
    let wide = ZqMatrix::hstack(&[&left, &td.a, &right]).unwrap();
    let s_ext = basis_ext(&wide, 4..4 + m, &td.s).unwrap();
    assert!(wide.mul_int(s_ext.matrix()).unwrap().is_zero());
    println!(
        "basis_ext: {} columns -> {} columns, Gram-Schmidt norm {:.2} (unchanged)",
        m,
        s_ext.dim(),
        gs_norm_f64(s_ext.matrix()).unwrap()
    );

    // Rerandomize: the output basis depends only on the lattice and the
    // Gaussian draws, not on which short basis was used to produce it.
    let sigma = gs * 8.0;
    let s_rand = basis_rand(&td.a, &td.s, sigma, &mut t).unwrap();
    assert!(td.a.mul_int(s_rand.matrix()).unwrap().is_zero());
    println!(
        "basis_rand at sigma {:.1}: Gram-Schmidt norm {:.2} <= sigma * sqrt(m) = {:.2}",
        sigma,
        gs_norm_f64(s_rand.matrix()).unwrap(),
        sigma * (m as f64).sqrt()
    );
}
