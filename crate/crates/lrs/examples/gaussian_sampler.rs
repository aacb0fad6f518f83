//! Discrete Gaussian machinery: the exact 64-bit inverse-CDF table for the
//! one-dimensional sampler, and Klein's algorithm drawing lattice points
//! from a coset of a trapdoored lattice.
//!
//! Run with `cargo run --example gaussian_sampler`.

use lrs::gauss::{sample_gaussian, Gauss1DTable};
use lrs::tape::RandomTape;
use lrs::trapdoor::trap_gen;
use lrs::zq::ZqVector;

fn main() {
    // One-dimensional sampler around a fractional center.
    let table = Gauss1DTable::new(4.0, 0.3, 6.0).unwrap();
    let mut t = RandomTape::from_seed([1; 32], "demo");
    let draws: Vec<i64> = (0..20).map(|_| table.sample(&mut t)).collect();
    println!("sigma = 4, center = 0.3, twenty draws: {draws:?}");
    let mean: f64 = draws.iter().map(|&x| x as f64).sum::<f64>() / draws.len() as f64;
    println!("empirical mean {mean:.2} (target center 0.3)");

    // Lattice sampling: draw x with A x = y (mod q) and Gaussian length.
    let (n, m, q) = (2, 25, 17);
    let mut kg = RandomTape::from_seed([2; 32], "keygen");
    let td = trap_gen(n, m, q, &mut kg).unwrap();
    let y = ZqVector::uniform(n, q, &mut t);
    let sigma = 60.0;
    let x = sample_gaussian(&td.a, &td.s, &y, sigma, &mut t).unwrap();
    let ax = td.a.mul_int(&x).unwrap();
    for r in 0..n {
        assert_eq!(ax.get(r, 0), y.get(r));
    }
    println!(
        "coset sample: |x| = {:.2} against sigma * sqrt(m) = {:.2}, A x = y holds",
        x.column_l2(),
        sigma * (m as f64).sqrt()
    );
}
