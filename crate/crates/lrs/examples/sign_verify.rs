//! Full round trip: parameter setup, two key pairs, ring assembly, signing
//! and verification, including a rejected verification attempt under a
//! tampered message.
//!
//! Run with `cargo run --example sign_verify`.

use lrs::scheme::{keygen, setup, sign, verify, Preset, Ring};
use lrs::tape::RandomTape;

fn main() {
    let pp = setup(2, Preset::Toy, &RandomTape::from_seed([1; 32], "setup")).unwrap();
    println!(
        "params: n = {}, m = {}, q = {}, sigma = {:.2}, sigma' = {:.2}",
        pp.n, pp.m, pp.q, pp.sigma, pp.sigma_prime
    );

    let mut kg = RandomTape::from_seed([2; 32], "keygen");
    let (vk_alice, sk_alice) = keygen(&pp, &mut kg).unwrap();
    let (vk_bob, _sk_bob) = keygen(&pp, &mut kg).unwrap();
    let ring = Ring::new(vec![vk_alice, vk_bob]).unwrap();
    println!("ring of {} members assembled", ring.len());

    let msg = vec![true, false, true, true];
    let mut st = RandomTape::from_seed([3; 32], "sign");
    let sig = sign(&pp, &msg, &ring, &sk_alice, &mut st).unwrap();
    println!("signature norm {:.2} over {} coordinates", sig.norm(), 2 * ring.len() * pp.m);

    let verdict = verify(&pp, &msg, &ring, &sig);
    println!("verify(correct message): accepted = {}", verdict.accepted());
    assert!(verdict.accepted());

    let mut wrong = msg.clone();
    wrong[0] = !wrong[0];
    let verdict = verify(&pp, &wrong, &ring, &sig);
    println!("verify(flipped bit):     accepted = {}", verdict.accepted());
    assert!(!verdict.accepted());
}
