//! Unclaimable anonymity in action: a signature produced by one ring member
//! is explained on behalf of another, and replaying the explained randomness
//! through the other member's signing key reproduces the signature bit for
//! bit. Nobody can prove from the randomness who really signed.
//!
//! Run with `cargo run --example explain_replay`.

use lrs::prf::prf_eval;
use lrs::scheme::{explain_sign, keygen, setup, sign, verify, Preset, Ring, SigningKey};
use lrs::tape::RandomTape;

/// Explanation exists exactly when both members' PRF bits agree on the
/// message, so scan the message space for such a message.
fn agreeing_message(pp: &lrs::scheme::PublicParams, a: &SigningKey, b: &SigningKey) -> Vec<bool> {
    for v in 0..1u64 << pp.t {
        let msg: Vec<bool> = (0..pp.t).map(|i| v >> i & 1 == 1).collect();
        let ba = prf_eval(&pp.prf, &a.prf_key, &msg).unwrap();
        let bb = prf_eval(&pp.prf, &b.prf_key, &msg).unwrap();
        if ba == bb {
            return msg;
        }
    }
    panic!("no agreeing message in the whole message space");
}

fn main() {
    let pp = setup(2, Preset::Toy, &RandomTape::from_seed([1; 32], "setup")).unwrap();
    let mut kg = RandomTape::from_seed([2; 32], "keygen");
    let (vk_alice, sk_alice) = keygen(&pp, &mut kg).unwrap();
    let (vk_bob, sk_bob) = keygen(&pp, &mut kg).unwrap();
    let ring = Ring::new(vec![vk_alice, vk_bob]).unwrap();

    let msg = agreeing_message(&pp, &sk_alice, &sk_bob);
    println!("message: {:?}", msg);

    // Alice signs.
    let mut st = RandomTape::from_seed([3; 32], "sign");
    let sig = sign(&pp, &msg, &ring, &sk_alice, &mut st).unwrap();
    assert!(verify(&pp, &msg, &ring, &sig).accepted());
    println!("Alice signed; norm {:.2}", sig.norm());

    // Bob, who did not sign, explains the very same signature as his own.
    let mut fresh = RandomTape::from_seed([4; 32], "explain");
    let gamma = explain_sign(&pp, &msg, &ring, &sig, &sk_bob, &mut fresh).unwrap();
    println!(
        "Bob's explained tape: {} basis words + {} sampler words",
        gamma.basis_word_count,
        gamma.words.len() - gamma.basis_word_count
    );

    // Anyone replaying Bob's tape through Bob's key gets Alice's signature.
    let mut replay = gamma.tape();
    let resigned = sign(&pp, &msg, &ring, &sk_bob, &mut replay).unwrap();
    assert_eq!(resigned, sig);
    println!("replay through Bob's key reproduces the signature bit for bit");
}
