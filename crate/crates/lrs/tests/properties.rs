//! Property tests for structural invariants: serialization round trips,
//! sampler support bounds, tape word bounds and circuit evaluation against a
//! straightforward interpreter.

use lrs::format;
use lrs::gauss::Gauss1DTable;
use lrs::homeval::NandCircuit;
use lrs::scheme::Signature;
use lrs::tape::{RandomTape, WordSource};
use lrs::zq::IntMatrix;
use proptest::prelude::*;

proptest! {
    #[test]
    fn signature_files_round_trip(
        entries in prop::collection::vec(-1_000_000i64..1_000_000, 4..64),
        ring_size in 2usize..6,
    ) {
        // Truncate to a length of the form 2 * N * m.
        prop_assume!(entries.len() >= 2 * ring_size);
        let m = entries.len() / (2 * ring_size);
        let entries = &entries[..2 * ring_size * m];
        let mut x = IntMatrix::zero(entries.len(), 1);
        for (i, &e) in entries.iter().enumerate() {
            x.set(i, 0, e as i128);
        }
        let sig = Signature { x, ring_size };
        let bytes = format::sig_to_bytes(&sig, m).unwrap();
        let back = format::sig_from_bytes(&bytes).unwrap();
        prop_assert_eq!(back, sig);
    }

    #[test]
    fn gaussian_samples_stay_inside_the_tail_cut(
        seed in any::<[u8; 32]>(),
        sigma in 0.5f64..200.0,
        center in -100.0f64..100.0,
    ) {
        let tau = 6.0;
        let table = Gauss1DTable::new(sigma, center, tau).unwrap();
        let mut t = RandomTape::from_seed(seed, "prop");
        for _ in 0..32 {
            let x = table.sample(&mut t) as f64;
            prop_assert!((x - center).abs() <= tau * sigma + 1.0);
        }
    }

    #[test]
    fn tape_words_respect_their_bound(
        seed in any::<[u8; 32]>(),
        bound in 1u64..1_000_000,
    ) {
        let mut t = RandomTape::from_seed(seed, "prop");
        for _ in 0..64 {
            prop_assert!(t.next_below(bound) < bound);
        }
    }

    #[test]
    fn tape_serialization_round_trips(words in prop::collection::vec(any::<u64>(), 1..64)) {
        let tape = RandomTape::from_words(words.clone());
        let mut back = RandomTape::from_bytes(&tape.to_bytes()).unwrap();
        for w in words {
            prop_assert_eq!(back.next_word(), w);
        }
    }

    #[test]
    fn circuit_evaluation_matches_a_plain_interpreter(
        inputs in prop::collection::vec(any::<bool>(), 2..6),
        picks in prop::collection::vec((any::<u64>(), any::<u64>()), 1..12),
    ) {
        let mut gates = Vec::new();
        for (i, (a, b)) in picks.iter().enumerate() {
            let limit = (inputs.len() + i) as u64;
            gates.push(((a % limit) as u32, (b % limit) as u32));
        }
        let circuit = NandCircuit::new(inputs.len(), gates.clone()).unwrap();
        let mut wires = inputs.clone();
        for (a, b) in gates {
            wires.push(!(wires[a as usize] && wires[b as usize]));
        }
        prop_assert_eq!(circuit.eval_bits(&inputs).unwrap(), *wires.last().unwrap());
    }
}
