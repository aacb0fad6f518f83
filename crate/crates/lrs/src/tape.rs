//! Deterministic randomness tapes.
//!
//! Every probabilistic operation in this crate draws 64-bit words from a
//! [`RandomTape`]. A tape is either expanded from a 32-byte seed (word `i` is a
//! pure function of `(seed, stream-id, i)`) or an explicit list of words, which
//! is how explained signing randomness is represented. Consumption order is
//! part of each operation's contract, so replaying a tape replays the
//! operation bit for bit.

use sha2::{Digest, Sha256};

use crate::error::{LrsError, Result};

const TAPE_MAGIC: &[u8; 8] = b"LRSTAPE1";

/// Anything that can hand out 64-bit randomness words in order.
pub trait WordSource {
    fn next_word(&mut self) -> u64;

    /// Uniform value in `[0, bound)` by rejection on whole words.
    fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let limit = u64::MAX - u64::MAX % bound;
        loop {
            let w = self.next_word();
            if w < limit {
                return w % bound;
            }
        }
    }

    /// `len` uniform bits, one word per 64 bits, LSB first.
    fn next_bits(&mut self, len: usize) -> Vec<bool> {
        let mut bits = Vec::with_capacity(len);
        let mut word = 0u64;
        for i in 0..len {
            if i % 64 == 0 {
                word = self.next_word();
            }
            bits.push(word >> (i % 64) & 1 == 1);
        }
        bits
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Backing {
    /// Words derived on demand from the seed.
    Seeded,
    /// Explicit word list (an explained tape). Reading past the end is an error.
    Words(Vec<u64>),
}

/// A serializable, deterministic stream of 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomTape {
    seed: [u8; 32],
    stream_id: String,
    cursor: u64,
    backing: Backing,
    block: [u64; 4],
    block_index: u64,
}

impl RandomTape {
    pub fn from_seed(seed: [u8; 32], stream_id: &str) -> Self {
        RandomTape {
            seed,
            stream_id: stream_id.to_string(),
            cursor: 0,
            backing: Backing::Seeded,
            block: [0; 4],
            block_index: u64::MAX,
        }
    }

    /// An explicit word list, as produced by the explain operations.
    pub fn from_words(words: Vec<u64>) -> Self {
        Self::from_words_with_seed(words, [0; 32])
    }

    /// An explicit word list carrying a caller-chosen 32-byte header field.
    /// The header does not influence the stream; explained signing tapes use
    /// it to record the length of their basis-randomization segment.
    pub fn from_words_with_seed(words: Vec<u64>, seed: [u8; 32]) -> Self {
        RandomTape {
            seed,
            stream_id: String::new(),
            cursor: 0,
            backing: Backing::Words(words),
            block: [0; 4],
            block_index: u64::MAX,
        }
    }

    pub fn stream_id(&self) -> &str {
        &self.stream_id
    }

    pub fn seed(&self) -> &[u8; 32] {
        &self.seed
    }

    /// Number of words consumed so far.
    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// Word at absolute index `i` of a seeded stream, independent of the cursor.
    fn expand(seed: &[u8; 32], stream_id: &str, index: u64) -> u64 {
        let block = index / 4;
        let mut h = Sha256::new();
        h.update(seed);
        h.update((stream_id.len() as u64).to_le_bytes());
        h.update(stream_id.as_bytes());
        h.update(block.to_le_bytes());
        let digest = h.finalize();
        let k = (index % 4) as usize;
        u64::from_le_bytes(digest[8 * k..8 * k + 8].try_into().unwrap())
    }

    /// Consume and return the next word.
    fn take_word(&mut self) -> u64 {
        let i = self.cursor;
        self.cursor += 1;
        match &self.backing {
            Backing::Seeded => {
                let block = i / 4;
                if block != self.block_index {
                    for k in 0..4 {
                        self.block[k] = Self::expand(&self.seed, &self.stream_id, block * 4 + k as u64);
                    }
                    self.block_index = block;
                }
                self.block[(i % 4) as usize]
            }
            Backing::Words(words) => {
                let idx = i as usize;
                if idx >= words.len() {
                    panic!("explained tape exhausted after {} words", words.len());
                }
                words[idx]
            }
        }
    }

    /// Commitment to the stream identity, recorded in public parameters.
    pub fn commitment(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"LRS-tape-commit");
        h.update(self.seed);
        h.update((self.stream_id.len() as u64).to_le_bytes());
        h.update(self.stream_id.as_bytes());
        h.finalize().into()
    }

    /// Serialize: magic, 32-byte seed, word count, then raw little-endian
    /// words. Seeded tapes have a zero word count.
    pub fn to_bytes(&self) -> Vec<u8> {
        let words: &[u64] = match &self.backing {
            Backing::Seeded => &[],
            Backing::Words(w) => w,
        };
        let mut out = Vec::with_capacity(48 + 8 * words.len());
        out.extend_from_slice(TAPE_MAGIC);
        out.extend_from_slice(&self.seed);
        out.extend_from_slice(&(words.len() as u64).to_le_bytes());
        for w in words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let err = |detail: &str| LrsError::Format {
            kind: "tape",
            detail: detail.to_string(),
        };
        if bytes.len() < 48 || &bytes[..8] != TAPE_MAGIC {
            return Err(err("missing LRSTAPE1 header"));
        }
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&bytes[8..40]);
        let count = u64::from_le_bytes(bytes[40..48].try_into().unwrap()) as usize;
        if bytes.len() != 48 + 8 * count {
            return Err(err("word count does not match payload length"));
        }
        if count == 0 {
            return Ok(RandomTape::from_seed(seed, ""));
        }
        let words = bytes[48..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(RandomTape::from_words_with_seed(words, seed))
    }
}

impl WordSource for RandomTape {
    fn next_word(&mut self) -> u64 {
        self.take_word()
    }
}

/// Tape adapter that records every word it hands out; used to splice fresh
/// randomness into an explained signing tape.
pub struct RecordingTape<'a> {
    inner: &'a mut RandomTape,
    pub recorded: Vec<u64>,
}

impl<'a> RecordingTape<'a> {
    pub fn new(inner: &'a mut RandomTape) -> Self {
        RecordingTape {
            inner,
            recorded: Vec::new(),
        }
    }
}

impl WordSource for RecordingTape<'_> {
    fn next_word(&mut self) -> u64 {
        let w = self.inner.take_word();
        self.recorded.push(w);
        w
    }
}
