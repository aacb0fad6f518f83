//! Lattice ring signatures whose signing randomness is explainable: any ring
//! member holding a valid key can produce a randomness tape under which the
//! ordinary signing algorithm reproduces a given signature bit for bit, so no
//! member can credibly claim (or be proven) to be the author.
//!
//! The building blocks are exposed as modules: exact linear algebra over Z_q
//! ([`zq`]), deterministic randomness tapes ([`tape`]), an explainable
//! discrete Gaussian sampler over lattice cosets ([`gauss`]), gadget-based
//! trapdoor machinery ([`trapdoor`]), key-homomorphic NAND-circuit evaluation
//! ([`homeval`]), a pluggable keyed PRF circuit ([`prf`]), and the signature
//! scheme itself ([`scheme`]). File formats live in [`format`].
//!
//! Everything is driven by seeds; there is no operating-system randomness
//! anywhere. Parameters are toy-scale research parameters and carry no
//! security claim.

pub mod error;
pub mod format;
pub mod gauss;
pub mod homeval;
pub mod prf;
pub mod scheme;
pub mod stats;
pub mod tape;
pub mod trapdoor;
pub mod zq;

pub use error::{LrsError, Result};
