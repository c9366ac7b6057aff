//! Seeded random streams.
//!
//! Every random draw is taken from a ChaCha8 generator keyed by the master
//! seed, with the 64-bit stream id chosen by [`Stream`]. The high 16 bits of
//! the stream id hold the domain tag and the low 48 bits hold an index
//! (binning draw number, Monte-Carlo chunk number, sample number). Results
//! therefore depend only on `(seed, domain, index)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u16)]
pub enum Domain {
    /// Bin tables: index = 2*(user) + kind (0 = key bin, 1 = public bin).
    Binning = 1,
    /// Monte-Carlo decoding trials: index = chunk number.
    Decoding = 2,
    /// Auxiliary-distribution samples: index = sample number.
    AuxSearch = 3,
    /// Binning-draw seeds for lemma checks: index = draw number.
    Draws = 4,
    /// Concentration-inequality simulations: index = chunk number.
    Concentration = 5,
    /// Local refinement of hull points: index = refinement round.
    Refine = 6,
}

pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 48) | (index & 0xFFFF_FFFF_FFFF));
    rng
}

/// Derives an independent 64-bit seed from `(seed, domain, index)`.
pub fn derive_seed(seed: u64, domain: Domain, index: u64) -> u64 {
    use rand::RngCore;
    stream(seed, domain, index).next_u64()
}

/// Monte-Carlo work is split into fixed-size chunks so that per-chunk
/// streams are independent of the worker count.
pub const CHUNK: u64 = 256;
