//! Seeded, splittable random streams.
//!
//! Every Monte Carlo cell gets its own ChaCha stream derived from the master
//! seed and a cell key, so results never depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for a plain seed (stream 0).
pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `(major, minor)` of `seed`.
pub fn substream(seed: u64, major: u32, minor: u32) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((major as u64) << 32) | minor as u64);
    rng
}

/// Uniform draw on the half-open interval (0, 1].
#[inline]
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Standard exponential draw by inversion.
#[inline]
pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -open_unit(rng).ln()
}
