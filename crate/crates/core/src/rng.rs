//! Counter-derived random streams.
//!
//! Every random draw in the crate comes from a ChaCha stream keyed by
//! `(seed, stream, index)`, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent generator for trial `index` of stream `stream`.
pub fn stream_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(stream);
    rng
}

/// Log-odds drawn log-uniformly from odds in `[1/spread, spread]`.
pub fn log_uniform_odds(rng: &mut impl Rng, n: usize, spread: f64) -> Vec<f64> {
    let r = spread.ln();
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}
