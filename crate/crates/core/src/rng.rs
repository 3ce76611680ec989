//! Deterministic random-number substreams for parallel Monte Carlo.
//!
//! Every simulation in this crate derives its generators through
//! [`substream`]: a ChaCha8 stream whose seed is obtained by folding the user
//! seed and a path of stream indices through the SplitMix64 finalizer. The
//! scheme is fixed so that cached tables and reports are reproducible across
//! platforms and thread counts:
//!
//! * path-level work is split into blocks of [`BLOCK_PATHS`] paths,
//! * block `b` uses the stream `substream(seed, &[tag.., b])`,
//! * block results are combined in block order.
//!
//! ChaCha8 is a counter-based generator with a portable specification; its
//! output for a given 64-bit seed is identical on all supported platforms.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Paths per parallel block. Fixed: changing it changes every simulated
/// stream, which would invalidate cached tables.
pub const BLOCK_PATHS: u64 = 8192;

/// SplitMix64 finalizer: mixes `value` into `state` and returns a new state.
#[inline]
pub fn mix(state: u64, value: u64) -> u64 {
    let mut z = state
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(value.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive a generator from a seed and a path of stream indices.
pub fn substream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    let mut s = mix(seed, 0x5261_6e67_6556_6f6c); // "RangeVol" tag
    for &p in path {
        s = mix(s, p);
    }
    ChaCha8Rng::seed_from_u64(s)
}

/// Run `per_block` over fixed-size path blocks in parallel and fold the block
/// results in block order. `stream_path` prefixes the per-block stream index,
/// so distinct simulations sharing a seed stay independent.
pub fn par_blocks<A, F>(paths: u64, seed: u64, stream_path: &[u64], per_block: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
{
    let n_blocks = paths.div_ceil(BLOCK_PATHS);
    (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK_PATHS.min(paths - b * BLOCK_PATHS);
            let mut path = stream_path.to_vec();
            path.push(b);
            let mut rng = substream(seed, &path);
            per_block(&mut rng, count)
        })
        .collect()
}
