//! Seeded, reproducible randomness.
//!
//! All experiment code draws from ChaCha8 streams derived from a master
//! seed with splitmix64, so a (seed, stream) pair maps to the same byte
//! stream on every platform and in every release. Integer draws use
//! rejection sampling to avoid modulo bias.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::gf::Field;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent ChaCha8 stream from a master seed. `stream`
/// selects the substream (trial index, node id, ...).
pub fn derive_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut state = master ^ stream.wrapping_mul(0xA24B_AED4_963E_E407);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Uniform draw from `[0, n)` without modulo bias (rejection sampling).
pub fn gen_index<R: RngCore>(rng: &mut R, n: u32) -> u32 {
    assert!(n > 0);
    if n.is_power_of_two() {
        return rng.next_u32() & (n - 1);
    }
    let n64 = n as u64;
    let zone = (1u64 << 32) / n64 * n64;
    loop {
        let x = rng.next_u32() as u64;
        if x < zone {
            return (x % n64) as u32;
        }
    }
}

/// Uniform field element, zero included.
pub fn gen_element<R: RngCore>(rng: &mut R, field: Field) -> u8 {
    match field {
        Field::Gf2 => (rng.next_u32() & 1) as u8,
        Field::Gf256 => (rng.next_u32() & 0xFF) as u8,
    }
}

/// Bernoulli draw: true with probability `p`.
pub fn chance<R: RngCore>(rng: &mut R, p: f64) -> bool {
    (rng.next_u32() as f64) < p * 4_294_967_296.0
}
