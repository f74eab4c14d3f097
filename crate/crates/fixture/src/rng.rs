//! Deterministic pseudo-randomness for fixture generation.
//!
//! A 64-bit counter-based generator (SplitMix64: a Weyl sequence stepped by
//! the golden-ratio increment, finalized with the Stafford mix) — never a
//! platform default, so identical specs produce byte-identical chains on
//! every platform and in any language that reimplements these few lines.

use xbeth_core::{Address, Hash32};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sequential draw stream seeded once per generation run.
#[derive(Debug, Clone)]
pub struct CounterRng {
    state: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> CounterRng {
        CounterRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw in `[0, n)`. The modulo bias is irrelevant for fixture
    /// scripting and keeps the generator trivially portable.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty draw range");
        self.next_u64() % n
    }

    /// Uniform draw in `[lo, hi]`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    /// True with probability `percent / 100`.
    pub fn chance(&mut self, percent: u64) -> bool {
        self.below(100) < percent
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    /// 53-bit uniform in `[0, 1)`, for weighted scenario draws.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Index drawn proportionally to `weights` (non-negative, sum > 0).
    pub fn weighted(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut target = self.unit() * total;
        for (i, w) in weights.iter().enumerate() {
            target -= w;
            if target < 0.0 {
                return i;
            }
        }
        weights.len() - 1
    }

    pub fn fill_bytes(&mut self, buf: &mut [u8]) {
        for chunk in buf.chunks_mut(8) {
            let word = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&word[..chunk.len()]);
        }
    }

    pub fn bytes(&mut self, len: usize) -> Vec<u8> {
        let mut buf = vec![0u8; len];
        self.fill_bytes(&mut buf);
        buf
    }
}

fn derive_stream(tag: u8, seed: u64, a: u64, b: u64) -> CounterRng {
    let state = seed
        ^ ((tag as u64) << 56)
        ^ a.wrapping_mul(0xA076_1D64_78BD_642F)
        ^ b.wrapping_mul(0xE703_7ED1_A0B4_28DB);
    CounterRng::new(mix(state))
}

/// Pure 32-byte id derivation: stable under any draw-order change in the
/// generator, so block and transaction hashes never shift between runs.
pub fn derive_hash(tag: u8, seed: u64, a: u64, b: u64) -> Hash32 {
    let mut rng = derive_stream(tag, seed, a, b);
    let mut out = [0u8; 32];
    rng.fill_bytes(&mut out);
    Hash32(out)
}

/// Pure 20-byte address derivation; the first byte carries the role tag so
/// user, miner, and contract spaces never collide (and never hit the zero
/// address).
pub fn derive_address(tag: u8, seed: u64, index: u64) -> Address {
    let mut rng = derive_stream(tag, seed, index, 0);
    let mut out = [0u8; 20];
    rng.fill_bytes(&mut out);
    out[0] = tag;
    Address(out)
}

/// Role tags for derived addresses.
pub mod tags {
    pub const USER: u8 = 0x1a;
    pub const WHALE: u8 = 0x1b;
    pub const MINER: u8 = 0x2b;
    pub const CONTRACT: u8 = 0x3c;
    pub const FRESH_REFUND: u8 = 0x4d;
    pub const BLOCK_HASH: u8 = 0xb0;
    pub const TX_HASH: u8 = 0x71;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = CounterRng::new(42);
        let mut b = CounterRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn first_draws_are_frozen() {
        // cross-platform pin of the generator algorithm itself
        let mut rng = CounterRng::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn derived_ids_ignore_draw_order() {
        let h1 = derive_hash(tags::TX_HASH, 7, 3, 9);
        let mut rng = CounterRng::new(7);
        rng.bytes(999);
        let h2 = derive_hash(tags::TX_HASH, 7, 3, 9);
        assert_eq!(h1, h2);
        assert_ne!(h1, derive_hash(tags::TX_HASH, 7, 3, 10));
    }

    #[test]
    fn address_tags_stamp_the_first_byte() {
        let u = derive_address(tags::USER, 1, 0);
        assert_eq!(u.0[0], tags::USER);
        assert!(!u.is_zero());
        assert_ne!(u, derive_address(tags::USER, 1, 1));
    }

    #[test]
    fn weighted_draw_respects_zero_weights() {
        let mut rng = CounterRng::new(5);
        for _ in 0..200 {
            let i = rng.weighted(&[0.0, 1.0, 0.0]);
            assert_eq!(i, 1);
        }
    }
}
