//! Keccak-256 with the original Keccak padding (domain byte `0x01`, not the
//! standardized SHA-3 `0x06`) — the hash the platform uses for event
//! signatures and function selectors. A wrong padding would silently corrupt
//! every token dataset, so this module is pinned against known digests and an
//! independent implementation before anything else runs (see tests and the
//! acceptance suite).

const RATE: usize = 136; // 1088-bit rate for a 256-bit digest

const ROUND_CONSTANTS: [u64; 24] = [
    0x0000000000000001,
    0x0000000000008082,
    0x800000000000808a,
    0x8000000080008000,
    0x000000000000808b,
    0x0000000080000001,
    0x8000000080008081,
    0x8000000000008009,
    0x000000000000008a,
    0x0000000000000088,
    0x0000000080008009,
    0x000000008000000a,
    0x000000008000808b,
    0x800000000000008b,
    0x8000000000008089,
    0x8000000000008003,
    0x8000000000008002,
    0x8000000000000080,
    0x000000000000800a,
    0x800000008000000a,
    0x8000000080008081,
    0x8000000000008080,
    0x0000000080000001,
    0x8000000080008008,
];

const RHO: [u32; 24] = [
    1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44,
];

const PI: [usize; 24] = [
    10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1,
];

fn keccak_f1600(state: &mut [u64; 25]) {
    let mut scratch = [0u64; 5];
    for rc in ROUND_CONSTANTS {
        // theta
        for x in 0..5 {
            scratch[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        }
        for x in 0..5 {
            let d = scratch[(x + 4) % 5] ^ scratch[(x + 1) % 5].rotate_left(1);
            for y in 0..5 {
                state[5 * y + x] ^= d;
            }
        }
        // rho + pi
        let mut carry = state[1];
        for i in 0..24 {
            let next = state[PI[i]];
            state[PI[i]] = carry.rotate_left(RHO[i]);
            carry = next;
        }
        // chi
        for y in 0..5 {
            let row = [
                state[5 * y],
                state[5 * y + 1],
                state[5 * y + 2],
                state[5 * y + 3],
                state[5 * y + 4],
            ];
            for x in 0..5 {
                state[5 * y + x] = row[x] ^ (!row[(x + 1) % 5] & row[(x + 2) % 5]);
            }
        }
        // iota
        state[0] ^= rc;
    }
}

/// Keccak-256 digest of `data`.
pub fn keccak256(data: &[u8]) -> [u8; 32] {
    let mut state = [0u64; 25];
    let mut block = [0u8; RATE];

    let mut chunks = data.chunks_exact(RATE);
    for chunk in &mut chunks {
        absorb(&mut state, chunk);
        keccak_f1600(&mut state);
    }

    let tail = chunks.remainder();
    block[..tail.len()].copy_from_slice(tail);
    block[tail.len()] = 0x01; // original Keccak domain byte
    block[RATE - 1] |= 0x80;
    absorb(&mut state, &block);
    keccak_f1600(&mut state);

    let mut digest = [0u8; 32];
    for (i, word) in state[..4].iter().enumerate() {
        digest[8 * i..8 * i + 8].copy_from_slice(&word.to_le_bytes());
    }
    digest
}

fn absorb(state: &mut [u64; 25], block: &[u8]) {
    for (lane, chunk) in state.iter_mut().zip(block.chunks_exact(8)) {
        *lane ^= u64::from_le_bytes(chunk.try_into().unwrap());
    }
}
