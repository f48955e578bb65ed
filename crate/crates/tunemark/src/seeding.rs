//! Deterministic PRNG derivation.
//!
//! Every random draw in this crate flows through ChaCha8 streams derived from
//! a caller-supplied seed plus a domain label, so identical (seed, inputs)
//! always reproduce identical bytes on every platform. ChaCha8 is used
//! because its stream is specified and stable across `rand_chacha` releases,
//! unlike `StdRng`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 64-bit FNV-1a. Stable, dependency-free string hashing for stream labels.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Derive an independent ChaCha8 stream for `domain` under `seed`.
pub fn derive_rng(seed: u64, domain: &str) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a64(domain.as_bytes()).to_le_bytes());
    key[16..24].copy_from_slice(&seed.rotate_left(32).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Derive a per-prompt stream: same (seed, prompt) always answers alike.
pub fn prompt_rng(seed: u64, prompt: &str) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a64(prompt.as_bytes()).to_le_bytes());
    key[16..24].copy_from_slice(&(prompt.len() as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Derive a sub-seed for a labeled child task (e.g. per-watermark streams).
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    seed ^ fnv1a64(label.as_bytes()).rotate_left(17)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_stable_and_domain_separated() {
        let mut a = derive_rng(7, "trigger-set");
        let mut b = derive_rng(7, "trigger-set");
        let mut c = derive_rng(7, "reference-set");
        let (x, y, z) = (a.next_u64(), b.next_u64(), c.next_u64());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn fnv_matches_known_vector() {
        // FNV-1a("") and FNV-1a("a") reference values.
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
    }
}
