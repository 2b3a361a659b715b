//! Deterministic word sampling.
//!
//! Fuzz suites must be reproducible across runs, machines and independent
//! reimplementations, so random words come from a fixed, fully documented
//! generator rather than a library RNG.
//!
//! The generator is splitmix64. State update and output, in order:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z  = state
//! z ^= z >> 30;  z *= 0xBF58476D1CE4B5B9
//! z ^= z >> 27;  z *= 0x94D049BB133111EB
//! z ^= z >> 31;  output z
//! ```
//!
//! Bounded draws use plain modulo reduction (`next() % n`). A sampled word
//! draws its length uniformly from `0..=max_len` (one draw), then each
//! letter uniformly from the atom list (one draw per letter).

use crate::presentation::{ArtinPresentation, Atom};

/// Default seed for every command-line and test run: the ASCII bytes of
/// `"garside1"` read as a big-endian 64-bit integer.
pub const DEFAULT_SEED: u64 = 0x6761_7273_6964_6531;

/// splitmix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_B5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw below `n` by modulo reduction (documented bias is
    /// negligible for the tiny `n` used here).
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }
}

/// A random word of length uniform in `0..=max_len`, letters i.i.d. uniform.
pub fn random_word(rng: &mut SplitMix64, pres: &ArtinPresentation, max_len: usize) -> Vec<Atom> {
    let len = rng.below(max_len as u64 + 1) as usize;
    let rank = pres.rank() as u64;
    (0..len)
        .map(|_| {
            let i = rng.below(rank) as usize;
            pres.atoms().nth(i).expect("index below rank")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 1234567, computed independently from the
        // published splitmix64 recurrence.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 8067408807706546300);
        assert_eq!(rng.next_u64(), 10524544129673143768);
        assert_eq!(rng.next_u64(), 17628220338464321898);
    }

    #[test]
    fn streams_are_reproducible() {
        let pres = ArtinPresentation::new(&["s", "t"], &[("s", "t", 3)]).unwrap();
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..50 {
            assert_eq!(
                random_word(&mut a, &pres, 10),
                random_word(&mut b, &pres, 10)
            );
        }
    }

    #[test]
    fn word_lengths_stay_in_range() {
        let pres = ArtinPresentation::new(&["s", "t"], &[]).unwrap();
        let mut rng = SplitMix64::new(DEFAULT_SEED);
        for _ in 0..200 {
            assert!(random_word(&mut rng, &pres, 7).len() <= 7);
        }
    }
}
