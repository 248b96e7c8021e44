//! Deterministic pseudo-random streams.
//!
//! Every randomized operation in this crate draws from a [`SeededStream`],
//! a SplitMix64 generator (Steele, Lea & Flood 2014, public-domain reference
//! constants). The platform RNG is never used, so equal seeds produce equal
//! results on every platform and toolchain.
//!
//! Independent units of work (strata, images) get their own stream via
//! [`SeededStream::derive`], which mixes an FNV-1a hash of a label into the
//! seed. Per-unit draws therefore do not depend on processing order, and the
//! units can be handled in parallel without changing any result.

/// SplitMix64 stream with a draw counter.
#[derive(Debug, Clone)]
pub struct SeededStream {
    state: u64,
    position: u64,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        SeededStream {
            state: seed,
            position: 0,
        }
    }

    /// Stream for the unit of work named `label` under `seed`.
    pub fn derive(seed: u64, label: &str) -> Self {
        SeededStream::new(seed ^ fnv1a64(label.as_bytes()))
    }

    /// Number of `u64` values drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        self.position += 1;
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` using the top 53 bits of one draw.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`; consumes one draw.
    pub fn next_range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Uniform integer in `[0, n)` by reduction of one draw.
    ///
    /// The modulo bias is below 2^-32 for every `n` used in this crate;
    /// the simple reduction is kept because it is trivially portable.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Coin flip; consumes one draw even for probabilities 0 and 1.
    pub fn next_bool(&mut self, probability: f64) -> bool {
        self.next_f64() < probability
    }

    /// Fisher-Yates shuffle, iterating from the last index down and swapping
    /// each position with a uniformly drawn earlier-or-equal one.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// FNV-1a over raw bytes; used only to map labels to seed offsets.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xCBF2_9CE4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}
