//! Counter-based random streams.
//!
//! A stream is keyed by (seed, replication); the draw for (block, lane) is a pure
//! function of the key, so any engine can read the randomness of any block in any
//! order and two engines that read the same block see the same number.

use rand_core::RngCore;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
/// Draw slots reserved per block.
pub const LANES: u64 = 4;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(seed: u64, replication: u64) -> Self {
        Self(mix(mix(seed ^ 0x5851_f42d_4c95_7f2d).wrapping_add(mix(replication.wrapping_add(GOLDEN)))))
    }

    #[inline]
    pub fn word(&self, counter: u64) -> u64 {
        mix(self.0.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// Uniform in [0, 1) for slot `lane` of block `block`.
    #[inline]
    pub fn uniform(&self, block: u64, lane: u64) -> f64 {
        debug_assert!(lane < LANES);
        (self.word(block * LANES + lane) >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Sequential generator positioned at the start of `block`.
    pub fn stream_at(&self, block: u64) -> CounterRng {
        CounterRng { key: *self, counter: block * LANES }
    }
}

/// Sequential view of a keyed stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: StreamKey,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, replication: u64) -> Self {
        StreamKey::new(seed, replication).stream_at(0)
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let w = self.key.word(self.counter);
        self.counter = self.counter.wrapping_add(1);
        w
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let w = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&w[..chunk.len()]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_stream() {
        let a: Vec<u64> = {
            let mut r = CounterRng::new(7, 0);
            (0..16).map(|_| r.next_u64()).collect()
        };
        let mut r = CounterRng::new(7, 0);
        let b: Vec<u64> = (0..16).map(|_| r.next_u64()).collect();
        assert_eq!(a, b);
        let mut r = CounterRng::new(7, 1);
        assert_ne!(a[0], r.next_u64());
        let mut r = CounterRng::new(8, 0);
        assert_ne!(a[0], r.next_u64());
    }

    #[test]
    fn random_access_matches_sequential() {
        let key = StreamKey::new(11, 3);
        let mut r = key.stream_at(5);
        let u = (r.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0);
        assert_eq!(u, key.uniform(5, 0));
    }

    #[test]
    fn uniforms_look_uniform() {
        let key = StreamKey::new(1, 0);
        let n = 200_000;
        let mean: f64 = (0..n).map(|b| key.uniform(b, 0)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 3.0 * (1.0 / 12.0f64).sqrt() / (n as f64).sqrt() * 1.5);
        let mut bins = [0usize; 10];
        for b in 0..n {
            bins[(key.uniform(b, 1) * 10.0) as usize] += 1;
        }
        for c in bins {
            assert!((c as f64 - 20_000.0).abs() < 600.0);
        }
    }
}
