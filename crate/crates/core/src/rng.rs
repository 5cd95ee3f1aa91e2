//! Portable pseudo-random streams.
//!
//! Every random draw in the crate comes from [`Xoshiro256StarStar`], seeded
//! through [`SplitMix64`] exactly as in the reference implementations by
//! Blackman and Vigna. The conversions to floats and bounded integers are
//! fixed here as well, so a stream can be replayed bit-for-bit in any
//! language:
//!
//! * `next_f64`: `(x >> 11) * 2^-53`, uniform on `[0, 1)`.
//! * `below(k)`: Lemire's multiply-shift with rejection, unbiased on `[0, k)`.
//! * `normal`: Box-Muller from two `next_f64` draws, returning the cosine
//!   branch only.
//!
//! Independent streams are derived with [`derive_seed`], which folds a
//! stream index into a base seed with the SplitMix64 finalizer.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// The SplitMix64 generator, used for seeding and stream derivation.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }
}

/// The SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th substream of `base`.
///
/// Equal to the first output of a SplitMix64 generator whose state is
/// `base ^ mix64(index)`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    SplitMix64::new(base ^ mix64(index)).next_u64()
}

/// Folds a sequence of words into one seed by repeated [`derive_seed`].
pub fn derive_seed_all(base: u64, words: &[u64]) -> u64 {
    words.iter().fold(base, |acc, &w| derive_seed(acc, w))
}

/// xoshiro256** 1.0.
#[derive(Clone, Debug)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    /// Fills the state with four consecutive SplitMix64 outputs.
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let s = [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()];
        Self::from_state(s)
    }

    /// Uses `s` verbatim. The all-zero state is a fixed point and is rejected
    /// by substituting the SplitMix64 seeding of zero.
    pub fn from_state(s: [u64; 4]) -> Self {
        if s == [0; 4] {
            return Self::seed_from_u64(0);
        }
        Self { s }
    }

    /// Generator for substream `index` of `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::seed_from_u64(derive_seed(seed, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-1, 1)`.
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Uniform integer in `[0, bound)`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0)");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = (self.next_u64() as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Standard normal deviate.
    pub fn normal(&mut self) -> f64 {
        // 1 - u lies in (0, 1], so the logarithm is finite.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniformly distributed point on the unit sphere in `R^n`.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let mut x: Vec<f64> = (0..n).map(|_| self.normal()).collect();
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                x.iter_mut().for_each(|v| *v /= norm);
                return x;
            }
        }
    }

    /// Fisher-Yates shuffle of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        perm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_outputs() {
        // First outputs of the reference splitmix64.c seeded with 0.
        let mut sm = SplitMix64::new(0);
        assert_eq!(sm.next_u64(), 0xe220_a839_7b1d_cdaf);
        assert_eq!(sm.next_u64(), 0x6e78_9e6a_a1b9_65f4);
        assert_eq!(sm.next_u64(), 0x06c4_5d18_8009_454f);
    }

    #[test]
    fn xoshiro_reference_outputs() {
        let mut rng = Xoshiro256StarStar::from_state([1, 2, 3, 4]);
        let expected: [u64; 4] = [11520, 0, 1509978240, 1215971899390074240];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn bounded_draws_stay_in_range() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(3);
        let mut counts = [0usize; 3];
        for _ in 0..3000 {
            counts[rng.below(3) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c > 900 && c < 1100), "{counts:?}");
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn derived_streams_differ() {
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
        assert_eq!(derive_seed_all(7, &[1, 2]), derive_seed(derive_seed(7, 1), 2));
    }

    #[test]
    fn unit_vector_has_unit_norm() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(11);
        let x = rng.unit_vector(50);
        let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
