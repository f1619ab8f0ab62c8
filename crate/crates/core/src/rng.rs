//! Seeded sampling with a pinned PRNG.
//!
//! All report randomness flows from a single 64-bit seed through splitmix64,
//! so residual tables are byte-identical across runs and reproducible by
//! other implementations of the same stream.

use crate::expr::Point;

/// splitmix64 (Steele, Lea, Flood 2014); the de-facto seeding PRNG.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform point in the axis-aligned box.
    pub fn point_in_box(&mut self, min: [f64; 3], max: [f64; 3]) -> Point {
        Point::new(
            self.uniform(min[0], max[0]),
            self.uniform(min[1], max[1]),
            self.uniform(min[2], max[2]),
        )
    }

    /// Pair of vectors spanning a non-degenerate plane (components in [-1,1],
    /// Euclidean gram determinant above 1e-3; resampled otherwise).
    pub fn plane(&mut self) -> ([f64; 3], [f64; 3]) {
        loop {
            let u: [f64; 3] = std::array::from_fn(|_| self.uniform(-1.0, 1.0));
            let v: [f64; 3] = std::array::from_fn(|_| self.uniform(-1.0, 1.0));
            let uu = crate::linalg::dot(u, u);
            let vv = crate::linalg::dot(v, v);
            let uv = crate::linalg::dot(u, v);
            if uu * vv - uv * uv > 1e-3 {
                return (u, v);
            }
        }
    }
}
