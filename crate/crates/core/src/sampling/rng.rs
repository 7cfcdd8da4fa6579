use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// Counter-based random stream identified by `(seed, stream_id)`.
///
/// Backed by ChaCha8: the seed fixes the key, `stream_id` selects the
/// 64-bit stream nonce, so distinct ids never share keystream blocks.
/// Each stream is further divided into 16 lanes of `2^64` words; a lane is
/// an independent sub-stream for callers that need several decoupled
/// sources (waiting times vs. jumps) from a single identity.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    lane: u8,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::at_lane(seed, stream_id, 0)
    }

    fn at_lane(seed: u64, stream_id: u64, lane: u8) -> Self {
        assert!(lane < 16, "lane must be < 16");
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        inner.set_word_pos((lane as u128) << 64);
        RngStream {
            seed,
            stream_id,
            lane,
            inner,
        }
    }

    /// A fresh stream positioned at the start of lane `lane` of the same
    /// `(seed, stream_id)`.
    pub fn lane(&self, lane: u8) -> Self {
        Self::at_lane(self.seed, self.stream_id, lane)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn lane_index(&self) -> u8 {
        self.lane
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Unit-rate exponential.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        Exp1.sample(&mut self.inner)
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Fair ±1.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.inner.next_u32() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
