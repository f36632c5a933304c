//! Named, splittable random streams.
//!
//! Every random quantity in the crate is drawn from a [`RngStream`] derived
//! from a single 64-bit master seed. Sub-streams are addressed by a label and
//! an index, so weight draws and edge draws never share state and any
//! realization can be regenerated on its own.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derive an independent child stream addressed by `(label, index)`.
    pub fn substream(&self, label: &str, index: u64) -> RngStream {
        let mut h = splitmix64(self.seed ^ 0x6a09_e667_f3bc_c908);
        for b in label.bytes() {
            h = splitmix64(h ^ u64::from(b));
        }
        h = splitmix64(h ^ index);
        RngStream { seed: h }
    }

    /// Sequential generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Generator for one lane of this stream (e.g. one adjacency row). The
    /// draws of lane `i` depend only on `(seed, i)`.
    pub fn lane(&self, lane: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(lane);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
