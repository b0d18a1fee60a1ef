//! Seeded Gaussian source.
//!
//! Streams are ChaCha20 keyed by a 64-bit seed, so a given seed produces the
//! same numbers on every platform. Normals use the Marsaglia polar method:
//! draw `(u, v)` uniformly on `(-1, 1)^2`, reject unless `0 < s = u^2 + v^2 < 1`,
//! then return `u * m` and `v * m` with `m = sqrt(-2 ln s / s)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Independent stream for a sub-task of `seed`, e.g. a second path
    /// component drawn for the same seed.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u: f64 = self.rng.gen_range(-1.0..1.0);
            let v: f64 = self.rng.gen_range(-1.0..1.0);
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * m);
                return u * m;
            }
        }
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for z in out.iter_mut() {
            *z = self.next_gaussian();
        }
    }
}
