//! Seeded, thread-count independent Monte Carlo driver.
//!
//! Samples are cut into fixed-size chunks; chunk `i` draws from a ChaCha8
//! generator seeded with the master seed and switched to stream `i`. Results
//! are integer sums, so they do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per chunk (one generator stream each).
pub const CHUNK: u64 = 4096;

/// Name recorded in reports.
pub const GENERATOR: &str = "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = chunk index, chunk = 4096";

/// z with P(|N(0,1)| <= z) = 0.99.
pub const Z99: f64 = 2.5758;

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Per-sample outcome: whether it is a hit, plus a vector of counters
/// summed across samples.
pub trait Tally: Send + Default {
    fn merge(&mut self, other: Self);
}

impl Tally for u64 {
    fn merge(&mut self, other: Self) {
        *self += other;
    }
}

impl Tally for Vec<u64> {
    fn merge(&mut self, other: Self) {
        if self.len() < other.len() {
            self.resize(other.len(), 0);
        }
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

/// Run `samples` draws of `draw`, in parallel, and sum the tallies.
pub fn run<T, F>(samples: u64, seed: u64, draw: F) -> T
where
    T: Tally,
    F: Fn(&mut ChaCha8Rng, &mut T) + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut tally = T::default();
            let len = CHUNK.min(samples - c * CHUNK);
            for _ in 0..len {
                draw(&mut rng, &mut tally);
            }
            tally
        })
        .reduce(T::default, |mut a, b| {
            a.merge(b);
            a
        })
}

/// 99% normal-approximation half-width for a proportion.
pub fn ci_halfwidth(mean: f64, samples: u64) -> f64 {
    if samples == 0 {
        return f64::NAN;
    }
    Z99 * (mean * (1.0 - mean) / samples as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn independent_of_thread_count() {
        let draw = |rng: &mut ChaCha8Rng, t: &mut u64| *t += rng.gen_range(0..1000u64);
        let a: u64 = run(10_000, 7, draw);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b: u64 = pool.install(|| run(10_000, 7, draw));
        assert_eq!(a, b);
        let c: u64 = run(10_000, 8, draw);
        assert_ne!(a, c);
    }

    #[test]
    fn vector_tallies_merge() {
        let t: Vec<u64> = run(5000, 1, |_, t: &mut Vec<u64>| {
            if t.is_empty() {
                t.resize(2, 0);
            }
            t[0] += 1;
        });
        assert_eq!(t, vec![5000, 0]);
    }
}
