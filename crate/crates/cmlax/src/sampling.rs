//! Seeded random sample points and the parallel max-residual sweep.

use crate::error::{Error, Result};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MAX_REDRAWS: usize = 50;

pub struct Sampler {
    rng: ChaCha8Rng,
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for sample `index` of a named sweep.
    pub fn split(seed: u64, stream: &str, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(stream));
        rng.set_stream(index);
        Sampler { rng }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Uniform in the box |Re| <= re, |Im| <= im.
    pub fn complex(&mut self, re: f64, im: f64) -> C64 {
        C64::new(self.uniform(-re, re), self.uniform(-im, im))
    }

    /// x + y tau with x, y uniform in [-1/2, 1/2): a point of the period cell.
    pub fn cell_point(&mut self, tau: C64) -> C64 {
        let x = self.uniform(-0.5, 0.5);
        let y = self.uniform(-0.5, 0.5);
        tau * y + x
    }

    pub fn complex_vec(&mut self, n: usize, re: f64, im: f64) -> Vec<C64> {
        (0..n).map(|_| self.complex(re, im)).collect()
    }
}

pub struct Sweep {
    pub max: Vec<f64>,
    pub samples: usize,
    pub resampled: usize,
}

/// Runs `samples` independent draws of `f` (one sampler per index) and keeps
/// the per-column maximum. Draws that land near a pole are redrawn and counted.
pub fn sweep<F>(seed: u64, stream: &str, samples: usize, columns: usize, f: F) -> Result<Sweep>
where
    F: Fn(&mut Sampler) -> Result<Vec<f64>> + Sync,
{
    let per: Vec<Result<(Vec<f64>, usize)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut s = Sampler::split(seed, stream, i as u64);
            let mut redraws = 0;
            loop {
                match f(&mut s) {
                    Ok(v) => return Ok((v, redraws)),
                    Err(Error::PoleProximity { .. }) if redraws < MAX_REDRAWS => redraws += 1,
                    Err(e) => return Err(e),
                }
            }
        })
        .collect();
    let mut max = vec![0.0f64; columns];
    let mut resampled = 0;
    for r in per {
        let (v, k) = r?;
        resampled += k;
        for (m, x) in max.iter_mut().zip(v) {
            *m = if m.is_nan() || x.is_nan() {
                f64::NAN
            } else {
                m.max(x)
            };
        }
    }
    Ok(Sweep {
        max,
        samples,
        resampled,
    })
}
