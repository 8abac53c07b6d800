//! Deterministic point sets inside balls.
//!
//! Quasi-Monte Carlo uses a digit-permuted (scrambled) Halton sequence keyed
//! by a 64-bit seed; plain Monte Carlo uses ChaCha8. Both fill the bounding box of the ball and
//! reject points outside it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::geometry::DistanceDescriptor;

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Acceptance below this ratio is treated as a starved sampler.
pub const MIN_ACCEPTANCE: f64 = 1e-3;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a list of words into one key.
pub fn mix_key(seed: u64, words: &[u64]) -> u64 {
    words.iter().fold(splitmix64(seed), |k, &w| splitmix64(k ^ w))
}

pub(crate) fn point_key(seed: u64, x: &[f64], r: f64) -> u64 {
    let mut words: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
    words.push(r.to_bits());
    mix_key(seed, &words)
}

/// Halton sequence with independent random digit permutations per (dimension, digit).
pub struct ScrambledHalton {
    perms: Vec<Vec<Vec<u32>>>,
    index: u64,
}

impl ScrambledHalton {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 || dim > PRIMES.len() {
            return invalid(format!("Halton dimension must be in 1..={}, got {dim}", PRIMES.len()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perms = PRIMES[..dim]
            .iter()
            .map(|&b| {
                let digits = (53.0 / (b as f64).log2()).ceil() as usize;
                (0..digits)
                    .map(|_| {
                        let mut p: Vec<u32> = (0..b).collect();
                        p.shuffle(&mut rng);
                        p
                    })
                    .collect()
            })
            .collect();
        Ok(Self { perms, index: 0 })
    }

    pub fn dim(&self) -> usize {
        self.perms.len()
    }

    fn coordinate(&self, d: usize, mut i: u64) -> f64 {
        let b = PRIMES[d] as u64;
        let inv = 1.0 / b as f64;
        let mut scale = inv;
        let mut u = 0.0;
        for perm in &self.perms[d] {
            let digit = (i % b) as usize;
            i /= b;
            u += perm[digit] as f64 * scale;
            scale *= inv;
        }
        // permuted trailing digits can round up to 1
        u.min(1.0 - f64::EPSILON)
    }

    pub fn next_point(&mut self, out: &mut [f64]) {
        let i = self.index;
        self.index += 1;
        for (d, o) in out.iter_mut().enumerate() {
            *o = self.coordinate(d, i);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSet {
    Qmc,
    Mc,
}

/// Points inside an open ball, with the Lebesgue volume of the ball.
#[derive(Clone, Debug)]
pub struct BallCloud {
    pub points: Vec<Vec<f64>>,
    pub volume: f64,
    pub volume_exact: bool,
    /// Points come in antithetic pairs `(y, 2x - y)`, adjacent in `points`.
    pub mirrored: bool,
    /// Accepted fraction of bounding-box draws.
    pub acceptance: f64,
}

enum Source {
    Qmc(ScrambledHalton),
    Mc(ChaCha8Rng),
}

impl Source {
    fn fill(&mut self, out: &mut [f64]) {
        match self {
            Source::Qmc(h) => h.next_point(out),
            Source::Mc(rng) => out.iter_mut().for_each(|o| *o = rng.random::<f64>()),
        }
    }
}

/// Samples `count` points strictly inside `B_r(center)`.
///
/// Norm-induced balls are mirrored about the center, so `count` is rounded
/// up to an even number there.
pub fn sample_ball(
    desc: &DistanceDescriptor,
    center: &[f64],
    r: f64,
    count: usize,
    seed: u64,
    kind: PointSet,
) -> Result<BallCloud> {
    if count == 0 {
        return invalid("sample count must be positive");
    }
    let (lo, hi) = desc.bounding_box(center, r)?;
    let n = lo.len();
    let mirrored = desc.is_norm_induced();
    let target = if mirrored { count.div_ceil(2) } else { count };
    let key = point_key(seed, center, r);
    let mut src = match kind {
        PointSet::Qmc => Source::Qmc(ScrambledHalton::new(n, key)?),
        PointSet::Mc => Source::Mc(ChaCha8Rng::seed_from_u64(key)),
    };
    let mut u = vec![0.0; n];
    let mut points = Vec::with_capacity(if mirrored { 2 * target } else { target });
    let mut drawn = 0usize;
    let mut accepted = 0usize;
    while accepted < target {
        src.fill(&mut u);
        drawn += 1;
        let y: Vec<f64> = (0..n).map(|i| lo[i] + (hi[i] - lo[i]) * u[i]).collect();
        if desc.contains(center, r, &y) {
            accepted += 1;
            if mirrored {
                let m: Vec<f64> = center.iter().zip(&y).map(|(c, v)| 2.0 * c - v).collect();
                points.push(y);
                points.push(m);
            } else {
                points.push(y);
            }
        }
        if drawn >= 1024 && (accepted as f64) < MIN_ACCEPTANCE * drawn as f64 {
            return Err(Error::Starved { accepted, drawn });
        }
    }
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let (volume, volume_exact) = match desc.exact_ball_volume(center, r) {
        Some(v) => (v, true),
        None => (box_volume * accepted as f64 / drawn as f64, false),
    };
    Ok(BallCloud { points, volume, volume_exact, mirrored, acceptance: accepted as f64 / drawn as f64 })
}
