//! Deterministic point sampling inside a coordinate box.
//!
//! All draws come from SplitMix64 (64-bit state, state initialised to the
//! seed). A uniform `f64` in `[0, 1)` is `(next_u64 >> 11) * 2^-53`, so the
//! draw sequence is reproducible in any language.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::circulant::CirculantMetric;
use crate::error::{GeomError, Result};
use crate::expr::Point;

/// Identifier written into reports.
pub const RNG_ALGORITHM: &str = "splitmix64";

/// Margin applied to every strict inequality when admitting sample points.
pub const DOMAIN_MARGIN: f64 = 1e-9;

/// Random candidates tried per requested point before giving up.
const MAX_ATTEMPTS_PER_POINT: usize = 1000;

const TRIAL_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct Rng64(SplitMix64);

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64(SplitMix64::seed_from_u64(seed))
    }

    /// Independent stream for trial `index` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut mix = SplitMix64::seed_from_u64(seed ^ index.wrapping_add(1).wrapping_mul(TRIAL_STRIDE));
        Rng64::new(mix.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform point in the box.
    pub fn point_in(&mut self, b: &SampleBox) -> Point {
        Point(std::array::from_fn(|i| self.range(b.0[i][0], b.0[i][1])))
    }
}

/// Three closed intervals `[lo, hi]`, one per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleBox(pub [[f64; 2]; 3]);

impl SampleBox {
    pub fn validate(&self) -> Result<()> {
        for (i, [lo, hi]) in self.0.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(GeomError::InvalidSpec(format!(
                    "sample_box interval {} is empty or non-finite: [{lo}, {hi}]",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn cube(lo: f64, hi: f64) -> Self {
        SampleBox([[lo, hi]; 3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Sampler {
    /// `count` admitted points drawn uniformly by rejection.
    Random { count: usize, seed: u64 },
    /// Cell centres of an `n1 x n2 x n3` grid; inadmissible cells are skipped.
    Grid { n: [usize; 3] },
}

/// Admitted points and how many candidates were examined.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub points: Vec<Point>,
    pub attempts: usize,
}

pub fn sample_points(m: &CirculantMetric, sampler: &Sampler, bx: &SampleBox) -> Result<Sample> {
    bx.validate()?;
    let mut points = Vec::new();
    let mut attempts = 0;
    match *sampler {
        Sampler::Random { count, seed } => {
            let mut rng = Rng64::new(seed);
            let limit = count.saturating_mul(MAX_ATTEMPTS_PER_POINT).max(MAX_ATTEMPTS_PER_POINT);
            while points.len() < count && attempts < limit {
                attempts += 1;
                let p = rng.point_in(bx);
                if m.admits(&p, DOMAIN_MARGIN) {
                    points.push(p);
                }
            }
        }
        Sampler::Grid { n } => {
            let coord = |axis: usize, k: usize| {
                let [lo, hi] = bx.0[axis];
                lo + (hi - lo) * (k as f64 + 0.5) / n[axis] as f64
            };
            for i in 0..n[0] {
                for j in 0..n[1] {
                    for k in 0..n[2] {
                        attempts += 1;
                        let p = Point::new(coord(0, i), coord(1, j), coord(2, k));
                        if m.admits(&p, DOMAIN_MARGIN) {
                            points.push(p);
                        }
                    }
                }
            }
        }
    }
    if points.is_empty() {
        return Err(GeomError::EmptySample { attempts });
    }
    Ok(Sample { points, attempts })
}
