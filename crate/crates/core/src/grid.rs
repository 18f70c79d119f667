//! Deterministic sample sets of domain points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{FramePoint, SpaceParams};

/// Closed interval sampled at `n` evenly spaced nodes (endpoints included).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(Error::Precondition(format!(
                "invalid axis range {min}:{max}"
            )));
        }
        if n < 2 {
            return Err(Error::Precondition(format!(
                "axis resolution must be at least 2, got {n}"
            )));
        }
        Ok(AxisRange { min, max, n })
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(move |i| {
            if i + 1 == self.n {
                self.max
            } else {
                self.min + step * i as f64
            }
        })
    }
}

/// A tensor-product grid plus seeded uniform points in the same box, both
/// filtered to `δ > min_delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    pub axes: [AxisRange; 3],
    pub random_points: usize,
    pub seed: u64,
    pub min_delta: f64,
}

impl Default for SampleGrid {
    /// `[-0.9, 0.9]³` at 5 nodes per axis, 100 random points, seed 0, `δ > 0.05`.
    fn default() -> Self {
        let axis = AxisRange {
            min: -0.9,
            max: 0.9,
            n: 5,
        };
        SampleGrid {
            axes: [axis; 3],
            random_points: 100,
            seed: 0,
            min_delta: 0.05,
        }
    }
}

impl SampleGrid {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_random_points(mut self, n: usize) -> Self {
        self.random_points = n;
        self
    }

    pub fn with_min_delta(mut self, min_delta: f64) -> Self {
        self.min_delta = min_delta;
        self
    }

    /// Grid nodes in lexicographic order, then the random points in draw order.
    pub fn points(&self, params: &SpaceParams) -> Vec<FramePoint> {
        let keep = |x: f64, y: f64| params.delta_at(x, y) > self.min_delta;
        let mut out = Vec::new();
        for x in self.axes[0].nodes() {
            for y in self.axes[1].nodes() {
                if !keep(x, y) {
                    continue;
                }
                for z in self.axes[2].nodes() {
                    if let Ok(p) = FramePoint::new(params, x, y, z) {
                        out.push(p);
                    }
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let draw = |rng: &mut ChaCha8Rng, a: &AxisRange| {
            if a.max > a.min {
                rng.gen_range(a.min..=a.max)
            } else {
                a.min
            }
        };
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < self.random_points && attempts < 100 * self.random_points {
            attempts += 1;
            let x = draw(&mut rng, &self.axes[0]);
            let y = draw(&mut rng, &self.axes[1]);
            let z = draw(&mut rng, &self.axes[2]);
            if keep(x, y) {
                if let Ok(p) = FramePoint::new(params, x, y, z) {
                    out.push(p);
                    accepted += 1;
                }
            }
        }
        out
    }
}
