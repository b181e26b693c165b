//! Seeded orbit sampling ("chaos game") on the sphere.

use crate::correspondence::{Correspondence, WeightedFiber};
use crate::error::{Error, Result};
use crate::sphere::SpherePoint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Which fibers an orbit follows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitDirection {
    /// `z -> w` with `p(z, w) = 0`.
    Forward,
    /// `w -> z` with `p(z, w) = 0`; orbits accumulate on repelling sets.
    #[default]
    Backward,
    /// A fair coin picks the direction at every step.
    Mixed,
}

#[derive(Clone, Debug)]
pub struct SampleOptions {
    /// Pick fiber points with probability proportional to their branch index.
    pub weighted: bool,
    /// Number of independent orbits; points are split evenly among them.
    pub workers: usize,
    /// Start every orbit here instead of at a random point.
    pub start: Option<SpherePoint>,
    pub burn_in: usize,
    /// Chordal clustering tolerance for fibers.
    pub tol: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            weighted: true,
            workers: 1,
            start: None,
            burn_in: 100,
            tol: 1e-6,
        }
    }
}

/// SplitMix64 finalizer applied to `seed` and the worker index.
fn worker_seed(seed: u64, worker: u64) -> u64 {
    let mut z = seed ^ worker.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Emits `iterations` orbit points after a burn-in.
///
/// Each worker runs its own orbit from a `ChaCha8` generator seeded by
/// `(seed, worker index)`; the outputs are concatenated in worker order, so
/// the cloud depends only on `seed` and `opts.workers`.
pub fn limit_set_sample(
    corr: &Correspondence,
    iterations: usize,
    seed: u64,
    direction: OrbitDirection,
    opts: &SampleOptions,
) -> Result<Vec<SpherePoint>> {
    if iterations == 0 {
        return Err(Error::invalid("iterations must be at least 1"));
    }
    let workers = opts.workers.clamp(1, iterations);
    let share = |w: usize| iterations / workers + usize::from(w < iterations % workers);
    let parts: Vec<Result<Vec<SpherePoint>>> = (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(worker_seed(seed, w as u64));
            orbit(corr, &mut rng, share(w), direction, opts)
        })
        .collect();
    let mut out = Vec::with_capacity(iterations);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

fn orbit(
    corr: &Correspondence,
    rng: &mut ChaCha8Rng,
    count: usize,
    direction: OrbitDirection,
    opts: &SampleOptions,
) -> Result<Vec<SpherePoint>> {
    let mut z = match opts.start {
        Some(p) => p,
        None => {
            // uniform in the disk of radius 2, away from the poles 0 and infinity
            let r = 2.0 * rng.random::<f64>().sqrt().max(1e-3);
            let t = std::f64::consts::TAU * rng.random::<f64>();
            SpherePoint::finite(Complex64::from_polar(r, t))
        }
    };
    let mut out = Vec::with_capacity(count);
    for step in 0..opts.burn_in + count {
        let forward = match direction {
            OrbitDirection::Forward => true,
            OrbitDirection::Backward => false,
            OrbitDirection::Mixed => rng.random::<bool>(),
        };
        let fib = if forward {
            corr.forward_fiber(&z, opts.tol)?
        } else {
            corr.backward_fiber(&z, opts.tol)?
        };
        z = choose(&fib, rng, opts.weighted);
        if step >= opts.burn_in {
            out.push(z);
        }
    }
    Ok(out)
}

fn choose(fib: &WeightedFiber, rng: &mut ChaCha8Rng, weighted: bool) -> SpherePoint {
    let weight = |m: usize| if weighted { m } else { 1 };
    let total: usize = fib.points.iter().map(|p| weight(p.multiplicity)).sum();
    let mut pick = rng.random_range(0..total);
    for p in &fib.points {
        let w = weight(p.multiplicity);
        if pick < w {
            return p.point;
        }
        pick -= w;
    }
    unreachable!("pick below total weight")
}
