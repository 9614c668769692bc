//! Seeded sample generation shared by the property checkers.
//!
//! Checks quantified over the whole space are exercised on pseudorandom
//! points (standard normal directions scaled by uniform radii) plus a
//! deterministic stencil of axis and structure points that random draws
//! would miss.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::vector::Vector;

/// Default radius cap for sampled points.
pub const DEFAULT_MAX_RADIUS: f64 = 10.0;

/// The RNG used by every seeded checker; its stream is stable per seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A unit direction with standard normal distribution on the sphere.
pub fn sample_direction<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let v = Vector::new(coords).expect("normal draws are finite");
        let norm = v.norm2();
        if norm > 1e-12 {
            return v.scale(1.0 / norm);
        }
    }
}

/// A random point: uniform radius in `[0, max_radius]` along a random
/// direction.
pub fn sample_point<R: Rng>(rng: &mut R, dim: usize, max_radius: f64) -> Vector {
    let r: f64 = rng.random::<f64>() * max_radius;
    sample_direction(rng, dim).scale(r)
}

/// Deterministic stencil: the origin, all `+-e_i`, then any extra structure
/// points the caller supplies (apex directions, cone rows, ...).
pub fn stencil(dim: usize, extras: &[Vector]) -> Vec<Vector> {
    let mut points = Vec::with_capacity(1 + 2 * dim + extras.len());
    points.push(Vector::zeros(dim));
    for i in 0..dim {
        let e = Vector::basis(dim, i);
        points.push(e.clone());
        points.push(e.scale(-1.0));
    }
    for extra in extras {
        if extra.dim() == dim {
            points.push(extra.clone());
        }
    }
    points
}
