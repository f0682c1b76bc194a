//! Seeded quasi-random points on the unit sphere of `C^n`.
//!
//! A Halton sequence over the `2n` real coordinates is shifted by a seeded
//! Cranley–Patterson rotation and pushed through Box–Muller, then normalized.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{CVector, C64};

const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131,
];

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    acc
}

/// Infinite iterator of unit vectors in `C^n`.
#[derive(Debug, Clone)]
pub struct SphereSequence {
    n: usize,
    index: u64,
    shift: Vec<f64>,
}

impl SphereSequence {
    pub fn new(n: usize, seed: u64) -> Self {
        assert!(2 * n <= PRIMES.len(), "dimension {n} too large for the Halton table");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..2 * n).map(|_| rng.random::<f64>()).collect();
        Self { n, index: 1, shift }
    }

    fn coordinate(&self, k: usize) -> f64 {
        let u = radical_inverse(self.index, PRIMES[k]) + self.shift[k];
        let u = u - u.floor();
        u.max(f64::MIN_POSITIVE)
    }
}

impl Iterator for SphereSequence {
    type Item = CVector;

    fn next(&mut self) -> Option<CVector> {
        loop {
            let mut gauss = Vec::with_capacity(2 * self.n);
            for pair in 0..self.n {
                let u1 = self.coordinate(2 * pair);
                let u2 = self.coordinate(2 * pair + 1);
                let radius = (-2.0 * u1.ln()).sqrt();
                let angle = std::f64::consts::TAU * u2;
                gauss.push(radius * angle.cos());
                gauss.push(radius * angle.sin());
            }
            self.index += 1;
            let x = CVector::from_iterator(
                self.n,
                gauss.chunks(2).map(|c| C64::new(c[0], c[1])),
            );
            let norm = x.norm();
            if norm > 1e-12 {
                return Some(x / C64::new(norm, 0.0));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_unit_and_deterministic() {
        let a: Vec<CVector> = SphereSequence::new(3, 9).take(50).collect();
        let b: Vec<CVector> = SphereSequence::new(3, 9).take(50).collect();
        assert_eq!(a, b);
        for x in &a {
            assert!((x.norm() - 1.0).abs() < 1e-14);
        }
        let c: Vec<CVector> = SphereSequence::new(3, 10).take(50).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn coordinates_are_roughly_centered() {
        // the mean of each coordinate over the sphere is zero
        let n = 2;
        let count = 20_000;
        let mut mean = vec![C64::new(0.0, 0.0); n];
        for x in SphereSequence::new(n, 1).take(count) {
            for i in 0..n {
                mean[i] += x[i];
            }
        }
        for m in mean {
            assert!(m.norm() / (count as f64) < 0.01);
        }
    }
}
