use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u32) -> f64 {
    let inv = 1.0 / b as f64;
    let (mut f, mut out) = (inv, 0.0);
    while i > 0 {
        out += (i % b as u64) as f64 * f;
        i /= b as u64;
        f *= inv;
    }
    out
}

/// Halton low-discrepancy points with a seeded Cranley–Patterson shift, so
/// distinct seeds give distinct yet equally well spread samples.
#[derive(Debug, Clone)]
pub struct QuasiRandom {
    shift: Vec<f64>,
    index: u64,
}

impl QuasiRandom {
    /// `dim` must not exceed 8.
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.gen::<f64>()).collect();
        // Skip the first few points, which cluster near the origin.
        QuasiRandom { shift, index: 17 }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// Next point of the unit cube.
    pub fn next_unit(&mut self) -> Vec<f64> {
        self.index += 1;
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, p)| (radical_inverse(self.index, p) + s).fract())
            .collect()
    }

    /// Next point of the box `[lo_i, hi_i]`.
    pub fn next_in(&mut self, bounds: &[(f64, f64)]) -> Vec<f64> {
        assert_eq!(bounds.len(), self.dim());
        self.next_unit()
            .into_iter()
            .zip(bounds)
            .map(|(t, (lo, hi))| lo + t * (hi - lo))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_two_inverse() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(6, 2), 0.375);
    }

    #[test]
    fn same_seed_same_points() {
        let mut a = QuasiRandom::new(3, 42);
        let mut b = QuasiRandom::new(3, 42);
        for _ in 0..10 {
            assert_eq!(a.next_unit(), b.next_unit());
        }
        let mut c = QuasiRandom::new(3, 43);
        assert_ne!(a.next_unit(), c.next_unit());
    }

    #[test]
    fn points_fill_the_box_evenly() {
        let mut q = QuasiRandom::new(2, 7);
        let mut counts = [0usize; 4];
        for _ in 0..400 {
            let p = q.next_in(&[(-1.0, 1.0), (-1.0, 1.0)]);
            assert!(p.iter().all(|c| (-1.0..=1.0).contains(c)));
            counts[(p[0] > 0.0) as usize * 2 + (p[1] > 0.0) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (80..=120).contains(&c)), "{counts:?}");
    }
}
