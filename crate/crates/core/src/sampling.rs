//! Deterministic pseudo-random sampling for numeric checks.
//!
//! A fixed seed must reproduce the same samples on every platform, so the
//! generator is a self-contained splitmix64.

use crate::modular::Lattice;
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct SplitMix {
    state: u64,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn next_range(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Lattice with 0.5 <= Im(tau) <= 3 and |Re(tau)| <= 0.5, so q-series
/// accuracy stays uniform across samples.
pub fn sample_lattice(rng: &mut SplitMix) -> Lattice {
    let re = rng.uniform(-0.5, 0.5);
    let im = rng.uniform(0.5, 3.0);
    let tau = Complex64::new(re, im);
    // base vector away from 0 with a modest argument
    let r = rng.uniform(0.6, 1.6);
    let phi = rng.uniform(-0.7, 0.7);
    let ell = Complex64::from_polar(r, phi);
    Lattice::new(ell, ell * tau).expect("sampled lattice is valid")
}

/// Point in the upper half plane within the calibrated band.
pub fn sample_tau(rng: &mut SplitMix) -> Complex64 {
    Complex64::new(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 3.0))
}
