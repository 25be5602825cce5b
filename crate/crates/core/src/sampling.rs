//! Reproducible random qubit states.
//!
//! Every draw is a pure function of `(seed, counter)`: the counter selects an
//! independent ChaCha stream, so a sweep may hand sample `i` its own sampler
//! and evaluate samples in any order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::qubit::{BlochVector, DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HaarSampler {
    pub seed: u64,
    pub counter: u64,
}

impl HaarSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    /// Sampler for sample `index` of a sweep seeded with `seed`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        Self::new(seed ^ index)
    }

    fn next_rng(&mut self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter);
        self.counter += 1;
        rng
    }

    /// Haar-random pure state from two standard complex Gaussian amplitudes.
    pub fn haar_pure(&mut self) -> PureState {
        let mut rng = self.next_rng();
        loop {
            let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let alpha = Complex64::new(g[0], g[1]);
            let beta = Complex64::new(g[2], g[3]);
            if let Ok(psi) = PureState::normalized(alpha, beta) {
                return psi;
            }
        }
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.next_rng().random::<f64>()
    }

    /// Density matrix uniform in the Bloch ball.
    pub fn density(&mut self) -> DensityMatrix {
        let direction = self.haar_pure().bloch();
        let radius = self.uniform().cbrt();
        let b = BlochVector::new(
            radius * direction.a1,
            radius * direction.a2,
            radius * direction.a3,
        );
        DensityMatrix::from_bloch(b).expect("radius ≤ 1")
    }

    /// Random orthonormal basis: a Haar state and its complement.
    pub fn basis(&mut self) -> [PureState; 2] {
        let first = self.haar_pure();
        [first, first.complement()]
    }
}
