//! Seeded random draws shared by the samplers.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream from `seed` and a stream label.
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn real_gauss(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian (unit expected modulus squared).
pub fn complex_gauss(rng: &mut impl Rng) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    C64::new(real_gauss(rng) * s, real_gauss(rng) * s)
}

pub fn real_vector(rng: &mut impl Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| C64::new(real_gauss(rng), 0.0)).collect()
}

pub fn complex_vector(rng: &mut impl Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_gauss(rng)).collect()
}

/// Random unitary matrix times a diagonal with entries in `[0.5, 2)`, so the
/// condition number stays below 4.
pub fn random_invertible(n: usize, rng: &mut impl Rng) -> crate::linalg::DenseMatrix {
    let g = nalgebra::DMatrix::from_column_slice(n, n, &complex_vector(rng, n * n));
    let q = g.qr().q();
    let d = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|_| C64::new(0.5 + 1.5 * rng.random::<f64>(), 0.0)),
    ));
    crate::linalg::DenseMatrix::from_nalgebra(q * d)
}
