//! Random fixtures for unit tests.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix<f64> {
    random_matrix(r, n, n).hermitian_part()
}

/// Random PSD matrix with unit trace.
pub fn random_psd(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix<f64> {
    let g = random_matrix(r, n, n);
    let p = &g * &g.adjoint();
    let t = p.trace().re;
    p.scale(1.0 / t).hermitian_part()
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<Complex<f64>> {
    random_matrix(r, n, 1).column(0)
}

pub fn random_unitary(r: &mut ChaCha8Rng, n: usize) -> ComplexMatrix<f64> {
    let params: Vec<f64> = (0..n * n).map(|_| r.random_range(-3.0..3.0)).collect();
    crate::optim::UnitaryParams::new(n, params)
        .unwrap()
        .to_unitary()
}
