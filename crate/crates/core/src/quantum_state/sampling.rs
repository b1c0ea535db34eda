//! Seeded random states, density matrices and unitaries.
//!
//! Unitaries come from Gram-Schmidt orthonormalization of a matrix of
//! independent standard complex Gaussians; with the triangular factor's
//! diagonal made positive this is Haar-distributed.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{BipartiteState, DensityMatrix};
use crate::numerics::adjoint;

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Array2<C64> {
    Array2::from_shape_simple_fn((rows, cols), || complex_gaussian(rng))
}

/// Uniformly random pure state of a `dl × dr` system.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dl: usize, dr: usize) -> BipartiteState {
    BipartiteState::new(gaussian_matrix(rng, dl, dr))
        .expect("Gaussian matrix is almost surely nonzero")
}

/// Full-rank mixed state `G G† / Tr G G†` with `G` a square complex
/// Gaussian matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    DensityMatrix::from_unnormalized(g.dot(&adjoint(&g)))
        .expect("Wishart matrix is a valid density")
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt, two passes).
pub fn orthonormalize_columns(m: &Array2<C64>) -> Array2<C64> {
    let (rows, cols) = m.dim();
    let mut q = m.clone();
    for j in 0..cols {
        for _ in 0..2 {
            for i in 0..j {
                let overlap: C64 = (0..rows).map(|r| q[[r, i]].conj() * q[[r, j]]).sum();
                for r in 0..rows {
                    let qi = q[[r, i]];
                    q[[r, j]] -= overlap * qi;
                }
            }
        }
        let norm = (0..rows).map(|r| q[[r, j]].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..rows {
            q[[r, j]] /= norm;
        }
    }
    q
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Array2<C64> {
    orthonormalize_columns(&gaussian_matrix(rng, dim, dim))
}

/// `dim × rank` matrix with orthonormal columns spanning a random subspace.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Array2<C64> {
    orthonormalize_columns(&gaussian_matrix(rng, dim, rank))
}
