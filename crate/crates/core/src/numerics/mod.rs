//! Dense and iterative linear algebra plus the special functions used by the
//! rest of the crate.
//!
//! Everything here is a pure function of its inputs.

mod bessel;
mod eigen;
mod lambert;
mod lanczos;
mod roots;
mod svd;

pub use bessel::{bessel_k_imag, bessel_k_imag_scaled};
pub use eigen::{hermitian_eig, sym_eig, EigenDecomposition, HermitianEigen};
pub use lambert::lambert_w0;
pub use lanczos::{smallest_eigenpair, EigenPair, LanczosOptions, Scalar};
pub use roots::{find_roots, RootOptions, RootScan};
pub use svd::{svd, SingularValueDecomposition};

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative tolerance used when accepting a matrix as symmetric.
const SYMMETRY_TOL: f64 = 1e-12;

/// A real symmetric matrix.
///
/// The stored entries are exactly symmetric: the constructor verifies the
/// input is symmetric to a relative tolerance and then averages the two
/// triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSymmetricMatrix {
    entries: Array2<f64>,
}

impl RealSymmetricMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::Shape(format!(
                "expected a square matrix, got {rows}x{cols}"
            )));
        }
        if rows == 0 {
            return Err(Error::Shape("matrix order must be positive".into()));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = max_abs(entries.view()).max(1.0);
        let defect = entries
            .indexed_iter()
            .map(|((i, j), &x)| (x - entries[[j, i]]).abs())
            .fold(0.0, f64::max);
        if defect > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { defect });
        }
        let sym = (&entries + &entries.t()) * 0.5;
        Ok(Self { entries: sym })
    }

    /// Builds a diagonal matrix.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(Array2::from_diag(&ndarray::Array1::from(diag.to_vec())))
    }

    pub fn identity(order: usize) -> Result<Self> {
        Self::new(Array2::eye(order))
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.entries
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub(crate) fn max_abs(m: ArrayView2<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Conjugate transpose.
pub fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

/// Kronecker product `a ⊗ b` with row index `(i, k) -> i * b.nrows() + k`.
pub fn kron<T>(a: &Array2<T>, b: &Array2<T>) -> Array2<T>
where
    T: Copy + std::ops::Mul<Output = T> + Default,
{
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::from_elem((ar * br, ac * bc), T::default());
    for ((i, j), &x) in a.indexed_iter() {
        for ((k, l), &y) in b.indexed_iter() {
            out[[i * br + k, j * bc + l]] = x * y;
        }
    }
    out
}

/// Promotes a real matrix to complex.
pub fn to_complex(m: &Array2<f64>) -> Array2<C64> {
    m.mapv(|x| C64::new(x, 0.0))
}
