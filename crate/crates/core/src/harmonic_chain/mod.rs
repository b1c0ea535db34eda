//! A free scalar field discretized on a chain with unit spacing:
//!
//! ```text
//! H = ½ Σ_i π_i² + ½ φᵀ V φ,    V = tridiag(−1, 2 + m², −1)
//! ```
//!
//! With fixed ends the field is clamped to zero beyond the chain, so every
//! diagonal entry is `2 + m²`; with open ends the two end sites only see one
//! neighbour and carry `1 + m²`.

mod fock;
mod gaussian;

pub use fock::{
    fock_ground_state, FockGroundState, FockHamiltonian, LocalOscillator, DEFAULT_DENSE_LIMIT,
};
pub use gaussian::{
    block_entropy, entanglement_spectrum, ground_state_covariance, mode_entropy,
    spectrum_from_symplectic, symplectic_eigenvalues, BlockRegion, GaussianGroundState,
};

use ndarray::Array2;

use crate::error::{invalid, Error, Result};
use crate::numerics::{sym_eig, RealSymmetricMatrix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Boundary {
    Open,
    #[default]
    FixedEnds,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    pub n_sites: usize,
    /// Lattice units (spacing 1).
    pub mass: f64,
    pub boundary: Boundary,
}

impl ChainSpec {
    /// Fixed-ends chain.
    pub fn new(n_sites: usize, mass: f64) -> Self {
        Self {
            n_sites,
            mass,
            boundary: Boundary::FixedEnds,
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    /// Self-frequency `√V_ii` of an interior site.
    pub fn interior_frequency(&self) -> f64 {
        (2.0 + self.mass * self.mass).sqrt()
    }
}

/// Positive-definite coupling matrix `V` of the chain.
#[derive(Clone, Debug)]
pub struct QuadraticPotential {
    matrix: RealSymmetricMatrix,
    eigenvalues: Vec<f64>,
}

impl QuadraticPotential {
    pub fn from_matrix(matrix: RealSymmetricMatrix) -> Result<Self> {
        let eig = sym_eig(&matrix)?;
        let min_eigenvalue = eig.values[0];
        if min_eigenvalue <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        Ok(Self {
            matrix,
            eigenvalues: eig.values.to_vec(),
        })
    }

    pub fn matrix(&self) -> &RealSymmetricMatrix {
        &self.matrix
    }

    pub fn entries(&self) -> &Array2<f64> {
        self.matrix.entries()
    }

    pub fn n_sites(&self) -> usize {
        self.matrix.order()
    }

    /// Ascending normal-mode frequencies squared.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Zero-point energy `½ Σ_k √λ_k`.
    pub fn exact_ground_energy(&self) -> f64 {
        0.5 * self.eigenvalues.iter().map(|l| l.sqrt()).sum::<f64>()
    }

    /// Same diagonal with every coupling removed.
    pub fn decoupled(&self) -> Self {
        let diag: Vec<f64> = self.entries().diag().to_vec();
        Self::from_matrix(RealSymmetricMatrix::diagonal(&diag).expect("finite diagonal"))
            .expect("diagonal of a positive-definite matrix is positive")
    }
}

pub fn build_potential(spec: &ChainSpec) -> Result<QuadraticPotential> {
    let n = spec.n_sites;
    if n == 0 {
        return invalid("chain needs at least one site");
    }
    if !spec.mass.is_finite() || spec.mass < 0.0 {
        return invalid(format!(
            "mass must be finite and nonnegative, got {}",
            spec.mass
        ));
    }
    if spec.boundary == Boundary::Open && spec.mass == 0.0 {
        return Err(Error::ZeroMode);
    }
    let m2 = spec.mass * spec.mass;
    let mut v = Array2::zeros((n, n));
    for i in 0..n {
        v[[i, i]] = 2.0 + m2;
        if i + 1 < n {
            v[[i, i + 1]] = -1.0;
            v[[i + 1, i]] = -1.0;
        }
    }
    if spec.boundary == Boundary::Open {
        v[[0, 0]] -= 1.0;
        v[[n - 1, n - 1]] -= 1.0;
    }
    QuadraticPotential::from_matrix(RealSymmetricMatrix::new(v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site() {
        let fixed = build_potential(&ChainSpec::new(1, 1.0)).unwrap();
        assert_eq!(fixed.entries()[[0, 0]], 3.0);
        let open = build_potential(&ChainSpec::new(1, 1.0).with_boundary(Boundary::Open)).unwrap();
        assert_eq!(open.entries()[[0, 0]], 1.0);
    }

    #[test]
    fn massless_three_site_spectrum() {
        let v = build_potential(&ChainSpec::new(3, 0.0)).unwrap();
        assert_eq!(v.entries()[[1, 1]], 2.0);
        assert_eq!(v.entries()[[0, 1]], -1.0);
        assert_eq!(v.entries()[[0, 2]], 0.0);
        // analytic: 2 − 2cos(kπ/4), k = 1, 2, 3
        let s2 = 2f64.sqrt();
        for (got, want) in v.eigenvalues().iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn massless_open_chain_rejected() {
        let err =
            build_potential(&ChainSpec::new(4, 0.0).with_boundary(Boundary::Open)).unwrap_err();
        assert_eq!(err, Error::ZeroMode);
        assert!(err.to_string().contains("mass > 0"));
    }

    #[test]
    fn decoupled_is_diagonal() {
        let v = build_potential(&ChainSpec::new(5, 0.3))
            .unwrap()
            .decoupled();
        for ((i, j), &x) in v.entries().indexed_iter() {
            if i != j {
                assert_eq!(x, 0.0);
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(build_potential(&ChainSpec::new(0, 1.0)).is_err());
        assert!(build_potential(&ChainSpec::new(3, -1.0)).is_err());
        let indefinite = RealSymmetricMatrix::new(ndarray::array![[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(
            QuadraticPotential::from_matrix(indefinite),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
