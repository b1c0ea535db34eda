//! Exact Gaussian ground state and reduced-state entanglement.
//!
//! The ground state of `½π² + ½φᵀVφ` has covariances `X = ⟨φφ⟩ = ½V^{−1/2}`
//! and `P = ⟨ππ⟩ = ½V^{1/2}`. Restricting both to a region `B` gives a mixed
//! Gaussian state whose symplectic eigenvalues `ν_k` are the square roots of
//! the eigenvalues of `X_B P_B`. Each `ν_k` is a thermal mode with
//! `ε_k = ln((ν_k+½)/(ν_k−½))`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use ndarray::Array2;

use super::QuadraticPotential;
use crate::error::{invalid, Error, Result};
use crate::numerics::{sym_eig, RealSymmetricMatrix};

#[derive(Clone, Debug)]
pub struct GaussianGroundState {
    x: Array2<f64>,
    p: Array2<f64>,
}

impl GaussianGroundState {
    /// `⟨φ_i φ_j⟩`.
    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    /// `⟨π_i π_j⟩`.
    pub fn p(&self) -> &Array2<f64> {
        &self.p
    }

    pub fn n_sites(&self) -> usize {
        self.x.nrows()
    }
}

pub fn ground_state_covariance(v: &QuadraticPotential) -> Result<GaussianGroundState> {
    let eig = sym_eig(v.matrix())?;
    let min = eig.values[0];
    if min <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    let x = matrix_function(&eig.vectors, eig.values.as_slice().unwrap(), |l| {
        0.5 / l.sqrt()
    });
    let p = matrix_function(&eig.vectors, eig.values.as_slice().unwrap(), |l| {
        0.5 * l.sqrt()
    });
    Ok(GaussianGroundState { x, p })
}

/// `U f(Λ) Uᵀ`, symmetrized.
fn matrix_function(vectors: &Array2<f64>, values: &[f64], f: impl Fn(f64) -> f64) -> Array2<f64> {
    let scaled = Array2::from_shape_fn(vectors.dim(), |(i, k)| vectors[[i, k]] * f(values[k]));
    let m = scaled.dot(&vectors.t());
    (&m + &m.t()) * 0.5
}

/// A nonempty set of chain sites, stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRegion {
    sites: Vec<usize>,
}

impl BlockRegion {
    pub fn from_sites(mut sites: Vec<usize>) -> Result<Self> {
        sites.sort_unstable();
        sites.dedup();
        if sites.is_empty() {
            return invalid("region must contain at least one site");
        }
        Ok(Self { sites })
    }

    /// Sites `[start, end)`.
    pub fn range(start: usize, end: usize) -> Result<Self> {
        Self::from_sites((start..end).collect())
    }

    /// The half-space block `[0, len)`.
    pub fn prefix(len: usize) -> Result<Self> {
        Self::range(0, len)
    }

    /// Sites of an `n_sites` chain outside this region; `None` when empty.
    pub fn complement(&self, n_sites: usize) -> Option<Self> {
        let rest: Vec<usize> = (0..n_sites)
            .filter(|s| self.sites.binary_search(s).is_err())
            .collect();
        Self::from_sites(rest).ok()
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

fn sub_block(m: &Array2<f64>, sites: &[usize]) -> Array2<f64> {
    Array2::from_shape_fn((sites.len(), sites.len()), |(i, j)| m[[sites[i], sites[j]]])
}

/// Symplectic eigenvalues of the reduced state on `region`, ascending,
/// clamped below at `½`.
pub fn symplectic_eigenvalues(gs: &GaussianGroundState, region: &BlockRegion) -> Result<Vec<f64>> {
    let n = gs.n_sites();
    if let Some(&bad) = region.sites().iter().find(|&&s| s >= n) {
        return invalid(format!("site {bad} outside a chain of {n} sites"));
    }
    let xb = sub_block(&gs.x, region.sites());
    let pb = sub_block(&gs.p, region.sites());
    // X_B P_B is similar to √X_B P_B √X_B, which is symmetric.
    let xe = sym_eig(&RealSymmetricMatrix::new(xb)?)?;
    let sqrt_x = matrix_function(&xe.vectors, xe.values.as_slice().unwrap(), |l| {
        l.max(0.0).sqrt()
    });
    let sym = sqrt_x.dot(&pb).dot(&sqrt_x);
    let sym = (&sym + &sym.t()) * 0.5;
    let eig = sym_eig(&RealSymmetricMatrix::new(sym)?)?;
    Ok(eig.values.iter().map(|&l| l.max(0.25).sqrt()).collect())
}

/// Entropy of one thermal mode, `(ν+½)ln(ν+½) − (ν−½)ln(ν−½)`; zero at `ν = ½`.
pub fn mode_entropy(nu: f64) -> f64 {
    let up = nu + 0.5;
    let down = nu - 0.5;
    let a = if up > 0.0 { up * up.ln() } else { 0.0 };
    let b = if down > 0.0 { down * down.ln() } else { 0.0 };
    a - b
}

/// Von Neumann entropy (nats) of the reduced Gaussian state on `region`.
pub fn block_entropy(gs: &GaussianGroundState, region: &BlockRegion) -> Result<f64> {
    Ok(symplectic_eigenvalues(gs, region)?
        .into_iter()
        .map(mode_entropy)
        .sum())
}

/// The `n_levels` largest eigenvalues of the reduced density matrix on
/// `region`, descending.
pub fn entanglement_spectrum(
    gs: &GaussianGroundState,
    region: &BlockRegion,
    n_levels: usize,
) -> Result<Vec<f64>> {
    Ok(spectrum_from_symplectic(
        &symplectic_eigenvalues(gs, region)?,
        n_levels,
    ))
}

#[derive(Debug)]
struct Level {
    cost: f64,
    occupation: Vec<u32>,
    last: usize,
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Level {}
impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Level {
    // min-heap on cost
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.occupation.cmp(&self.occupation))
    }
}

/// Largest eigenvalues `Π_k (1 − e^{−ε_k}) e^{−n_k ε_k}` over occupation
/// tuples, descending. Modes with `ν = ½` are pure and contribute a single
/// factor of one.
pub fn spectrum_from_symplectic(nus: &[f64], n_levels: usize) -> Vec<f64> {
    let energies: Vec<f64> = nus
        .iter()
        .filter(|&&nu| nu > 0.5)
        .map(|&nu| ((nu + 0.5) / (nu - 0.5)).ln())
        .filter(|e| e.is_finite())
        .collect();
    let log_prefactor: f64 = energies.iter().map(|&e| (-(-e).exp()).ln_1p()).sum();

    let mut out = Vec::with_capacity(n_levels);
    if n_levels == 0 {
        return out;
    }
    let mut heap = BinaryHeap::new();
    heap.push(Level {
        cost: 0.0,
        occupation: vec![0; energies.len()],
        last: 0,
    });
    while let Some(level) = heap.pop() {
        out.push((log_prefactor - level.cost).exp());
        if out.len() == n_levels {
            break;
        }
        // Each tuple is generated once: only modes at or after the last
        // incremented one may be incremented again.
        for k in level.last..energies.len() {
            let mut occupation = level.occupation.clone();
            occupation[k] += 1;
            heap.push(Level {
                cost: level.cost + energies[k],
                occupation,
                last: k,
            });
        }
    }
    out
}
