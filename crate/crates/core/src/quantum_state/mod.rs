//! Bipartite pure states and the quantities derived from them: reduced
//! density matrices, von Neumann entropy, Schmidt decomposition, fidelity and
//! distance-minimizing truncation.
//!
//! A state over a left ⊗ right basis is stored as its coefficient matrix
//! `ψ[a, A]`. The reduced density matrices follow
//!
//! ```text
//! ρ_R = ψ†ψ / Tr ψ†ψ,      ρ_L = ψ* ψᵀ / Tr ψ* ψᵀ,
//! ```
//!
//! and entropies are measured in nats.

pub mod sampling;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::numerics::{adjoint, hermitian_eig, kron, svd, HermitianEigen};

const DENSITY_TOL: f64 = 1e-12;
const UNITARITY_TOL: f64 = 1e-10;

/// Normalized pure state of a left ⊗ right system, `Σ |ψ_aA|² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    coeff: Array2<C64>,
}

impl BipartiteState {
    /// Normalizes the coefficient matrix `ψ[a, A]`.
    pub fn new(coeff: Array2<C64>) -> Result<Self> {
        let (dl, dr) = coeff.dim();
        if dl == 0 || dr == 0 {
            return Err(Error::Shape(format!(
                "state dimensions must be positive, got {dl}x{dr}"
            )));
        }
        if coeff.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = frobenius(&coeff);
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            coeff: coeff.mapv(|z| z / norm),
        })
    }

    pub fn from_real(coeff: Array2<f64>) -> Result<Self> {
        Self::new(coeff.mapv(|x| C64::new(x, 0.0)))
    }

    /// `|left⟩ ⊗ |right⟩`.
    pub fn product(left: &[C64], right: &[C64]) -> Result<Self> {
        let coeff = Array2::from_shape_fn((left.len(), right.len()), |(a, b)| left[a] * right[b]);
        Self::new(coeff)
    }

    /// Computational basis state `|a⟩ ⊗ |A⟩`.
    pub fn basis(dl: usize, dr: usize, a: usize, big_a: usize) -> Result<Self> {
        if a >= dl || big_a >= dr {
            return invalid(format!("basis index ({a},{big_a}) outside {dl}x{dr}"));
        }
        let mut coeff = Array2::zeros((dl, dr));
        coeff[[a, big_a]] = C64::new(1.0, 0.0);
        Self::new(coeff)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let mut coeff = Array2::zeros((2, 2));
        coeff[[0, 0]] = C64::new(1.0, 0.0);
        coeff[[1, 1]] = C64::new(1.0, 0.0);
        Self::new(coeff).expect("nonzero")
    }

    pub fn coeff(&self) -> &Array2<C64> {
        &self.coeff
    }

    pub fn left_dim(&self) -> usize {
        self.coeff.nrows()
    }

    pub fn right_dim(&self) -> usize {
        self.coeff.ncols()
    }

    fn check_same_shape(&self, other_shape: (usize, usize)) -> Result<()> {
        if self.coeff.dim() != other_shape {
            return Err(Error::Shape(format!(
                "states have shapes {:?} and {:?}",
                self.coeff.dim(),
                other_shape
            )));
        }
        Ok(())
    }
}

fn frobenius(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, positive-semidefinite, unit-trace matrix.
///
/// The eigen-decomposition is computed once on construction (it is needed to
/// check positivity) and kept.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: Array2<C64>,
    eigen: HermitianEigen,
}

impl DensityMatrix {
    /// Validates `entries` against the density-matrix invariants.
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::Shape(format!(
                "density matrix must be square and nonempty, got {r}x{c}"
            )));
        }
        let defect = entries
            .indexed_iter()
            .map(|((i, j), z)| (z - entries[[j, i]].conj()).norm())
            .fold(0.0, f64::max);
        if defect > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity defect {defect:e}"
            )));
        }
        let mut entries = entries;
        for i in 0..r {
            for j in 0..i {
                let avg = (entries[[i, j]] + entries[[j, i]].conj()) * 0.5;
                entries[[i, j]] = avg;
                entries[[j, i]] = avg.conj();
            }
            entries[[i, i]].im = 0.0;
        }
        let trace: f64 = entries.diag().iter().map(|z| z.re).sum();
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace {trace} differs from 1"
            )));
        }
        let eigen = hermitian_eig(&entries)?;
        let min = eigen.values[0];
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { entries, eigen })
    }

    /// Normalizes a Hermitian PSD matrix by its trace first.
    pub fn from_unnormalized(m: Array2<C64>) -> Result<Self> {
        let trace: f64 = m.diag().iter().map(|z| z.re).sum();
        if !(trace > 0.0) {
            return Err(Error::InvalidDensity(format!(
                "trace {trace} is not positive"
            )));
        }
        Self::new(m.mapv(|z| z / trace))
    }

    /// Projector onto a unit vector.
    pub fn pure(vector: &[C64]) -> Result<Self> {
        let v = Array1::from(vector.to_vec());
        let outer = Array2::from_shape_fn((v.len(), v.len()), |(i, j)| v[i] * v[j].conj());
        Self::from_unnormalized(outer)
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigen.values
    }

    /// Eigenvalues clamped to `[0, 1]`, descending.
    pub fn spectrum_descending(&self) -> Vec<f64> {
        self.eigen
            .values
            .iter()
            .rev()
            .map(|&p| p.clamp(0.0, 1.0))
            .collect()
    }

    /// Eigenvectors as columns, matching [`eigenvalues`](Self::eigenvalues).
    pub fn eigenvectors(&self) -> &Array2<C64> {
        &self.eigen.vectors
    }
}

/// `ρ_R = ψ†ψ / Tr ψ†ψ`, acting on the right factor.
pub fn reduced_density_right(state: &BipartiteState) -> Result<DensityMatrix> {
    let psi = state.coeff();
    DensityMatrix::from_unnormalized(adjoint(psi).dot(psi))
}

/// `ρ_L = ψ* ψᵀ / Tr ψ* ψᵀ`, acting on the left factor.
pub fn reduced_density_left(state: &BipartiteState) -> Result<DensityMatrix> {
    let psi = state.coeff();
    DensityMatrix::from_unnormalized(psi.mapv(|z| z.conj()).dot(&psi.t()))
}

/// `−Σ p ln p` over a probability vector, with `0 ln 0 = 0` and each entry
/// clamped to `[0, 1]`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// `S = −Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(rho.eigenvalues().as_slice().expect("contiguous"))
}

/// `ψ = Σ_k c_k |l_k⟩ ⊗ |r_k⟩`, coefficients descending.
///
/// When coefficients are degenerate the vectors are not unique; only the
/// coefficients are basis-independent.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    /// `d_L × k`, orthonormal columns.
    pub left: Array2<C64>,
    /// `d_R × k`, orthonormal columns.
    pub right: Array2<C64>,
}

impl SchmidtDecomposition {
    /// Rebuilds `ψ[a, A] = Σ_k c_k l_k[a] r_k[A]`.
    pub fn reconstruct(&self) -> Array2<C64> {
        let (dl, k) = self.left.dim();
        let dr = self.right.nrows();
        let mut out = Array2::zeros((dl, dr));
        for j in 0..k {
            let c = self.coefficients[j];
            for a in 0..dl {
                let l = self.left[[a, j]] * c;
                for b in 0..dr {
                    out[[a, b]] += l * self.right[[b, j]];
                }
            }
        }
        out
    }

    /// Reduced-density weights `c_k²`.
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }
}

pub fn schmidt(state: &BipartiteState) -> Result<SchmidtDecomposition> {
    let d = svd(state.coeff())?;
    Ok(SchmidtDecomposition {
        coefficients: d.sigma.to_vec(),
        left: d.u,
        right: d.v.mapv(|z| z.conj()),
    })
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &BipartiteState, b: &BipartiteState) -> Result<f64> {
    a.check_same_shape(b.coeff().dim())?;
    let overlap: C64 = a
        .coeff()
        .iter()
        .zip(b.coeff().iter())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm_sqr().min(1.0))
}

/// Result of keeping the `m` dominant left states.
#[derive(Clone, Debug)]
pub struct Truncation {
    /// Renormalized projected state.
    pub state: BipartiteState,
    /// Projection before renormalization, `P ψ`.
    pub projection: Array2<C64>,
    /// Discarded weight `Σ_{k>m} c_k²`.
    pub weight: f64,
    pub kept: usize,
}

/// Projects `ψ` onto the span of the `m` largest-eigenvalue eigenstates of
/// the left reduced density matrix (the leading left Schmidt vectors).
pub fn truncate(state: &BipartiteState, m: usize) -> Result<Truncation> {
    if m == 0 || m > state.left_dim() {
        return invalid(format!(
            "kept states must lie in 1..={}, got {m}",
            state.left_dim()
        ));
    }
    let s = schmidt(state)?;
    let k = s.coefficients.len().min(m);
    let basis = s.left.slice(ndarray::s![.., ..k]).to_owned();
    let projection = project_left(state, &basis)?;
    let weight = s.coefficients.iter().skip(k).map(|c| c * c).sum::<f64>();
    let state = BipartiteState::new(projection.clone())?;
    Ok(Truncation {
        state,
        projection,
        weight,
        kept: k,
    })
}

/// `P ψ` with `P = Q Q†` for the orthonormal columns `Q` (`d_L × m`).
pub fn project_left(state: &BipartiteState, basis: &Array2<C64>) -> Result<Array2<C64>> {
    if basis.nrows() != state.left_dim() {
        return Err(Error::Shape(format!(
            "projector basis has {} rows, state has left dimension {}",
            basis.nrows(),
            state.left_dim()
        )));
    }
    Ok(basis.dot(&adjoint(basis).dot(state.coeff())))
}

/// `‖ψ̃ − ψ‖²`, with `reduced` taken as given (not renormalized).
pub fn truncation_distance(original: &BipartiteState, reduced: &Array2<C64>) -> Result<f64> {
    original.check_same_shape(reduced.dim())?;
    Ok(original
        .coeff()
        .iter()
        .zip(reduced.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum())
}

/// Evolves `ρ_L ⊗ ρ_R` by `U` and returns both partial traces of
/// `U (ρ_L ⊗ ρ_R) U†`.
///
/// The product basis index is `(a, A) ↦ a·d_R + A`.
pub fn evolve_product(
    rho_left: &DensityMatrix,
    rho_right: &DensityMatrix,
    unitary: &Array2<C64>,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let (dl, dr) = (rho_left.dim(), rho_right.dim());
    let n = dl * dr;
    if unitary.dim() != (n, n) {
        return Err(Error::Shape(format!(
            "unitary is {:?}, expected {n}x{n}",
            unitary.dim()
        )));
    }
    let defect = unitarity_defect(unitary);
    if defect > UNITARITY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    let joint = kron(rho_left.entries(), rho_right.entries());
    let evolved = unitary.dot(&joint).dot(&adjoint(unitary));
    let (left, right) = partial_traces(&evolved, dl, dr);
    Ok((
        DensityMatrix::from_unnormalized(left)?,
        DensityMatrix::from_unnormalized(right)?,
    ))
}

/// `max |U†U − I|`.
pub fn unitarity_defect(u: &Array2<C64>) -> f64 {
    let n = u.nrows();
    if u.ncols() != n {
        return f64::INFINITY;
    }
    let gram = adjoint(u).dot(u);
    (gram - Array2::<C64>::eye(n))
        .iter()
        .fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Partial traces of a `(d_L·d_R)`-dimensional operator over the right and
/// left factors respectively.
pub fn partial_traces(rho: &Array2<C64>, dl: usize, dr: usize) -> (Array2<C64>, Array2<C64>) {
    let t = rho
        .view()
        .into_shape_with_order((dl, dr, dl, dr))
        .expect("square of dl*dr");
    let mut left = Array2::zeros((dl, dl));
    let mut right = Array2::zeros((dr, dr));
    for a in 0..dl {
        for b in 0..dl {
            left[[a, b]] = (0..dr).map(|k| t[[a, k, b, k]]).sum();
        }
    }
    for a in 0..dr {
        for b in 0..dr {
            right[[a, b]] = (0..dl).map(|k| t[[k, a, k, b]]).sum();
        }
    }
    (left, right)
}

/// Entropy of the pure state's left factor: shortcut through the Schmidt
/// weights, no density matrix formed.
pub fn entanglement_entropy(state: &BipartiteState) -> Result<f64> {
    Ok(shannon_entropy(&schmidt(state)?.weights()))
}
