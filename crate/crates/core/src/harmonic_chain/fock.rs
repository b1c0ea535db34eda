//! Brute-force ground state of the chain in a truncated product Fock basis.
//!
//! Site `i` uses the eigenbasis of its own oscillator `½π² + ½V_ii φ²`,
//! frequency `ω_i = √V_ii`, cut off at `d` levels. In that basis the on-site
//! part is exactly `ω_i(n + ½)` and the couplings are `V_ij φ_i φ_j` with
//! `φ = (a + a†)/√(2ω)`. The truncated Hamiltonian is the projection of the
//! full one, so its ground energy decreases toward the exact value as `d`
//! grows.
//!
//! Basis index of an occupation tuple `(n_0, …, n_{N−1})` is
//! `Σ_i n_i d^{N−1−i}`: site 0 is the most significant digit.

use ndarray::Array2;

use super::QuadraticPotential;
use crate::error::{invalid, Error, Result};
use crate::numerics::{smallest_eigenpair, LanczosOptions};
use crate::quantum_state::BipartiteState;

pub const DEFAULT_DENSE_LIMIT: usize = 4096;

/// Truncated single harmonic oscillator of frequency `omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalOscillator {
    pub omega: f64,
    pub dim: usize,
}

impl LocalOscillator {
    pub fn new(omega: f64, dim: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return invalid(format!(
                "oscillator frequency must be positive, got {omega}"
            ));
        }
        if dim < 1 {
            return invalid("oscillator needs at least one level");
        }
        Ok(Self { omega, dim })
    }

    /// Lowering operator, `a|n⟩ = √n |n−1⟩`.
    pub fn lowering(&self) -> Array2<f64> {
        Array2::from_shape_fn((self.dim, self.dim), |(i, j)| {
            if j == i + 1 {
                (j as f64).sqrt()
            } else {
                0.0
            }
        })
    }

    /// `φ = (a + a†)/√(2ω)`, real symmetric.
    pub fn phi(&self) -> Array2<f64> {
        let a = self.lowering();
        (&a + &a.t()) / (2.0 * self.omega).sqrt()
    }

    /// Real antisymmetric `A` with `π = iA`, `A = √(ω/2)(a† − a)`.
    pub fn pi_generator(&self) -> Array2<f64> {
        let a = self.lowering();
        (&a.t() - &a) * (0.5 * self.omega).sqrt()
    }

    /// `ω(n + ½)`, the projection of `½π² + ½ω²φ²`.
    pub fn hamiltonian(&self) -> Array2<f64> {
        Array2::from_diag(&ndarray::Array1::from_shape_fn(self.dim, |n| {
            self.omega * (n as f64 + 0.5)
        }))
    }
}

/// Matrix-free chain Hamiltonian on the truncated product basis.
#[derive(Clone, Debug)]
pub struct FockHamiltonian {
    n_sites: usize,
    local_dim: usize,
    diagonal: Vec<f64>,
    phis: Vec<Array2<f64>>,
    couplings: Vec<(usize, usize, f64)>,
}

impl FockHamiltonian {
    pub fn new(v: &QuadraticPotential, local_dim: usize, dense_limit: usize) -> Result<Self> {
        if local_dim < 2 {
            return invalid(format!("Fock cutoff must be at least 2, got {local_dim}"));
        }
        let n = v.n_sites();
        let dim = (local_dim as u128)
            .checked_pow(n as u32)
            .unwrap_or(u128::MAX);
        if dim > dense_limit as u128 {
            return Err(Error::TooLarge {
                dim: dim.min(usize::MAX as u128) as usize,
                limit: dense_limit,
            });
        }
        let dim = dim as usize;
        let entries = v.entries();
        let oscillators: Vec<LocalOscillator> = (0..n)
            .map(|i| LocalOscillator::new(entries[[i, i]].sqrt(), local_dim))
            .collect::<Result<_>>()?;
        let mut diagonal = vec![0.0; dim];
        for (idx, value) in diagonal.iter_mut().enumerate() {
            let mut rest = idx;
            for osc in oscillators.iter().rev() {
                let occ = rest % local_dim;
                rest /= local_dim;
                *value += osc.omega * (occ as f64 + 0.5);
            }
        }
        let mut couplings = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if entries[[i, j]] != 0.0 {
                    couplings.push((i, j, entries[[i, j]]));
                }
            }
        }
        Ok(Self {
            n_sites: n,
            local_dim,
            diagonal,
            phis: oscillators.iter().map(|o| o.phi()).collect(),
            couplings,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), di) in y.iter_mut().zip(x).zip(&self.diagonal) {
            *yi = di * xi;
        }
        let mut tmp = vec![0.0; x.len()];
        let mut tmp2 = vec![0.0; x.len()];
        for &(i, j, vij) in &self.couplings {
            self.apply_site(&self.phis[j], j, x, &mut tmp);
            self.apply_site(&self.phis[i], i, &tmp, &mut tmp2);
            for (yk, t) in y.iter_mut().zip(&tmp2) {
                *yk += vij * t;
            }
        }
    }

    /// `out = O_site x`, overwriting `out`.
    fn apply_site(&self, op: &Array2<f64>, site: usize, x: &[f64], out: &mut [f64]) {
        let d = self.local_dim;
        let inner = d.pow((self.n_sites - 1 - site) as u32);
        let outer = x.len() / (d * inner);
        for o in 0..outer {
            let base = o * d * inner;
            for p in 0..d {
                let dst = &mut out[base + p * inner..base + (p + 1) * inner];
                dst.iter_mut().for_each(|v| *v = 0.0);
                for q in 0..d {
                    let c = op[[p, q]];
                    if c == 0.0 {
                        continue;
                    }
                    let src = &x[base + q * inner..base + (q + 1) * inner];
                    for (dv, sv) in dst.iter_mut().zip(src) {
                        *dv += c * sv;
                    }
                }
            }
        }
    }

    /// Dense matrix of the truncated Hamiltonian.
    pub fn to_dense(&self) -> Array2<f64> {
        let dim = self.dim();
        let mut m = Array2::zeros((dim, dim));
        let mut e = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for j in 0..dim {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            e[j] = 0.0;
            for (i, c) in col.iter().enumerate() {
                m[[i, j]] = *c;
            }
        }
        (&m + &m.t()) * 0.5
    }
}

#[derive(Clone, Debug)]
pub struct FockGroundState {
    /// Sites `[0, split)` on the left, the rest on the right.
    pub state: BipartiteState,
    pub energy: f64,
    pub residual: f64,
}

/// Ground state of the chain truncated to `local_dim` levels per site, split
/// after the first `split` sites.
pub fn fock_ground_state(
    v: &QuadraticPotential,
    local_dim: usize,
    split: usize,
    dense_limit: usize,
) -> Result<FockGroundState> {
    let n = v.n_sites();
    if split == 0 || split >= n {
        return invalid(format!(
            "split must lie strictly inside a chain of {n} sites, got {split}"
        ));
    }
    let h = FockHamiltonian::new(v, local_dim, dense_limit)?;
    let opts = LanczosOptions {
        tol: 1e-11,
        ..LanczosOptions::default()
    };
    let pair = smallest_eigenpair(
        |x: &[f64], y: &mut [f64]| h.apply(x, y),
        h.dim(),
        &opts,
        None,
    )?;
    let left = local_dim.pow(split as u32);
    let right = h.dim() / left;
    let psi = Array2::from_shape_vec((left, right), pair.vector).expect("dimension product");
    Ok(FockGroundState {
        state: BipartiteState::from_real(psi)?,
        energy: pair.value,
        residual: pair.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic_chain::{build_potential, ChainSpec};
    use crate::numerics::{sym_eig, RealSymmetricMatrix};
    use crate::quantum_state::entanglement_entropy;

    #[test]
    fn ladder_algebra() {
        let osc = LocalOscillator::new(1.7, 6).unwrap();
        let phi = osc.phi();
        let a = osc.pi_generator();
        // [φ, π] = i on all but the top level: φA − Aφ = 1
        let comm = phi.dot(&a) - a.dot(&phi);
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((comm[[i, j]] - want).abs() < 1e-13);
            }
        }
        assert!((&a + &a.t()).iter().all(|x| x.abs() < 1e-15));
        // ½π² + ½ω²φ² = ω(n+½) below the top level; π² = −A²
        let h = (phi.dot(&phi) * (osc.omega * osc.omega) - a.dot(&a)) * 0.5;
        for n in 0..5 {
            assert!((h[[n, n]] - osc.omega * (n as f64 + 0.5)).abs() < 1e-13);
        }
    }

    #[test]
    fn uncoupled_pair_is_product() {
        let v = build_potential(&ChainSpec::new(2, 1.0))
            .unwrap()
            .decoupled();
        let gs = fock_ground_state(&v, 6, 1, DEFAULT_DENSE_LIMIT).unwrap();
        assert!((gs.energy - 3f64.sqrt()).abs() < 1e-12);
        assert!(entanglement_entropy(&gs.state).unwrap() < 1e-10);
    }

    #[test]
    fn coupled_pair_energy_matches_normal_modes() {
        let v = build_potential(&ChainSpec::new(2, 1.0)).unwrap();
        let gs = fock_ground_state(&v, 20, 1, DEFAULT_DENSE_LIMIT).unwrap();
        assert!((gs.energy - v.exact_ground_energy()).abs() < 1e-6);
    }

    #[test]
    fn energy_decreases_with_cutoff() {
        let v = build_potential(&ChainSpec::new(3, 0.5)).unwrap();
        let exact = v.exact_ground_energy();
        let mut prev = f64::INFINITY;
        for d in 2..=8 {
            let e = fock_ground_state(&v, d, 1, DEFAULT_DENSE_LIMIT)
                .unwrap()
                .energy;
            assert!(e <= prev + 1e-10 && e >= exact - 1e-10, "d={d}: {e}");
            prev = e;
        }
        assert!(prev - exact < 1e-3);
    }

    #[test]
    fn matvec_matches_dense_diagonalization() {
        let v = build_potential(&ChainSpec::new(3, 0.2)).unwrap();
        let h = FockHamiltonian::new(&v, 4, DEFAULT_DENSE_LIMIT).unwrap();
        let dense = h.to_dense();
        let min = sym_eig(&RealSymmetricMatrix::new(dense).unwrap())
            .unwrap()
            .values[0];
        let gs = fock_ground_state(&v, 4, 2, DEFAULT_DENSE_LIMIT).unwrap();
        assert!((gs.energy - min).abs() < 1e-10);
        assert_eq!(gs.state.left_dim(), 16);
        assert_eq!(gs.state.right_dim(), 4);
    }

    #[test]
    fn basis_limit_enforced() {
        let v = build_potential(&ChainSpec::new(5, 1.0)).unwrap();
        match fock_ground_state(&v, 6, 2, DEFAULT_DENSE_LIMIT) {
            Err(Error::TooLarge { dim, limit }) => {
                assert_eq!(dim, 7776);
                assert_eq!(limit, 4096);
            }
            other => panic!("expected size rejection, got {other:?}"),
        }
        assert!(fock_ground_state(&v, 1, 2, DEFAULT_DENSE_LIMIT).is_err());
        assert!(fock_ground_state(&v, 2, 0, DEFAULT_DENSE_LIMIT).is_err());
    }
}
