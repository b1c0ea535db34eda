//! Infinite-system density-matrix renormalization group on the fixed-ends
//! harmonic chain.
//!
//! A block of `L` sites is reflected through the origin; block and mirror
//! form a chain of `2L` sites coupled by `−φ_edge φ_edge'` across the
//! origin. The superblock ground state `Ψ[a, b]` (block index `a`, mirror
//! index `b`) is found with Lanczos, the block density matrix `ΨΨᵀ` is
//! diagonalized, its `m` dominant eigenvectors are kept, and one new site is
//! adjoined at the origin-facing edge. The enlarged basis is
//! `(new site) ⊗ (kept block)`, index `s · kept + a`.
//!
//! Every site carries frequency `√(2 + m²)` in its own oscillator
//! eigenbasis, truncated to `d` levels. Momenta are stored as real
//! antisymmetric generators `A` with `π = iA`, so all block matrices stay
//! real.

use ndarray::{s, Array2, ArrayView1};

use crate::error::{invalid, Error, Result};
use crate::harmonic_chain::{build_potential, ChainSpec, FockHamiltonian, LocalOscillator};
use crate::numerics::{kron, max_abs, smallest_eigenpair, LanczosOptions};
use crate::quantum_state::{
    reduced_density_left, von_neumann_entropy, BipartiteState, DensityMatrix,
};

/// Eigenvalues below this are never grouped into a degenerate multiplet.
const MULTIPLET_FLOOR: f64 = 1e-14;
/// Relative gap below which neighbouring eigenvalues count as degenerate.
const MULTIPLET_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DmrgConfig {
    /// Fock cutoff per site.
    pub local_dim: usize,
    pub kept_states: usize,
    /// Even chain length at which growth stops.
    pub target_length: usize,
    pub mass: f64,
    /// Lanczos residual target.
    pub gs_tolerance: f64,
    pub max_iterations: usize,
    /// Sites in the exactly diagonalized starting block.
    pub initial_sites: usize,
    /// Cap on the superblock dimension `basis_size²`.
    pub superblock_limit: usize,
    /// Cap on `d^initial_sites`.
    pub dense_limit: usize,
}

impl Default for DmrgConfig {
    fn default() -> Self {
        Self {
            local_dim: 8,
            kept_states: 16,
            target_length: 20,
            mass: 1.0,
            gs_tolerance: 1e-9,
            max_iterations: 1000,
            initial_sites: 1,
            superblock_limit: 1 << 20,
            dense_limit: crate::harmonic_chain::DEFAULT_DENSE_LIMIT,
        }
    }
}

impl DmrgConfig {
    pub fn validate(&self) -> Result<()> {
        if self.local_dim < 2 {
            return invalid(format!(
                "local_dim must be at least 2, got {}",
                self.local_dim
            ));
        }
        if self.kept_states < 1 {
            return invalid("kept_states must be at least 1");
        }
        if self.initial_sites < 1 {
            return invalid("initial_sites must be at least 1");
        }
        if !self.target_length.is_multiple_of(2) || self.target_length < 2 * self.initial_sites {
            return invalid(format!(
                "target_length must be even and at least {}, got {}",
                2 * self.initial_sites,
                self.target_length
            ));
        }
        if !self.mass.is_finite() || self.mass < 0.0 {
            return invalid(format!(
                "mass must be finite and nonnegative, got {}",
                self.mass
            ));
        }
        if !(self.gs_tolerance > 0.0) {
            return invalid("gs_tolerance must be positive");
        }
        let block = self.kept_states.saturating_mul(self.local_dim);
        if block.saturating_mul(block) > self.superblock_limit {
            return Err(Error::TooLarge {
                dim: block.saturating_mul(block),
                limit: self.superblock_limit,
            });
        }
        Ok(())
    }

    fn site(&self) -> Result<LocalOscillator> {
        LocalOscillator::new((2.0 + self.mass * self.mass).sqrt(), self.local_dim)
    }
}

#[derive(Clone, Debug)]
pub struct DmrgBlock {
    /// Sites represented.
    pub length: usize,
    pub h_block: Array2<f64>,
    /// `φ` of the origin-facing site.
    pub edge_phi: Array2<f64>,
    /// Real antisymmetric `A` with `π_edge = iA`.
    pub edge_pi: Array2<f64>,
    /// Previous ground state embedded in this basis, used as a warm start.
    pub guess: Option<Array2<f64>>,
}

impl DmrgBlock {
    pub fn basis_size(&self) -> usize {
        self.h_block.nrows()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DmrgIterate {
    /// Sites in the superblock.
    pub chain_length: usize,
    pub ground_energy: f64,
    /// Block entropy of the superblock ground state, nats.
    pub half_chain_entropy: f64,
    pub truncation_weight: f64,
    pub kept: usize,
    /// Kept count was raised past `m` to keep a degenerate multiplet whole.
    pub multiplet_extended: bool,
    pub residual: f64,
    pub lanczos_iterations: usize,
}

/// Exact truncated-Fock block of `initial_sites` sites; site 0 faces the
/// origin.
pub fn init_block(config: &DmrgConfig) -> Result<DmrgBlock> {
    config.validate()?;
    let k0 = config.initial_sites;
    let v = build_potential(&ChainSpec::new(k0, config.mass))?;
    let h = FockHamiltonian::new(&v, config.local_dim, config.dense_limit)?;
    let site = config.site()?;
    let rest = Array2::eye(h.dim() / config.local_dim);
    Ok(DmrgBlock {
        length: k0,
        h_block: h.to_dense(),
        edge_phi: kron(&site.phi(), &rest),
        edge_pi: kron(&site.pi_generator(), &rest),
        guess: None,
    })
}

/// Block plus its mirror image, acting on `Ψ[a, b]` as
/// `H_B Ψ + Ψ H_B − c Φ Ψ Φ`.
#[derive(Clone, Debug)]
pub struct Superblock<'a> {
    block: &'a DmrgBlock,
    coupling: f64,
}

pub fn form_superblock(block: &DmrgBlock) -> Superblock<'_> {
    Superblock {
        block,
        coupling: 1.0,
    }
}

#[derive(Clone, Debug)]
pub struct SuperblockGroundState {
    pub energy: f64,
    /// Unit-norm `Ψ[a, b]`.
    pub state: Array2<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl<'a> Superblock<'a> {
    /// Strength of the cross-origin coupling; `0` decouples the halves.
    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn dim(&self) -> usize {
        let n = self.block.basis_size();
        n * n
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.block.basis_size();
        let psi = ndarray::ArrayView2::from_shape((n, n), x).expect("superblock vector length");
        let h = &self.block.h_block;
        let phi = &self.block.edge_phi;
        let mut out = h.dot(&psi) + psi.dot(h);
        if self.coupling != 0.0 {
            let cross = phi.dot(&psi).dot(phi);
            out.scaled_add(-self.coupling, &cross);
        }
        y.copy_from_slice(out.as_slice().expect("standard layout"));
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let dim = self.dim();
        let mut m = Array2::zeros((dim, dim));
        let mut e = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for j in 0..dim {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            e[j] = 0.0;
            m.column_mut(j).assign(&ArrayView1::from(&col[..]));
        }
        m
    }

    pub fn ground_state(
        &self,
        tol: f64,
        guess: Option<&Array2<f64>>,
    ) -> Result<SuperblockGroundState> {
        let n = self.block.basis_size();
        let opts = LanczosOptions {
            tol,
            ..LanczosOptions::default()
        };
        let initial = guess
            .filter(|g| g.dim() == (n, n))
            .and_then(|g| g.as_slice().map(|s| s.to_vec()));
        let pair = smallest_eigenpair(
            |x: &[f64], y: &mut [f64]| self.apply(x, y),
            self.dim(),
            &opts,
            initial.as_deref(),
        )?;
        Ok(SuperblockGroundState {
            energy: pair.value,
            state: Array2::from_shape_vec((n, n), pair.vector).expect("square state"),
            residual: pair.residual,
            iterations: pair.iterations,
        })
    }
}

/// Dominant eigenvectors of the block density matrix of `Ψ`.
#[derive(Clone, Debug)]
pub struct BlockProjection {
    pub density: DensityMatrix,
    /// All density eigenvalues, descending.
    pub spectrum: Vec<f64>,
    /// Columns are the kept eigenvectors, in descending eigenvalue order.
    pub basis: Array2<f64>,
    pub truncation_weight: f64,
    pub multiplet_extended: bool,
}

impl BlockProjection {
    pub fn kept(&self) -> usize {
        self.basis.ncols()
    }
}

pub fn block_projection(state: &Array2<f64>, kept_states: usize) -> Result<BlockProjection> {
    if kept_states == 0 {
        return invalid("kept_states must be at least 1");
    }
    let density = reduced_density_left(&BipartiteState::from_real(state.clone())?)?;
    let n = density.dim();
    let spectrum = density.spectrum_descending();
    let mut keep = kept_states.min(n);
    let mut multiplet_extended = false;
    while keep < n {
        let last = spectrum[keep - 1];
        if last < MULTIPLET_FLOOR || (last - spectrum[keep]).abs() > MULTIPLET_TOL * last {
            break;
        }
        keep += 1;
        multiplet_extended = true;
    }
    let vectors = density.eigenvectors();
    // eigenvectors are stored in ascending eigenvalue order
    let basis = Array2::from_shape_fn((n, keep), |(i, k)| vectors[[i, n - 1 - k]].re);
    let truncation_weight = if keep == n {
        0.0
    } else {
        (1.0 - spectrum[..keep].iter().sum::<f64>()).clamp(0.0, 1.0 - f64::EPSILON)
    };
    Ok(BlockProjection {
        density,
        spectrum,
        basis,
        truncation_weight,
        multiplet_extended,
    })
}

/// One growth step: solve the superblock, truncate the block, adjoin a site.
pub fn dmrg_step(block: &DmrgBlock, config: &DmrgConfig) -> Result<(DmrgBlock, DmrgIterate)> {
    config.validate()?;
    let n = block.basis_size();
    if n * n > config.superblock_limit {
        return Err(Error::TooLarge {
            dim: n * n,
            limit: config.superblock_limit,
        });
    }
    let sb = form_superblock(block);
    let gs = sb.ground_state(config.gs_tolerance, block.guess.as_ref())?;
    let proj = block_projection(&gs.state, config.kept_states)?;
    let entropy = von_neumann_entropy(&proj.density);

    let o = &proj.basis;
    let k = o.ncols();
    let rotate = |m: &Array2<f64>| o.t().dot(m).dot(o);
    let h_kept = rotate(&block.h_block);
    let phi_kept = rotate(&block.edge_phi);

    let site = config.site()?;
    let id_site = Array2::<f64>::eye(config.local_dim);
    let id_kept = Array2::<f64>::eye(k);
    let mut h_new = kron(&site.hamiltonian(), &id_kept) + kron(&id_site, &h_kept);
    h_new.scaled_add(-1.0, &kron(&site.phi(), &phi_kept));
    let h_new = (&h_new + &h_new.t()) * 0.5;

    let psi_kept = rotate(&gs.state);
    let mut guess = Array2::zeros((config.local_dim * k, config.local_dim * k));
    guess.slice_mut(s![..k, ..k]).assign(&psi_kept);

    let next = DmrgBlock {
        length: block.length + 1,
        h_block: h_new,
        edge_phi: kron(&site.phi(), &id_kept),
        edge_pi: kron(&site.pi_generator(), &id_kept),
        guess: Some(guess),
    };
    let iterate = DmrgIterate {
        chain_length: 2 * block.length,
        ground_energy: gs.energy,
        half_chain_entropy: entropy,
        truncation_weight: proj.truncation_weight,
        kept: k,
        multiplet_extended: proj.multiplet_extended,
        residual: gs.residual,
        lanczos_iterations: gs.iterations,
    };
    Ok((next, iterate))
}

/// Grow from the initial block until the superblock reaches
/// `target_length` sites or `max_iterations` steps have run.
pub fn run(config: &DmrgConfig) -> Result<Vec<DmrgIterate>> {
    let mut block = init_block(config)?;
    let mut iterates = Vec::new();
    while iterates.len() < config.max_iterations.max(1) {
        let (next, iterate) = dmrg_step(&block, config)?;
        let done = iterate.chain_length >= config.target_length;
        iterates.push(iterate);
        if done {
            break;
        }
        block = next;
    }
    Ok(iterates)
}

/// Largest `|M − Mᵀ|`, for Hermiticity checks on block operators.
pub fn symmetry_defect(m: &Array2<f64>) -> f64 {
    max_abs((m - &m.t()).view())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic_chain::{fock_ground_state, DEFAULT_DENSE_LIMIT};
    use crate::numerics::{sym_eig, RealSymmetricMatrix};

    fn config(d: usize, m: usize, target: usize) -> DmrgConfig {
        DmrgConfig {
            local_dim: d,
            kept_states: m,
            target_length: target,
            ..DmrgConfig::default()
        }
    }

    fn min_eig(m: &Array2<f64>) -> f64 {
        sym_eig(&RealSymmetricMatrix::new(m.clone()).unwrap())
            .unwrap()
            .values[0]
    }

    #[test]
    fn single_site_block_is_oscillator() {
        let cfg = config(5, 4, 2);
        let b = init_block(&cfg).unwrap();
        let w = 3f64.sqrt();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { w * (i as f64 + 0.5) } else { 0.0 };
                assert!((b.h_block[[i, j]] - want).abs() < 1e-14);
            }
        }
        assert!(symmetry_defect(&b.edge_phi) <= 1e-12);
        assert!(max_abs((&b.edge_pi + &b.edge_pi.t()).view()) <= 1e-15);
    }

    #[test]
    fn two_site_block_matches_fock() {
        let cfg = DmrgConfig {
            initial_sites: 2,
            ..config(4, 4, 4)
        };
        let b = init_block(&cfg).unwrap();
        let v = build_potential(&ChainSpec::new(2, 1.0)).unwrap();
        let fock = fock_ground_state(&v, 4, 1, DEFAULT_DENSE_LIMIT).unwrap();
        assert!((min_eig(&b.h_block) - fock.energy).abs() < 1e-10);
        assert!(symmetry_defect(&b.edge_phi) <= 1e-12);
    }

    #[test]
    fn uncoupled_superblock_is_additive() {
        let cfg = DmrgConfig {
            initial_sites: 2,
            ..config(3, 4, 4)
        };
        let b = init_block(&cfg).unwrap();
        let e = form_superblock(&b)
            .with_coupling(0.0)
            .ground_state(1e-11, None)
            .unwrap()
            .energy;
        assert!((e - 2.0 * min_eig(&b.h_block)).abs() < 1e-9);
    }

    #[test]
    fn single_site_superblock_matches_pair_chain() {
        let cfg = config(20, 4, 2);
        let b = init_block(&cfg).unwrap();
        let e = form_superblock(&b)
            .ground_state(1e-11, None)
            .unwrap()
            .energy;
        let v = build_potential(&ChainSpec::new(2, 1.0)).unwrap();
        assert!(
            (e - fock_ground_state(&v, 20, 1, DEFAULT_DENSE_LIMIT)
                .unwrap()
                .energy)
                .abs()
                < 1e-9
        );
        assert!((e - v.exact_ground_energy()).abs() < 1e-6);
    }

    #[test]
    fn superblock_spectrum_is_reflection_symmetric() {
        let cfg = DmrgConfig {
            initial_sites: 2,
            ..config(3, 4, 4)
        };
        let b = init_block(&cfg).unwrap();
        let sb = form_superblock(&b).to_dense();
        let n = b.basis_size();
        // swap operator Ψ[a, b] → Ψ[b, a]
        let swap = Array2::from_shape_fn((n * n, n * n), |(i, j)| {
            if i == (j % n) * n + j / n {
                1.0
            } else {
                0.0
            }
        });
        let swapped = swap.dot(&sb).dot(&swap);
        assert!(max_abs((&swapped - &sb).view()) < 1e-12);
        let e1 = sym_eig(&RealSymmetricMatrix::new(sb).unwrap())
            .unwrap()
            .values;
        let e2 = sym_eig(&RealSymmetricMatrix::new(swapped).unwrap())
            .unwrap()
            .values;
        assert!((&e1 - &e2).iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn lossless_growth_is_exact() {
        let cfg = config(2, 64, 8);
        let iterates = run(&cfg).unwrap();
        assert_eq!(
            iterates
                .iter()
                .map(|it| it.chain_length)
                .collect::<Vec<_>>(),
            vec![2, 4, 6, 8]
        );
        for it in &iterates {
            assert_eq!(it.truncation_weight, 0.0);
            let v = build_potential(&ChainSpec::new(it.chain_length, 1.0)).unwrap();
            let exact = fock_ground_state(&v, 2, it.chain_length / 2, DEFAULT_DENSE_LIMIT)
                .unwrap()
                .energy;
            assert!(
                (it.ground_energy - exact).abs() < 1e-8,
                "L={}: {} vs {exact}",
                it.chain_length,
                it.ground_energy
            );
        }
    }

    #[test]
    fn density_spectrum_is_a_distribution() {
        let cfg = config(4, 6, 6);
        let mut block = init_block(&cfg).unwrap();
        for _ in 0..3 {
            let gs = form_superblock(&block)
                .ground_state(cfg.gs_tolerance, block.guess.as_ref())
                .unwrap();
            let proj = block_projection(&gs.state, cfg.kept_states).unwrap();
            assert!(proj.spectrum.windows(2).all(|w| w[0] >= w[1]));
            assert!((proj.spectrum.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            block = dmrg_step(&block, &cfg).unwrap().0;
        }
    }

    #[test]
    fn initial_length_target_gives_one_iterate() {
        let iterates = run(&config(6, 8, 2)).unwrap();
        assert_eq!(iterates.len(), 1);
        assert_eq!(iterates[0].chain_length, 2);
        let v = build_potential(&ChainSpec::new(2, 1.0)).unwrap();
        let exact = fock_ground_state(&v, 6, 1, DEFAULT_DENSE_LIMIT)
            .unwrap()
            .energy;
        assert!((iterates[0].ground_energy - exact).abs() < 1e-8);
    }

    #[test]
    fn config_validation() {
        assert!(config(1, 4, 4).validate().is_err());
        assert!(config(4, 0, 4).validate().is_err());
        assert!(config(4, 4, 5).validate().is_err());
        assert!(DmrgConfig {
            superblock_limit: 100,
            ..config(4, 4, 4)
        }
        .validate()
        .is_err());
        assert!(matches!(
            init_block(&DmrgConfig {
                initial_sites: 7,
                target_length: 14,
                ..config(4, 4, 14)
            }),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn degenerate_cut_keeps_whole_multiplet() {
        // Ψ with Schmidt weights ½, ¼, ¼: cutting at m = 2 splits the pair
        let mut psi = Array2::zeros((3, 3));
        psi[[0, 0]] = 0.5f64.sqrt();
        psi[[1, 1]] = 0.5;
        psi[[2, 2]] = 0.5;
        let proj = block_projection(&psi, 2).unwrap();
        assert_eq!(proj.kept(), 3);
        assert!(proj.multiplet_extended);
        assert_eq!(proj.truncation_weight, 0.0);
        let proj = block_projection(&psi, 1).unwrap();
        assert_eq!(proj.kept(), 1);
        assert!((proj.truncation_weight - 0.5).abs() < 1e-12);
    }
}
