//! Entanglement entropy laboratory.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: dense symmetric/Hermitian eigensolvers, SVD, a Lanczos
//!   ground-state solver, imaginary-order Bessel functions and a bracketing
//!   root finder.
//! * [`quantum_state`]: bipartite pure states, reduced density matrices,
//!   von Neumann entropy, Schmidt decomposition, fidelity and optimal
//!   truncation.
//! * [`harmonic_chain`]: the discretized free scalar field as a chain of
//!   coupled oscillators, its exact Gaussian ground state, block entropies and
//!   a brute-force Fock-space oracle.
//! * [`dmrg`]: the infinite-system density-matrix renormalization group on
//!   that chain (block plus its mirror image, one site added at the origin
//!   per iteration).
//! * [`rindler`]: angular waves `K_{iℓ}(mx)`, the regulated angular spectrum,
//!   thermal weights at temperature `1/(2π)`, geometric entropy and the
//!   Kruskal-Szekeres chart.

pub mod dmrg;
pub mod error;
pub mod harmonic_chain;
pub mod numerics;
pub mod quantum_state;
pub mod rindler;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
