//! Restarted Lanczos iteration with full reorthogonalization for the lowest
//! eigenpair of a self-adjoint linear map.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sym_eig, RealSymmetricMatrix};
use crate::error::{Error, Result};

/// Field of scalars the Lanczos solver can work over.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + std::fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::AddAssign
    + std::ops::SubAssign
    + 'static
{
    fn conj(self) -> Self;
    fn abs_sqr(self) -> f64;
    fn from_real(x: f64) -> Self;
    fn real(self) -> f64;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn real(self) -> f64 {
        self
    }
}

impl Scalar for C64 {
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn from_real(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn real(self) -> f64 {
        self.re
    }
}

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Target residual `‖H v − E v‖`.
    pub tol: f64,
    /// Krylov subspace size before a restart.
    pub krylov_dim: usize,
    /// Cap on the total number of matrix-vector products.
    pub max_iterations: usize,
    /// Seed for the default start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            krylov_dim: 80,
            max_iterations: 20_000,
            seed: 0x1a2b_3c4d,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPair<T> {
    pub value: f64,
    pub vector: Vec<T>,
    pub residual: f64,
    pub iterations: usize,
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::from_real(0.0), |acc, (&x, &y)| acc + x.conj() * y)
}

fn norm<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.abs_sqr()).sum::<f64>().sqrt()
}

fn scale<T: Scalar>(a: &mut [T], s: f64) {
    let s = T::from_real(s);
    a.iter_mut().for_each(|x| *x = *x * s);
}

fn axpy<T: Scalar>(y: &mut [T], a: T, x: &[T]) {
    y.iter_mut().zip(x).for_each(|(yi, &xi)| *yi += a * xi);
}

/// Lowest eigenvalue and a unit eigenvector of the self-adjoint map `apply`
/// (`apply(x, y)` must overwrite `y` with `H x`).
///
/// `initial`, when given and nonzero, seeds the iteration (warm start).
pub fn smallest_eigenpair<T, F>(
    apply: F,
    dim: usize,
    opts: &LanczosOptions,
    initial: Option<&[T]>,
) -> Result<EigenPair<T>>
where
    T: Scalar,
    F: Fn(&[T], &mut [T]),
{
    if dim == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    let mut start: Vec<T> = match initial {
        Some(v) if v.len() == dim && norm(v) > 0.0 && v.iter().all(|x| x.abs_sqr().is_finite()) => {
            v.to_vec()
        }
        Some(v) if v.len() != dim => {
            return Err(Error::Shape(format!(
                "initial vector has length {}, expected {dim}",
                v.len()
            )))
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            (0..dim)
                .map(|_| T::from_real(rng.random_range(-1.0..1.0)))
                .collect()
        }
    };
    let n0 = norm(&start);
    scale(&mut start, 1.0 / n0);

    let krylov = opts.krylov_dim.max(2).min(dim);
    let mut iterations = 0;
    let mut w = vec![T::from_real(0.0); dim];

    loop {
        let mut basis: Vec<Vec<T>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        for j in 0..krylov {
            apply(&basis[j], &mut w);
            iterations += 1;
            if w.iter().any(|x| !x.abs_sqr().is_finite()) {
                return Err(Error::NonFinite);
            }
            let alpha = dot(&basis[j], &w).real();
            alphas.push(alpha);
            axpy(&mut w, T::from_real(-alpha), &basis[j]);
            if j > 0 {
                axpy(&mut w, T::from_real(-betas[j - 1]), &basis[j - 1]);
            }
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(&mut w, T::from_real(0.0) - c, v);
                }
            }
            let beta = norm(&w);
            let scale_ref = alphas.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
            if j + 1 == krylov || beta <= 1e-13 * scale_ref {
                break;
            }
            betas.push(beta);
            let mut next = w.clone();
            scale(&mut next, 1.0 / beta);
            basis.push(next);
        }

        let k = alphas.len();
        let mut t = Array2::<f64>::zeros((k, k));
        for i in 0..k {
            t[[i, i]] = alphas[i];
            if i + 1 < k {
                t[[i, i + 1]] = betas[i];
                t[[i + 1, i]] = betas[i];
            }
        }
        let eig = sym_eig(&RealSymmetricMatrix::new(t)?)?;
        let theta = eig.values[0];
        let mut ritz = vec![T::from_real(0.0); dim];
        for (i, v) in basis.iter().take(k).enumerate() {
            axpy(&mut ritz, T::from_real(eig.vectors[[i, 0]]), v);
        }
        let rn = norm(&ritz);
        scale(&mut ritz, 1.0 / rn);

        apply(&ritz, &mut w);
        iterations += 1;
        axpy(&mut w, T::from_real(-theta), &ritz);
        let residual = norm(&w);
        if residual <= opts.tol {
            return Ok(EigenPair {
                value: theta,
                vector: ritz,
                residual,
                iterations,
            });
        }
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual,
            });
        }
        start = ritz;
        if !residual.is_finite() {
            return Err(Error::NoConvergence {
                iterations,
                residual,
            });
        }
    }
}
