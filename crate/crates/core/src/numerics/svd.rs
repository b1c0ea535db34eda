//! One-sided (Hestenes) Jacobi singular value decomposition.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::adjoint;
use crate::error::{Error, Result};

/// `A = U diag(σ) V†` with `σ` descending.
///
/// For an `m × n` input, `U` is `m × k`, `V` is `n × k` and `k = min(m, n)`.
#[derive(Clone, Debug)]
pub struct SingularValueDecomposition {
    pub u: Array2<C64>,
    pub sigma: Array1<f64>,
    pub v: Array2<C64>,
}

impl SingularValueDecomposition {
    pub fn reconstruct(&self) -> Array2<C64> {
        let scaled = Array2::from_shape_fn(self.u.dim(), |(i, k)| self.u[[i, k]] * self.sigma[k]);
        scaled.dot(&adjoint(&self.v))
    }
}

const MAX_SWEEPS: usize = 80;

pub fn svd(a: &Array2<C64>) -> Result<SingularValueDecomposition> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::Shape(format!(
            "cannot decompose an empty {m}x{n} matrix"
        )));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if m < n {
        let t = svd_tall(&adjoint(a))?;
        return Ok(SingularValueDecomposition {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    svd_tall(a)
}

fn svd_tall(a: &Array2<C64>) -> Result<SingularValueDecomposition> {
    let (m, n) = a.dim();
    let mut u = a.clone();
    let mut v = Array2::<C64>::eye(n);
    let tol = 1e-15;

    let mut converged = false;
    let mut sweeps = 0;
    let mut worst = 0.0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        worst = 0.0_f64;
        for j in 0..n {
            for k in (j + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..m {
                    let x = u[[i, j]];
                    let y = u[[i, k]];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                worst = worst.max(g / (alpha * beta).sqrt());
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = u[[i, j]];
                    let y = u[[i, k]] * phase_conj;
                    u[[i, j]] = x * c - y * s;
                    u[[i, k]] = x * s + y * c;
                }
                for i in 0..n {
                    let x = v[[i, j]];
                    let y = v[[i, k]] * phase_conj;
                    v[[i, j]] = x * c - y * s;
                    v[[i, k]] = x * s + y * c;
                }
            }
        }
        if worst <= tol {
            converged = true;
            break;
        }
    }
    if !converged && worst > 1e-12 {
        return Err(Error::NoConvergence {
            iterations: sweeps,
            residual: worst,
        });
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| u.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let sigma = Array1::from_iter(order.iter().map(|&j| norms[j]));
    let smax = sigma[0];
    let mut u_out = Array2::<C64>::zeros((m, n));
    let mut v_out = Array2::<C64>::zeros((n, n));
    let mut missing = Vec::new();
    for (col, &j) in order.iter().enumerate() {
        v_out.column_mut(col).assign(&v.column(j));
        let s = norms[j];
        if s > 0.0 && s > smax * f64::EPSILON * (m as f64) {
            u_out.column_mut(col).assign(&u.column(j).mapv(|z| z / s));
        } else {
            missing.push(col);
        }
    }
    complete_orthonormal(&mut u_out, &missing);
    Ok(SingularValueDecomposition {
        u: u_out,
        sigma,
        v: v_out,
    })
}

/// Fills the listed columns with unit vectors orthogonal to every other
/// column, drawn from the standard basis by Gram-Schmidt.
fn complete_orthonormal(u: &mut Array2<C64>, missing: &[usize]) {
    let m = u.nrows();
    let mut filled: Vec<usize> = (0..u.ncols()).filter(|c| !missing.contains(c)).collect();
    let mut axis = 0;
    for &col in missing {
        while axis < m {
            let mut cand = Array1::<C64>::zeros(m);
            cand[axis] = C64::new(1.0, 0.0);
            axis += 1;
            for _ in 0..2 {
                for &f in &filled {
                    let basis = u.column(f);
                    let overlap: C64 = basis
                        .iter()
                        .zip(cand.iter())
                        .map(|(b, c)| b.conj() * c)
                        .sum();
                    cand.zip_mut_with(&basis, |c, b| *c -= overlap * b);
                }
            }
            let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                u.column_mut(col).assign(&cand.mapv(|z| z / norm));
                filled.push(col);
                break;
            }
        }
    }
}
