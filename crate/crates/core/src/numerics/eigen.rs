//! Dense eigensolvers.
//!
//! Real symmetric input goes through Householder tridiagonalization followed
//! by the implicit QL iteration (the classic `tred2`/`tql2` pair). Complex
//! Hermitian input with a nonzero imaginary part uses cyclic Jacobi rotations.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::RealSymmetricMatrix;
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Array1<f64>,
    pub vectors: Array2<f64>,
}

/// Eigen-decomposition of a Hermitian matrix: real eigenvalues (ascending)
/// and unitary eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Array1<f64>,
    pub vectors: Array2<C64>,
}

/// Full eigen-decomposition of a real symmetric matrix.
///
/// Eigenvalues are ascending; ties keep the order in which the QL iteration
/// produced them.
pub fn sym_eig(m: &RealSymmetricMatrix) -> Result<EigenDecomposition> {
    let n = m.order();
    let mut v: Vec<f64> = m.entries().iter().copied().collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = Array1::from_iter(order.iter().map(|&k| d[k]));
    let vectors = Array2::from_shape_fn((n, n), |(i, j)| v[i * n + order[j]]);
    Ok(EigenDecomposition { values, vectors })
}

/// Householder reduction of the symmetric matrix stored row-major in `v` to
/// tridiagonal form (`d` diagonal, `e` sub-diagonal); `v` is overwritten
/// with the accumulated orthogonal transformation.
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for j in 0..i {
                e[j] = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration on the tridiagonal matrix produced by [`tred2`].
fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let at = |i: usize, j: usize| i * n + j;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let max_iter = 30 * n.max(1) + 30;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NoConvergence {
                        iterations: iter,
                        residual: e[l].abs(),
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[at(k, i + 1)];
                        v[at(k, i + 1)] = s * v[at(k, i)] + c * h;
                        v[at(k, i)] = c * v[at(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Input with an identically zero imaginary part is routed through
/// [`sym_eig`]; otherwise cyclic complex Jacobi rotations are used.
pub fn hermitian_eig(m: &Array2<C64>) -> Result<HermitianEigen> {
    let (rows, cols) = m.dim();
    if rows != cols || rows == 0 {
        return Err(Error::Shape(format!(
            "expected a nonempty square matrix, got {rows}x{cols}"
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
    let defect = m
        .indexed_iter()
        .map(|((i, j), z)| (z - m[[j, i]].conj()).norm())
        .fold(0.0, f64::max);
    if defect > 1e-12 * scale {
        return Err(Error::NotSymmetric { defect });
    }

    if m.iter().all(|z| z.im == 0.0) {
        let real = RealSymmetricMatrix::new(m.mapv(|z| z.re))?;
        let eig = sym_eig(&real)?;
        return Ok(HermitianEigen {
            values: eig.values,
            vectors: eig.vectors.mapv(|x| C64::new(x, 0.0)),
        });
    }
    jacobi_hermitian(m)
}

fn jacobi_hermitian(m: &Array2<C64>) -> Result<HermitianEigen> {
    let n = m.nrows();
    let mut a = m.clone();
    for i in 0..n {
        for j in 0..i {
            let avg = (a[[i, j]] + a[[j, i]].conj()) * 0.5;
            a[[i, j]] = avg;
            a[[j, i]] = avg.conj();
        }
        a[[i, i]] = C64::new(a[[i, i]].re, 0.0);
    }
    let mut v = Array2::<C64>::eye(n);
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let max_sweeps = 100;

    for sweep in 0..=max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[[i, j]].norm_sqr();
                }
            }
        }
        let off = off.sqrt();
        if off <= f64::EPSILON * total || total == 0.0 {
            break;
        }
        if sweep == max_sweeps {
            return Err(Error::NoConvergence {
                iterations: sweep,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase rotation making a[p,q] real and positive.
                let phase = apq / mag;
                let phase_conj = phase.conj();
                for r in 0..n {
                    a[[r, q]] *= phase_conj;
                }
                for r in 0..n {
                    a[[q, r]] *= phase;
                }
                for r in 0..n {
                    v[[r, q]] *= phase_conj;
                }

                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for r in 0..n {
                    let arp = a[[r, p]];
                    let arq = a[[r, q]];
                    a[[r, p]] = arp * c - arq * s;
                    a[[r, q]] = arp * s + arq * c;
                }
                for r in 0..n {
                    let apr = a[[p, r]];
                    let aqr = a[[q, r]];
                    a[[p, r]] = apr * c - aqr * s;
                    a[[q, r]] = apr * s + aqr * c;
                }
                for r in 0..n {
                    let vrp = v[[r, p]];
                    let vrq = v[[r, q]];
                    v[[r, p]] = vrp * c - vrq * s;
                    v[[r, q]] = vrp * s + vrq * c;
                }
                a[[p, q]] = C64::new(0.0, 0.0);
                a[[q, p]] = C64::new(0.0, 0.0);
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[[i, i]].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = Array1::from_iter(order.iter().map(|&k| diag[k]));
    let vectors = Array2::from_shape_fn((n, n), |(i, j)| v[[i, order[j]]]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::adjoint;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> RealSymmetricMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Array2::from_shape_fn((n, n), |_| rng.random_range(-1.0..1.0));
        RealSymmetricMatrix::new(&a + &a.t()).unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = sym_eig(&RealSymmetricMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(eig.values.to_vec(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_matrix_sorted_with_permutation_vectors() {
        let m = RealSymmetricMatrix::diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let eig = sym_eig(&m).unwrap();
        assert_eq!(eig.values.to_vec(), vec![1.0, 2.0, 3.0]);
        // eigenvalue 1 lives on axis 1, 2 on axis 2, 3 on axis 0
        for (col, axis) in [(0, 1), (1, 2), (2, 0)] {
            assert!((eig.vectors[[axis, col]].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        for seed in 0..5 {
            let m = random_symmetric(8, seed);
            let eig = sym_eig(&m).unwrap();
            let recon = eig
                .vectors
                .dot(&Array2::from_diag(&eig.values))
                .dot(&eig.vectors.t());
            let resid = (&recon - m.entries())
                .iter()
                .fold(0.0_f64, |a, x| a.max(x.abs()));
            assert!(resid <= 1e-10, "reconstruction residual {resid}");
            let gram = eig.vectors.t().dot(&eig.vectors);
            let defect = (&gram - &Array2::<f64>::eye(8))
                .iter()
                .fold(0.0_f64, |a, x| a.max(x.abs()));
            assert!(defect <= 1e-12);
            assert!(eig.values.windows(2).into_iter().all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigenpair_residuals_and_trace() {
        let m = random_symmetric(40, 11);
        let eig = sym_eig(&m).unwrap();
        let norm = m.norm();
        for k in 0..40 {
            let v = eig.vectors.column(k);
            let r = m.entries().dot(&v) - &v * eig.values[k];
            let rn = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(rn <= 1e-10 * norm.max(1.0));
        }
        let trace: f64 = m.entries().diag().sum();
        assert!((trace - eig.values.sum()).abs() <= 1e-10 * 40.0 * norm);
    }

    #[test]
    fn order_one() {
        let eig = sym_eig(&RealSymmetricMatrix::diagonal(&[-2.5]).unwrap()).unwrap();
        assert_eq!(eig.values[0], -2.5);
        assert_eq!(eig.vectors[[0, 0]].abs(), 1.0);
    }

    #[test]
    fn complex_hermitian_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 6;
        let a = Array2::from_shape_fn((n, n), |_| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let h = &a + &adjoint(&a);
        let eig = hermitian_eig(&h).unwrap();
        let d = Array2::from_diag(&eig.values.mapv(|x| C64::new(x, 0.0)));
        let recon = eig.vectors.dot(&d).dot(&adjoint(&eig.vectors));
        let resid = (&recon - &h)
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()));
        assert!(resid < 1e-12, "{resid}");
        let gram = adjoint(&eig.vectors).dot(&eig.vectors);
        let defect = (&gram - &Array2::<C64>::eye(n))
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()));
        assert!(defect < 1e-12);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = array![
            [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]
        ];
        let eig = hermitian_eig(&y).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = array![
            [C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            [C64::new(0.0, 1.0), C64::new(1.0, 0.0)]
        ];
        assert!(matches!(hermitian_eig(&m), Err(Error::NotSymmetric { .. })));
    }
}
