//! Kruskal-Szekeres chart of the Schwarzschild exterior:
//!
//! ```text
//! u v = 16M² (r/2M − 1) e^{r/2M − 1},   u/v = e^{t/2M},
//! Z = u + v,   T = u − v.
//! ```
//!
//! The horizon `r = 2M` sits at `u = 0` or `v = 0`; only the exterior
//! `u, v > 0` is represented.

use crate::error::{invalid, Error, Result};
use crate::numerics::lambert_w0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchwarzschildPoint {
    pub r: f64,
    pub t: f64,
    /// Black-hole mass `M > 0`.
    pub mass: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KruskalPoint {
    pub u: f64,
    pub v: f64,
}

impl KruskalPoint {
    /// Minkowski-like pair `(Z, T) = (u + v, u − v)`.
    pub fn minkowski(&self) -> (f64, f64) {
        (self.u + self.v, self.u - self.v)
    }

    pub fn product(&self) -> f64 {
        self.u * self.v
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if !mass.is_finite() {
        return Err(Error::NonFinite);
    }
    if mass <= 0.0 {
        return invalid(format!("mass must be positive, got {mass}"));
    }
    Ok(())
}

pub fn to_kruskal(p: &SchwarzschildPoint) -> Result<KruskalPoint> {
    check_mass(p.mass)?;
    if !p.r.is_finite() || !p.t.is_finite() {
        return Err(Error::NonFinite);
    }
    let m = p.mass;
    if p.r <= 2.0 * m {
        return invalid(format!(
            "r = {} is not outside the horizon r = 2M = {}; the horizon is u = 0 or v = 0",
            p.r,
            2.0 * m
        ));
    }
    let y = p.r / (2.0 * m) - 1.0;
    // √(uv) = 4M √y e^{y/2}
    let root_uv = 4.0 * m * y.sqrt() * (0.5 * y).exp();
    let boost = (p.t / (4.0 * m)).exp();
    Ok(KruskalPoint {
        u: root_uv * boost,
        v: root_uv / boost,
    })
}

pub fn from_kruskal(k: &KruskalPoint, mass: f64) -> Result<SchwarzschildPoint> {
    check_mass(mass)?;
    if !k.u.is_finite() || !k.v.is_finite() {
        return Err(Error::NonFinite);
    }
    if k.u <= 0.0 || k.v <= 0.0 {
        return invalid(format!(
            "({}, {}) is not in the exterior region u, v > 0",
            k.u, k.v
        ));
    }
    // y e^y = uv / 16M², computed without forming uv to avoid overflow
    let scale = 4.0 * mass;
    let z = (k.u / scale) * (k.v / scale);
    let y = lambert_w0(z)?;
    Ok(SchwarzschildPoint {
        r: 2.0 * mass * (1.0 + y),
        t: 2.0 * mass * (k.u / k.v).ln(),
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_example() {
        let k = to_kruskal(&SchwarzschildPoint {
            r: 4.0,
            t: 0.0,
            mass: 1.0,
        })
        .unwrap();
        let e = std::f64::consts::E;
        assert!((k.product() - 16.0 * e).abs() < 1e-13);
        assert!((k.u - 4.0 * e.sqrt()).abs() < 1e-14);
        assert!((k.v - 4.0 * e.sqrt()).abs() < 1e-14);
        let (z, t) = k.minkowski();
        assert!((z - 8.0 * e.sqrt()).abs() < 1e-13);
        assert_eq!(t, 0.0);
    }

    #[test]
    fn time_shift_scales_ratio() {
        let m = 1.5;
        let a = to_kruskal(&SchwarzschildPoint {
            r: 5.0,
            t: 0.7,
            mass: m,
        })
        .unwrap();
        let kk = 3.0f64;
        let b = to_kruskal(&SchwarzschildPoint {
            r: 5.0,
            t: 0.7 + 2.0 * m * kk.ln(),
            mass: m,
        })
        .unwrap();
        assert!(((b.u / b.v) / (a.u / a.v) - kk).abs() < 1e-13);
    }

    #[test]
    fn horizon_and_interior_rejected() {
        assert!(to_kruskal(&SchwarzschildPoint {
            r: 2.0,
            t: 0.0,
            mass: 1.0
        })
        .is_err());
        assert!(to_kruskal(&SchwarzschildPoint {
            r: 1.0,
            t: 0.0,
            mass: 1.0
        })
        .is_err());
        assert!(to_kruskal(&SchwarzschildPoint {
            r: 3.0,
            t: 0.0,
            mass: 0.0
        })
        .is_err());
        assert!(from_kruskal(&KruskalPoint { u: 0.0, v: 1.0 }, 1.0).is_err());
    }

    #[test]
    fn round_trip() {
        for &(r, t, m) in &[(2.000_001, -3.0, 1.0), (3.0, 10.0, 0.5), (19.0, -19.0, 2.0)] {
            let back = from_kruskal(
                &to_kruskal(&SchwarzschildPoint { r, t, mass: m }).unwrap(),
                m,
            )
            .unwrap();
            assert!((back.r - r).abs() <= 1e-12 * r);
            assert!((back.t - t).abs() <= 1e-12 * t.abs().max(1.0));
        }
    }

    #[test]
    fn product_vanishes_at_horizon() {
        let mut prev = f64::INFINITY;
        for k in 1..12 {
            let r = 2.0 + 10f64.powi(-k);
            let uv = to_kruskal(&SchwarzschildPoint {
                r,
                t: 1.0,
                mass: 1.0,
            })
            .unwrap()
            .product();
            assert!(uv < prev);
            prev = uv;
        }
        assert!(prev < 1e-9);
    }
}
