//! Angular quantization of a massive scalar field in the Rindler wedge.
//!
//! Modes of the rotation generator `L` with eigenvalue `ℓ` have radial
//! profile `K_{iℓ}(m x)`: oscillatory for `x < ℓ/m` with a wavelength
//! proportional to `x`, exponentially decaying beyond. A Dirichlet wall at a
//! short distance `ε` from the horizon makes the spectrum discrete, and the
//! half-space ground state is thermal in `L` at temperature `1/(2π)`.

mod kruskal;
mod spectrum;

pub use kruskal::{from_kruskal, to_kruskal, KruskalPoint, SchwarzschildPoint};
pub use spectrum::{
    discrete_spectrum, geometric_entropy, thermal_entropy, thermal_weights, AngularSpectrum,
    ModeWeights, SpectrumOptions, TEMPERATURE,
};

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::numerics::bessel_k_imag;

/// Minimum samples per side accepted by [`classify_turning_point`].
pub const MIN_RESOLUTION: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularMode {
    /// Angular frequency `ℓ ≥ 0`.
    pub ell: f64,
    pub mass: f64,
}

impl AngularMode {
    pub fn new(ell: f64, mass: f64) -> Result<Self> {
        if !ell.is_finite() || !mass.is_finite() {
            return Err(Error::NonFinite);
        }
        if ell < 0.0 {
            return invalid(format!("ell must be nonnegative, got {ell}"));
        }
        if mass <= 0.0 {
            return invalid(format!("mass must be positive, got {mass}"));
        }
        Ok(Self { ell, mass })
    }

    /// `x* = ℓ/m`.
    pub fn turning_point(&self) -> f64 {
        self.ell / self.mass
    }

    /// Mode normalization `1/√(2 sinh πℓ)`; infinite at `ℓ = 0`. Carried as
    /// metadata only: [`angular_wave`] returns the bare `K_{iℓ}(mx)`.
    pub fn normalization(&self) -> f64 {
        1.0 / (2.0 * (PI * self.ell).sinh()).sqrt()
    }
}

/// `K_{iℓ}(m x)`.
pub fn angular_wave(mode: &AngularMode, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if x <= 0.0 {
        return invalid(format!(
            "angular wave needs x > 0 (the wavelength vanishes at x = 0), got {x}"
        ));
    }
    bessel_k_imag(mode.ell, mode.mass * x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TurningPointCensus {
    pub turning_point: f64,
    /// Sampled interval below `x*`; `None` when `ℓ = 0`.
    pub oscillatory_region: Option<(f64, f64)>,
    pub decay_region: (f64, f64),
    pub oscillatory_sign_changes: usize,
    pub decay_sign_changes: usize,
}

/// Counts sign changes of the angular wave on either side of `x* = ℓ/m`.
///
/// The oscillatory side `[10⁻³ x*, x*]` is sampled on a logarithmic grid,
/// matching the wavelength that shrinks linearly toward the origin; the decay
/// side `[x*, x_max]` is sampled uniformly. Each side gets `resolution`
/// points.
pub fn classify_turning_point(
    mode: &AngularMode,
    resolution: usize,
    x_max: f64,
) -> Result<TurningPointCensus> {
    if resolution < MIN_RESOLUTION {
        return invalid(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        ));
    }
    let turning_point = mode.turning_point();
    let decay_start = if turning_point > 0.0 {
        turning_point
    } else {
        1e-3 / mode.mass
    };
    if !(x_max > decay_start) {
        return invalid(format!(
            "x_max = {x_max} must exceed the start of the decay region {decay_start}"
        ));
    }
    let count = |xs: &[f64]| -> Result<usize> {
        let mut changes = 0;
        let mut prev: Option<f64> = None;
        for &x in xs {
            let k = angular_wave(mode, x)?;
            if let Some(p) = prev {
                if p * k < 0.0 {
                    changes += 1;
                }
            }
            if k != 0.0 {
                prev = Some(k);
            }
        }
        Ok(changes)
    };

    let n = resolution;
    let (oscillatory_region, oscillatory_sign_changes) = if turning_point > 0.0 {
        let lo = 1e-3 * turning_point;
        let ratio = (turning_point / lo).ln();
        let xs: Vec<f64> = (0..n)
            .map(|k| lo * (ratio * k as f64 / (n - 1) as f64).exp())
            .collect();
        (Some((lo, turning_point)), count(&xs)?)
    } else {
        (None, 0)
    };
    let xs: Vec<f64> = (0..n)
        .map(|k| decay_start + (x_max - decay_start) * k as f64 / (n - 1) as f64)
        .collect();
    Ok(TurningPointCensus {
        turning_point,
        oscillatory_region,
        decay_region: (decay_start, x_max),
        oscillatory_sign_changes,
        decay_sign_changes: count(&xs)?,
    })
}
