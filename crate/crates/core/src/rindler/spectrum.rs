//! Discrete angular spectrum behind a Dirichlet wall and its thermal state.
//!
//! With `K_{iℓ}(m ε) = 0` imposed at distance `ε` from the horizon, the
//! allowed frequencies `ℓ_n` are the zeros of `ℓ ↦ K_{iℓ}(m ε)`. The
//! half-space density matrix `e^{−2πL}/Z` factorizes into one bosonic
//! thermal mode per `ℓ_n` at inverse temperature `β = 2π`.

use std::f64::consts::{LN_2, PI};

use crate::error::{invalid, Error, Result};
use crate::numerics::{bessel_k_imag, bessel_k_imag_scaled, find_roots, RootOptions};

/// Temperature of the half-space state with respect to `L`.
pub const TEMPERATURE: f64 = 1.0 / (2.0 * PI);
const BETA: f64 = 2.0 * PI;

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    /// Root scan resolution in samples per unit `ℓ`.
    pub points_per_unit: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            points_per_unit: 1e3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngularSpectrum {
    pub mass: f64,
    pub epsilon: f64,
    pub ell_max: f64,
    /// Ascending roots `ℓ_n` in `(0, ell_max]`.
    pub ell_values: Vec<f64>,
    /// `|K_{iℓ_n}(m ε)|`.
    pub residuals: Vec<f64>,
    /// `e^{πℓ_n/2} |K_{iℓ_n}(m ε)|`, the residual on the scale of the
    /// function near `ℓ_n`.
    pub scaled_residuals: Vec<f64>,
    /// Bracketing intervals with a sign change, one per root.
    pub brackets: Vec<(f64, f64)>,
}

impl AngularSpectrum {
    /// Flag for "no roots in range".
    pub fn is_empty(&self) -> bool {
        self.ell_values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ell_values.len()
    }
}

/// Roots of `ℓ ↦ K_{iℓ}(m ε)` in `(0, ell_max]`.
pub fn discrete_spectrum(
    mass: f64,
    epsilon: f64,
    ell_max: f64,
    opts: &SpectrumOptions,
) -> Result<AngularSpectrum> {
    if !mass.is_finite() || !epsilon.is_finite() || !ell_max.is_finite() {
        return Err(Error::NonFinite);
    }
    if mass <= 0.0 || epsilon <= 0.0 || ell_max <= 0.0 {
        return invalid(format!(
            "mass, epsilon and ell_max must be positive, got {mass}, {epsilon}, {ell_max}"
        ));
    }
    if !(opts.points_per_unit > 0.0) {
        return invalid("points_per_unit must be positive");
    }
    let x = mass * epsilon;
    // the scaled form keeps the sign and stays O(1) where K itself underflows
    let f = |ell: f64| bessel_k_imag_scaled(ell, x).unwrap_or(f64::NAN);
    let scan = find_roots(
        f,
        0.0,
        ell_max,
        usize::MAX,
        &RootOptions {
            points_per_unit: opts.points_per_unit,
            ..Default::default()
        },
    );
    let mut ell_values = Vec::new();
    let mut residuals = Vec::new();
    let mut scaled_residuals = Vec::new();
    let mut brackets = Vec::new();
    for (root, bracket) in scan.roots.iter().zip(&scan.brackets) {
        if *root <= 0.0 {
            continue;
        }
        ell_values.push(*root);
        residuals.push(bessel_k_imag(*root, x)?.abs());
        scaled_residuals.push(bessel_k_imag_scaled(*root, x)?.abs());
        brackets.push(*bracket);
    }
    Ok(AngularSpectrum {
        mass,
        epsilon,
        ell_max,
        ell_values,
        residuals,
        scaled_residuals,
        brackets,
    })
}

/// Occupation probabilities of one thermal mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeWeights {
    pub ell: f64,
    /// `p(n) = (1 − e^{−2πℓ}) e^{−2πℓ n}`, `n = 0..=n_max`.
    pub weights: Vec<f64>,
}

impl ModeWeights {
    /// `−Σ p ln p` over the tabulated occupations.
    pub fn entropy(&self) -> f64 {
        self.weights
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum()
    }

    /// Upper bound `e^{−2πℓ(n_max+1)}` on the untabulated tail mass.
    pub fn tail_bound(&self) -> f64 {
        (-BETA * self.ell * self.weights.len() as f64).exp()
    }
}

pub fn thermal_weights(spectrum: &AngularSpectrum, n_max: usize) -> Result<Vec<ModeWeights>> {
    if spectrum.is_empty() {
        return invalid("thermal weights need a nonempty spectrum");
    }
    Ok(spectrum
        .ell_values
        .iter()
        .map(|&ell| mode_weights(ell, n_max))
        .collect())
}

fn mode_weights(ell: f64, n_max: usize) -> ModeWeights {
    let x = BETA * ell;
    let ratio = (-x).exp();
    let mut weights = Vec::with_capacity(n_max + 1);
    let mut p = -(-x).exp_m1();
    for _ in 0..=n_max {
        weights.push(p);
        p *= ratio;
    }
    ModeWeights { ell, weights }
}

/// `ln(1 − e^{−x})` for `x > 0`.
fn ln_one_minus_exp_neg(x: f64) -> f64 {
    if x > LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}

/// Entropy of one bosonic mode of energy `ell` at `β = 2π`:
/// `βε/(e^{βε} − 1) − ln(1 − e^{−βε})`.
pub fn thermal_entropy(ell: f64) -> f64 {
    let x = BETA * ell;
    if x <= 0.0 {
        return f64::INFINITY;
    }
    x / x.exp_m1() - ln_one_minus_exp_neg(x)
}

/// Sum of [`thermal_entropy`] over the spectrum; zero when empty.
pub fn geometric_entropy(spectrum: &AngularSpectrum) -> f64 {
    spectrum
        .ell_values
        .iter()
        .map(|&ell| thermal_entropy(ell))
        .sum()
}
