//! Principal branch of the Lambert W function on `[0, ∞)`.

use crate::error::{invalid, Error, Result};

/// `W₀(z)` for `z ≥ 0`: the solution `w ≥ 0` of `w e^w = z`.
pub fn lambert_w0(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::NonFinite);
    }
    if z < 0.0 {
        return invalid(format!(
            "lambert_w0 is only implemented for z >= 0, got {z}"
        ));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut w = if z < std::f64::consts::E {
        z.ln_1p() * (1.0 - 0.3 * z.ln_1p() / (1.0 + z.ln_1p()))
    } else {
        let l = z.ln();
        l - l.ln()
    };
    for _ in 0..64 {
        // Halley step on f(w) = w e^w − z, written as w − z e^{−w}
        let ew = (-w).exp();
        let f = w - z * ew;
        let fp = 1.0 + z * ew;
        let fpp = -z * ew;
        let step = f / (fp - 0.5 * f * fpp / fp);
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        iterations: 64,
        residual: (w * w.exp() - z).abs(),
    })
}
