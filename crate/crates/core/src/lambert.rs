//! Principal branch of the Lambert W function on `[0, inf)`, plus an
//! overflow-free evaluation of `W(exp(u))`.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_ITERS: usize = 50;

/// Largest `u` for which `exp(u)` is formed explicitly.
pub const EXP_CUTOFF: f64 = 700.0;

fn converged(step: f64, w: f64) -> bool {
    step.abs() < 1e-14 * (1.0 + w.abs())
}

/// `W(z)` for `z >= 0`: the `w >= 0` with `w * exp(w) = z`.
///
/// Halley iteration on `w e^w - z`.
pub fn lambert_w(z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return Err(Error::LambertDomain(z));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }

    let mut w = if z < 0.5 / E {
        z
    } else if z > E {
        let l = z.ln();
        l - l.ln()
    } else {
        0.5
    };

    for _ in 0..MAX_ITERS {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if converged(step, w) {
            return Ok(w);
        }
    }
    Err(Error::LambertConvergence(z))
}

/// `W(exp(u))` for any real `u`, never forming `exp(u)` when it would
/// overflow.
///
/// For `u > 700` solves `w + ln w = u` by Halley iteration from `u - ln u`.
pub fn lambert_w_exp(u: f64) -> f64 {
    assert!(!u.is_nan(), "lambert_w_exp of NaN");
    if u <= EXP_CUTOFF {
        // exp(u) is finite and non-negative here, so the call cannot fail.
        return lambert_w(u.exp()).expect("exp(u) is a valid Lambert argument");
    }
    if u.is_infinite() {
        return f64::INFINITY;
    }

    let mut w = u - u.ln();
    for _ in 0..MAX_ITERS {
        let g = w + w.ln() - u;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let step = g / (g1 - g * g2 / (2.0 * g1));
        w -= step;
        if converged(step, w) {
            break;
        }
    }
    w
}
