//! Closed-form rate curves. Rates are in base-q logarithm units; `tau` is
//! the tolerated error fraction `t/n` in `[0, 1]`.

use crate::error::{Error, Result};
use crate::strategies::single_rubber_rate;

use super::roots::z_r;

/// Binary entropy in bits, `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Binary entropy with logarithms to base `q`.
pub fn entropy_q(q: usize, x: f64) -> f64 {
    binary_entropy(x) / (q as f64).log2()
}

fn log_q(q: usize, x: f64) -> f64 {
    x.ln() / (q as f64).ln()
}

/// Upper bound on the capacity error function of the Z and unidirectional
/// channels:
/// `1 + h_q(min(tau, 1/(q+1))) - min(tau, 1/(q+1)) - h_q(min(tau, 1/2))`.
pub fn c_upper(q: usize, tau: f64) -> f64 {
    let a = tau.min(1.0 / (q as f64 + 1.0));
    let b = tau.min(0.5);
    1.0 + entropy_q(q, a) - a - entropy_q(q, b)
}

/// Rate of the layered error-position method: `1 - h(tau) log_q 2` up to
/// `tau = 1/2`, then `1 - log_q 2`. Only defined for `q >= 3`.
pub fn r_dl(q: usize, tau: f64) -> Result<f64> {
    if q < 3 {
        return Err(Error::InvalidParameters(format!(
            "the layered rate needs q >= 3, got {q}"
        )));
    }
    let h = if tau <= 0.5 { binary_entropy(tau) } else { 1.0 };
    Ok(1.0 - h * log_q(q, 2.0))
}

/// Best modified-rubber rate `max_{r>=2} (1 - r tau) log_q z_r`, zero past
/// `tau = 1/2`. At `tau = 0` the supremum over `r` is the limit `1`.
pub fn r_mr(q: usize, tau: f64) -> f64 {
    if tau > 0.5 {
        return 0.0;
    }
    if tau <= 0.0 {
        return 1.0;
    }
    // (1 - r tau) <= 0 once r >= 1/tau.
    let r_max = ((1.0 / tau).ceil() as usize).max(2);
    (2..=r_max)
        .map(|r| (1.0 - r as f64 * tau) * log_q(q, z_r(q, r)))
        .fold(0.0, f64::max)
}

/// Binary symmetric channel with feedback:
/// `1 - h(tau)` up to `1/(3+sqrt 5)`, then `(1 - 3 tau) log2 phi` up to
/// `1/3`, then zero.
pub fn symmetric_capacity(tau: f64) -> f64 {
    let knee = 1.0 / (3.0 + 5f64.sqrt());
    let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).log2();
    if tau <= knee {
        1.0 - binary_entropy(tau)
    } else if tau <= 1.0 / 3.0 {
        (1.0 - 3.0 * tau) * log_phi
    } else {
        0.0
    }
}

/// Zero-error rate of the unidirectional channel, `log_q ceil(q/2)`.
pub fn zero_error_rate(q: usize) -> f64 {
    log_q(q, q.div_ceil(2) as f64)
}

/// Best known lower bound for the unidirectional channel at `tau`: the
/// largest of the modified-rubber rate, the layered rate (`q >= 3`), the
/// zero-error rate and the single-symbol rubber rate.
pub fn lower_envelope(q: usize, tau: f64) -> f64 {
    let mut best = r_mr(q, tau)
        .max(zero_error_rate(q))
        .max(single_rubber_rate(q)(tau));
    if let Ok(dl) = r_dl(q, tau) {
        best = best.max(dl);
    }
    best
}
