//! Bound curves as CSV: `tau,value,curve`, one row per grid point, sorted
//! by curve name and then by `tau`, values with 12 significant digits.

use std::fmt::Write as _;

use crate::bounds::{c_upper, lower_envelope, r_dl, r_mr, symmetric_capacity, zero_error_rate};
use crate::error::{Error, Result};

/// One sampled point of a named curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub tau: f64,
    pub value: f64,
    pub curve: &'static str,
}

/// The `tau` grid `0, step, 2 step, ..., 1`. The last point is 1 even when
/// `step` does not divide it.
pub fn tau_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidParameters(format!(
            "tau step must lie in (0, 0.5], got {step}"
        )));
    }
    let intervals = (1.0 / step - 1e-9).ceil() as usize;
    Ok((0..=intervals)
        .map(|i| (i as f64 * step).min(1.0))
        .collect())
}

type Curve = Box<dyn Fn(f64) -> f64>;

/// Samples every curve relevant to alphabet size `q`.
pub fn sample(q: usize, step: f64) -> Result<Vec<CurvePoint>> {
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    let grid = tau_grid(step)?;
    let zero = zero_error_rate(q);
    let mut curves: Vec<(&'static str, Curve)> = vec![
        ("c_upper", Box::new(move |t| c_upper(q, t))),
        ("lower_envelope", Box::new(move |t| lower_envelope(q, t))),
        ("r_mr", Box::new(move |t| r_mr(q, t))),
        ("zero_error", Box::new(move |_| zero)),
    ];
    if q >= 3 {
        curves.push(("r_dl", Box::new(move |t| r_dl(q, t).expect("q >= 3"))));
    }
    if q == 2 {
        curves.push(("symmetric_capacity", Box::new(symmetric_capacity)));
    }
    curves.sort_by_key(|(name, _)| *name);
    Ok(curves
        .iter()
        .flat_map(|(name, f)| {
            grid.iter().map(move |&tau| CurvePoint {
                tau,
                value: f(tau),
                curve: name,
            })
        })
        .collect())
}

/// `x` with 12 significant digits, trailing zeros removed.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let digits = 11 - x.abs().log10().floor() as i32;
    let s = if digits > 0 {
        format!("{:.*}", digits as usize, x)
    } else {
        format!("{:.0}", x)
    };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("tau,value,curve\n");
    for p in points {
        // Normalize -0 and tiny negative round-off to 0.
        let value = if p.value.abs() < 1e-15 { 0.0 } else { p.value };
        writeln!(
            out,
            "{},{},{}",
            format_value(p.tau),
            format_value(value),
            p.curve
        )
        .expect("writing to a String");
    }
    out
}

/// CSV for all curves at alphabet size `q`.
pub fn emit_curves(q: usize, step: f64) -> Result<String> {
    Ok(to_csv(&sample(q, step)?))
}
