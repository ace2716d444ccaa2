/// `x^(r+1) - q x^r + q - 1`, whose largest root is the growth rate `z_r`.
pub fn run_polynomial(q: usize, r: usize, x: f64) -> f64 {
    let q = q as f64;
    x.powi(r as i32 + 1) - q * x.powi(r as i32) + q - 1.0
}

/// Largest real root of `x^(r+1) - q x^r + q - 1`: the growth rate of
/// q-ary strings avoiding a run of `r` equal symbols.
///
/// The polynomial always vanishes at `x = 1`; after dividing that factor
/// out the quotient is `x^r - (q-1)(x^(r-1) + .. + 1)`, which is negative
/// at `q-1` and equal to `1` at `q` for `r >= 2`. Bisection runs on the
/// quotient scaled by `x^-r`, which keeps it finite for long runs.
pub fn z_r(q: usize, r: usize) -> f64 {
    assert!(q >= 2 && r >= 1, "z_r needs q >= 2 and r >= 1");
    let qf = q as f64;
    if r == 1 {
        return qf - 1.0;
    }
    let scaled = |x: f64| 1.0 - (qf - 1.0) * (1.0 - x.powi(-(r as i32))) / (x - 1.0);
    let (mut lo, mut hi) = (qf - 1.0, qf);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if scaled(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
