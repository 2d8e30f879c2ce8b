//! Small numeric helpers shared across modules.

/// `|x|^p` with fast paths for the small integer exponents that dominate the
/// hot loops (p = 3, 4, 5 nonlinearities).
#[inline]
pub fn abs_pow(x: f64, p: f64) -> f64 {
    let r = p.round();
    if (p - r).abs() < 1e-12 && (1.0..=8.0).contains(&r) {
        let a = x.abs();
        return match r as i32 {
            1 => a,
            2 => x * x,
            3 => x * x * a,
            4 => (x * x) * (x * x),
            5 => (x * x) * (x * x) * a,
            6 => (x * x) * (x * x) * (x * x),
            7 => (x * x) * (x * x) * (x * x) * a,
            _ => (x * x) * (x * x) * (x * x) * (x * x),
        };
    }
    x.abs().powf(p)
}

/// Odd power `sign(x) |x|^{p-1}`, the nonlinearity `|u|^{p-2} u`.
#[inline]
pub fn odd_pow(x: f64, pm1: f64) -> f64 {
    let mag = abs_pow(x, pm1);
    if x < 0.0 {
        -mag
    } else {
        mag
    }
}

/// Geometric sequence from `start` to `stop` inclusive.
pub fn geomspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    assert!(start > 0.0 && stop > 0.0 && count >= 2);
    let ratio = (stop / start).powf(1.0 / (count - 1) as f64);
    let mut out: Vec<f64> = (0..count).map(|k| start * ratio.powi(k as i32)).collect();
    out[count - 1] = stop;
    out
}
