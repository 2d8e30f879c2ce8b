//! Cubic Lagrange interpolation on uniform node data.

/// Evaluate at fractional index `t` using the 4-point Lagrange cubic around
/// `floor(t)`.  With `even_reflect` the data is mirrored through index 0
/// (radial fields); indices beyond the last node read as zero, matching the
/// Dirichlet truncation of decaying profiles.
pub fn cubic_uniform(values: &[f64], t: f64, even_reflect: bool) -> f64 {
    let n = values.len() as isize;
    if t < -0.5 || t > (n - 1) as f64 + 0.5 {
        return 0.0;
    }
    let base = t.floor() as isize;
    let s = t - base as f64;

    let fetch = |j: isize| -> f64 {
        if j < 0 {
            if even_reflect {
                values.get((-j) as usize).copied().unwrap_or(0.0)
            } else {
                0.0
            }
        } else if j >= n {
            0.0
        } else {
            values[j as usize]
        }
    };

    let (f_m1, f_0, f_1, f_2) = (fetch(base - 1), fetch(base), fetch(base + 1), fetch(base + 2));
    let w_m1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    let w_0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    let w_1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    let w_2 = (s + 1.0) * s * (s - 1.0) / 6.0;
    w_m1 * f_m1 + w_0 * f_0 + w_1 * f_1 + w_2 * f_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        // values of x^3 - 2x on integer nodes; cubic interpolation is exact
        let f = |x: f64| x * x * x - 2.0 * x;
        let values: Vec<f64> = (0..20).map(|i| f(i as f64)).collect();
        for &t in &[3.25, 7.5, 12.9, 17.01] {
            assert!((cubic_uniform(&values, t, false) - f(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn weights_sum_to_one_on_interior_stencils() {
        let values = vec![1.0; 10];
        for &t in &[1.5, 2.3, 4.99, 7.2] {
            assert!((cubic_uniform(&values, t, false) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn even_reflection_matches_even_function() {
        // data at x = 0.1 i; evaluating inside the first cell reaches index -1
        let h = 0.1;
        let f = |x: f64| (-0.1 * x * x).exp();
        let values: Vec<f64> = (0..200).map(|i| f(h * i as f64)).collect();
        assert!((cubic_uniform(&values, 0.4, true) - f(0.4 * h)).abs() < 1e-5);
    }
}
