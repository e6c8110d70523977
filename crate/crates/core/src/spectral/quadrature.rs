//! Composite Newton–Cotes rules on uniform grids.

/// Weights (in units of the step) of the composite rule over `m` intervals.
///
/// Simpson for even `m`; Simpson followed by one 3/8 panel for odd `m ≥ 3`;
/// trapezoid for `m = 1`. Exact for cubics whenever `m ≥ 2`.
pub fn composite_weights(m: usize) -> Vec<f64> {
    let mut w = vec![0.0; m + 1];
    match m {
        0 => {}
        1 => {
            w[0] = 0.5;
            w[1] = 0.5;
        }
        _ => {
            let simpson_end = if m % 2 == 0 { m } else { m - 3 };
            for k in (0..simpson_end).step_by(2) {
                w[k] += 1.0 / 3.0;
                w[k + 1] += 4.0 / 3.0;
                w[k + 2] += 1.0 / 3.0;
            }
            if m % 2 == 1 {
                let s = m - 3;
                w[s] += 3.0 / 8.0;
                w[s + 1] += 9.0 / 8.0;
                w[s + 2] += 9.0 / 8.0;
                w[s + 3] += 3.0 / 8.0;
            }
        }
    }
    w
}

/// `∫ f` from samples at spacing `h`.
pub fn integrate(samples: &[f64], h: f64) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let w = composite_weights(samples.len() - 1);
    h * samples.iter().zip(&w).map(|(f, w)| f * w).sum::<f64>()
}

/// `(Ag)(t_i) = ∫ k(|t_i − s|) g(s) ds` where `table[n] = k(n·h)`.
///
/// Each integral is split at `s = t_i` so kernels with a kink on the
/// diagonal keep the full order of the rule.
pub fn apply_toeplitz(table: &[f64], g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len();
    debug_assert!(table.len() >= n);
    (0..n)
        .map(|i| {
            let left = composite_weights(i);
            let right = composite_weights(n - 1 - i);
            let mut acc = 0.0;
            for (j, w) in left.iter().enumerate() {
                acc += w * table[i - j] * g[j];
            }
            for (k, w) in right.iter().enumerate() {
                acc += w * table[k] * g[i + k];
            }
            h * acc
        })
        .collect()
}

/// L² norm from samples at spacing `h`.
pub fn l2_norm(samples: &[f64], h: f64) -> f64 {
    let sq: Vec<f64> = samples.iter().map(|v| v * v).collect();
    integrate(&sq, h).max(0.0).sqrt()
}
