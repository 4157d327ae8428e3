/// Finite-difference weights for the derivatives `0..=m` at `x0` from the
/// nodes `xs` (Fornberg's recursion). `w[k][j]` weights `f(xs[j])` in the
/// `k`-th derivative.
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// `order`-th derivative of uniformly spaced samples, using a window of
/// `order + accuracy` points (centred in the interior, one-sided near the
/// ends). `accuracy` is the formal order of the interior stencil and must be
/// even.
pub fn derivative(values: &[f64], h: f64, order: usize, accuracy: usize) -> Vec<f64> {
    let n = values.len();
    if order == 0 {
        return values.to_vec();
    }
    let half = (order + accuracy - 1) / 2;
    let width = 2 * half + 1;
    assert!(n >= width + 1, "not enough samples for the stencil");
    // Interior: one centred stencil. Near the ends the window is shifted and
    // widened by one point to keep the formal accuracy.
    let offsets: Vec<f64> = (0..width).map(|j| j as f64 - half as f64).collect();
    let centred = fornberg_weights(0.0, &offsets, order)[order].clone();
    let scale = h.powi(order as i32);
    let mut out = vec![0.0; n];
    for i in 0..n {
        if i >= half && i + half < n {
            out[i] = centred.iter().enumerate().map(|(j, w)| w * values[i + j - half]).sum::<f64>() / scale;
        } else {
            let w1 = width + 1;
            let start = if i < half { 0 } else { n - w1 };
            let xs: Vec<f64> = (0..w1).map(|j| (start + j) as f64 - i as f64).collect();
            let w = &fornberg_weights(0.0, &xs, order)[order];
            out[i] = w.iter().enumerate().map(|(j, wj)| wj * values[start + j]).sum::<f64>() / scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_weights() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for j in 0..5 {
            assert!((w[1][j] - d1[j]).abs() < 1e-14);
            assert!((w[2][j] - d2[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_on_polynomials() {
        let h = 0.1;
        let x: Vec<f64> = (0..30).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = x.iter().map(|t| t.powi(4) - 2.0 * t.powi(3) + t).collect();
        let d1 = derivative(&f, h, 1, 4);
        let d2 = derivative(&f, h, 2, 4);
        let d3 = derivative(&f, h, 3, 2);
        for (i, t) in x.iter().enumerate() {
            assert!((d1[i] - (4.0 * t.powi(3) - 6.0 * t * t + 1.0)).abs() < 1e-9);
            assert!((d2[i] - (12.0 * t * t - 12.0 * t)).abs() < 1e-8);
            assert!((d3[i] - (24.0 * t - 12.0)).abs() < 1e-6);
        }
    }
}
