//! Finite-difference weights on arbitrary (sorted) abscissae.

/// Weights for the first derivative at `x0` from values at `xs`
/// (Fornberg's recursion).
pub fn first_derivative_weights(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // c[j][k]: weight of xs[j] for the k-th derivative, k in {0, 1}.
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|w| w[1]).collect()
}

/// Derivative of `ys` over `xs` from `2 * half + 1`-point stencils,
/// centred where possible and shifted inward near the ends. `None` when
/// fewer than three samples exist.
pub fn central_derivative(xs: &[f64], ys: &[f64], half: usize) -> Vec<Option<f64>> {
    let n = xs.len();
    let width = (2 * half + 1).min(n);
    (0..n)
        .map(|i| {
            if width < 3 {
                return None;
            }
            let lo = i.saturating_sub(width / 2).min(n - width);
            let hi = lo + width - 1;
            let w = first_derivative_weights(xs[i], &xs[lo..=hi]);
            Some(w.iter().zip(&ys[lo..=hi]).map(|(a, b)| a * b).sum())
        })
        .collect()
}
