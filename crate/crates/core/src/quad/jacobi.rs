//! Gauss–Jacobi rules on [-1, 1] for the weight `(1-y)^a (1+y)^b`.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Nodes in increasing order with strictly positive weights.
#[derive(Debug, Clone)]
pub struct JacobiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn diag(k: usize, a: f64, b: f64) -> f64 {
    let s = 2.0 * k as f64 + a + b;
    if k == 0 {
        (b - a) / (a + b + 2.0)
    } else {
        (b * b - a * a) / (s * (s + 2.0))
    }
}

// Squared off-diagonal entry between degrees k-1 and k, k >= 1.
fn offdiag_sq(k: usize, a: f64, b: f64) -> f64 {
    let kf = k as f64;
    let s = 2.0 * kf + a + b;
    4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
}

/// Total mass `∫(1-y)^a(1+y)^b dy = 2^{a+b+1} Γ(a+1)Γ(b+1)/Γ(a+b+2)`.
pub fn jacobi_mass(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(a + b + 2.0))
    .exp()
}

// Orthonormal polynomials p̂_0..p̂_{q} at y, plus the derivative of p̂_q.
fn orthonormal(q: usize, a: f64, b: f64, mu0: f64, y: f64, out: &mut Vec<f64>) -> f64 {
    out.clear();
    let mut p_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut d_prev = 0.0;
    let mut d = 0.0;
    out.push(p);
    for k in 0..q {
        let beta_k = if k == 0 { 0.0 } else { offdiag_sq(k, a, b).sqrt() };
        let beta_next = offdiag_sq(k + 1, a, b).sqrt();
        let ak = diag(k, a, b);
        let p_next = ((y - ak) * p - beta_k * p_prev) / beta_next;
        let d_next = (p + (y - ak) * d - beta_k * d_prev) / beta_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        out.push(p);
    }
    d
}

/// `q`-point Gauss–Jacobi rule: eigenvalues of the Jacobi matrix, refined
/// by Newton steps on the orthonormal recurrence; Christoffel weights.
pub fn gauss_jacobi(q: usize, a: f64, b: f64) -> Result<JacobiRule> {
    if q == 0 {
        return Err(Error::param("order", "need at least one node"));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::param("alpha", format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    let mu0 = jacobi_mass(a, b);
    let mut jm = DMatrix::<f64>::zeros(q, q);
    for k in 0..q {
        jm[(k, k)] = diag(k, a, b);
        if k + 1 < q {
            let e = offdiag_sq(k + 1, a, b).sqrt();
            jm[(k, k + 1)] = e;
            jm[(k + 1, k)] = e;
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.total_cmp(y));

    let mut buf = Vec::with_capacity(q + 1);
    let mut weights = Vec::with_capacity(q);
    for y in nodes.iter_mut() {
        for _ in 0..3 {
            let d = orthonormal(q, a, b, mu0, *y, &mut buf);
            let step = buf[q] / d;
            if !step.is_finite() {
                break;
            }
            let next = *y - step;
            if next.abs() < 1.0 {
                *y = next;
            }
            if step.abs() < 1e-17 {
                break;
            }
        }
        orthonormal(q, a, b, mu0, *y, &mut buf);
        let s: f64 = buf[..q].iter().map(|p| p * p).sum();
        weights.push(1.0 / s);
    }
    Ok(JacobiRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_three_points() {
        let r = gauss_jacobi(3, 0.0, 0.0).unwrap();
        let x = (0.6f64).sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15 && r.nodes[1].abs() < 1e-15);
        assert!((r.weights[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((r.weights[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_mass() {
        for &(a, b) in &[(0.0, 0.0), (1.0, 0.0), (2.5, 0.5), (7.3, 0.0)] {
            for q in [1usize, 5, 64, 128] {
                let r = gauss_jacobi(q, a, b).unwrap();
                let s: f64 = r.weights.iter().sum();
                assert!((s / jacobi_mass(a, b) - 1.0).abs() < 1e-13, "a={a} b={b} q={q}");
                assert!(r.weights.iter().all(|&w| w > 0.0));
            }
        }
    }

    #[test]
    fn moments_exact() {
        // ∫(1-y)^a (1+y)^{b+j} dy, by the Beta recurrence in j.
        let (a, b) = (1.7, 0.5);
        let r = gauss_jacobi(10, a, b).unwrap();
        let mut exact = jacobi_mass(a, b);
        for j in 0..20 {
            let q: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(y, w)| w * (1.0 + y).powi(j))
                .sum();
            assert!((q / exact - 1.0).abs() < 1e-13, "j={j}");
            let bj = b + j as f64;
            exact *= 2.0 * (bj + 1.0) / (a + bj + 2.0);
        }
    }
}
