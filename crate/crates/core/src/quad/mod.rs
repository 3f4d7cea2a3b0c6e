//! Integration over balls against the weight `(r² - |x - c|²)^α`.
//!
//! In polar coordinates `x = c + r t θ` the weighted integral becomes
//! `r^{n+2α} ∫₀¹ (1-t²)^α t^{n-1} ∫_{S^{n-1}} f dθ dt`. Substituting
//! `t² = (1+y)/2` turns the radial factor into the Jacobi weight
//! `2^{-(α+n/2+1)} (1-y)^α (1+y)^{n/2-1}`, so a Gauss–Jacobi rule in `y`
//! handles non-integer α without loss of accuracy.

pub mod jacobi;
pub mod sampling;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{check_dimension, Point};

pub use jacobi::{gauss_jacobi, jacobi_mass, JacobiRule};
pub use sampling::halton_ball;

/// Radial and angular orders of a [`BallQuadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct QuadOrders {
    pub radial: usize,
    pub angular: usize,
}

impl Default for QuadOrders {
    fn default() -> Self {
        QuadOrders {
            radial: 64,
            angular: 128,
        }
    }
}

impl QuadOrders {
    pub fn new(radial: usize, angular: usize) -> Self {
        QuadOrders { radial, angular }
    }

    /// The self-check resolution `(2 q_r, 2 q_a)`.
    pub fn doubled(self) -> Self {
        QuadOrders {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
        }
    }
}

/// A tensor rule on the unit ball for the weight `(1-|y|²)^α`.
#[derive(Debug, Clone)]
pub struct BallQuadrature {
    n: usize,
    alpha: f64,
    orders: QuadOrders,
    /// `(t, 1 - t², weight)` per radial node.
    radial: Vec<(f64, f64, f64)>,
    /// `(direction, weight)`; weights sum to the sphere area.
    angular: Vec<(Point, f64)>,
}

impl BallQuadrature {
    pub fn new(n: usize, alpha: f64, orders: QuadOrders) -> Result<Self> {
        check_dimension(n)?;
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::param("alpha", format!("weight exponent must be >= 0, got {alpha}")));
        }
        if orders.radial < 1 {
            return Err(Error::param("radial order", "must be positive"));
        }
        let b = 0.5 * n as f64 - 1.0;
        let jr = gauss_jacobi(orders.radial, alpha, b)?;
        let scale = (-(alpha + b + 2.0) * std::f64::consts::LN_2).exp();
        let radial = jr
            .nodes
            .iter()
            .zip(&jr.weights)
            .map(|(&y, &w)| (((1.0 + y) * 0.5).sqrt(), (1.0 - y) * 0.5, w * scale))
            .collect();

        let angular = if n == 2 {
            let qa = orders.angular.max(1);
            (0..qa)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / qa as f64;
                    ([t.cos(), t.sin(), 0.0], 2.0 * PI / qa as f64)
                })
                .collect()
        } else {
            let q_theta = (orders.angular / 4).max(1);
            let q_phi = (orders.angular / 2).max(1);
            let gl = gauss_jacobi(q_theta, 0.0, 0.0)?;
            let mut dirs = Vec::with_capacity(q_theta * q_phi);
            for (&z, &wz) in gl.nodes.iter().zip(&gl.weights) {
                let s = (1.0 - z * z).sqrt();
                for j in 0..q_phi {
                    let phi = 2.0 * PI * j as f64 / q_phi as f64;
                    dirs.push(([s * phi.cos(), s * phi.sin(), z], wz * 2.0 * PI / q_phi as f64));
                }
            }
            dirs
        };
        Ok(BallQuadrature {
            n,
            alpha,
            orders,
            radial,
            angular,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn orders(&self) -> QuadOrders {
        self.orders
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.angular.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same weight exponent at twice the resolution.
    pub fn doubled(&self) -> Result<Self> {
        Self::new(self.n, self.alpha, self.orders.doubled())
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.n, alpha, self.orders)
    }

    /// Visits every node of the rule mapped to `B_r(center)` as
    /// `(x, weight, r² - |x - c|²)`; the weights already carry
    /// `(r² - |x - c|²)^α` and the Jacobian.
    pub fn for_each_node(&self, center: &Point, r: f64, mut visit: impl FnMut(&Point, f64, f64)) {
        let scale = r.powf(self.n as f64 + 2.0 * self.alpha);
        let r2 = r * r;
        for &(t, one_minus_t2, wr) in &self.radial {
            let rt = r * t;
            for (dir, wa) in &self.angular {
                let x = [
                    center[0] + rt * dir[0],
                    center[1] + rt * dir[1],
                    center[2] + rt * dir[2],
                ];
                visit(&x, scale * wr * wa, r2 * one_minus_t2);
            }
        }
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64, center: &Point, r: f64) -> f64 {
        let mut sum = 0.0;
        self.for_each_node(center, r, |x, w, _| sum += w * f(x));
        sum
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::param("radius", format!("must be positive, got {r}")))
    }
}

/// `∫_{B_r(c)} f(x) (r² - |x-c|²)^α dx` with the rule's α.
pub fn weighted_ball_integral(
    f: impl Fn(&Point) -> f64,
    center: &Point,
    r: f64,
    rule: &BallQuadrature,
) -> Result<f64> {
    check_radius(r)?;
    Ok(rule.integrate(f, center, r))
}

/// [`weighted_ball_integral`] at each radius; radii must increase strictly.
pub fn radial_profile(
    f: impl Fn(&Point) -> f64 + Sync,
    center: &Point,
    radii: &[f64],
    rule: &BallQuadrature,
) -> Result<Vec<f64>> {
    check_increasing(radii)?;
    radii
        .par_iter()
        .map(|&r| weighted_ball_integral(&f, center, r, rule))
        .collect()
}

pub(crate) fn check_increasing(radii: &[f64]) -> Result<()> {
    for &r in radii {
        check_radius(r)?;
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("radii", "must be strictly increasing"));
    }
    Ok(())
}

/// A sampled maximum: a lower bound of the true supremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    /// Number of sample points behind the maximum.
    pub samples: usize,
}

pub fn sup_norm_on_ball(
    f: impl Fn(&Point) -> f64,
    n: usize,
    center: &Point,
    r: f64,
    sample_budget: usize,
    seed: u64,
) -> SupEstimate {
    let pts = halton_ball(n, center, r, sample_budget.max(1), seed);
    let value = pts.iter().map(|x| f(x).abs()).fold(0.0, f64::max);
    SupEstimate {
        value,
        samples: pts.len(),
    }
}

/// `|S^{n-1}|`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI.powf(0.5 * n as f64) / statrs::function::gamma::gamma(0.5 * n as f64),
    }
}

/// `∫_{B_r} (r² - |x|²)^α |x|^{2j} dx = (|S^{n-1}|/2) r^{n+2α+2j} B(j + n/2, α + 1)`.
pub fn weighted_moment(n: usize, alpha: f64, j: usize, r: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let a = j as f64 + 0.5 * n as f64;
    let b = alpha + 1.0;
    let beta = (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp();
    0.5 * sphere_area(n) * r.powf(n as f64 + 2.0 * alpha + 2.0 * j as f64) * beta
}
