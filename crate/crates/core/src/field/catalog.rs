//! Analytic solution catalog.

use std::str::FromStr;
use std::sync::Arc;

use super::bessel::radial_factor;
use super::{check_dimension, norm_sq, Field, Point, PotentialSpec, Provenance, SharedField};
use crate::error::{Error, Result};

/// Bessel modes are evaluated only where `sqrt(λ)|x| <= BESSEL_FIELD_MAX_ARG`.
pub const BESSEL_FIELD_MAX_ARG: f64 = 12.0;

/// `Re((x₁ + i x₂)^k)` and `k (x₁ + i x₂)^(k-1)` as (re, im) pairs.
fn complex_power(x: &Point, k: usize) -> ((f64, f64), (f64, f64)) {
    let (a, b) = (x[0], x[1]);
    let mut p = (1.0, 0.0);
    let mut dp = (0.0, 0.0);
    for i in 0..k {
        if i + 1 == k {
            dp = (k as f64 * p.0, k as f64 * p.1);
        }
        p = (p.0 * a - p.1 * b, p.0 * b + p.1 * a);
    }
    (p, dp)
}

#[derive(Debug, Clone)]
pub struct Constant {
    n: usize,
    value: f64,
}

impl Constant {
    pub fn new(n: usize, value: f64) -> Self {
        Constant { n, value }
    }
}

impl Field for Constant {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, _x: &Point) -> f64 {
        self.value
    }

    fn grad(&self, _x: &Point) -> Point {
        [0.0; 3]
    }

    fn laplacian_power(&self, _x: &Point, j: usize) -> Option<f64> {
        Some(if j == 0 { self.value } else { 0.0 })
    }

    fn laplacian_power_grad(&self, _x: &Point, _j: usize) -> Option<Point> {
        Some([0.0; 3])
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn contains_ball(&self, _center: &Point, _r: f64) -> bool {
        true
    }

    fn label(&self) -> String {
        format!("constant({})", self.value)
    }
}

/// `Re((x₁ + i x₂)^k)`: harmonic and homogeneous of degree `k` in both
/// two and three dimensions (in R³ it is the solid harmonic `ρ^k P_k^k cos kφ`
/// up to normalization).
#[derive(Debug, Clone)]
pub struct HarmonicPolynomial {
    n: usize,
    k: usize,
}

impl HarmonicPolynomial {
    pub fn degree(&self) -> usize {
        self.k
    }
}

pub fn make_harmonic_polynomial(k: usize, n: usize) -> Result<HarmonicPolynomial> {
    check_dimension(n)?;
    Ok(HarmonicPolynomial { n, k })
}

impl Field for HarmonicPolynomial {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Point) -> f64 {
        complex_power(x, self.k).0 .0
    }

    fn grad(&self, x: &Point) -> Point {
        let (_, dp) = complex_power(x, self.k);
        [dp.0, -dp.1, 0.0]
    }

    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        Some(if j == 0 { self.eval(x) } else { 0.0 })
    }

    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        Some(if j == 0 { self.grad(x) } else { [0.0; 3] })
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn contains_ball(&self, _center: &Point, _r: f64) -> bool {
        true
    }

    fn label(&self) -> String {
        format!("harmonic(k={},n={})", self.k, self.n)
    }
}

/// `J_k(sqrt(λ) ρ) cos(kθ)` in the plane, a solution of `Δu = -λ u`.
///
/// Written as `g(ρ²) Re((x₁+ix₂)^k)` with `g` an entire power series, so
/// values and derivatives are smooth through the origin.
#[derive(Debug, Clone)]
pub struct BesselMode {
    k: usize,
    lambda: f64,
}

impl BesselMode {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Radius of the disk on which the series evaluation is trusted.
    pub fn domain_radius(&self) -> f64 {
        BESSEL_FIELD_MAX_ARG / self.lambda.sqrt()
    }

    /// `Δu` assembled from the series derivatives, independent of the
    /// eigenvalue relation.
    pub fn laplacian_from_series(&self, x: &Point) -> f64 {
        let s = x[0] * x[0] + x[1] * x[1];
        let (_, g1, g2) = radial_factor(self.k, self.lambda, s);
        let p = complex_power(x, self.k).0 .0;
        (4.0 * s * g2 + (4.0 + 4.0 * self.k as f64) * g1) * p
    }
}

pub fn make_bessel_mode(k: usize, lambda: f64) -> Result<(BesselMode, PotentialSpec)> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::param("lambda", format!("must be positive, got {lambda}")));
    }
    Ok((BesselMode { k, lambda }, PotentialSpec::constant(2, -lambda)))
}

impl Field for BesselMode {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, x: &Point) -> f64 {
        let s = x[0] * x[0] + x[1] * x[1];
        let (g, _, _) = radial_factor(self.k, self.lambda, s);
        g * complex_power(x, self.k).0 .0
    }

    fn grad(&self, x: &Point) -> Point {
        let s = x[0] * x[0] + x[1] * x[1];
        let (g, g1, _) = radial_factor(self.k, self.lambda, s);
        let (p, dp) = complex_power(x, self.k);
        let two_g1_p = 2.0 * g1 * p.0;
        [
            two_g1_p * x[0] + g * dp.0,
            two_g1_p * x[1] - g * dp.1,
            0.0,
        ]
    }

    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        Some(match j {
            0 => self.eval(x),
            _ => -self.laplacian_from_series(x) * self.lambda.powi(j as i32 - 1),
        })
    }

    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        let g = self.grad(x);
        let s = self.lambda.powi(j as i32);
        Some([s * g[0], s * g[1], 0.0])
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn contains_ball(&self, center: &Point, r: f64) -> bool {
        norm_sq(center).sqrt() + r <= self.domain_radius()
    }

    fn label(&self) -> String {
        format!("bessel(k={},lambda={})", self.k, self.lambda)
    }
}

/// `u = |x|²`, with `(-Δ)u = -2n` and `(-Δ)²u = 0`.
#[derive(Debug, Clone)]
pub struct RadialSquare {
    n: usize,
}

impl RadialSquare {
    pub fn new(n: usize) -> Self {
        RadialSquare { n }
    }
}

impl Field for RadialSquare {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Point) -> f64 {
        norm_sq(x)
    }

    fn grad(&self, x: &Point) -> Point {
        [2.0 * x[0], 2.0 * x[1], 2.0 * x[2]]
    }

    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        Some(match j {
            0 => self.eval(x),
            1 => -2.0 * self.n as f64,
            _ => 0.0,
        })
    }

    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        Some(if j == 0 { self.grad(x) } else { [0.0; 3] })
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn contains_ball(&self, _center: &Point, _r: f64) -> bool {
        true
    }

    fn label(&self) -> String {
        "radial_square".to_string()
    }
}

/// `u = e^{x₁}`, with `(-Δ)^j u = (-1)^j e^{x₁}`.
#[derive(Debug, Clone)]
pub struct ExpMode {
    n: usize,
}

impl ExpMode {
    pub fn new(n: usize) -> Self {
        ExpMode { n }
    }
}

impl Field for ExpMode {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Point) -> f64 {
        x[0].exp()
    }

    fn grad(&self, x: &Point) -> Point {
        [x[0].exp(), 0.0, 0.0]
    }

    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        Some(sign * x[0].exp())
    }

    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        Some([sign * x[0].exp(), 0.0, 0.0])
    }

    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }

    fn contains_ball(&self, _center: &Point, _r: f64) -> bool {
        true
    }

    fn label(&self) -> String {
        "exp_mode".to_string()
    }
}

/// Keys of the polyharmonic catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyharmonicId {
    RadialSquare,
    ExpMode,
    Harmonic { k: usize, m: usize },
}

impl FromStr for PolyharmonicId {
    type Err = Error;

    /// Accepts `radial_square`, `exp_mode`, `harmonic_<k>` (order 2) and
    /// `harmonic_<k>_m<m>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial_square" => return Ok(PolyharmonicId::RadialSquare),
            "exp_mode" => return Ok(PolyharmonicId::ExpMode),
            _ => {}
        }
        let unknown = || Error::UnknownCatalogEntry(s.to_string());
        let rest = s.strip_prefix("harmonic_").ok_or_else(unknown)?;
        let (k, m) = match rest.split_once("_m") {
            Some((k, m)) => (k, m),
            None => (rest, "2"),
        };
        let k = k.parse().map_err(|_| unknown())?;
        let m: usize = m.parse().map_err(|_| unknown())?;
        if m == 0 {
            return Err(unknown());
        }
        Ok(PolyharmonicId::Harmonic { k, m })
    }
}

pub struct PolyharmonicExample {
    pub field: SharedField,
    /// The potential `V̄` in `(-Δ)^m u = V̄ u`.
    pub potential: PotentialSpec,
    pub order: usize,
}

pub fn make_polyharmonic_example(id: &str, n: usize) -> Result<PolyharmonicExample> {
    check_dimension(n)?;
    let id: PolyharmonicId = id.parse()?;
    Ok(match id {
        PolyharmonicId::RadialSquare => PolyharmonicExample {
            field: Arc::new(RadialSquare::new(n)),
            potential: PotentialSpec::zero(n),
            order: 2,
        },
        PolyharmonicId::ExpMode => PolyharmonicExample {
            field: Arc::new(ExpMode::new(n)),
            potential: PotentialSpec::constant(n, 1.0),
            order: 2,
        },
        PolyharmonicId::Harmonic { k, m } => PolyharmonicExample {
            field: Arc::new(make_harmonic_polynomial(k, n)?),
            potential: PotentialSpec::zero(n),
            order: m,
        },
    })
}
