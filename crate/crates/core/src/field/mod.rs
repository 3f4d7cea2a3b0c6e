//! Scalar fields with the derivative data the frequency integrals need.
//!
//! Points are stored as `[f64; 3]`; a two-dimensional field ignores the
//! third coordinate and reports a zero third gradient component.

mod bessel;
mod catalog;
mod grid;
mod potential;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use bessel::{bessel_j, bessel_zero, BesselValue, BESSEL_SERIES_MAX_ARG};
pub use catalog::{
    make_bessel_mode, make_harmonic_polynomial, make_polyharmonic_example, BesselMode, Constant,
    ExpMode, HarmonicPolynomial, PolyharmonicExample, PolyharmonicId, RadialSquare,
    BESSEL_FIELD_MAX_ARG,
};
pub use grid::{import_grid_field, GridField};
pub use potential::{potential_norms, NormKind, PotentialSpec};

pub type Point = [f64; 3];

pub const ORIGIN: Point = [0.0; 3];

/// Where a field's values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Grid,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Analytic => f.write_str("analytic"),
            Provenance::Grid => f.write_str("grid"),
        }
    }
}

/// A real scalar field on a ball-shaped (or box-shaped) domain in R^n.
///
/// Implementations are immutable after construction and may be evaluated
/// from any number of threads.
pub trait Field: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Point) -> f64;

    fn grad(&self, x: &Point) -> Point;

    /// `(-Δ)^j u(x)`, when the field can provide it. `j = 0` is `u` itself.
    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64>;

    /// Gradient of `(-Δ)^j u`.
    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        if j == 0 {
            Some(self.grad(x))
        } else {
            None
        }
    }

    fn provenance(&self) -> Provenance;

    /// Whether the closed ball `B_r(center)` lies inside the field's domain.
    fn contains_ball(&self, center: &Point, r: f64) -> bool;

    fn label(&self) -> String;
}

pub type SharedField = Arc<dyn Field>;

pub fn ensure_ball(field: &dyn Field, center: &Point, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::param("radius", format!("must be positive, got {r}")));
    }
    if field.contains_ball(center, r) {
        Ok(())
    } else {
        Err(Error::BallOutsideDomain {
            field: field.label(),
            center: center[..field.dim()].to_vec(),
            radius: r,
        })
    }
}

pub fn check_dimension(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

#[inline]
pub fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm_sq(a: &Point) -> f64 {
    dot(a, a)
}

#[inline]
pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn axpy(a: f64, x: &Point, y: &Point) -> Point {
    [a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2]]
}

/// Pads a coordinate slice of length 2 or 3 into a [`Point`].
pub fn point(coords: &[f64]) -> Point {
    let mut p = ORIGIN;
    for (dst, src) in p.iter_mut().zip(coords) {
        *dst = *src;
    }
    p
}

/// `c * u` for a constant `c`.
pub struct Scaled {
    inner: SharedField,
    factor: f64,
}

impl Scaled {
    pub fn new(inner: SharedField, factor: f64) -> Self {
        Scaled { inner, factor }
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }
}

impl Field for Scaled {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &Point) -> f64 {
        self.factor * self.inner.eval(x)
    }

    fn grad(&self, x: &Point) -> Point {
        let g = self.inner.grad(x);
        [self.factor * g[0], self.factor * g[1], self.factor * g[2]]
    }

    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        self.inner.laplacian_power(x, j).map(|v| self.factor * v)
    }

    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        self.inner
            .laplacian_power_grad(x, j)
            .map(|g| [self.factor * g[0], self.factor * g[1], self.factor * g[2]])
    }

    fn provenance(&self) -> Provenance {
        self.inner.provenance()
    }

    fn contains_ball(&self, center: &Point, r: f64) -> bool {
        self.inner.contains_ball(center, r)
    }

    fn label(&self) -> String {
        format!("{}*{}", self.factor, self.inner.label())
    }
}

/// The component `(-Δ)^j u` of a field, itself exposed as a field.
pub struct LaplacianPower {
    base: SharedField,
    order: usize,
}

impl LaplacianPower {
    /// Fails when the base field cannot provide `(-Δ)^order u` or its gradient.
    pub fn new(base: SharedField, order: usize) -> Result<Self> {
        let probe = ORIGIN;
        if base.laplacian_power(&probe, order).is_none()
            || base.laplacian_power_grad(&probe, order).is_none()
        {
            return Err(Error::MissingLaplacianPower {
                field: base.label(),
                order,
            });
        }
        Ok(LaplacianPower { base, order })
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl Field for LaplacianPower {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn eval(&self, x: &Point) -> f64 {
        self.base
            .laplacian_power(x, self.order)
            .expect("checked at construction")
    }

    fn grad(&self, x: &Point) -> Point {
        self.base
            .laplacian_power_grad(x, self.order)
            .expect("checked at construction")
    }

    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        self.base.laplacian_power(x, self.order + j)
    }

    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        self.base.laplacian_power_grad(x, self.order + j)
    }

    fn provenance(&self) -> Provenance {
        self.base.provenance()
    }

    fn contains_ball(&self, center: &Point, r: f64) -> bool {
        self.base.contains_ball(center, r)
    }

    fn label(&self) -> String {
        format!("(-Δ)^{} {}", self.order, self.base.label())
    }
}

/// `u_R(x) = u(R x + x0)`, the dilation used when rescaling a solution
/// around a far-away point.
pub struct Dilated {
    base: SharedField,
    scale: f64,
    shift: Point,
}

impl Dilated {
    pub fn new(base: SharedField, scale: f64, shift: Point) -> Self {
        Dilated { base, scale, shift }
    }

    pub fn map(&self, x: &Point) -> Point {
        axpy(self.scale, x, &self.shift)
    }
}

impl Field for Dilated {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn eval(&self, x: &Point) -> f64 {
        self.base.eval(&self.map(x))
    }

    fn grad(&self, x: &Point) -> Point {
        let g = self.base.grad(&self.map(x));
        [self.scale * g[0], self.scale * g[1], self.scale * g[2]]
    }

    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        let s = self.scale.powi(2 * j as i32);
        self.base.laplacian_power(&self.map(x), j).map(|v| s * v)
    }

    fn laplacian_power_grad(&self, x: &Point, j: usize) -> Option<Point> {
        let s = self.scale.powi(2 * j as i32 + 1);
        self.base
            .laplacian_power_grad(&self.map(x), j)
            .map(|g| [s * g[0], s * g[1], s * g[2]])
    }

    fn provenance(&self) -> Provenance {
        self.base.provenance()
    }

    fn contains_ball(&self, center: &Point, r: f64) -> bool {
        self.base
            .contains_ball(&self.map(center), r * self.scale.abs())
    }

    fn label(&self) -> String {
        format!("{}(R={} ·)", self.base.label(), self.scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_power_component_requires_data() {
        let grid = GridField::from_field(&Constant::new(2, 1.0), 0.1, 1.0).unwrap();
        let err = LaplacianPower::new(Arc::new(grid), 2).err().unwrap();
        assert!(matches!(err, Error::MissingLaplacianPower { order: 2, .. }));
    }

    #[test]
    fn dilation_scales_laplacian_powers() {
        let u: SharedField = Arc::new(ExpMode::new(2));
        let d = Dilated::new(u, 2.0, [2.0, 0.0, 0.0]);
        let lhs = d.laplacian_power(&ORIGIN, 2).unwrap();
        assert!((lhs - 16.0 * 2f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn scaled_field_multiplies_everything() {
        let u: SharedField = Arc::new(make_harmonic_polynomial(2, 2).unwrap());
        let s = Scaled::new(u.clone(), -3.0);
        let x = [0.3, 0.4, 0.0];
        assert_eq!(s.eval(&x), -3.0 * u.eval(&x));
        assert_eq!(s.grad(&x)[1], -3.0 * u.grad(&x)[1]);
    }
}
