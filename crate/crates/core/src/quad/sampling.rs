//! Deterministic low-discrepancy samples of a ball.
//!
//! Layout of the returned set, in order:
//! 1. the centre;
//! 2. boundary points: for n=2, `nb` equispaced angles starting at 0; for
//!    n=3, the six axis points followed by a Halton (bases 2, 3) equal-area
//!    sweep of the sphere;
//! 3. interior points from the Halton sequence (bases 2, 3 for n=2 and
//!    2, 3, 5 for n=3) at indices `seed + 1, seed + 2, ...`, mapped to the
//!    ball by equal-volume radius and uniform angles.
//!
//! `nb = max(count / 4, 8)` (capped by `count - 1`).

use std::f64::consts::PI;

use crate::field::Point;

/// Radical inverse of `i` in base `b`.
pub fn halton(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let bf = b as f64;
    while i > 0 {
        f /= bf;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

fn sphere_point(u: f64, v: f64) -> Point {
    let z = 2.0 * u - 1.0;
    let s = (1.0 - z * z).max(0.0).sqrt();
    let phi = 2.0 * PI * v;
    [s * phi.cos(), s * phi.sin(), z]
}

pub fn halton_ball(n: usize, center: &Point, r: f64, count: usize, seed: u64) -> Vec<Point> {
    let mut unit: Vec<Point> = Vec::with_capacity(count);
    if count == 0 {
        return unit;
    }
    unit.push([0.0; 3]);
    let nb = (count / 4).max(8).min(count - 1);
    if n == 2 {
        for j in 0..nb {
            let t = 2.0 * PI * j as f64 / nb as f64;
            unit.push([t.cos(), t.sin(), 0.0]);
        }
    } else {
        let axes = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        unit.extend(axes.iter().take(nb));
        for j in 6..nb {
            let i = j as u64 - 5;
            unit.push(sphere_point(halton(i, 2), halton(i, 3)));
        }
    }
    let mut i = seed;
    while unit.len() < count {
        i += 1;
        let p = if n == 2 {
            let rho = halton(i, 2).sqrt();
            let t = 2.0 * PI * halton(i, 3);
            [rho * t.cos(), rho * t.sin(), 0.0]
        } else {
            let rho = halton(i, 2).cbrt();
            let d = sphere_point(halton(i, 3), halton(i, 5));
            [rho * d[0], rho * d[1], rho * d[2]]
        };
        unit.push(p);
    }
    unit.into_iter()
        .map(|p| {
            let mut x = *center;
            for a in 0..n {
                x[a] += r * p[a];
            }
            x
        })
        .collect()
}
