//! Fields sampled on uniform Cartesian grids.
//!
//! File layout: a header line `n,h,shape` (for instance `2,0.01,41x41`),
//! optionally preceded by the literal column line `n,h,shape`, then one row
//! per node in row-major order (last index fastest): `i1,...,in,value`.
//! Node `(i1,...,in)` sits at `(i1 h, ..., in h)`; indices may be negative.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{check_dimension, Field, Point, Provenance};
use crate::error::{Error, Result};

const NODE_SNAP: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GridField {
    n: usize,
    h: f64,
    shape: Vec<usize>,
    lower: Vec<i64>,
    values: Vec<f64>,
    label: String,
}

fn lagrange_weights(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}

impl GridField {
    pub fn new(n: usize, h: f64, lower: Vec<i64>, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        check_dimension(n)?;
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::param("spacing", format!("must be positive, got {h}")));
        }
        if shape.len() != n || lower.len() != n {
            return Err(Error::param("shape", "one extent per axis required"));
        }
        if shape.iter().any(|&s| s < 4) {
            return Err(Error::param("shape", "cubic interpolation needs at least 4 nodes per axis"));
        }
        if shape.iter().product::<usize>() != values.len() {
            return Err(Error::param("values", "length does not match shape"));
        }
        Ok(GridField {
            n,
            h,
            shape,
            lower,
            values,
            label: "grid".to_string(),
        })
    }

    /// Samples `field` on the grid `{i h : |i h| <= half_extent}` per axis.
    pub fn from_field(field: &dyn Field, h: f64, half_extent: f64) -> Result<Self> {
        let n = field.dim();
        let m = (half_extent / h).floor() as i64;
        let lower = vec![-m; n];
        let shape = vec![(2 * m + 1) as usize; n];
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let mut x = [0.0; 3];
            for a in 0..n {
                x[a] = (lower[a] + idx[a] as i64) as f64 * h;
            }
            values.push(field.eval(&x));
            increment(&mut idx, &shape);
        }
        let mut g = GridField::new(n, h, lower, shape, values)?;
        g.label = format!("grid[{}]", field.label());
        Ok(g)
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Coordinates of a node given its position in storage order.
    pub fn node(&self, flat: usize) -> Point {
        let mut rem = flat;
        let mut x = [0.0; 3];
        for a in (0..self.n).rev() {
            let i = rem % self.shape[a];
            rem /= self.shape[a];
            x[a] = (self.lower[a] + i as i64) as f64 * self.h;
        }
        x
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &s)| acc * s + i)
    }

    fn box_bounds(&self, axis: usize) -> (f64, f64) {
        let lo = self.lower[axis] as f64 * self.h;
        let hi = (self.lower[axis] + self.shape[axis] as i64 - 1) as f64 * self.h;
        (lo, hi)
    }

    fn inside(&self, x: &Point) -> bool {
        (0..self.n).all(|a| {
            let (lo, hi) = self.box_bounds(a);
            x[a] >= lo - NODE_SNAP * self.h && x[a] <= hi + NODE_SNAP * self.h
        })
    }

    /// Piecewise tensor-product cubic Lagrange interpolation. Exact for
    /// polynomials of degree three per axis; returns stored samples at nodes.
    fn interpolate(&self, x: &Point) -> f64 {
        let mut base = [0usize; 3];
        let mut weights = [[0.0; 4]; 3];
        let mut at_node = true;
        let mut node = [0usize; 3];
        for a in 0..self.n {
            let t = x[a] / self.h - self.lower[a] as f64;
            let rounded = t.round();
            if (t - rounded).abs() < NODE_SNAP && rounded >= 0.0 && rounded < self.shape[a] as f64 {
                node[a] = rounded as usize;
            } else {
                at_node = false;
            }
            let b = (t.floor() as i64).clamp(1, self.shape[a] as i64 - 3) as usize;
            base[a] = b - 1;
            weights[a] = lagrange_weights(t - b as f64);
        }
        if at_node {
            return self.values[self.flat(&node[..self.n])];
        }
        let mut sum = 0.0;
        match self.n {
            2 => {
                for i in 0..4 {
                    for j in 0..4 {
                        let v = self.values[self.flat(&[base[0] + i, base[1] + j])];
                        sum += weights[0][i] * weights[1][j] * v;
                    }
                }
            }
            _ => {
                for i in 0..4 {
                    for j in 0..4 {
                        for k in 0..4 {
                            let v = self.values[self.flat(&[base[0] + i, base[1] + j, base[2] + k])];
                            sum += weights[0][i] * weights[1][j] * weights[2][k] * v;
                        }
                    }
                }
            }
        }
        sum
    }

    fn shifted(&self, x: &Point, axis: usize, steps: f64) -> Point {
        let mut y = *x;
        y[axis] += steps * self.h;
        y
    }

    /// How many whole grid steps fit between `x` and the box boundary along `axis`.
    fn room(&self, x: &Point, axis: usize) -> f64 {
        let (lo, hi) = self.box_bounds(axis);
        ((x[axis] - lo).min(hi - x[axis]) / self.h + NODE_SNAP).floor()
    }

    fn second_derivative(&self, x: &Point, axis: usize) -> f64 {
        let f = |s: f64| self.interpolate(&self.shifted(x, axis, s));
        let h2 = self.h * self.h;
        if self.room(x, axis) >= 2.0 {
            (-f(2.0) + 16.0 * f(1.0) - 30.0 * f(0.0) + 16.0 * f(-1.0) - f(-2.0)) / (12.0 * h2)
        } else {
            let (lo, _) = self.box_bounds(axis);
            let s = if x[axis] - lo < self.h { 1.0 } else { -1.0 };
            (f(0.0) - 2.0 * f(s) + f(2.0 * s)) / h2
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        let shape: Vec<String> = self.shape.iter().map(|s| s.to_string()).collect();
        writeln!(w, "{},{:.16e},{}", self.n, self.h, shape.join("x"))?;
        let mut idx = vec![0usize; self.n];
        for v in &self.values {
            for a in 0..self.n {
                write!(w, "{},", self.lower[a] + idx[a] as i64)?;
            }
            writeln!(w, "{v:.16e}")?;
            increment(&mut idx, &self.shape);
        }
        w.flush()?;
        Ok(())
    }
}

fn increment(idx: &mut [usize], shape: &[usize]) {
    for a in (0..idx.len()).rev() {
        idx[a] += 1;
        if idx[a] < shape[a] {
            return;
        }
        idx[a] = 0;
    }
}

impl Field for GridField {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Point) -> f64 {
        self.interpolate(x)
    }

    /// Fourth-order central differences with step `h`, dropping to second
    /// order within two nodes of the box boundary.
    fn grad(&self, x: &Point) -> Point {
        let mut g = [0.0; 3];
        for (a, ga) in g.iter_mut().enumerate().take(self.n) {
            let f = |s: f64| self.interpolate(&self.shifted(x, a, s));
            let room = self.room(x, a);
            *ga = if room >= 2.0 {
                (f(-2.0) - 8.0 * f(-1.0) + 8.0 * f(1.0) - f(2.0)) / (12.0 * self.h)
            } else if room >= 1.0 {
                (f(1.0) - f(-1.0)) / (2.0 * self.h)
            } else {
                let (lo, _) = self.box_bounds(a);
                let s = if x[a] - lo < self.h { 1.0 } else { -1.0 };
                s * (-3.0 * f(0.0) + 4.0 * f(s) - f(2.0 * s)) / (2.0 * self.h)
            };
        }
        g
    }

    /// Only `j <= 1`; the Laplacian comes from fourth-order differences.
    fn laplacian_power(&self, x: &Point, j: usize) -> Option<f64> {
        match j {
            0 => Some(self.interpolate(x)),
            1 => Some(-(0..self.n).map(|a| self.second_derivative(x, a)).sum::<f64>()),
            _ => None,
        }
    }

    fn provenance(&self) -> Provenance {
        Provenance::Grid
    }

    fn contains_ball(&self, center: &Point, r: f64) -> bool {
        (0..self.n).all(|a| {
            let (lo, hi) = self.box_bounds(a);
            center[a] - r >= lo && center[a] + r <= hi
        }) && self.inside(center)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedGrid {
        line,
        reason: reason.into(),
    }
}

/// Reads a grid file; `spacing` and `dimension` must agree with its header.
pub fn import_grid_field(path: &Path, spacing: f64, dimension: usize) -> Result<GridField> {
    if !(spacing > 0.0) {
        return Err(Error::param("spacing", format!("must be positive, got {spacing}")));
    }
    check_dimension(dimension)?;
    if !path.exists() {
        return Err(Error::GridNotFound(path.to_path_buf()));
    }
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));

    let (mut lineno, mut header) = match lines.next() {
        Some((i, l)) => (i, l?),
        None => return Err(malformed(1, "empty file")),
    };
    if header.trim() == "n,h,shape" {
        match lines.next() {
            Some((i, l)) => {
                lineno = i;
                header = l?;
            }
            None => return Err(malformed(lineno, "missing header values")),
        }
    }
    let parts: Vec<&str> = header.trim().split(',').collect();
    if parts.len() != 3 {
        return Err(malformed(lineno, "header must be `n,h,shape`"));
    }
    let n: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| malformed(lineno, "dimension is not an integer"))?;
    let h: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| malformed(lineno, "spacing is not a number"))?;
    let shape: Vec<usize> = parts[2]
        .trim()
        .split('x')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| malformed(lineno, "shape must look like 41x41"))?;
    if n != dimension || shape.len() != n {
        return Err(malformed(
            lineno,
            format!("header declares n={n} with {} extents, expected n={dimension}", shape.len()),
        ));
    }
    if (h - spacing).abs() > 1e-12 * spacing {
        return Err(Error::NonUniformGrid(format!(
            "header spacing {h} differs from requested {spacing}"
        )));
    }

    let total: usize = shape.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut lower: Vec<i64> = Vec::new();
    let mut expected = vec![0usize; n];
    for (i, line) in lines {
        let line = line?;
        let cols: Vec<&str> = line.trim().split(',').collect();
        if cols.len() != n + 1 {
            return Err(malformed(i, format!("expected {} columns, found {}", n + 1, cols.len())));
        }
        let idx: Vec<i64> = cols[..n]
            .iter()
            .map(|s| s.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| malformed(i, "node index is not an integer"))?;
        let value: f64 = cols[n]
            .trim()
            .parse()
            .map_err(|_| malformed(i, "sample is not a number"))?;
        if !value.is_finite() {
            return Err(Error::NonFiniteSample { line: i });
        }
        if values.len() >= total {
            return Err(malformed(i, format!("more than {total} node rows")));
        }
        if lower.is_empty() {
            lower = idx.clone();
        }
        let want: Vec<i64> = (0..n).map(|a| lower[a] + expected[a] as i64).collect();
        if idx != want {
            return Err(Error::NonUniformGrid(format!(
                "line {i}: node {idx:?} where {want:?} was expected in row-major order"
            )));
        }
        values.push(value);
        increment(&mut expected, &shape);
    }
    if values.len() != total {
        return Err(malformed(
            lineno,
            format!("shape needs {total} node rows, found {}", values.len()),
        ));
    }
    let label = format!("grid[{}]", path.display());
    Ok(GridField::new(n, h, lower, shape, values)?.with_label(label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_harmonic_polynomial, Constant};
    use std::sync::Arc;

    struct Quadratic;

    impl Field for Quadratic {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, x: &Point) -> f64 {
            x[0] * x[0]
        }
        fn grad(&self, x: &Point) -> Point {
            [2.0 * x[0], 0.0, 0.0]
        }
        fn laplacian_power(&self, _x: &Point, _j: usize) -> Option<f64> {
            None
        }
        fn provenance(&self) -> Provenance {
            Provenance::Analytic
        }
        fn contains_ball(&self, _c: &Point, _r: f64) -> bool {
            true
        }
        fn label(&self) -> String {
            "x1^2".into()
        }
    }

    fn roundtrip(field: &dyn Field, h: f64, extent: f64) -> GridField {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        GridField::from_field(field, h, extent).unwrap().write_csv(&path).unwrap();
        import_grid_field(&path, h, field.dim()).unwrap()
    }

    #[test]
    fn linear_field_reproduced() {
        let u = make_harmonic_polynomial(1, 2).unwrap();
        let g = roundtrip(&u, 0.1, 1.0);
        assert!((g.eval(&[0.05, 0.05, 0.0]) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn constant_gradient_is_zero() {
        let g = roundtrip(&Constant::new(2, 1.0), 0.1, 1.0);
        assert_eq!(g.grad(&[0.2, -0.3, 0.0]), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn quadratic_exact() {
        let g = roundtrip(&Quadratic, 0.01, 0.5);
        assert!((g.eval(&[0.25, 0.0, 0.0]) - 0.0625).abs() < 1e-10);
        assert!((g.eval(&[0.2537, -0.0113, 0.0]) - 0.2537f64.powi(2)).abs() < 1e-10);
    }

    #[test]
    fn nodes_are_bit_equal() {
        let u = make_harmonic_polynomial(3, 2).unwrap();
        let g = GridField::from_field(&u, 0.1, 1.0).unwrap();
        for i in 0..g.values().len() {
            let x = g.node(i);
            assert_eq!(g.eval(&x).to_bits(), g.values()[i].to_bits());
        }
    }

    #[test]
    fn three_dimensional_grid() {
        let u = make_harmonic_polynomial(2, 3).unwrap();
        let g = roundtrip(&u, 0.1, 0.5);
        let x = [0.13, -0.07, 0.21];
        // x1² − x2² is quadratic, so the interpolant is exact.
        assert!((g.eval(&x) - u.eval(&x)).abs() < 1e-12);
        let gr = g.grad(&x);
        assert!((gr[0] - 0.26).abs() < 1e-10 && (gr[1] - 0.14).abs() < 1e-10);
        assert!(g.laplacian_power(&x, 1).unwrap().abs() < 1e-9);
    }

    #[test]
    fn ball_coverage() {
        let g = GridField::from_field(&Constant::new(2, 1.0), 0.1, 1.0).unwrap();
        assert!(g.contains_ball(&[0.0; 3], 0.9));
        assert!(!g.contains_ball(&[0.5, 0.0, 0.0], 0.9));
    }

    #[test]
    fn import_errors() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.csv");
        assert!(matches!(import_grid_field(&missing, 0.1, 2), Err(Error::GridNotFound(_))));

        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "2,0.1\n").unwrap();
        assert!(matches!(import_grid_field(&bad, 0.1, 2), Err(Error::MalformedGrid { .. })));

        let nan = dir.path().join("nan.csv");
        let mut text = String::from("n,h,shape\n2,0.1,4x4\n");
        for i in 0..4 {
            for j in 0..4 {
                let v = if i == 2 && j == 1 { "NaN".to_string() } else { "1.0".to_string() };
                text.push_str(&format!("{i},{j},{v}\n"));
            }
        }
        std::fs::write(&nan, &text).unwrap();
        assert!(matches!(import_grid_field(&nan, 0.1, 2), Err(Error::NonFiniteSample { line: 12 })));

        let gap = dir.path().join("gap.csv");
        let text = text.replace("2,1,NaN", "2,2,1.0");
        std::fs::write(&gap, &text).unwrap();
        assert!(matches!(import_grid_field(&gap, 0.1, 2), Err(Error::NonUniformGrid(_))));

        let ok = dir.path().join("ok.csv");
        std::fs::write(&ok, text.replace("2,2,1.0\n2,2,1.0", "2,1,1.0\n2,2,1.0")).unwrap();
        assert!(import_grid_field(&ok, 0.1, 2).is_ok());
        assert!(import_grid_field(&ok, 0.2, 2).is_err());
        assert!(import_grid_field(&ok, 0.1, 3).is_err());
    }

    #[test]
    fn grid_laplacian_of_bessel_mode() {
        let (u, _) = crate::field::make_bessel_mode(0, 4.0).unwrap();
        let u: Arc<dyn Field> = Arc::new(u);
        let g = GridField::from_field(u.as_ref(), 0.01, 1.0).unwrap();
        let x = [0.2, 0.1, 0.0];
        let lap = g.laplacian_power(&x, 1).unwrap();
        assert!((lap - 4.0 * u.eval(&x)).abs() < 1e-6);
    }
}
