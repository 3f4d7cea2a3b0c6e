//! The weighted frequency function `N(r) = I(r)/H(r)` for solutions of
//! `Δu = Vu`, its derivative identity and the monotonicity lemma.
//!
//! With `w = r² - |x-c|²`:
//!
//! * `H(r) = ∫ u² w^α`
//! * `I(r) = 2(α+1) ∫ ((x-c)·∇u) u w^α` (definition form)
//! * `I(r) = ∫ |∇u|² w^{α+1} + ∫ V u² w^{α+1}` (after integrating by parts)
//! * `H'(r) = ((2α+n)/r) H(r) + I(r)/((α+1) r)`
//!
//! The same kernel serves the polyharmonic stacks of [`crate::polysystem`];
//! a Schrödinger solution is the one-component stack with `V̄ = -V`.

mod fd;

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{dot, ensure_ball, sub, Field, Point, PotentialSpec};
use crate::quad::{check_increasing, halton_ball, BallQuadrature, QuadOrders};

pub use fd::{central_derivative, first_derivative_weights};

/// Default relative guard below which `N` is not reported.
pub const DEFAULT_GUARD: f64 = 1e-14;
/// Largest radius step for which the derivative identity is checked.
pub const DEFAULT_MAX_STEP: f64 = 1e-3;
/// Pass threshold of the derivative identity residual.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;
/// Fixed part of the monotonicity tolerance.
pub const MONOTONICITY_TOLERANCE: f64 = 1e-6;
const PDE_SAMPLES: usize = 1000;

/// Quadrature sums over one ball.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BallSums {
    pub big_h: f64,
    pub i_def: f64,
    pub i_parts: f64,
}

/// One pass over the rule computing `H`, both forms of `I` for the stack
/// `components` closed by `-Δu_m = V̄ u_1`.
pub(crate) fn ball_sums(
    components: &[&dyn Field],
    closure: &PotentialSpec,
    rule: &BallQuadrature,
    center: &Point,
    r: f64,
) -> BallSums {
    let m = components.len();
    let mut vals = vec![0.0; m];
    let mut grads = vec![[0.0; 3]; m];
    let (mut big_h, mut def, mut parts) = (0.0, 0.0, 0.0);
    rule.for_each_node(center, r, |x, w, wfac| {
        let d = sub(x, center);
        for i in 0..m {
            vals[i] = components[i].eval(x);
            grads[i] = components[i].grad(x);
        }
        let mut s = 0.0;
        for i in 0..m {
            big_h += w * vals[i] * vals[i];
            def += w * dot(&d, &grads[i]) * vals[i];
            s += dot(&grads[i], &grads[i]);
            if i + 1 < m {
                s -= vals[i + 1] * vals[i];
            }
        }
        s -= closure.eval(x) * vals[m - 1] * vals[0];
        parts += w * wfac * s;
    });
    BallSums {
        big_h,
        i_def: 2.0 * (rule.alpha() + 1.0) * def,
        i_parts: parts,
    }
}

/// Unweighted masses `∫_{B_r} u_i²` per component.
pub(crate) fn component_masses(
    components: &[&dyn Field],
    rule0: &BallQuadrature,
    center: &Point,
    r: f64,
) -> Vec<f64> {
    let mut out = vec![0.0; components.len()];
    rule0.for_each_node(center, r, |x, w, _| {
        for (acc, u) in out.iter_mut().zip(components) {
            let v = u.eval(x);
            *acc += w * v * v;
        }
    });
    out
}

fn rule(n: usize, alpha: f64) -> Result<BallQuadrature> {
    BallQuadrature::new(n, alpha, QuadOrders::default())
}

/// `H(r) = ∫_{B_r(c)} u² (r² - |x-c|²)^α dx`.
pub fn compute_h(u: &dyn Field, center: &Point, r: f64, alpha: f64) -> Result<f64> {
    compute_h_with(u, center, r, &rule(u.dim(), alpha)?)
}

pub fn compute_h_with(u: &dyn Field, center: &Point, r: f64, rule: &BallQuadrature) -> Result<f64> {
    ensure_ball(u, center, r)?;
    Ok(rule.integrate(|x| u.eval(x).powi(2), center, r))
}

/// `2(α+1) ∫ ((x-c)·∇u) u w^α`.
pub fn compute_i_definition(u: &dyn Field, center: &Point, r: f64, alpha: f64) -> Result<f64> {
    ensure_ball(u, center, r)?;
    let rule = rule(u.dim(), alpha)?;
    let s = rule.integrate(|x| dot(&sub(x, center), &u.grad(x)) * u.eval(x), center, r);
    Ok(2.0 * (alpha + 1.0) * s)
}

/// `∫ |∇u|² w^{α+1} + ∫ V u² w^{α+1}`; refuses fields whose PDE residual
/// on the ball exceeds `tolerance`.
pub fn compute_i_parts(
    u: &dyn Field,
    v: &PotentialSpec,
    center: &Point,
    r: f64,
    alpha: f64,
    tolerance: f64,
) -> Result<f64> {
    ensure_ball(u, center, r)?;
    let residual = pde_residual(u, v, center, r)?;
    if residual > tolerance {
        return Err(Error::PdeResidual { residual, tolerance });
    }
    let rule = rule(u.dim(), alpha)?;
    let closure = v.negated();
    Ok(ball_sums(&[u], &closure, &rule, center, r).i_parts)
}

/// `max |Δu - Vu| / max(|Vu|, 1)` over a Halton sample of `B_r(c)`.
pub fn pde_residual(u: &dyn Field, v: &PotentialSpec, center: &Point, r: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in halton_ball(u.dim(), center, r, PDE_SAMPLES, 0) {
        let minus_lap = u.laplacian_power(&x, 1).ok_or_else(|| Error::MissingLaplacianPower {
            field: u.label(),
            order: 1,
        })?;
        let vu = v.eval(&x) * u.eval(&x);
        worst = worst.max((-minus_lap - vu).abs() / vu.abs().max(1.0));
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct ProfileSettings {
    pub orders: QuadOrders,
    /// `N` is reported only where the volume-normalised mass
    /// `H(r)/r^{n+2α}` is at least `guard` times its maximum over the grid.
    pub guard: f64,
    /// Re-run at doubled resolution and keep the difference in `N`.
    pub error_estimate: bool,
    /// Largest admissible PDE (or closure) residual.
    pub pde_tolerance: f64,
    /// Half-width of the central-difference stencil for `dH/dr`.
    pub fd_half_width: usize,
}

impl Default for ProfileSettings {
    fn default() -> Self {
        ProfileSettings {
            orders: QuadOrders::default(),
            guard: DEFAULT_GUARD,
            error_estimate: false,
            pde_tolerance: 1e-8,
            fd_half_width: 4,
        }
    }
}

/// `H`, `I`, `N`, `h` and derivative diagnostics on a radius grid.
#[derive(Debug, Clone)]
pub struct FrequencyProfile {
    pub n: usize,
    pub alpha: f64,
    pub center: Point,
    pub radii: Vec<f64>,
    pub big_h: Vec<f64>,
    pub i_def: Vec<f64>,
    pub i_parts: Vec<f64>,
    /// `I_def / H` where the guard passes.
    pub freq: Vec<Option<f64>>,
    /// Unweighted mass `h(r) = Σ_i ∫_{B_r} u_i²`.
    pub h: Vec<f64>,
    /// Per-component unweighted masses, `h_components[i][k]` at `radii[k]`.
    pub h_components: Vec<Vec<f64>>,
    pub dh_dr: Vec<Option<f64>>,
    pub identity_residual: Vec<Option<f64>>,
    /// Radii where the guard failed.
    pub dropped: Vec<f64>,
    /// `|N - N_doubled|` per radius, when requested.
    pub quad_error: Option<Vec<f64>>,
    /// Sampled PDE or closure residual behind `I_parts`.
    pub pde_residual: f64,
}

impl FrequencyProfile {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// `(r, N)` for the radii that pass the guard.
    pub fn guarded(&self) -> Vec<(f64, f64)> {
        self.radii
            .iter()
            .zip(&self.freq)
            .filter_map(|(&r, f)| f.map(|v| (r, v)))
            .collect()
    }

    pub fn max_quad_error(&self) -> f64 {
        self.quad_error
            .as_ref()
            .map(|e| e.iter().copied().fold(0.0, f64::max))
            .unwrap_or(0.0)
    }

    /// Columns `r,H,I_def,I_parts,N,h,dHdr,identity_residual`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,H,I_def,I_parts,N,h,dHdr,identity_residual\n");
        for k in 0..self.len() {
            let _ = writeln!(
                s,
                "{:e},{:e},{:e},{:e},{},{:e},{},{}",
                self.radii[k],
                self.big_h[k],
                self.i_def[k],
                self.i_parts[k],
                opt(self.freq[k]),
                self.h[k],
                opt(self.dh_dr[k]),
                opt(self.identity_residual[k]),
            );
        }
        s
    }

    /// Columns `r,H,I_def,I_parts,N,h,h_1,...,h_m`.
    pub fn to_stacked_csv(&self) -> String {
        let mut s = String::from("r,H,I_def,I_parts,N,h");
        for i in 0..self.h_components.len() {
            let _ = write!(s, ",h_{}", i + 1);
        }
        s.push('\n');
        for k in 0..self.len() {
            let _ = write!(
                s,
                "{:e},{:e},{:e},{:e},{},{:e}",
                self.radii[k],
                self.big_h[k],
                self.i_def[k],
                self.i_parts[k],
                opt(self.freq[k]),
                self.h[k]
            );
            for c in &self.h_components {
                let _ = write!(s, ",{:e}", c[k]);
            }
            s.push('\n');
        }
        s
    }
}

pub(crate) fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Profile for a stack `components` closed by `V̄`; no residual checks.
pub(crate) fn build_profile(
    components: &[&dyn Field],
    closure: &PotentialSpec,
    center: &Point,
    radii: &[f64],
    alpha: f64,
    settings: &ProfileSettings,
    pde_residual: f64,
) -> Result<FrequencyProfile> {
    check_increasing(radii)?;
    let n = components[0].dim();
    for u in components {
        ensure_ball(*u, center, *radii.last().expect("nonempty radii"))?;
    }
    let rule_a = BallQuadrature::new(n, alpha, settings.orders)?;
    let rule_0 = BallQuadrature::new(n, 0.0, settings.orders)?;
    let fine = if settings.error_estimate {
        Some(rule_a.doubled()?)
    } else {
        None
    };

    let rows: Vec<(BallSums, Vec<f64>, Option<BallSums>)> = radii
        .par_iter()
        .map(|&r| {
            let sums = ball_sums(components, closure, &rule_a, center, r);
            let masses = component_masses(components, &rule_0, center, r);
            let fine = fine.as_ref().map(|q| ball_sums(components, closure, q, center, r));
            (sums, masses, fine)
        })
        .collect();

    let big_h: Vec<f64> = rows.iter().map(|r| r.0.big_h).collect();
    let i_def: Vec<f64> = rows.iter().map(|r| r.0.i_def).collect();
    let i_parts: Vec<f64> = rows.iter().map(|r| r.0.i_parts).collect();
    let m = components.len();
    let h_components: Vec<Vec<f64>> = (0..m).map(|i| rows.iter().map(|r| r.1[i]).collect()).collect();
    let h: Vec<f64> = rows.iter().map(|r| r.1.iter().sum()).collect();

    // Normalising by the weight volume keeps homogeneous fields of moderate
    // degree above the guard on wide grids; H itself has no cancellation.
    let vol = |r: f64| r.powf(n as f64 + 2.0 * alpha);
    let mean: Vec<f64> = big_h.iter().zip(radii).map(|(h, &r)| h / vol(r)).collect();
    let mmax = mean.iter().copied().fold(0.0, f64::max);
    let keep: Vec<bool> = mean.iter().map(|&v| v > 0.0 && v >= settings.guard * mmax).collect();
    let freq: Vec<Option<f64>> = (0..radii.len())
        .map(|k| keep[k].then(|| i_def[k] / big_h[k]))
        .collect();
    let dropped: Vec<f64> = radii.iter().zip(&keep).filter(|(_, k)| !**k).map(|(r, _)| *r).collect();
    if dropped.len() == radii.len() {
        return Err(Error::VanishingMass { dropped });
    }

    let dh_dr = central_derivative(radii, &big_h, settings.fd_half_width);
    let nf = n as f64;
    let identity_residual = (0..radii.len())
        .map(|k| {
            let d = dh_dr[k]?;
            if !keep[k] {
                return None;
            }
            let r = radii[k];
            let rhs = (2.0 * alpha + nf) / r * big_h[k] + i_def[k] / ((alpha + 1.0) * r);
            Some((d - rhs).abs() / d.abs().max(f64::MIN_POSITIVE))
        })
        .collect();

    let quad_error = settings.error_estimate.then(|| {
        rows.iter()
            .zip(&freq)
            .map(|((_, _, fine), f)| match (f, fine) {
                (Some(v), Some(q)) if q.big_h > 0.0 => (v - q.i_def / q.big_h).abs(),
                _ => 0.0,
            })
            .collect()
    });

    Ok(FrequencyProfile {
        n,
        alpha,
        center: *center,
        radii: radii.to_vec(),
        big_h,
        i_def,
        i_parts,
        freq,
        h,
        h_components,
        dh_dr,
        identity_residual,
        dropped,
        quad_error,
        pde_residual,
    })
}

/// Profile of a solution of `Δu = Vu` with default settings.
pub fn frequency_profile(
    u: &dyn Field,
    v: &PotentialSpec,
    center: &Point,
    radii: &[f64],
    alpha: f64,
) -> Result<FrequencyProfile> {
    frequency_profile_with(u, v, center, radii, alpha, &ProfileSettings::default())
}

pub fn frequency_profile_with(
    u: &dyn Field,
    v: &PotentialSpec,
    center: &Point,
    radii: &[f64],
    alpha: f64,
    settings: &ProfileSettings,
) -> Result<FrequencyProfile> {
    check_increasing(radii)?;
    if radii.is_empty() {
        return Err(Error::param("radii", "empty radius grid"));
    }
    let rmax = *radii.last().expect("nonempty");
    ensure_ball(u, center, rmax)?;
    let residual = pde_residual(u, v, center, rmax)?;
    if residual > settings.pde_tolerance {
        return Err(Error::PdeResidual {
            residual,
            tolerance: settings.pde_tolerance,
        });
    }
    build_profile(&[u], &v.negated(), center, radii, alpha, settings, residual)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub max_residual: f64,
    /// Radius where the maximum occurs; `None` when no radius was checked.
    pub at_radius: Option<f64>,
    pub checked: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Largest relative residual of `H' = ((2α+n)/r)H + I/((α+1)r)` over the
/// radii that pass the guard.
pub fn check_derivative_identity(profile: &FrequencyProfile, max_step: f64) -> Result<IdentityReport> {
    let step = profile
        .radii
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    if step > max_step * (1.0 + 1e-9) {
        return Err(Error::GridTooCoarse { step, max_step });
    }
    let mut report = IdentityReport {
        max_residual: 0.0,
        at_radius: None,
        checked: 0,
        tolerance: IDENTITY_TOLERANCE,
        passed: true,
    };
    for (r, res) in profile.radii.iter().zip(&profile.identity_residual) {
        if let Some(res) = res {
            report.checked += 1;
            if *res > report.max_residual || report.at_radius.is_none() {
                report.max_residual = report.max_residual.max(*res);
                report.at_radius = Some(*r);
            }
        }
    }
    report.passed = report.max_residual <= report.tolerance;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub constant: f64,
    /// Smallest increment of the monitored quantity between consecutive radii.
    pub min_increment: f64,
    /// Left end of the worst pair.
    pub at_radius: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Smallest constant making the sequence nondecreasing (within tolerance).
    pub empirical_min_constant: Option<f64>,
    /// No constant in the searched range works.
    pub unsatisfiable: bool,
    pub pairs: usize,
}

/// Increments of `N(r) + C W r²` on a sampled sequence.
pub fn check_schrodinger_sequence(
    radii: &[f64],
    freq: &[f64],
    w1inf: f64,
    constant: f64,
    tolerance: f64,
) -> MonotonicityReport {
    let g = |k: usize| freq[k] + constant * w1inf * radii[k] * radii[k];
    let mut min_increment = f64::INFINITY;
    let mut at_radius = f64::NAN;
    let mut needed: f64 = 0.0;
    let mut unsatisfiable = false;
    for k in 0..radii.len().saturating_sub(1) {
        let inc = g(k + 1) - g(k);
        if inc < min_increment {
            min_increment = inc;
            at_radius = radii[k];
        }
        let dn = freq[k + 1] - freq[k];
        if dn < -tolerance {
            let dr2 = radii[k + 1].powi(2) - radii[k].powi(2);
            if w1inf > 0.0 {
                needed = needed.max((-dn - tolerance) / (w1inf * dr2));
            } else {
                unsatisfiable = true;
            }
        }
    }
    if !min_increment.is_finite() {
        min_increment = 0.0;
    }
    MonotonicityReport {
        constant,
        min_increment,
        at_radius,
        tolerance,
        passed: min_increment >= -tolerance,
        empirical_min_constant: (!unsatisfiable).then_some(needed),
        unsatisfiable,
        pairs: radii.len().saturating_sub(1),
    }
}

/// Lemma-style check that `N(r) + C‖V‖_{W^{1,∞}} r²` is nondecreasing;
/// `C` defaults to `3n + 5`.
pub fn check_monotonicity_schrodinger(
    profile: &FrequencyProfile,
    v: &PotentialSpec,
    constant: Option<f64>,
) -> Result<MonotonicityReport> {
    let pts = profile.guarded();
    if pts.len() < 2 {
        return Err(Error::VanishingMass {
            dropped: profile.dropped.clone(),
        });
    }
    let c = constant.unwrap_or(3.0 * profile.n as f64 + 5.0);
    let tol = MONOTONICITY_TOLERANCE + profile.max_quad_error();
    let radii: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let freq: Vec<f64> = pts.iter().map(|p| p.1).collect();
    Ok(check_schrodinger_sequence(&radii, &freq, v.w1inf_norm(), c, tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BridgeReport {
    /// `max (H(r) - r^{2α} h(r)) / H(r)`.
    pub upper: f64,
    /// `max (h(r) (ρ² - r²)^α - H(ρ)) / H(ρ)` over pairs `r < ρ`.
    pub lower: f64,
    pub pairs: usize,
    pub passed: bool,
}

/// `H(r) ≤ r^{2α} h(r)` and `h(r) ≤ H(ρ)/(ρ² - r²)^α` on the grid.
pub fn check_bridges(profile: &FrequencyProfile) -> BridgeReport {
    let a = profile.alpha;
    let r = &profile.radii;
    let mut upper = f64::NEG_INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut pairs = 0;
    for k in 0..r.len() {
        let hk = profile.big_h[k];
        if hk > 0.0 {
            upper = upper.max((hk - r[k].powf(2.0 * a) * profile.h[k]) / hk);
        }
        for j in k + 1..r.len() {
            let hj = profile.big_h[j];
            if hj > 0.0 {
                pairs += 1;
                let lhs = profile.h[k] * (r[j] * r[j] - r[k] * r[k]).powf(a);
                lower = lower.max((lhs - hj) / hj);
            }
        }
    }
    const SLACK: f64 = 1e-12;
    BridgeReport {
        upper,
        lower,
        pairs,
        passed: upper <= SLACK && lower <= SLACK,
    }
}

/// `count` equally spaced radii from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    (0..count)
        .map(|i| {
            if i + 1 == count {
                max
            } else {
                min + (max - min) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}

/// Radii from `min` to `max` with step at most `step`.
pub fn stepped(min: f64, max: f64, step: f64) -> Vec<f64> {
    let count = ((max - min) / step - 1e-9).ceil() as usize + 1;
    linspace(min, max, count.max(2))
}

/// `count` geometrically spaced radii from `min` to `max`.
pub fn geomspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    let (a, b) = (min.ln(), max.ln());
    linspace(a, b, count).into_iter().map(f64::exp).collect()
}
