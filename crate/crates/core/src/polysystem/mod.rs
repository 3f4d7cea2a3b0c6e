//! Polyharmonic equations `(-Δ)^m u = V̄ u` as the system
//! `-Δu_i = u_{i+1}` (`i < m`), `-Δu_m = V̄ u_1`, with the stacked
//! frequency objects built from all components.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{ensure_ball, Field, LaplacianPower, Point, PotentialSpec, SharedField, ORIGIN};
use crate::frequency::{
    ball_sums, build_profile, FrequencyProfile, MonotonicityReport, ProfileSettings,
    MONOTONICITY_TOLERANCE,
};
use crate::quad::{halton_ball, sup_norm_on_ball, BallQuadrature, QuadOrders};

/// Default closure tolerance of [`decompose`].
pub const CLOSURE_TOLERANCE: f64 = 1e-9;
/// Upper end of the constant search in the monotonicity calibrations.
pub const MAX_CALIBRATED_CONSTANT: f64 = 64.0;
const CLOSURE_SAMPLES: usize = 1000;

/// Components `u_1 = u, u_{i+1} = -Δu_i` of a polyharmonic solution.
#[derive(Clone)]
pub struct SystemStack {
    n: usize,
    components: Vec<SharedField>,
    potential: PotentialSpec,
    closure_residual: f64,
}

impl std::fmt::Debug for SystemStack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SystemStack")
            .field("n", &self.n)
            .field("m", &self.components.len())
            .field("source", &self.components[0].label())
            .field("closure_residual", &self.closure_residual)
            .finish()
    }
}

impl SystemStack {
    pub fn order(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[SharedField] {
        &self.components
    }

    pub fn source(&self) -> &SharedField {
        &self.components[0]
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    /// `v = ‖V̄‖_{L∞} + 1`.
    pub fn v(&self) -> f64 {
        self.potential.v()
    }

    pub fn closure_residual(&self) -> f64 {
        self.closure_residual
    }

    /// The stacked theorems assume `n >= 4m`; computations run regardless.
    pub fn within_theorem_hypotheses(&self) -> bool {
        self.n >= 4 * self.order()
    }

    pub fn hypothesis_label(&self) -> &'static str {
        if self.within_theorem_hypotheses() {
            "n >= 4m"
        } else {
            "outside theorem hypotheses (n < 4m)"
        }
    }

    fn refs(&self) -> Vec<&dyn Field> {
        self.components.iter().map(|c| c.as_ref()).collect()
    }
}

/// `max |(-Δ)^m u - V̄u| / max(|V̄u|, 1)` over a Halton sample of `B_r(c)`.
pub fn closure_residual(u: &dyn Field, m: usize, vbar: &PotentialSpec, center: &Point, r: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in halton_ball(u.dim(), center, r, CLOSURE_SAMPLES, 0) {
        let lhs = u.laplacian_power(&x, m).ok_or_else(|| Error::MissingLaplacianPower {
            field: u.label(),
            order: m,
        })?;
        let rhs = vbar.eval(&x) * u.eval(&x);
        worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }
    Ok(worst)
}

/// Splits `u` into its system components, checking the closure on `B_1(0)`.
pub fn decompose(u: SharedField, m: usize, vbar: PotentialSpec) -> Result<SystemStack> {
    decompose_with(u, m, vbar, &ORIGIN, 1.0, CLOSURE_TOLERANCE)
}

pub fn decompose_with(
    u: SharedField,
    m: usize,
    vbar: PotentialSpec,
    center: &Point,
    sample_radius: f64,
    tolerance: f64,
) -> Result<SystemStack> {
    if m == 0 {
        return Err(Error::param("m", "order must be at least 1"));
    }
    ensure_ball(u.as_ref(), center, sample_radius)?;
    let residual = closure_residual(u.as_ref(), m, &vbar, center, sample_radius)?;
    if residual > tolerance {
        return Err(Error::ClosureResidual { residual, tolerance });
    }
    let mut components = vec![u.clone()];
    for i in 1..m {
        components.push(Arc::new(LaplacianPower::new(u.clone(), i)?) as SharedField);
    }
    Ok(SystemStack {
        n: u.dim(),
        components,
        potential: vbar,
        closure_residual: residual,
    })
}

fn default_rule(stack: &SystemStack, alpha: f64) -> Result<BallQuadrature> {
    BallQuadrature::new(stack.n, alpha, QuadOrders::default())
}

/// `Σ_i ∫_{B_r(c)} u_i² (r² - |x-c|²)^α`.
pub fn stacked_h(stack: &SystemStack, center: &Point, r: f64, alpha: f64) -> Result<f64> {
    Ok(stacked_sums(stack, center, r, alpha)?.0)
}

/// `(I_def, I_parts)` of the stack.
pub fn stacked_i(stack: &SystemStack, center: &Point, r: f64, alpha: f64) -> Result<(f64, f64)> {
    let (_, d, p) = stacked_sums(stack, center, r, alpha)?;
    Ok((d, p))
}

fn stacked_sums(stack: &SystemStack, center: &Point, r: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    ensure_ball(stack.source().as_ref(), center, r)?;
    let rule = default_rule(stack, alpha)?;
    let s = ball_sums(&stack.refs(), &stack.potential, &rule, center, r);
    Ok((s.big_h, s.i_def, s.i_parts))
}

/// The stacked analogue of [`crate::frequency::frequency_profile`]; `h` is
/// the summed unweighted mass and `h_components` its per-component parts.
pub fn stacked_profile(
    stack: &SystemStack,
    center: &Point,
    radii: &[f64],
    alpha: f64,
    settings: &ProfileSettings,
) -> Result<FrequencyProfile> {
    if radii.is_empty() {
        return Err(Error::param("radii", "empty radius grid"));
    }
    build_profile(
        &stack.refs(),
        &stack.potential,
        center,
        radii,
        alpha,
        settings,
        stack.closure_residual,
    )
}

fn normalized_increments(radii: &[f64], shifted: &[f64], c: f64) -> (f64, f64) {
    // exp(C r_{k+1}) A_{k+1} - exp(C r_k) A_k, divided by exp(C r_k).
    let mut worst = f64::INFINITY;
    let mut at = f64::NAN;
    for k in 0..radii.len().saturating_sub(1) {
        let inc = (c * (radii[k + 1] - radii[k])).exp() * shifted[k + 1] - shifted[k];
        if inc < worst {
            worst = inc;
            at = radii[k];
        }
    }
    if worst.is_finite() {
        (worst, at)
    } else {
        (0.0, f64::NAN)
    }
}

/// Checks that `exp(C r)(N(r) + shift)` is nondecreasing on a sequence and
/// calibrates the smallest `C ∈ [0, 64]` that makes it so, by bisection.
///
/// Increments are reported divided by `exp(C r_k)`, which keeps their sign
/// and makes the calibration predicate monotone in `C`.
pub fn check_exp_sequence(
    radii: &[f64],
    freq: &[f64],
    shift: f64,
    constant: f64,
    tolerance: f64,
) -> MonotonicityReport {
    let a: Vec<f64> = freq.iter().map(|f| f + shift).collect();
    let holds = |c: f64| normalized_increments(radii, &a, c).0 >= -tolerance;
    let (min_increment, at_radius) = normalized_increments(radii, &a, constant);

    let (empirical, unsatisfiable) = if holds(0.0) {
        (Some(0.0), false)
    } else if !holds(MAX_CALIBRATED_CONSTANT) {
        (None, true)
    } else {
        let (mut lo, mut hi) = (0.0, MAX_CALIBRATED_CONSTANT);
        while hi - lo > 1e-12 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if holds(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (Some(hi), false)
    };
    MonotonicityReport {
        constant,
        min_increment,
        at_radius,
        tolerance,
        passed: min_increment >= -tolerance,
        empirical_min_constant: empirical,
        unsatisfiable,
        pairs: radii.len().saturating_sub(1),
    }
}

fn guarded_sequence(profile: &FrequencyProfile) -> Result<(Vec<f64>, Vec<f64>)> {
    let pts = profile.guarded();
    if pts.len() < 2 {
        return Err(Error::VanishingMass {
            dropped: profile.dropped.clone(),
        });
    }
    Ok(pts.into_iter().unzip())
}

/// `exp(C r)(N(r) + αv + v²)` nondecreasing for the stacked frequency.
pub fn check_monotonicity_polyharmonic(
    stack: &SystemStack,
    center: &Point,
    radii: &[f64],
    alpha: f64,
    constant: f64,
    settings: &ProfileSettings,
) -> Result<MonotonicityReport> {
    let profile = stacked_profile(stack, center, radii, alpha, settings)?;
    let (r, f) = guarded_sequence(&profile)?;
    let v = stack.v();
    let tol = MONOTONICITY_TOLERANCE + profile.max_quad_error();
    Ok(check_exp_sequence(&r, &f, alpha * v + v * v, constant, tol))
}

/// The `α = 0` variant: `exp(C r)(N(r) + v²)` nondecreasing.
pub fn check_monotonicity_ucp(
    stack: &SystemStack,
    center: &Point,
    radii: &[f64],
    constant: f64,
    settings: &ProfileSettings,
) -> Result<MonotonicityReport> {
    let profile = stacked_profile(stack, center, radii, 0.0, settings)?;
    let (r, f) = guarded_sequence(&profile)?;
    let v = stack.v();
    let tol = MONOTONICITY_TOLERANCE + profile.max_quad_error();
    Ok(check_exp_sequence(&r, &f, v * v, constant, tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublingReport {
    pub radius: f64,
    pub m: usize,
    pub h_r: f64,
    pub h_2r: f64,
    /// `h(2R)/h(R)`.
    pub ratio: f64,
    /// `ratio · R^{4m}`, the constant in `h(2R) <= C R^{-4m} h(R)`.
    pub implied_constant: f64,
    /// `β` with `C R^{-4m} 2^{-nβ} = 1`, i.e. `log₂(ratio)/n`.
    pub beta: f64,
    /// Vanishing order excluded by the iteration: `(nβ - n)/2`.
    pub order_bound: f64,
}

/// `∫_{B_{2R}} u² <= C R^{-4m} ∫_{B_R} u²`: measured ratio and implied `C`.
pub fn doubling_check(u: &dyn Field, center: &Point, radius: f64, m: usize, orders: QuadOrders) -> Result<DoublingReport> {
    ensure_ball(u, center, 2.0 * radius)?;
    let rule = BallQuadrature::new(u.dim(), 0.0, orders)?;
    let mass = |r: f64| rule.integrate(|x| u.eval(x).powi(2), center, r);
    let h_r = mass(radius);
    let h_2r = mass(2.0 * radius);
    if !(h_r > 0.0) {
        return Err(Error::InnerMassGuard { value: h_r });
    }
    let ratio = h_2r / h_r;
    let n = u.dim() as f64;
    let beta = ratio.log2() / n;
    Ok(DoublingReport {
        radius,
        m,
        h_r,
        h_2r,
        ratio,
        implied_constant: ratio * radius.powi(4 * m as i32),
        beta,
        order_bound: 0.5 * (n * beta - n),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AprioriReport {
    pub sigma: f64,
    pub radius: f64,
    /// `max_i sup_{B_{σR}} |u_i|`, sampled.
    pub lhs: f64,
    /// `(R^{2m}‖V̄u‖_{L²(B_R)} + ‖u‖_{L²(B_R)}) / ((1-σ)^{2m} R^{2m})`.
    pub rhs: f64,
    /// `lhs / rhs`; no claim about the true constant.
    pub implied_constant: f64,
}

/// Measured ratio for the rescaled a-priori estimate; the Sobolev norm on
/// the left is replaced by sampled sup-norms of the stack components.
pub fn apriori_ratio(
    stack: &SystemStack,
    sigma: f64,
    radius: f64,
    sample_budget: usize,
    seed: u64,
) -> Result<AprioriReport> {
    if !(0.0 < sigma && sigma < 1.0) {
        return Err(Error::param("sigma", "must lie in (0, 1)"));
    }
    let u = stack.source().clone();
    ensure_ball(u.as_ref(), &ORIGIN, radius)?;
    let lhs = stack
        .components
        .iter()
        .map(|c| sup_norm_on_ball(|x| c.eval(x), stack.n, &ORIGIN, sigma * radius, sample_budget, seed).value)
        .fold(0.0, f64::max);
    let rule = default_rule(stack, 0.0)?;
    let g = rule
        .integrate(|x| (stack.potential.eval(x) * u.eval(x)).powi(2), &ORIGIN, radius)
        .sqrt();
    let l2 = rule.integrate(|x| u.eval(x).powi(2), &ORIGIN, radius).sqrt();
    let m2 = 2 * stack.order() as i32;
    let rhs = (radius.powi(m2) * g + l2) / ((1.0 - sigma).powi(m2) * radius.powi(m2));
    Ok(AprioriReport {
        sigma,
        radius,
        lhs,
        rhs,
        implied_constant: if rhs > 0.0 { lhs / rhs } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::field::{make_bessel_mode, make_harmonic_polynomial, make_polyharmonic_example, Constant};
    use crate::frequency::{check_derivative_identity, frequency_profile, linspace, stepped};

    fn stack(id: &str) -> SystemStack {
        let ex = make_polyharmonic_example(id, 2).unwrap();
        decompose(ex.field, ex.order, ex.potential).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let s = stack("radial_square");
        let x = [0.1, 0.2, 0.0];
        assert_eq!(s.components()[1].eval(&x), -4.0);
        assert_eq!(s.closure_residual(), 0.0);

        let h = stack("harmonic_3_m3");
        assert_eq!(h.order(), 3);
        assert_eq!(h.components()[1].eval(&x), 0.0);
        assert_eq!(h.components()[2].eval(&x), 0.0);

        let e = stack("exp_mode");
        assert!((e.components()[1].eval(&x) + 0.1f64.exp()).abs() < 1e-15);
        assert!(!e.within_theorem_hypotheses());
    }

    #[test]
    fn closure_failure_is_reported() {
        let ex = make_polyharmonic_example("exp_mode", 2).unwrap();
        let err = decompose(ex.field, 2, PotentialSpec::zero(2)).unwrap_err();
        assert!(matches!(err, Error::ClosureResidual { .. }));
    }

    #[test]
    fn stacked_mass_examples() {
        let s = stack("radial_square");
        let h = stacked_h(&s, &ORIGIN, 1.0, 0.0).unwrap();
        assert!((h - (PI / 3.0 + 16.0 * PI)).abs() < 1e-12);

        let u: SharedField = Arc::new(make_harmonic_polynomial(2, 2).unwrap());
        let hs = decompose(u.clone(), 2, PotentialSpec::zero(2)).unwrap();
        let a = stacked_h(&hs, &ORIGIN, 0.7, 0.0).unwrap();
        let b = crate::frequency::compute_h(u.as_ref(), &ORIGIN, 0.7, 0.0).unwrap();
        assert_eq!(a, b);

        let z = decompose(Arc::new(Constant::new(2, 0.0)), 2, PotentialSpec::zero(2)).unwrap();
        assert_eq!(stacked_h(&z, &ORIGIN, 0.5, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn stacked_forms_agree() {
        for id in ["radial_square", "exp_mode", "harmonic_2"] {
            let s = stack(id);
            for alpha in [0.0, 1.0, 2.5] {
                let (d, p) = stacked_i(&s, &ORIGIN, 0.8, alpha).unwrap();
                assert!((d - p).abs() <= 1e-7 * d.abs(), "{id} alpha={alpha}: {d} {p}");
            }
        }
        // x·∇u₁ = 2u₁ and x·∇u₂ = 0 give I_def = 4∫|x|⁴ = 4π/3 on B_1.
        let (d, _) = stacked_i(&stack("radial_square"), &ORIGIN, 1.0, 0.0).unwrap();
        assert!((d - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_stack_frequency() {
        let s = stack("harmonic_2");
        for alpha in [0.0, 1.0] {
            let h = stacked_h(&s, &ORIGIN, 0.6, alpha).unwrap();
            let (d, p) = stacked_i(&s, &ORIGIN, 0.6, alpha).unwrap();
            let expect = 2.0 * (alpha + 1.0) * 2.0 * h;
            assert!((d - expect).abs() < 1e-12 * expect && (p - expect).abs() < 1e-9 * expect);
        }
    }

    #[test]
    fn single_component_stack_matches_frequency_module() {
        let (u, v) = make_bessel_mode(1, 25.0).unwrap();
        let u: SharedField = Arc::new(u);
        let s = decompose(u.clone(), 1, v.negated()).unwrap();
        let radii = linspace(0.05, 0.9, 12);
        let a = frequency_profile(u.as_ref(), &v, &ORIGIN, &radii, 1.5).unwrap();
        let b = stacked_profile(&s, &ORIGIN, &radii, 1.5, &ProfileSettings::default()).unwrap();
        for k in 0..radii.len() {
            assert_eq!(a.big_h[k].to_bits(), b.big_h[k].to_bits());
            assert_eq!(a.i_def[k].to_bits(), b.i_def[k].to_bits());
            assert_eq!(a.i_parts[k].to_bits(), b.i_parts[k].to_bits());
        }
    }

    #[test]
    fn stacked_identity_and_bridges() {
        let s = stack("exp_mode");
        let radii = stepped(0.1, 0.15, 1e-3);
        let p = stacked_profile(&s, &ORIGIN, &radii, 1.0, &ProfileSettings::default()).unwrap();
        let rep = check_derivative_identity(&p, 1e-3).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(crate::frequency::check_bridges(&p).passed);
    }

    #[test]
    fn calibration_examples() {
        let radii = linspace(0.05, 0.9, 30);
        let s = stack("harmonic_2");
        let rep = check_monotonicity_polyharmonic(&s, &ORIGIN, &radii, 1.0, 1.0, &ProfileSettings::default()).unwrap();
        assert_eq!(rep.empirical_min_constant, Some(0.0));
        let rep = check_monotonicity_ucp(&s, &ORIGIN, &radii, 0.0, &ProfileSettings::default()).unwrap();
        assert_eq!(rep.empirical_min_constant, Some(0.0));

        let z = decompose(Arc::new(Constant::new(2, 0.0)), 2, PotentialSpec::zero(2)).unwrap();
        let err = check_monotonicity_ucp(&z, &ORIGIN, &radii, 0.0, &ProfileSettings::default()).unwrap_err();
        assert!(matches!(err, Error::VanishingMass { .. }));
    }

    #[test]
    fn bisection_matches_closed_form() {
        let r = linspace(0.1, 0.9, 9);
        let f: Vec<f64> = r.iter().map(|x| 2.0 - x * x).collect();
        let shift = 1.0;
        let rep = check_exp_sequence(&r, &f, shift, 0.0, 0.0);
        let a: Vec<f64> = f.iter().map(|v| v + shift).collect();
        let oracle = (0..8)
            .map(|k| (a[k] / a[k + 1]).ln() / (r[k + 1] - r[k]))
            .fold(0.0, f64::max);
        let c = rep.empirical_min_constant.unwrap();
        assert!((c - oracle).abs() < 1e-9, "{c} {oracle}");
        assert!(!rep.passed);

        // A sign change in N + shift cannot be repaired by any C.
        let f: Vec<f64> = r.iter().map(|x| -3.0 * x).collect();
        let rep = check_exp_sequence(&r, &f, 1.0, 0.0, 0.0);
        assert!(rep.unsatisfiable && rep.empirical_min_constant.is_none());
    }

    #[test]
    fn doubling_examples() {
        let x1 = make_harmonic_polynomial(1, 2).unwrap();
        let rep = doubling_check(&x1, &ORIGIN, 0.1, 2, QuadOrders::default()).unwrap();
        assert!((rep.ratio - 16.0).abs() < 1e-12);
        assert!((rep.order_bound - 1.0).abs() < 1e-12);
        let c = Constant::new(3, 2.0);
        let rep = doubling_check(&c, &ORIGIN, 0.2, 1, QuadOrders::default()).unwrap();
        assert!((rep.ratio - 8.0).abs() < 1e-12);
        let z = Constant::new(2, 0.0);
        assert!(doubling_check(&z, &ORIGIN, 0.2, 1, QuadOrders::default()).is_err());
    }

    #[test]
    fn apriori_reporter_is_finite() {
        let rep = apriori_ratio(&stack("exp_mode"), 0.5, 0.5, 1000, 0).unwrap();
        assert!(rep.implied_constant.is_finite() && rep.implied_constant > 0.0);
    }
}
