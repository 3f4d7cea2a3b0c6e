//! Three-ball inequalities evaluated on concrete solutions.
//!
//! Every inequality has the shape `A(r₂) <= K(C) · P · A(r₁)^{θ} A(r₃)^{1-θ}`
//! with `θ = α*/(α*+β*)`, a geometric prefactor `P` and a constant slot
//! `K(C)` depending on an unknown constant `C`. Reports work in logs:
//! `LHS = log A(r₂)`, `RHS0 = log P + θ log A(r₁) + (1-θ) log A(r₃)` and
//! `C_emp` is the smallest `C >= 0` with `log K(C) >= LHS - RHS0`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{ensure_ball, Field, NormKind, PotentialSpec, ORIGIN};
use crate::polysystem::SystemStack;
use crate::quad::{sup_norm_on_ball, BallQuadrature, QuadOrders};

/// Relative guard on the inner-ball quantity (volume-normalised mass, or
/// squared sup-norm).
const INNER_GUARD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[serde(rename = "L2_schrodinger")]
    L2Schrodinger,
    #[serde(rename = "Linf_schrodinger")]
    LinfSchrodinger,
    #[serde(rename = "L2_polyharmonic")]
    L2Polyharmonic,
    #[serde(rename = "Linf_polyharmonic")]
    LinfPolyharmonic,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::L2Schrodinger,
        Variant::LinfSchrodinger,
        Variant::L2Polyharmonic,
        Variant::LinfPolyharmonic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::L2Schrodinger => "L2_schrodinger",
            Variant::LinfSchrodinger => "Linf_schrodinger",
            Variant::L2Polyharmonic => "L2_polyharmonic",
            Variant::LinfPolyharmonic => "Linf_polyharmonic",
        }
    }

    pub fn is_polyharmonic(self) -> bool {
        matches!(self, Variant::L2Polyharmonic | Variant::LinfPolyharmonic)
    }

    pub fn is_sup(self) -> bool {
        matches!(self, Variant::LinfSchrodinger | Variant::LinfPolyharmonic)
    }

    fn hypothesis(self) -> &'static str {
        match self {
            Variant::LinfPolyharmonic => "0 < r1 < r2 < 4 r2 < r3 < 1",
            _ => "0 < r1 < r2 < 2 r2 < r3 < 1",
        }
    }

    fn lemma(self) -> &'static str {
        match self {
            Variant::L2Schrodinger => "L2 three-ball lemma",
            Variant::LinfSchrodinger => "L-infinity three-ball lemma",
            Variant::L2Polyharmonic => "polyharmonic L2 three-ball lemma",
            Variant::LinfPolyharmonic => "polyharmonic L-infinity three-ball lemma",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::param("variant", format!("unknown variant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeBallConfig {
    pub radii: [f64; 3],
    pub variant: Variant,
    /// The factor `C` inside `β` for the polyharmonic variants.
    pub beta_constant: f64,
}

impl ThreeBallConfig {
    pub fn new(radii: [f64; 3], variant: Variant) -> Result<Self> {
        let c = ThreeBallConfig {
            radii,
            variant,
            beta_constant: 1.0,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_beta_constant(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::param("beta_constant", "must be positive"));
        }
        self.beta_constant = c;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let [r1, r2, r3] = self.radii;
        let factor = if self.variant == Variant::LinfPolyharmonic { 4.0 } else { 2.0 };
        if 0.0 < r1 && r1 < r2 && factor * r2 < r3 && r3 < 1.0 {
            Ok(())
        } else {
            Err(Error::ThreeBallHypothesis {
                variant: self.variant.lemma(),
                hypothesis: self.variant.hypothesis(),
                radii: self.radii,
            })
        }
    }
}

/// `(α*, β*)` for the configured variant.
pub fn exponents(config: &ThreeBallConfig) -> Result<(f64, f64)> {
    config.validate()?;
    let [r1, r2, r3] = config.radii;
    let c = config.beta_constant;
    Ok(match config.variant {
        Variant::L2Schrodinger => ((r3 / (2.0 * r2)).ln(), (2.0 * r2 / r1).ln()),
        Variant::LinfSchrodinger => {
            let mid = 2.0 / 3.0 * (r2 + r3);
            ((r3 / mid).ln(), (mid / r1).ln())
        }
        Variant::L2Polyharmonic => ((r3 / (2.0 * r2)).ln(), c * (2.0 * r2 / r1).ln()),
        Variant::LinfPolyharmonic => (
            (3.0 * r3 / (2.0 * (2.0 * r2 + r3))).ln(),
            c * ((2.0 * r2 + r3) / (3.0 * r1)).ln(),
        ),
    })
}

/// What the inequality is evaluated on.
#[derive(Clone, Copy)]
pub enum Subject<'a> {
    /// A solution of `Δu = Vu`.
    Schrodinger { u: &'a dyn Field, v: &'a PotentialSpec },
    /// A polyharmonic stack; `h` sums the component masses.
    Polyharmonic(&'a SystemStack),
}

impl<'a> Subject<'a> {
    pub(crate) fn source(&self) -> &'a dyn Field {
        match self {
            Subject::Schrodinger { u, .. } => *u,
            Subject::Polyharmonic(s) => s.source().as_ref(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.source().dim()
    }

    /// Effective `M` and the weight exponent used for the bridges.
    pub(crate) fn m_and_alpha(&self) -> (f64, f64) {
        match self {
            Subject::Schrodinger { v, .. } => {
                let m = v.effective_m(NormKind::W1Inf);
                (m, m.sqrt())
            }
            Subject::Polyharmonic(s) => (s.potential().effective_m(NormKind::Sup), s.v()),
        }
    }

    pub(crate) fn components(&self) -> Vec<&'a dyn Field> {
        match self {
            Subject::Schrodinger { u, .. } => vec![*u],
            Subject::Polyharmonic(s) => s.components().iter().map(|c| c.as_ref()).collect(),
        }
    }
}

/// Options shared by the three-ball checks.
#[derive(Debug, Clone, Copy)]
pub struct ThreeBallOptions {
    pub orders: QuadOrders,
    pub sample_budget: usize,
    pub seed: u64,
}

impl Default for ThreeBallOptions {
    fn default() -> Self {
        ThreeBallOptions {
            orders: QuadOrders::default(),
            sample_budget: 4096,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub variant: Variant,
    pub radii: [f64; 3],
    pub exponents: (f64, f64),
    /// Effective `M` in the constant slot.
    pub m: f64,
    /// Weight exponent of the bridge check (`√M` or `v`).
    pub alpha: f64,
    /// The measured quantity at `r₁, r₂, r₃` (masses or sup-norms).
    pub values: [f64; 3],
    pub lhs: f64,
    pub rhs0: f64,
    /// `RHS0 - LHS`: slack of the inequality with the constant slot at 1.
    pub residual0: f64,
    /// Slack with `C = 1` in the constant slot.
    pub residual_unit: f64,
    pub c_emp: f64,
    /// `H(r) <= r^{2α}h(r)` and `h(r) <= H(ρ)/(ρ²-r²)^α` on the triple.
    pub bridges_hold: bool,
}

impl InequalityReport {
    /// `α*/(α*+β*) + β*/(α*+β*)`.
    pub fn weight_sum(&self) -> f64 {
        let (a, b) = self.exponents;
        a / (a + b) + b / (a + b)
    }
}

/// `(log P, s)` for the sup-norm variants: the constant slot is
/// `log C + C s` on top of the geometric prefactor `P`.
pub(crate) fn sup_constant_slot(variant: Variant, radii: [f64; 3], n: f64, m: f64) -> (f64, f64) {
    let [_, r2, r3] = radii;
    match variant {
        Variant::LinfPolyharmonic => {
            let a = (3.0 * r3 / (2.0 * (2.0 * r2 + r3))).ln();
            (-0.5 * n * (r3 - 4.0 * r2).ln(), m * (1.0 + a))
        }
        _ => (0.5 * n * (r3 * r3 / (r3 - 2.0 * r2)).ln(), m.sqrt()),
    }
}

/// Smallest `C > 0` with `ln C + C s >= d` (`s > 0`).
pub(crate) fn solve_log_linear(s: f64, d: f64) -> f64 {
    // f(C) = ln C + C s is increasing; bracket then bisect in log C.
    let f = |c: f64| c.ln() + c * s - d;
    let (mut lo, mut hi) = (1e-300f64, 1.0f64);
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    hi
}

fn masses(subject: &Subject, radii: &[f64; 3], alpha: f64, orders: QuadOrders) -> Result<([f64; 3], [f64; 3])> {
    let n = subject.dim();
    let comps = subject.components();
    let r0 = BallQuadrature::new(n, 0.0, orders)?;
    let ra = BallQuadrature::new(n, alpha, orders)?;
    let mass = |rule: &BallQuadrature, r: f64| {
        comps
            .iter()
            .map(|u| rule.integrate(|x| u.eval(x).powi(2), &ORIGIN, r))
            .sum::<f64>()
    };
    let h = radii.map(|r| mass(&r0, r));
    let big_h = radii.map(|r| mass(&ra, r));
    Ok((h, big_h))
}

fn bridges_hold(h: &[f64; 3], big_h: &[f64; 3], radii: &[f64; 3], alpha: f64) -> bool {
    let slack = 1e-12;
    (0..3).all(|k| big_h[k] <= radii[k].powf(2.0 * alpha) * h[k] * (1.0 + slack))
        && (0..2).all(|k| {
            (k + 1..3).all(|j| {
                h[k] * (radii[j] * radii[j] - radii[k] * radii[k]).powf(alpha) <= big_h[j] * (1.0 + slack)
            })
        })
}

fn check_subject(subject: &Subject, config: &ThreeBallConfig) -> Result<()> {
    let ok = match subject {
        Subject::Schrodinger { .. } => !config.variant.is_polyharmonic(),
        Subject::Polyharmonic(_) => config.variant.is_polyharmonic(),
    };
    if !ok {
        return Err(Error::param("variant", format!("{} does not apply to this subject", config.variant)));
    }
    ensure_ball(subject.source(), &ORIGIN, config.radii[2])
}

/// The L² three-ball inequality on masses `h(r) = Σ ∫_{B_r} u_i²`.
pub fn check_l2_three_ball(subject: Subject, config: &ThreeBallConfig, options: &ThreeBallOptions) -> Result<InequalityReport> {
    if config.variant.is_sup() {
        return Err(Error::param("variant", "use check_linf_three_ball for sup-norm variants"));
    }
    check_subject(&subject, config)?;
    let (a, b) = exponents(config)?;
    let (m, alpha) = subject.m_and_alpha();
    let radii = config.radii;
    let (h, big_h) = masses(&subject, &radii, alpha, options.orders)?;
    let n = subject.dim() as f64;
    let mean = |k: usize| h[k] / radii[k].powf(n);
    if !(h[0] > 0.0) || mean(0) < INNER_GUARD * mean(2) {
        return Err(Error::InnerMassGuard { value: h[0] });
    }
    let theta = a / (a + b);
    let lhs = h[1].ln();
    let rhs0 = theta * h[0].ln() + (1.0 - theta) * h[2].ln();
    let gap = lhs - rhs0;
    // Constant slot: exp(C√M), or (r₃/2r₂)^{CM} exp(CM).
    let slope = match config.variant {
        Variant::L2Schrodinger => m.sqrt(),
        _ => m * (1.0 + (radii[2] / (2.0 * radii[1])).ln()),
    };
    Ok(InequalityReport {
        variant: config.variant,
        radii,
        exponents: (a, b),
        m,
        alpha,
        values: h,
        lhs,
        rhs0,
        residual0: rhs0 - lhs,
        residual_unit: rhs0 + slope - lhs,
        c_emp: (gap / slope).max(0.0),
        bridges_hold: bridges_hold(&h, &big_h, &radii, alpha),
    })
}

/// The L∞ three-ball inequality on sampled sup-norms of `u`.
pub fn check_linf_three_ball(subject: Subject, config: &ThreeBallConfig, options: &ThreeBallOptions) -> Result<InequalityReport> {
    if !config.variant.is_sup() {
        return Err(Error::param("variant", "use check_l2_three_ball for mass variants"));
    }
    check_subject(&subject, config)?;
    let (a, b) = exponents(config)?;
    let (m, alpha) = subject.m_and_alpha();
    let radii = config.radii;
    let u = subject.source();
    let n = subject.dim() as f64;
    let sups = radii.map(|r| {
        sup_norm_on_ball(|x| u.eval(x), u.dim(), &ORIGIN, r, options.sample_budget, options.seed).value
    });
    if !(sups[0] > 0.0) || sups[0] * sups[0] < INNER_GUARD * sups[2] * sups[2] {
        return Err(Error::InnerMassGuard { value: sups[0] });
    }
    let (h, big_h) = masses(&subject, &radii, alpha, options.orders)?;
    let (log_prefactor, slope) = sup_constant_slot(config.variant, radii, n, m);
    let theta = a / (a + b);
    let lhs = sups[1].ln();
    let rhs0 = log_prefactor + theta * sups[0].ln() + (1.0 - theta) * sups[2].ln();
    Ok(InequalityReport {
        variant: config.variant,
        radii,
        exponents: (a, b),
        m,
        alpha,
        values: sups,
        lhs,
        rhs0,
        residual0: rhs0 - lhs,
        residual_unit: rhs0 + slope - lhs,
        c_emp: solve_log_linear(slope, lhs - rhs0),
        bridges_hold: bridges_hold(&h, &big_h, &radii, alpha),
    })
}

/// Dispatches on the variant.
pub fn check_three_ball(subject: Subject, config: &ThreeBallConfig, options: &ThreeBallOptions) -> Result<InequalityReport> {
    if config.variant.is_sup() {
        check_linf_three_ball(subject, config, options)
    } else {
        check_l2_three_ball(subject, config, options)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticReport {
    /// `(‖V‖_{L∞}+1)^{n/2} δ^{-n/2} ‖u‖_{L²(B_{2δ})}`, i.e. the bound with `C = 1`.
    pub bound: f64,
    /// Sampled `‖u‖_{L∞(B_δ)}`.
    pub measured: f64,
    /// `measured / bound` (0 when both vanish).
    pub implied_constant: f64,
}

pub fn elliptic_sup_bound(
    u: &dyn Field,
    v: &PotentialSpec,
    delta: f64,
    options: &ThreeBallOptions,
) -> Result<EllipticReport> {
    ensure_ball(u, &ORIGIN, 2.0 * delta)?;
    let n = u.dim() as f64;
    let rule = BallQuadrature::new(u.dim(), 0.0, options.orders)?;
    let l2 = rule.integrate(|x| u.eval(x).powi(2), &ORIGIN, 2.0 * delta).sqrt();
    let bound = (v.sup_norm() + 1.0).powf(0.5 * n) * delta.powf(-0.5 * n) * l2;
    let measured = sup_norm_on_ball(|x| u.eval(x), u.dim(), &ORIGIN, delta, options.sample_budget, options.seed).value;
    Ok(EllipticReport {
        bound,
        measured,
        implied_constant: if bound > 0.0 { measured / bound } else { 0.0 },
    })
}

/// One row of a family sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub id: String,
    pub parameter: f64,
    pub report: InequalityReport,
}

/// Columns `id,lambda_or_k,r1,r2,r3,variant,LHS,RHS0,residual0,C_emp`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("id,lambda_or_k,r1,r2,r3,variant,LHS,RHS0,residual0,C_emp\n");
    for row in rows {
        let r = &row.report;
        let _ = writeln!(
            s,
            "{},{:e},{:e},{:e},{:e},{},{:e},{:e},{:e},{:e}",
            row.id, row.parameter, r.radii[0], r.radii[1], r.radii[2], r.variant, r.lhs, r.rhs0, r.residual0, r.c_emp
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{LN_2, PI};
    use std::sync::Arc;

    use super::*;
    use crate::field::{make_bessel_mode, make_harmonic_polynomial, make_polyharmonic_example, Constant, Scaled, SharedField};
    use crate::polysystem::decompose;

    fn zero() -> PotentialSpec {
        PotentialSpec::zero(2)
    }

    #[test]
    fn exponent_examples() {
        let c = ThreeBallConfig::new([0.1, 0.2, 0.9], Variant::L2Schrodinger).unwrap();
        let (a, b) = exponents(&c).unwrap();
        assert!((a - 2.25f64.ln()).abs() < 1e-15 && (b - 4f64.ln()).abs() < 1e-15);
        assert!(ThreeBallConfig::new([0.3, 0.3, 0.3], Variant::L2Schrodinger).is_err());
        let c = ThreeBallConfig::new([0.05, 0.1, 0.9], Variant::LinfSchrodinger).unwrap();
        assert!((exponents(&c).unwrap().0 - 1.35f64.ln()).abs() < 1e-15);
        assert!(ThreeBallConfig::new([0.05, 0.2, 0.7], Variant::LinfPolyharmonic).is_err());
        assert!(ThreeBallConfig::new([0.05, 0.2, 0.81], Variant::LinfPolyharmonic).is_ok());
    }

    #[test]
    fn hypothesis_error_names_the_lemma() {
        let err = ThreeBallConfig::new([0.1, 0.3, 0.5], Variant::L2Schrodinger).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("L2 three-ball lemma") && msg.contains("2 r2 < r3"), "{msg}");
    }

    #[test]
    fn power_law_residual() {
        let cfg = ThreeBallConfig::new([0.1, 0.2, 0.9], Variant::L2Schrodinger).unwrap();
        let opts = ThreeBallOptions::default();
        // u = x₁: h(r) = π r⁴ / 4, so s = 4.
        let u = make_harmonic_polynomial(1, 2).unwrap();
        let rep = check_l2_three_ball(Subject::Schrodinger { u: &u, v: &zero() }, &cfg, &opts).unwrap();
        assert!((rep.residual0 - 4.0 * LN_2).abs() < 1e-12, "{}", rep.residual0);
        assert_eq!(rep.c_emp, 0.0);
        let c = Constant::new(2, 3.0);
        let rep = check_l2_three_ball(Subject::Schrodinger { u: &c, v: &zero() }, &cfg, &opts).unwrap();
        assert!((rep.residual0 - 2.0 * LN_2).abs() < 1e-12);
        assert!((rep.weight_sum() - 1.0).abs() < 1e-15);
        assert!(rep.bridges_hold);
    }

    #[test]
    fn sup_variant_examples() {
        let opts = ThreeBallOptions::default();
        let cfg = ThreeBallConfig::new([0.05, 0.1, 0.9], Variant::LinfSchrodinger).unwrap();
        let u = make_harmonic_polynomial(1, 2).unwrap();
        let rep = check_linf_three_ball(Subject::Schrodinger { u: &u, v: &zero() }, &cfg, &opts).unwrap();
        assert_eq!(rep.values, [0.05, 0.1, 0.9]);
        let (a, b) = rep.exponents;
        let t = a / (a + b);
        let rhs0 = (0.81f64 / 0.7).ln() + t * 0.05f64.ln() + (1.0 - t) * 0.9f64.ln();
        assert!((rep.residual_unit - (rhs0 + 1.0 - 0.1f64.ln())).abs() < 1e-12);

        let c = Constant::new(2, -2.0);
        let rep = check_linf_three_ball(Subject::Schrodinger { u: &c, v: &zero() }, &cfg, &opts).unwrap();
        assert!((rep.residual0 - (0.81f64 / 0.7).ln()).abs() < 1e-12);
        assert!(rep.residual_unit >= 0.0);
    }

    #[test]
    fn c_emp_solves_constant_slot() {
        let c = solve_log_linear(2.0, 5.0);
        assert!((c.ln() + 2.0 * c - 5.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_report_and_scale_invariance() {
        let cfg = ThreeBallConfig::new([0.1, 0.2, 0.9], Variant::L2Schrodinger).unwrap();
        let opts = ThreeBallOptions::default();
        let (u, v) = make_bessel_mode(2, 49.0).unwrap();
        let u: SharedField = Arc::new(u);
        let s = Scaled::new(u.clone(), 7.3);
        let a = check_l2_three_ball(Subject::Schrodinger { u: u.as_ref(), v: &v }, &cfg, &opts).unwrap();
        let b = check_l2_three_ball(Subject::Schrodinger { u: &s, v: &v }, &cfg, &opts).unwrap();
        assert!(a.c_emp <= 10.0);
        assert!((a.residual0 - b.residual0).abs() < 1e-12);
        assert!((a.c_emp - b.c_emp).abs() < 1e-12);
        assert!(a.bridges_hold);
    }

    #[test]
    fn c_emp_shrinks_as_outer_radius_grows() {
        let u = make_harmonic_polynomial(2, 2).unwrap();
        let opts = ThreeBallOptions::default();
        let mut last = f64::INFINITY;
        for r3 in [0.5, 0.7, 0.9] {
            let cfg = ThreeBallConfig::new([0.1, 0.2, r3], Variant::L2Schrodinger).unwrap();
            let rep = check_l2_three_ball(Subject::Schrodinger { u: &u, v: &zero() }, &cfg, &opts).unwrap();
            assert!(rep.c_emp <= last);
            last = rep.c_emp;
        }
    }

    #[test]
    fn polyharmonic_variants_run() {
        let ex = make_polyharmonic_example("exp_mode", 2).unwrap();
        let stack = decompose(ex.field, ex.order, ex.potential).unwrap();
        let opts = ThreeBallOptions::default();
        let cfg = ThreeBallConfig::new([0.1, 0.2, 0.9], Variant::L2Polyharmonic).unwrap();
        let rep = check_three_ball(Subject::Polyharmonic(&stack), &cfg, &opts).unwrap();
        assert!(rep.c_emp.is_finite() && rep.alpha == 2.0);
        let cfg = ThreeBallConfig::new([0.05, 0.1, 0.9], Variant::LinfPolyharmonic).unwrap();
        let rep = check_three_ball(Subject::Polyharmonic(&stack), &cfg, &opts).unwrap();
        assert!(rep.c_emp.is_finite());
        let u = Constant::new(2, 1.0);
        assert!(check_three_ball(Subject::Schrodinger { u: &u, v: &zero() }, &cfg, &opts).is_err());
    }

    #[test]
    fn elliptic_examples() {
        let opts = ThreeBallOptions::default();
        let rep = elliptic_sup_bound(&Constant::new(2, 1.0), &zero(), 0.5, &opts).unwrap();
        assert_eq!(rep.measured, 1.0);
        assert!((rep.bound - 2.0 * PI.sqrt()).abs() < 1e-12);
        assert!((rep.implied_constant - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-12);
        let rep = elliptic_sup_bound(&Constant::new(2, 0.0), &zero(), 0.5, &opts).unwrap();
        assert_eq!((rep.bound, rep.measured, rep.implied_constant), (0.0, 0.0, 0.0));
        let u = make_harmonic_polynomial(1, 2).unwrap();
        let rep = elliptic_sup_bound(&u, &zero(), 0.4, &opts).unwrap();
        assert_eq!(rep.measured, 0.4);
        let l2 = (PI * 0.8f64.powi(4) / 4.0).sqrt();
        assert!((rep.bound - l2 / 0.4).abs() < 1e-12);
    }

    #[test]
    fn inner_guard() {
        let cfg = ThreeBallConfig::new([0.1, 0.2, 0.9], Variant::L2Schrodinger).unwrap();
        let z = Constant::new(2, 0.0);
        let err = check_l2_three_ball(Subject::Schrodinger { u: &z, v: &zero() }, &cfg, &ThreeBallOptions::default());
        assert!(matches!(err, Err(Error::InnerMassGuard { .. })));
    }
}
