//! Vanishing orders, ball chains and the far-field rescaling.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{axpy, ensure_ball, norm_sq, Dilated, Field, NormKind, Point, PotentialSpec, SharedField, ORIGIN};
use crate::frequency::geomspace;
use crate::quad::{halton_ball, sup_norm_on_ball, BallQuadrature, QuadOrders};
use crate::threeball::{exponents, solve_log_linear, sup_constant_slot, Subject, ThreeBallConfig, Variant};

/// Fit residual (log units) above which a power law is not trusted.
pub const FIT_RESIDUAL_LIMIT: f64 = 0.1;

pub const MIN_FIT_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundScaling {
    /// `C √M` (second-order Schrödinger).
    Sqrt,
    /// `C M` (polyharmonic).
    Linear,
}

/// `C √M` or `C M`.
pub fn order_bound(scaling: BoundScaling, c: f64, m: f64) -> f64 {
    match scaling {
        BoundScaling::Sqrt => c * m.sqrt(),
        BoundScaling::Linear => c * m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    WithinBound,
    Exceeds,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::WithinBound => "within bound",
            Verdict::Exceeds => "exceeds",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    pub center: Point,
    pub window: [f64; 2],
    pub radii: Vec<f64>,
    pub h: Vec<f64>,
    pub slope: f64,
    pub order: f64,
    /// Max deviation of `log h` from the fitted line.
    pub fit_residual: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

/// Least-squares line through `(x, y)`: `(slope, intercept, max |residual|)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    (slope, intercept, res)
}

/// Reads the order off `h(r) ~ r^{2k+n}` over a geometric radius window.
pub fn estimate_vanishing_order(
    subject: Subject,
    center: &Point,
    window: [f64; 2],
    samples: usize,
    bound: f64,
    orders: QuadOrders,
) -> Result<OrderEstimate> {
    let [lo, hi] = window;
    if !(0.0 < lo && lo < hi) {
        return Err(Error::param("fit_window", format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if samples < MIN_FIT_SAMPLES {
        return Err(Error::param("samples", format!("need at least {MIN_FIT_SAMPLES}, got {samples}")));
    }
    ensure_ball(subject.source(), center, hi)?;
    let n = subject.dim();
    let rule = BallQuadrature::new(n, 0.0, orders)?;
    let comps = subject.components();
    let radii = geomspace(lo, hi, samples);
    let h: Vec<f64> = radii
        .par_iter()
        .map(|&r| {
            comps
                .iter()
                .map(|u| rule.integrate(|x| u.eval(x).powi(2), center, r))
                .sum()
        })
        .collect();
    let kept: Vec<(f64, f64)> = radii
        .iter()
        .zip(&h)
        .filter(|(_, &v)| v > f64::MIN_POSITIVE)
        .map(|(&r, &v)| (r.ln(), v.ln()))
        .collect();
    if kept.len() < MIN_FIT_SAMPLES.min(samples) {
        return Err(Error::NumericallyZero { lo, hi });
    }
    let (x, y): (Vec<f64>, Vec<f64>) = kept.into_iter().unzip();
    let (slope, _, fit_residual) = fit_line(&x, &y);
    let order = (slope - n as f64) / 2.0;
    let verdict = if fit_residual > FIT_RESIDUAL_LIMIT {
        Verdict::Inconclusive
    } else if order <= bound {
        Verdict::WithinBound
    } else {
        Verdict::Exceeds
    };
    Ok(OrderEstimate {
        center: *center,
        window,
        radii,
        h,
        slope,
        order,
        fit_residual,
        bound,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    /// Ball radius of the chain.
    pub r: f64,
    /// Radius of the final small ball at the origin.
    pub r1: f64,
    /// Far end of the chain; defaults to the sampled maximiser of `|u|` on
    /// the unit sphere.
    pub target: Option<Point>,
    /// `Linf_schrodinger` or `Linf_polyharmonic`.
    pub variant: Variant,
    /// Floor for the per-step constant `C`.
    pub constant: f64,
    pub beta_constant: f64,
    pub sample_budget: usize,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            r: 0.01,
            r1: 1e-3,
            target: None,
            variant: Variant::LinfSchrodinger,
            constant: 1.0,
            beta_constant: 1.0,
            sample_budget: 256,
            seed: 0,
        }
    }
}

impl ChainConfig {
    /// Outer radius of a chain step.
    fn outer(&self) -> f64 {
        match self.variant {
            Variant::LinfPolyharmonic => 6.0 * self.r,
            _ => 3.0 * self.r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.variant.is_sup() {
            return Err(Error::param("variant", "a chain needs a sup-norm three-ball variant"));
        }
        if !(self.r > 0.0 && self.outer() < 1.0) {
            return Err(Error::param("r", format!("chain radius {} out of range", self.r)));
        }
        if !(self.r1 > 0.0 && self.r1 < 1.0) {
            return Err(Error::param("r1", format!("must lie in (0, 1), got {}", self.r1)));
        }
        if !(self.constant > 0.0) {
            return Err(Error::param("constant", "must be positive"));
        }
        if self.sample_budget < 8 {
            return Err(Error::param("sample_budget", "must be at least 8"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub index: usize,
    pub center: Point,
    /// Sampled sup over `B_{r/2}(x_i)`.
    pub ball_sup: f64,
    /// Sampled sup over `B_r(x_i)` (including the next inner ball's samples).
    pub middle_sup: f64,
    pub outer_sup: f64,
    /// Constant used at this step (`max(floor, C_emp)`).
    pub constant: f64,
    /// Natural log of the propagated lower bound on `ball_sup`.
    pub log_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainCertificate {
    pub r: f64,
    pub r1: f64,
    pub variant: Variant,
    pub n: usize,
    pub m: f64,
    pub target: Point,
    pub d: usize,
    pub theta: f64,
    pub steps: Vec<ChainStep>,
    /// Interpolation weight of the last step, when `r1 < r/2`.
    pub final_theta: Option<f64>,
    /// `β/α` of the last step, computed from the exponents.
    pub q: Option<f64>,
    /// `q` from its closed form in the radii.
    pub closed_form_q: Option<f64>,
    pub normalization: f64,
    pub log_final_bound: f64,
    /// Sampled sup over `B_{r1}(0)`.
    pub measured_sup: f64,
}

impl ChainCertificate {
    pub fn final_bound(&self) -> f64 {
        self.log_final_bound.exp()
    }

    /// The certificate is a lower bound for what was measured.
    pub fn is_valid(&self) -> bool {
        self.measured_sup > 0.0 && self.log_final_bound <= self.measured_sup.ln()
    }

    /// Columns `step,center,ball_sup,step_bound,log_step_bound`; the trailer
    /// row carries the final bound against the measured sup over `B_{r1}`.
    pub fn to_csv(&self) -> String {
        let fmt_center = |c: &Point| {
            c[..self.n]
                .iter()
                .map(|v| format!("{v:e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::from("step,center,ball_sup,step_bound,log_step_bound\n");
        for st in &self.steps {
            let _ = writeln!(
                s,
                "{},{},{:e},{:e},{:e}",
                st.index,
                fmt_center(&st.center),
                st.ball_sup,
                st.log_bound.exp(),
                st.log_bound
            );
        }
        let _ = writeln!(
            s,
            "final,{},{:e},{:e},{:e}",
            fmt_center(&ORIGIN),
            self.measured_sup,
            self.final_bound(),
            self.log_final_bound
        );
        s
    }
}

/// Sampled `sup_{B_1}|u|` and the maximiser of `|u|` among the samples on
/// the unit sphere.
fn sampled_sup_and_target(u: &dyn Field, budget: usize, seed: u64) -> (f64, Point) {
    let mut sup: f64 = 0.0;
    let mut best = (f64::NEG_INFINITY, [1.0, 0.0, 0.0]);
    for x in halton_ball(u.dim(), &ORIGIN, 1.0, budget, seed) {
        let v = u.eval(&x).abs();
        sup = sup.max(v);
        if norm_sq(&x) >= 1.0 - 1e-12 && v > best.0 {
            best = (v, x);
        }
    }
    (sup, best.1)
}

/// Propagates `sup_{B_1}|u| >= 1` from the far end of a ball chain back to
/// `B_{r1}(0)` through the sup-norm three-ball inequality, in log scale.
///
/// Every step constant is the configured floor raised to the step's own
/// calibrated value, so each inequality holds for the sampled quantities and
/// the final bound is a lower bound of the sampled sup over `B_{r1}(0)`.
pub fn run_chain_certificate(u: &dyn Field, v: &PotentialSpec, config: &ChainConfig) -> Result<ChainCertificate> {
    config.validate()?;
    let n = u.dim();
    let (r, r1) = (config.r, config.r1);
    let outer = config.outer();
    ensure_ball(u, &ORIGIN, 1.0 + outer)?;
    let m = match config.variant {
        Variant::LinfPolyharmonic => v.effective_m(NormKind::Sup),
        _ => v.effective_m(NormKind::W1Inf),
    };

    let norm_budget = config.sample_budget.max(4096);
    let (normalization, sphere_max) = sampled_sup_and_target(u, norm_budget, config.seed);
    if normalization < 1.0 {
        return Err(Error::Normalization { measured: normalization });
    }
    let target = match config.target {
        Some(t) => {
            if norm_sq(&t).sqrt() > 1.0 + 1e-12 {
                return Err(Error::param("target", "must lie in the closed unit ball"));
            }
            t
        }
        None => sphere_max,
    };
    let dist = norm_sq(&target).sqrt();
    let d = (dist / (0.5 * r) - 1e-12).ceil().max(0.0) as usize;
    let centers: Vec<Point> = (0..=d)
        .map(|i| if d == 0 { ORIGIN } else { axpy(i as f64 / d as f64, &target, &ORIGIN) })
        .collect();

    let sup = |c: &Point, rad: f64| sup_norm_on_ball(|x| u.eval(x), n, c, rad, config.sample_budget, config.seed).value;
    let raw: Vec<[f64; 3]> = centers
        .par_iter()
        .map(|c| [sup(c, 0.5 * r), sup(c, r), sup(c, outer)])
        .collect();
    let mut inner: Vec<f64> = raw.iter().map(|s| s[0]).collect();
    inner[d] = inner[d].max(u.eval(&target).abs());
    if inner.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InnerMassGuard { value: 0.0 });
    }
    let middle: Vec<f64> = (0..=d)
        .map(|i| {
            let next = if i < d { inner[i + 1] } else { 0.0 };
            raw[i][1].max(inner[i]).max(next)
        })
        .collect();
    let outer_sup: Vec<f64> = (0..=d).map(|i| raw[i][2].max(middle[i])).collect();

    let step_cfg = ThreeBallConfig::new([0.5 * r, r, outer], config.variant)?.with_beta_constant(config.beta_constant)?;
    let (a, b) = exponents(&step_cfg)?;
    let theta = a / (a + b);
    let (log_p, slope) = sup_constant_slot(config.variant, step_cfg.radii, n as f64, m);
    let step_constant = |lhs: f64, log_inner: f64, log_outer: f64, th: f64, log_p: f64, slope: f64| {
        let rhs0 = log_p + th * log_inner + (1.0 - th) * log_outer;
        let c = config.constant.max(solve_log_linear(slope, lhs - rhs0));
        (c, log_p + c.ln() + c * slope)
    };

    let mut steps = vec![None; d + 1];
    let mut log_b = inner[d].ln();
    steps[d] = Some(ChainStep {
        index: d,
        center: centers[d],
        ball_sup: inner[d],
        middle_sup: middle[d],
        outer_sup: outer_sup[d],
        constant: config.constant,
        log_bound: log_b,
    });
    for i in (0..d).rev() {
        let lo = outer_sup[i].ln();
        let (c, log_k) = step_constant(middle[i].ln(), inner[i].ln(), lo, theta, log_p, slope);
        log_b = (log_b - log_k - (1.0 - theta) * lo) / theta;
        steps[i] = Some(ChainStep {
            index: i,
            center: centers[i],
            ball_sup: inner[i],
            middle_sup: middle[i],
            outer_sup: outer_sup[i],
            constant: c,
            log_bound: log_b,
        });
    }
    let steps: Vec<ChainStep> = steps.into_iter().map(|s| s.expect("every step filled")).collect();

    let small = sup(&ORIGIN, r1);
    let (log_final, final_theta, q, closed_form_q, measured) = if r1 < 0.5 * r {
        let cfg = ThreeBallConfig::new([r1, 0.5 * r, 3.0 * r], config.variant)?.with_beta_constant(config.beta_constant)?;
        let (a, b) = exponents(&cfg)?;
        let th = a / (a + b);
        let (log_p, slope) = sup_constant_slot(config.variant, cfg.radii, n as f64, m);
        let big = sup(&ORIGIN, 3.0 * r).max(inner[0]);
        if !(small > 0.0) {
            return Err(Error::InnerMassGuard { value: small });
        }
        let (_, log_k) = step_constant(inner[0].ln(), small.ln(), big.ln(), th, log_p, slope);
        let log_final = (steps[0].log_bound - log_k - (1.0 - th) * big.ln()) / th;
        let closed_form_q = match config.variant {
            Variant::LinfPolyharmonic => config.beta_constant * (4.0 * r / (3.0 * r1)).ln() / (9.0f64 / 8.0).ln(),
            _ => ((7.0f64 / 3.0).ln() * r - r1.ln()) / (9.0f64 / 7.0).ln(),
        };
        (log_final, Some(th), Some(b / a), Some(closed_form_q), small)
    } else {
        // B_{r/2}(0) ⊂ B_{r1}(0): the chain bound transfers directly.
        (steps[0].log_bound, None, None, None, small.max(inner[0]))
    };

    Ok(ChainCertificate {
        r,
        r1,
        variant: config.variant,
        n,
        m,
        target,
        d,
        theta,
        steps,
        final_theta,
        q,
        closed_form_q,
        normalization,
        log_final_bound: log_final,
        measured_sup: measured,
    })
}

/// How `(-Δ)^m u_R` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaplacianRoute {
    /// The field's own iterated Laplacian, pulled back through the dilation.
    Analytic,
    /// Fourth-order finite differences of `u_R` with the given step (`m = 1`).
    FiniteDifference { step: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescaleReport {
    pub radius: f64,
    pub m: usize,
    pub x0: Point,
    /// `M = R^{2m}` for the rescaled equation.
    pub implied_m: f64,
    /// Max of `|(-Δ)^m u_R - R^{2m} V̄_R u_R| / max(1, |R^{2m} V̄_R u_R|)`.
    pub max_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl RescaleReport {
    /// `C exp(-C R^{2m} log R)`.
    pub fn lower_bound(&self, c: f64) -> f64 {
        c * (-c * self.implied_m * self.radius.ln()).exp()
    }
}

fn fd_laplacian(u: &dyn Field, x: &Point, h: f64) -> f64 {
    let n = u.dim();
    let f0 = u.eval(x);
    (0..n)
        .map(|k| {
            let at = |s: f64| {
                let mut y = *x;
                y[k] += s * h;
                u.eval(&y)
            };
            (-at(2.0) + 16.0 * at(1.0) - 30.0 * f0 + 16.0 * at(-1.0) - at(-2.0)) / (12.0 * h * h)
        })
        .sum()
}

/// Checks `(-Δ)^m u_R = R^{2m} V̄_R u_R` for `u_R(x) = u(Rx + x0)` on
/// sample points of the unit ball.
pub fn corollary_rescaling(
    u: SharedField,
    vbar: &PotentialSpec,
    m: usize,
    radius: f64,
    x0: &Point,
    route: LaplacianRoute,
    samples: usize,
    tolerance: f64,
) -> Result<RescaleReport> {
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if !(radius > 0.0) {
        return Err(Error::param("R", "must be positive"));
    }
    let n = u.dim();
    let dilated = Dilated::new(u, radius, *x0);
    let margin = match route {
        LaplacianRoute::Analytic => 0.0,
        LaplacianRoute::FiniteDifference { step } => {
            if m != 1 {
                return Err(Error::param("route", "finite differences support m = 1 only"));
            }
            2.0 * step
        }
    };
    ensure_ball(&dilated, &ORIGIN, 1.0 + margin)?;
    let scale = radius.powi(2 * m as i32);
    let points = halton_ball(n, &ORIGIN, 1.0, samples.max(1), 0);
    let residuals: Vec<f64> = points
        .par_iter()
        .map(|x| {
            let lhs = match route {
                LaplacianRoute::Analytic => dilated.laplacian_power(x, m),
                LaplacianRoute::FiniteDifference { step } => Some(-fd_laplacian(&dilated, x, step)),
            };
            let rhs = scale * vbar.eval(&dilated.map(x)) * dilated.eval(x);
            lhs.map(|l| (l - rhs).abs() / rhs.abs().max(1.0))
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::MissingLaplacianPower {
            field: dilated.label(),
            order: m,
        })?;
    let max_residual = residuals.into_iter().fold(0.0, f64::max);
    Ok(RescaleReport {
        radius,
        m,
        x0: *x0,
        implied_m: scale,
        max_residual,
        samples: points.len(),
        tolerance,
        passed: max_residual <= tolerance,
    })
}
