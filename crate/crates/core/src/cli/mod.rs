//! Experiment orchestration: configs in, CSV reports and a verdict out.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use config::{
    load_config, parse_config, BoundSpec, BuiltField, ExperimentConfig, ExperimentKind, FieldSpec, PotentialConfig,
    RadiiSpec, Tolerances, DEFAULT_FIT_SAMPLES, DEFAULT_WINDOW, MIN_QUAD_ORDER,
};

use crate::error::{Error, Result};
use crate::field::{point, NormKind, PotentialSpec, ORIGIN};
use crate::frequency::{
    check_derivative_identity, check_monotonicity_schrodinger, frequency_profile_with, FrequencyProfile,
    ProfileSettings,
};
use crate::order::{estimate_vanishing_order, order_bound, run_chain_certificate, BoundScaling, ChainConfig, Verdict};
use crate::polysystem::{
    check_monotonicity_polyharmonic, check_monotonicity_ucp, decompose_with, doubling_check, stacked_profile,
    MAX_CALIBRATED_CONSTANT,
};
use crate::threeball::{check_three_ball, sweep_csv, Subject, SweepRow, ThreeBallConfig, ThreeBallOptions};

/// Exit status of a run.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skipped,
            detail: detail.into(),
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub kind: ExperimentKind,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }

    /// A fixed-width verdict table.
    pub fn summary(&self) -> String {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut s = format!("{:<w$}  {:<6}  detail\n", "check", "status");
        for c in &self.checks {
            let _ = writeln!(s, "{:<w$}  {:<6}  {}", c.name, c.status.label(), c.detail);
        }
        let _ = writeln!(s, "verdict: {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Options that come from the command line rather than the config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub self_check: bool,
    pub emit_gnuplot: bool,
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// The CSV text of one experiment, plus its gnuplot columns.
struct Report {
    csv: String,
    plot: (usize, usize, &'static str),
    checks: Vec<Check>,
}

fn settings(config: &ExperimentConfig) -> ProfileSettings {
    ProfileSettings {
        orders: config.orders,
        error_estimate: config.self_check,
        pde_tolerance: config.tolerances.pde,
        ..ProfileSettings::default()
    }
}

fn parts_check(profile: &FrequencyProfile, tol: f64) -> Check {
    let mut worst: f64 = 0.0;
    let mut at = f64::NAN;
    for (k, r) in profile.radii.iter().enumerate() {
        if profile.freq[k].is_none() {
            continue;
        }
        let (a, b) = (profile.i_def[k], profile.i_parts[k]);
        let den = a.abs().max(b.abs());
        let rel = if den > 0.0 { (a - b).abs() / den } else { 0.0 };
        if rel > worst || at.is_nan() {
            worst = worst.max(rel);
            at = *r;
        }
    }
    Check::new(
        "integration by parts",
        worst <= tol,
        format!("max |I_def-I_parts|/max(|I_def|,|I_parts|) = {worst:.3e} at r = {at} (tol {tol:.1e})"),
    )
}

fn identity_check(profile: &FrequencyProfile, config: &ExperimentConfig) -> Result<Check> {
    match check_derivative_identity(profile, config.tolerances.max_step) {
        Ok(rep) => {
            let tol = config.tolerances.identity;
            Ok(Check::new(
                "derivative identity",
                rep.max_residual <= tol,
                format!("max residual {:.3e} over {} radii (tol {tol:.1e})", rep.max_residual, rep.checked),
            ))
        }
        Err(Error::GridTooCoarse { step, max_step }) => Ok(Check::skipped(
            "derivative identity",
            format!("radius step {step:.3e} > {max_step:.1e}"),
        )),
        Err(e) => Err(e),
    }
}

fn frequency_check(profile: &FrequencyProfile, expected: f64, tol: f64) -> Check {
    let worst = profile
        .guarded()
        .iter()
        .map(|(_, n)| (n - expected).abs() / expected.abs().max(1.0))
        .fold(0.0, f64::max);
    Check::new(
        "expected frequency",
        worst <= tol,
        format!("max relative deviation from {expected} is {worst:.3e} (tol {tol:.1e})"),
    )
}

fn run_profile(config: &ExperimentConfig) -> Result<Report> {
    let bf = config.field_spec()?.build()?;
    let v = bf.schrodinger("field")?;
    let radii = config.radius_grid()?;
    let profile = frequency_profile_with(bf.field.as_ref(), v, &config.center_point(), &radii, config.alpha, &settings(config))?;
    let mut checks = vec![identity_check(&profile, config)?, parts_check(&profile, config.tolerances.parts)];
    if let Some(e) = config.expected_frequency {
        checks.push(frequency_check(&profile, e, config.tolerances.frequency));
    }
    Ok(Report {
        csv: profile.to_csv(),
        plot: (1, 5, "N(r)"),
        checks,
    })
}

fn run_monotonicity(config: &ExperimentConfig) -> Result<Report> {
    let bf = config.field_spec()?.build()?;
    let v = bf.schrodinger("field")?;
    let radii = config.radius_grid()?;
    let profile = frequency_profile_with(bf.field.as_ref(), v, &config.center_point(), &radii, config.alpha, &settings(config))?;
    let rep = check_monotonicity_schrodinger(&profile, v, config.constant)?;
    let tol = config.tolerances.monotonicity + profile.max_quad_error();
    let w = v.w1inf_norm();
    let mut csv = String::from("r,N,shifted\n");
    for (r, n) in profile.guarded() {
        let _ = writeln!(csv, "{:e},{:e},{:e}", r, n, n + rep.constant * w * r * r);
    }
    let detail = format!(
        "C = {}, min increment {:.3e} at r = {} (tol {tol:.1e}); empirical min C = {}",
        rep.constant,
        rep.min_increment,
        rep.at_radius,
        rep.empirical_min_constant.map_or("none".into(), |c| format!("{c:.6e}"))
    );
    Ok(Report {
        csv,
        plot: (1, 3, "N(r) + C W r^2"),
        checks: vec![Check::new("monotonicity", rep.min_increment >= -tol, detail)],
    })
}

fn build_stack(bf: &BuiltField, config: &ExperimentConfig, path: &str) -> Result<crate::polysystem::SystemStack> {
    let (vbar, m) = bf.polyharmonic(path)?;
    decompose_with(bf.field.clone(), m, vbar, &ORIGIN, 1.0, config.tolerances.closure)
}

fn run_sweep(config: &ExperimentConfig) -> Result<Report> {
    let specs = config.field_specs()?;
    let beta = config.beta_constant.unwrap_or(1.0);
    let options = ThreeBallOptions {
        orders: config.orders,
        sample_budget: config.sample_budget.unwrap_or(4096),
        seed: config.seed,
    };
    let mut jobs = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let bf = spec.build()?;
        for t in config.sweep_triples() {
            for v in config.sweep_variants() {
                jobs.push((i, bf.clone(), ThreeBallConfig::new(t, v)?.with_beta_constant(beta)?));
            }
        }
    }
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|(i, bf, cfg)| {
            let path = format!("fields[{i}]");
            let report = if cfg.variant.is_polyharmonic() {
                let stack = build_stack(bf, config, &path)?;
                check_three_ball(Subject::Polyharmonic(&stack), cfg, &options)?
            } else {
                let v = bf.schrodinger(&path)?;
                check_three_ball(Subject::Schrodinger { u: bf.field.as_ref(), v }, cfg, &options)?
            };
            Ok(SweepRow {
                id: bf.id.clone(),
                parameter: bf.parameter,
                report,
            })
        })
        .collect::<Result<_>>()?;
    let worst = rows.iter().map(|r| r.report.c_emp).fold(0.0, f64::max);
    let mut checks = vec![Check::new(
        "exponent weights",
        rows.iter().all(|r| (r.report.weight_sum() - 1.0).abs() < 1e-12),
        "alpha/(alpha+beta) + beta/(alpha+beta) = 1",
    )];
    checks.push(match config.c_max {
        Some(c) => Check::new("C_emp bound", worst <= c, format!("max C_emp {worst:.6e} (bound {c})")),
        None => Check::skipped("C_emp bound", format!("max C_emp {worst:.6e}; no bound configured")),
    });
    Ok(Report {
        csv: sweep_csv(&rows),
        plot: (0, 10, "C_emp"),
        checks,
    })
}

fn run_vanish(config: &ExperimentConfig) -> Result<Report> {
    let specs = config.field_specs()?;
    let window = config.window.unwrap_or(DEFAULT_WINDOW);
    let samples = config.samples.unwrap_or(DEFAULT_FIT_SAMPLES);
    let bound_spec = config.bound.unwrap_or(BoundSpec {
        scaling: BoundScaling::Sqrt,
        constant: 1.0,
    });
    let center = config.center_point();
    let mut csv = String::from("id,lambda_or_k,slope,order,fit_residual,bound,verdict\n");
    let mut exceeded = Vec::new();
    let mut off = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let bf = spec.build()?;
        let zero = PotentialSpec::zero(bf.dim());
        let stack;
        let (subject, m) = match bound_spec.scaling {
            BoundScaling::Sqrt => {
                let v = bf.potential.as_ref().unwrap_or(&zero);
                (Subject::Schrodinger { u: bf.field.as_ref(), v }, v.effective_m(NormKind::W1Inf))
            }
            BoundScaling::Linear => {
                if spec.m.is_some() {
                    stack = build_stack(&bf, config, &format!("fields[{i}]"))?;
                    (Subject::Polyharmonic(&stack), stack.potential().effective_m(NormKind::Sup))
                } else {
                    let m = bf.poly.as_ref().map_or(1.0, |p| p.0.effective_m(NormKind::Sup));
                    (Subject::Schrodinger { u: bf.field.as_ref(), v: &zero }, m)
                }
            }
        };
        let bound = order_bound(bound_spec.scaling, bound_spec.constant, m);
        let est = estimate_vanishing_order(subject, &center, window, samples, bound, config.orders)?;
        let _ = writeln!(
            csv,
            "{},{:e},{:e},{:e},{:e},{:e},{}",
            bf.id,
            bf.parameter,
            est.slope,
            est.order,
            est.fit_residual,
            est.bound,
            est.verdict.label()
        );
        if est.verdict == Verdict::Exceeds {
            exceeded.push(bf.id.clone());
        }
        if let Some(e) = &config.expected_orders {
            if (est.order - e[i]).abs() > config.tolerances.order {
                off.push(format!("{} ({:.4} vs {})", bf.id, est.order, e[i]));
            }
        }
    }
    let mut checks = vec![Check::new(
        "order bound",
        exceeded.is_empty(),
        if exceeded.is_empty() {
            "no estimate exceeds its bound".to_string()
        } else {
            format!("exceeded: {}", exceeded.join(", "))
        },
    )];
    if config.expected_orders.is_some() {
        checks.push(Check::new(
            "expected orders",
            off.is_empty(),
            if off.is_empty() {
                format!("all within {}", config.tolerances.order)
            } else {
                format!("off: {}", off.join(", "))
            },
        ));
    }
    Ok(Report {
        csv,
        plot: (0, 4, "order"),
        checks,
    })
}

fn run_chain(config: &ExperimentConfig) -> Result<Report> {
    let bf = config.field_spec()?.build()?;
    let variant = config.chain_variant();
    let (v, label) = if variant.is_polyharmonic() {
        (bf.polyharmonic("field")?.0, "V̄")
    } else {
        (bf.schrodinger("field")?.clone(), "V")
    };
    let defaults = ChainConfig::default();
    let chain = ChainConfig {
        r: config.r.unwrap_or(defaults.r),
        r1: config.r1.unwrap_or(defaults.r1),
        target: config.target.as_deref().map(point),
        variant,
        constant: config.constant.unwrap_or(defaults.constant),
        beta_constant: config.beta_constant.unwrap_or(defaults.beta_constant),
        sample_budget: config.sample_budget.unwrap_or(defaults.sample_budget),
        seed: config.seed,
    };
    let cert = run_chain_certificate(bf.field.as_ref(), &v, &chain)?;
    let detail = format!(
        "log bound {:.6e} <= log measured {:.6e} ({} steps, M from {label} = {})",
        cert.log_final_bound,
        cert.measured_sup.ln(),
        cert.d,
        cert.m
    );
    Ok(Report {
        csv: cert.to_csv(),
        plot: (1, 5, "log step bound"),
        checks: vec![Check::new("chain validity", cert.is_valid(), detail)],
    })
}

fn mono_check(name: &str, rep: &crate::frequency::MonotonicityReport, constant: Option<f64>) -> Check {
    let empirical = rep.empirical_min_constant;
    let detail = format!(
        "empirical min C = {}; at C = {}: min increment {:.3e}",
        empirical.map_or("none".into(), |c| format!("{c:.6e}")),
        rep.constant,
        rep.min_increment
    );
    let passed = match constant {
        Some(_) => rep.passed,
        None => empirical.is_some_and(|c| c <= MAX_CALIBRATED_CONSTANT),
    };
    Check::new(name, passed, detail)
}

fn run_stack(config: &ExperimentConfig, ucp: bool) -> Result<Report> {
    let bf = config.field_spec()?.build()?;
    let stack = build_stack(&bf, config, "field")?;
    let radii = config.radius_grid()?;
    let center = config.center_point();
    let alpha = if ucp { 0.0 } else { config.alpha };
    let s = settings(config);
    let profile = stacked_profile(&stack, &center, &radii, alpha, &s)?;
    let c = config.constant.unwrap_or(0.0);
    let rep = if ucp {
        check_monotonicity_ucp(&stack, &center, &radii, c, &s)?
    } else {
        check_monotonicity_polyharmonic(&stack, &center, &radii, alpha, c, &s)?
    };
    let checks = vec![
        Check::new(
            "closure",
            stack.closure_residual() <= config.tolerances.closure,
            format!("residual {:.3e}; {}", stack.closure_residual(), stack.hypothesis_label()),
        ),
        parts_check(&profile, config.tolerances.parts),
        mono_check(if ucp { "exp(Cr)(N+v^2) monotone" } else { "exp(Cr)(N+av+v^2) monotone" }, &rep, config.constant),
    ];
    Ok(Report {
        csv: profile.to_stacked_csv(),
        plot: (1, 5, "N(r)"),
        checks,
    })
}

fn run_doubling(config: &ExperimentConfig) -> Result<Report> {
    let bf = config.field_spec()?.build()?;
    let m = bf.poly.as_ref().map_or(1, |p| p.1);
    let center = config.center_point();
    let reports = config
        .radius_grid()?
        .iter()
        .map(|&r| doubling_check(bf.field.as_ref(), &center, r, m, config.orders))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("R,h_R,h_2R,ratio,implied_constant,beta,order_bound\n");
    for d in &reports {
        let _ = writeln!(
            csv,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            d.radius, d.h_r, d.h_2r, d.ratio, d.implied_constant, d.beta, d.order_bound
        );
    }
    let mut checks = vec![Check::new(
        "finite ratio",
        reports.iter().all(|d| d.ratio.is_finite()),
        format!("m = {m}"),
    )];
    if let Some(e) = config.expected_ratio {
        let worst = reports.iter().map(|d| (d.ratio - e).abs() / e.abs()).fold(0.0, f64::max);
        let tol = config.tolerances.ratio;
        checks.push(Check::new(
            "expected ratio",
            worst <= tol,
            format!("max relative deviation from {e} is {worst:.3e} (tol {tol:.1e})"),
        ));
    }
    if let Some(s) = config.stability {
        let cs: Vec<f64> = reports.iter().map(|d| d.implied_constant).collect();
        let (lo, hi) = cs.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
        let spread = hi / lo - 1.0;
        checks.push(Check::new(
            "implied constant stability",
            spread <= s,
            format!("C in [{lo:.6e}, {hi:.6e}], spread {spread:.3e} (allowed {s})"),
        ));
    }
    Ok(Report {
        csv,
        plot: (1, 4, "h(2R)/h(R)"),
        checks,
    })
}

fn gnuplot_script(csv_name: &str, (x, y, title): (usize, usize, &str)) -> String {
    let using = if x == 0 { format!("0:{y}") } else { format!("{x}:{y}") };
    format!(
        "set datafile separator ','\nset key autotitle columnhead\nset title '{title}'\nplot '{csv_name}' using {using} with linespoints\npause -1\n"
    )
}

/// Runs a validated experiment and writes its CSV (and gnuplot script).
pub fn run(config: &ExperimentConfig, options: &RunOptions) -> Result<Outcome> {
    let mut config = config.clone();
    if let Some(seed) = options.seed {
        config.seed = seed;
    }
    config.self_check |= options.self_check;
    config.validate()?;
    let report = match config.kind {
        ExperimentKind::Profile => run_profile(&config)?,
        ExperimentKind::Monotonicity => run_monotonicity(&config)?,
        ExperimentKind::ThreeBallSweep => run_sweep(&config)?,
        ExperimentKind::VanishOrder => run_vanish(&config)?,
        ExperimentKind::Chain => run_chain(&config)?,
        ExperimentKind::Polysystem => run_stack(&config, false)?,
        ExperimentKind::Ucp => run_stack(&config, true)?,
        ExperimentKind::Doubling => run_doubling(&config)?,
    };
    let stem = config.kind.file_stem();
    let csv_path = options.out_dir.join(format!("{stem}.csv"));
    write_atomic(&csv_path, &report.csv)?;
    let mut files = vec![csv_path];
    if options.emit_gnuplot {
        let gp = options.out_dir.join(format!("{stem}.gp"));
        write_atomic(&gp, &gnuplot_script(&format!("{stem}.csv"), report.plot))?;
        files.push(gp);
    }
    Ok(Outcome {
        kind: config.kind,
        checks: report.checks,
        files,
    })
}

/// Parses, runs and maps everything onto the exit-code contract.
pub fn run_from_path(kind: ExperimentKind, config_path: &Path, options: &RunOptions) -> (i32, String) {
    let result = load_config(config_path).and_then(|c| {
        if c.kind != kind {
            return Err(Error::Config {
                path: "kind".into(),
                reason: format!("config is for `{}`, not `{kind}`", c.kind),
            });
        }
        run(&c, options)
    });
    match result {
        Ok(outcome) => {
            let mut s = outcome.summary();
            for f in &outcome.files {
                let _ = writeln!(s, "wrote {}", f.display());
            }
            (outcome.exit_code(), s)
        }
        Err(e) => (EXIT_INPUT_ERROR, format!("error: {e}\n")),
    }
}
