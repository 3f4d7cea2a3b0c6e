//! JSON experiment configs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    import_grid_field, make_bessel_mode, make_harmonic_polynomial, point, Constant, ExpMode, Point, PotentialSpec,
    RadialSquare, Scaled, SharedField, ORIGIN,
};
use crate::frequency::{geomspace, linspace, stepped, DEFAULT_MAX_STEP, IDENTITY_TOLERANCE, MONOTONICITY_TOLERANCE};
use crate::order::BoundScaling;
use crate::polysystem::CLOSURE_TOLERANCE;
use crate::quad::{sup_norm_on_ball, QuadOrders};
use crate::threeball::{ThreeBallConfig, Variant};

pub const MIN_QUAD_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Profile,
    Monotonicity,
    ThreeBallSweep,
    VanishOrder,
    Chain,
    Polysystem,
    Doubling,
    Ucp,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Profile,
        ExperimentKind::Monotonicity,
        ExperimentKind::ThreeBallSweep,
        ExperimentKind::VanishOrder,
        ExperimentKind::Chain,
        ExperimentKind::Polysystem,
        ExperimentKind::Doubling,
        ExperimentKind::Ucp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Profile => "profile",
            ExperimentKind::Monotonicity => "monotonicity",
            ExperimentKind::ThreeBallSweep => "three-ball-sweep",
            ExperimentKind::VanishOrder => "vanish-order",
            ExperimentKind::Chain => "chain",
            ExperimentKind::Polysystem => "polysystem",
            ExperimentKind::Doubling => "doubling",
            ExperimentKind::Ucp => "ucp",
        }
    }

    /// Stem of the CSV (and gnuplot) output.
    pub fn file_stem(self) -> String {
        self.name().replace('-', "_")
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param("kind", format!("unknown experiment kind `{s}`")))
    }
}

/// A potential given in the config (for grid fields).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    Constant(f64),
    Affine { offset: f64, slope: Vec<f64> },
}

impl PotentialConfig {
    fn build(&self, n: usize) -> PotentialSpec {
        match self {
            PotentialConfig::Constant(c) => PotentialSpec::constant(n, *c),
            PotentialConfig::Affine { offset, slope } => PotentialSpec::affine(n, *offset, point(slope)),
        }
    }
}

/// Catalog id plus parameters, or a grid file.
///
/// `catalog` is one of `constant`, `harmonic`, `bessel`, `radial_square`,
/// `exp_mode`, `grid`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub catalog: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub value: Option<f64>,
    /// Polyharmonic order for stack experiments.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub spacing: Option<f64>,
    /// `V` in `Δu = Vu` for grid fields (default zero).
    #[serde(default)]
    pub potential: Option<PotentialConfig>,
    #[serde(default)]
    pub scale: Option<f64>,
    /// Rescale so the sampled sup over the unit ball is 1.
    #[serde(default)]
    pub normalize: bool,
}

/// A field ready for experiments.
#[derive(Clone)]
pub struct BuiltField {
    pub id: String,
    /// `λ` for Bessel modes, `k` for harmonic polynomials, else 0.
    pub parameter: f64,
    pub field: SharedField,
    /// `V` in `Δu = Vu`, when the field solves such an equation.
    pub potential: Option<PotentialSpec>,
    /// `(V̄, m)` in `(-Δ)^m u = V̄ u`.
    pub poly: Option<(PotentialSpec, usize)>,
}

impl BuiltField {
    pub fn schrodinger(&self, path: &str) -> Result<&PotentialSpec> {
        self.potential.as_ref().ok_or_else(|| Error::Config {
            path: path.to_string(),
            reason: format!("`{}` is not a solution of a second-order Schrödinger equation", self.id),
        })
    }

    pub fn polyharmonic(&self, path: &str) -> Result<(PotentialSpec, usize)> {
        self.poly.clone().ok_or_else(|| Error::Config {
            path: path.to_string(),
            reason: format!("`{}` has no polyharmonic equation", self.id),
        })
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }
}

fn cfg_err(path: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        reason: reason.into(),
    }
}

impl FieldSpec {
    pub fn catalog(catalog: &str) -> Self {
        FieldSpec {
            catalog: catalog.to_string(),
            ..FieldSpec::default()
        }
    }

    fn validate(&self, path: &str) -> Result<()> {
        let need = |name: &str, present: bool| {
            if present {
                Ok(())
            } else {
                Err(cfg_err(&format!("{path}.{name}"), format!("required for catalog `{}`", self.catalog)))
            }
        };
        match self.catalog.as_str() {
            "constant" | "radial_square" | "exp_mode" => {}
            "harmonic" => need("k", self.k.is_some())?,
            "bessel" => {
                need("k", self.k.is_some())?;
                need("lambda", self.lambda.is_some())?;
                if !(self.lambda.unwrap_or(0.0) > 0.0) {
                    return Err(cfg_err(&format!("{path}.lambda"), "must be positive"));
                }
            }
            "grid" => {
                need("path", self.path.is_some())?;
                need("spacing", self.spacing.is_some())?;
                let p = self.path.as_ref().expect("checked");
                if !p.exists() {
                    return Err(Error::GridNotFound(p.clone()));
                }
            }
            other => return Err(Error::UnknownCatalogEntry(other.to_string())),
        }
        if let Some(m) = self.m {
            if m == 0 {
                return Err(cfg_err(&format!("{path}.m"), "must be at least 1"));
            }
        }
        if let Some(s) = self.scale {
            if !(s.is_finite() && s != 0.0) {
                return Err(cfg_err(&format!("{path}.scale"), "must be finite and nonzero"));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<BuiltField> {
        let n = self.n.unwrap_or(2);
        let (mut id, parameter, field, potential, poly): (String, f64, SharedField, Option<PotentialSpec>, Option<(PotentialSpec, usize)>) =
            match self.catalog.as_str() {
                "constant" => {
                    let c = self.value.unwrap_or(1.0);
                    let zero = PotentialSpec::zero(n);
                    (format!("constant_{c}"), 0.0, Arc::new(Constant::new(n, c)), Some(zero.clone()), Some((zero, self.m.unwrap_or(2))))
                }
                "harmonic" => {
                    let k = self.k.expect("validated");
                    let zero = PotentialSpec::zero(n);
                    let u = make_harmonic_polynomial(k, n)?;
                    (format!("harmonic_{k}"), k as f64, Arc::new(u), Some(zero.clone()), Some((zero, self.m.unwrap_or(2))))
                }
                "bessel" => {
                    let k = self.k.expect("validated");
                    let lambda = self.lambda.expect("validated");
                    let (u, v) = make_bessel_mode(k, lambda)?;
                    let vbar = v.negated();
                    if self.m.is_some_and(|m| m != 1) {
                        return Err(Error::param("m", "Bessel modes are order-1 stacks"));
                    }
                    (format!("bessel_J{k}_{lambda}"), lambda, Arc::new(u), Some(v), Some((vbar, 1)))
                }
                "radial_square" => {
                    let m = self.m.unwrap_or(2);
                    if m < 2 {
                        return Err(Error::param("m", "|x|^2 solves (-Δ)^m u = 0 only for m >= 2"));
                    }
                    ("radial_square".into(), 0.0, Arc::new(RadialSquare::new(n)), None, Some((PotentialSpec::zero(n), m)))
                }
                "exp_mode" => {
                    let m = self.m.unwrap_or(2);
                    // (-Δ)^m e^{x₁} = (-1)^m e^{x₁}
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    (
                        "exp_mode".into(),
                        0.0,
                        Arc::new(ExpMode::new(n)),
                        Some(PotentialSpec::constant(n, 1.0)),
                        Some((PotentialSpec::constant(n, sign), m)),
                    )
                }
                "grid" => {
                    let path = self.path.as_ref().expect("validated");
                    let g = import_grid_field(path, self.spacing.expect("validated"), n)?;
                    let v = self.potential.as_ref().map(|p| p.build(n)).unwrap_or_else(|| PotentialSpec::zero(n));
                    if self.m.is_some_and(|m| m != 1) {
                        return Err(Error::param("m", "grid fields only provide first Laplacians"));
                    }
                    let vbar = v.negated();
                    (format!("grid_{}", path.display()), 0.0, Arc::new(g), Some(v), Some((vbar, 1)))
                }
                other => return Err(Error::UnknownCatalogEntry(other.to_string())),
            };
        let mut field = field;
        if let Some(s) = self.scale {
            field = Arc::new(Scaled::new(field, s));
            id = format!("{id}_x{s}");
        }
        if self.normalize {
            let sup = sup_norm_on_ball(|x| field.eval(x), field.dim(), &ORIGIN, 1.0, NORMALIZE_BUDGET, 0).value;
            if !(sup > 0.0) {
                return Err(Error::Normalization { measured: sup });
            }
            // A few ulps above 1 so the sampled sup stays >= 1 after rounding.
            field = Arc::new(Scaled::new(field, (1.0 + 1e-12) / sup));
            id = format!("{id}_normalized");
        }
        Ok(BuiltField {
            id,
            parameter,
            field,
            potential,
            poly,
        })
    }
}

const NORMALIZE_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiiSpec {
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub geometric: bool,
}

impl RadiiSpec {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        if let Some(v) = &self.values {
            return Ok(v.clone());
        }
        let (Some(min), Some(max)) = (self.min, self.max) else {
            return Err(cfg_err("radii", "give `values`, or `min` and `max` with `count` or `step`"));
        };
        if !(min < max) {
            return Err(cfg_err("radii", format!("need min < max, got {min} and {max}")));
        }
        match (self.count, self.step) {
            (Some(c), None) if c >= 2 => Ok(if self.geometric {
                geomspace(min, max, c)
            } else {
                linspace(min, max, c)
            }),
            (None, Some(s)) if s > 0.0 => Ok(stepped(min, max, s)),
            _ => Err(cfg_err("radii", "give exactly one of `count` (>= 2) or `step` (> 0)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Derivative identity residual.
    pub identity: f64,
    /// `|I_def - I_parts| / max(|I_def|, |I_parts|)`.
    pub parts: f64,
    /// Slack on monotone increments (on top of the quadrature error estimate).
    pub monotonicity: f64,
    pub pde: f64,
    pub closure: f64,
    /// Largest radius step for derivative checks.
    pub max_step: f64,
    /// Relative error on an expected frequency value.
    pub frequency: f64,
    /// Absolute error on expected vanishing orders.
    pub order: f64,
    /// Relative error on an expected doubling ratio.
    pub ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: IDENTITY_TOLERANCE,
            parts: 1e-7,
            monotonicity: MONOTONICITY_TOLERANCE,
            pde: 1e-8,
            closure: CLOSURE_TOLERANCE,
            max_step: DEFAULT_MAX_STEP,
            frequency: 1e-9,
            order: 0.05,
            ratio: 1e-8,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        let all = [
            ("identity", self.identity),
            ("parts", self.parts),
            ("monotonicity", self.monotonicity),
            ("pde", self.pde),
            ("closure", self.closure),
            ("max_step", self.max_step),
            ("frequency", self.frequency),
            ("order", self.order),
            ("ratio", self.ratio),
        ];
        for (name, v) in all {
            if !(v > 0.0) || !v.is_finite() {
                return Err(cfg_err(&format!("tolerances.{name}"), format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    pub scaling: BoundScaling,
    #[serde(default = "one")]
    pub constant: f64,
}

fn one() -> f64 {
    1.0
}

/// A parsed, validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub field: Option<FieldSpec>,
    #[serde(default)]
    pub fields: Option<Vec<FieldSpec>>,
    #[serde(default)]
    pub radii: Option<RadiiSpec>,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub center: Option<Vec<f64>>,
    #[serde(default)]
    pub orders: QuadOrders,
    #[serde(default)]
    pub self_check: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Monotonicity constant, or the chain's per-step floor.
    #[serde(default)]
    pub constant: Option<f64>,
    #[serde(default)]
    pub expected_frequency: Option<f64>,
    #[serde(default)]
    pub sample_budget: Option<usize>,

    // three-ball-sweep
    #[serde(default)]
    pub triples: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub variants: Option<Vec<Variant>>,
    #[serde(default)]
    pub beta_constant: Option<f64>,
    /// Upper bound asserted on every calibrated constant.
    #[serde(default)]
    pub c_max: Option<f64>,

    // vanish-order
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub bound: Option<BoundSpec>,
    #[serde(default)]
    pub expected_orders: Option<Vec<f64>>,

    // chain
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub r1: Option<f64>,
    #[serde(default)]
    pub target: Option<Vec<f64>>,
    #[serde(default)]
    pub variant: Option<Variant>,

    // doubling
    #[serde(default)]
    pub expected_ratio: Option<f64>,
    /// Allowed relative spread of the implied doubling constant.
    #[serde(default)]
    pub stability: Option<f64>,
}

pub const DEFAULT_WINDOW: [f64; 2] = [1e-2, 1e-1];
pub const DEFAULT_FIT_SAMPLES: usize = 12;

fn in_unit(path: &str, r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(cfg_err(path, format!("radius {r} must lie in (0, 1)")))
    }
}

impl ExperimentConfig {
    pub fn minimal(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            field: None,
            fields: None,
            radii: None,
            alpha: 0.0,
            center: None,
            orders: QuadOrders::default(),
            self_check: false,
            seed: 0,
            tolerances: Tolerances::default(),
            constant: None,
            expected_frequency: None,
            sample_budget: None,
            triples: None,
            variants: None,
            beta_constant: None,
            c_max: None,
            window: None,
            samples: None,
            bound: None,
            expected_orders: None,
            r: None,
            r1: None,
            target: None,
            variant: None,
            expected_ratio: None,
            stability: None,
        }
    }

    pub fn center_point(&self) -> Point {
        self.center.as_deref().map(point).unwrap_or(ORIGIN)
    }

    pub fn field_spec(&self) -> Result<&FieldSpec> {
        self.field.as_ref().ok_or_else(|| cfg_err("field", format!("required for `{}`", self.kind)))
    }

    /// `fields`, or the single `field` as a one-element list.
    pub fn field_specs(&self) -> Result<Vec<FieldSpec>> {
        match (&self.fields, &self.field) {
            (Some(f), _) if !f.is_empty() => Ok(f.clone()),
            (_, Some(f)) => Ok(vec![f.clone()]),
            _ => Err(cfg_err("fields", format!("required for `{}`", self.kind))),
        }
    }

    pub fn radius_grid(&self) -> Result<Vec<f64>> {
        self.radii
            .as_ref()
            .ok_or_else(|| cfg_err("radii", format!("required for `{}`", self.kind)))?
            .resolve()
    }

    pub fn sweep_variants(&self) -> Vec<Variant> {
        self.variants.clone().unwrap_or_else(|| vec![Variant::L2Schrodinger])
    }

    pub fn sweep_triples(&self) -> Vec<[f64; 3]> {
        self.triples.clone().unwrap_or_else(|| vec![[0.1, 0.2, 0.9]])
    }

    pub fn chain_variant(&self) -> Variant {
        self.variant.unwrap_or(Variant::LinfSchrodinger)
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.orders.radial < MIN_QUAD_ORDER || self.orders.angular < MIN_QUAD_ORDER {
            return Err(cfg_err("orders", format!("quadrature orders must be at least {MIN_QUAD_ORDER}")));
        }
        if !(self.alpha >= 0.0) {
            return Err(cfg_err("alpha", "must be nonnegative"));
        }
        if let Some(c) = &self.center {
            if c.len() > 3 {
                return Err(cfg_err("center", "at most three coordinates"));
            }
        }
        if let Some(c) = self.constant {
            if !(c >= 0.0) {
                return Err(cfg_err("constant", "must be nonnegative"));
            }
        }
        if let Some(b) = self.sample_budget {
            if b < 8 {
                return Err(cfg_err("sample_budget", "must be at least 8"));
            }
        }
        if let Some(f) = &self.field {
            f.validate("field")?;
        }
        if let Some(fs) = &self.fields {
            for (i, f) in fs.iter().enumerate() {
                f.validate(&format!("fields[{i}]"))?;
            }
        }
        if let Some(r) = &self.radii {
            for (i, v) in r.resolve()?.iter().enumerate() {
                in_unit(&format!("radii[{i}]"), *v)?;
            }
        }
        match self.kind {
            ExperimentKind::Profile
            | ExperimentKind::Monotonicity
            | ExperimentKind::Polysystem
            | ExperimentKind::Ucp
            | ExperimentKind::Doubling => {
                self.field_spec()?;
                self.radius_grid()?;
            }
            ExperimentKind::ThreeBallSweep => {
                self.field_specs()?;
                let beta = self.beta_constant.unwrap_or(1.0);
                for (i, t) in self.sweep_triples().iter().enumerate() {
                    for (j, r) in t.iter().enumerate() {
                        in_unit(&format!("triples[{i}][{j}]"), *r)?;
                    }
                    for v in self.sweep_variants() {
                        ThreeBallConfig::new(*t, v)?.with_beta_constant(beta)?;
                    }
                }
            }
            ExperimentKind::VanishOrder => {
                let specs = self.field_specs()?;
                let w = self.window.unwrap_or(DEFAULT_WINDOW);
                in_unit("window[0]", w[0])?;
                in_unit("window[1]", w[1])?;
                if !(w[0] < w[1]) {
                    return Err(cfg_err("window", "need lo < hi"));
                }
                if self.samples.is_some_and(|s| s < crate::order::MIN_FIT_SAMPLES) {
                    return Err(cfg_err("samples", format!("need at least {}", crate::order::MIN_FIT_SAMPLES)));
                }
                if let Some(e) = &self.expected_orders {
                    if e.len() != specs.len() {
                        return Err(cfg_err("expected_orders", "one entry per field"));
                    }
                }
            }
            ExperimentKind::Chain => {
                self.field_spec()?;
                in_unit("r", self.r.unwrap_or(0.01))?;
                in_unit("r1", self.r1.unwrap_or(1e-3))?;
                if !self.chain_variant().is_sup() {
                    return Err(cfg_err("variant", "a chain needs a sup-norm variant"));
                }
                if let Some(t) = &self.target {
                    if t.iter().map(|x| x * x).sum::<f64>().sqrt() > 1.0 + 1e-12 {
                        return Err(cfg_err("target", "must lie in the closed unit ball"));
                    }
                }
            }
        }
        if self.stability.is_some_and(|s| !(s > 0.0)) {
            return Err(cfg_err("stability", "must be positive"));
        }
        Ok(())
    }
}

/// Parses and validates a config; schema errors carry the field path.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Config {
            path,
            reason: e.into_inner().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

/// Reads a config file; relative grid paths resolve against its directory.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| cfg_err(&path.display().to_string(), e.to_string()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let mut config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        path: e.path().to_string(),
        reason: e.into_inner().to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let fix = |f: &mut FieldSpec| {
        if let Some(p) = &f.path {
            if p.is_relative() {
                f.path = Some(base.join(p));
            }
        }
    };
    if let Some(f) = config.field.as_mut() {
        fix(f);
    }
    if let Some(fs) = config.fields.as_mut() {
        fs.iter_mut().for_each(fix);
    }
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_profile_defaults() {
        let c = parse_config(
            r#"{"kind":"profile","field":{"catalog":"harmonic","k":2},"radii":{"min":0.05,"max":0.9,"count":50}}"#,
        )
        .unwrap();
        assert_eq!(c.alpha, 0.0);
        assert_eq!(c.seed, 0);
        assert_eq!(c.orders, QuadOrders::default());
        assert_eq!(c.radius_grid().unwrap().len(), 50);
    }

    #[test]
    fn three_ball_hypothesis_is_named() {
        let err = parse_config(r#"{"kind":"three-ball-sweep","fields":[{"catalog":"harmonic","k":1}],"triples":[[0.1,0.3,0.5]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("0 < r1 < r2 < 2 r2 < r3 < 1"), "{err}");
    }

    #[test]
    fn missing_grid_file() {
        let err = parse_config(
            r#"{"kind":"profile","field":{"catalog":"grid","path":"/nonexistent/u.csv","spacing":0.01},"radii":{"values":[0.1,0.2]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("grid path not found"), "{err}");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let err = parse_config(r#"{"kind":"profile","field":{"catalog":"harmonic","k":"two"}}"#).unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "field.k"),
            e => panic!("{e}"),
        }
        let err = parse_config(r#"{"kind":"profile","field":{"catalog":"harmonic","k":2},"radii":{"values":[0.5,1.5]}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("radii[1]"));
        let err = parse_config(
            r#"{"kind":"profile","field":{"catalog":"harmonic","k":2},"radii":{"values":[0.5]},"orders":{"radial":4,"angular":128}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("orders"));
        let err = parse_config(
            r#"{"kind":"profile","field":{"catalog":"harmonic","k":2},"radii":{"values":[0.5]},"tolerances":{"parts":0}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("tolerances.parts"));
        assert!(parse_config(r#"{"kind":"profile","bogus":1}"#).is_err());
    }
}
