use super::{norm_sq, Point, SharedField, ORIGIN};
use crate::quad::sampling::halton_ball;

/// Which norm of the potential a bound is stated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// `‖V‖_{L∞}`
    Sup,
    /// `‖V‖_{L∞} + ‖∇V‖_{L∞}`
    W1Inf,
}

#[derive(Clone)]
enum Source {
    Constant(f64),
    Affine { offset: f64, slope: Point },
    Field(SharedField),
}

/// A potential `V` together with its norms over the unit ball.
///
/// Norms of constant and affine potentials are exact; potentials backed by
/// a field carry sampled maxima, which are lower bounds of the true norms.
#[derive(Clone)]
pub struct PotentialSpec {
    n: usize,
    source: Source,
    sup_norm: f64,
    w1inf_norm: f64,
    /// Number of sample points behind the norms, `None` when exact.
    resolution: Option<usize>,
}

impl std::fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("n", &self.n)
            .field("sup_norm", &self.sup_norm)
            .field("w1inf_norm", &self.w1inf_norm)
            .field("resolution", &self.resolution)
            .finish()
    }
}

impl PotentialSpec {
    pub fn constant(n: usize, value: f64) -> Self {
        PotentialSpec {
            n,
            source: Source::Constant(value),
            sup_norm: value.abs(),
            w1inf_norm: value.abs(),
            resolution: None,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    /// `V(x) = offset + slope·x`; norms are exact on the unit ball.
    pub fn affine(n: usize, offset: f64, slope: Point) -> Self {
        let g = norm_sq(&slope).sqrt();
        let sup = offset.abs() + g;
        PotentialSpec {
            n,
            source: Source::Affine { offset, slope },
            sup_norm: sup,
            w1inf_norm: sup + g,
            resolution: None,
        }
    }

    /// A potential given by an arbitrary field; norms are sampled.
    pub fn from_field(field: SharedField, sample_budget: usize) -> Self {
        let n = field.dim();
        let mut spec = PotentialSpec {
            n,
            source: Source::Field(field),
            sup_norm: 0.0,
            w1inf_norm: 0.0,
            resolution: Some(sample_budget),
        };
        let (sup, w1) = potential_norms(&spec, sample_budget);
        spec.sup_norm = sup;
        spec.w1inf_norm = w1;
        spec
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &Point) -> f64 {
        match &self.source {
            Source::Constant(c) => *c,
            Source::Affine { offset, slope } => {
                offset + slope[0] * x[0] + slope[1] * x[1] + slope[2] * x[2]
            }
            Source::Field(f) => f.eval(x),
        }
    }

    pub fn grad(&self, x: &Point) -> Point {
        match &self.source {
            Source::Constant(_) => [0.0; 3],
            Source::Affine { slope, .. } => *slope,
            Source::Field(f) => f.grad(x),
        }
    }

    /// The constant value, if the potential is constant.
    pub fn as_constant(&self) -> Option<f64> {
        match self.source {
            Source::Constant(c) => Some(c),
            _ => None,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn w1inf_norm(&self) -> f64 {
        self.w1inf_norm
    }

    pub fn resolution(&self) -> Option<usize> {
        self.resolution
    }

    pub fn is_exact(&self) -> bool {
        self.resolution.is_none()
    }

    /// `max(norm, 1)`: bounds that use `M` assume `M > 1`.
    pub fn effective_m(&self, kind: NormKind) -> f64 {
        let norm = match kind {
            NormKind::Sup => self.sup_norm,
            NormKind::W1Inf => self.w1inf_norm,
        };
        norm.max(1.0)
    }

    /// `v = ‖V̄‖_{L∞} + 1`.
    pub fn v(&self) -> f64 {
        self.sup_norm + 1.0
    }

    /// The same potential with opposite sign (`V̄ = -V` converts between
    /// `Δu = Vu` and `-Δu = V̄u`).
    pub fn negated(&self) -> Self {
        let source = match &self.source {
            Source::Constant(c) => Source::Constant(-c),
            Source::Affine { offset, slope } => Source::Affine {
                offset: -offset,
                slope: [-slope[0], -slope[1], -slope[2]],
            },
            Source::Field(f) => Source::Field(std::sync::Arc::new(super::Scaled::new(f.clone(), -1.0))),
        };
        PotentialSpec {
            source,
            ..self.clone()
        }
    }
}

/// Sampled `(sup |V|, sup |V| + sup |∇V|)` over the unit ball.
///
/// Both values are maxima over a deterministic low-discrepancy set that
/// includes the boundary sphere, i.e. lower bounds that converge as the
/// budget grows.
pub fn potential_norms(v: &PotentialSpec, sample_budget: usize) -> (f64, f64) {
    let points = halton_ball(v.dim(), &ORIGIN, 1.0, sample_budget.max(1), 0);
    let mut sup: f64 = 0.0;
    let mut gsup: f64 = 0.0;
    for x in &points {
        sup = sup.max(v.eval(x).abs());
        gsup = gsup.max(norm_sq(&v.grad(x)).sqrt());
    }
    (sup, sup + gsup)
}
