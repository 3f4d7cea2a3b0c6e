use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("ball of radius {radius} centred at {center:?} leaves the domain of `{field}`")]
    BallOutsideDomain {
        field: String,
        center: Vec<f64>,
        radius: f64,
    },

    #[error("Bessel series argument {arg} exceeds the supported range {max}")]
    BesselArgument { arg: f64, max: f64 },

    #[error("grid path not found: {0}")]
    GridNotFound(PathBuf),

    #[error("malformed grid file (line {line}): {reason}")]
    MalformedGrid { line: usize, reason: String },

    #[error("grid is not uniform: {0}")]
    NonUniformGrid(String),

    #[error("grid sample at line {line} is not finite")]
    NonFiniteSample { line: usize },

    #[error("PDE residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    PdeResidual { residual: f64, tolerance: f64 },

    #[error("closure residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ClosureResidual { residual: f64, tolerance: f64 },

    #[error("iterated Laplacian of order {order} is not available for `{field}`")]
    MissingLaplacianPower { field: String, order: usize },

    #[error("weighted mass vanishes at every radius (dropped: {dropped:?})")]
    VanishingMass { dropped: Vec<f64> },

    #[error("radius step {step:.3e} exceeds {max_step:.3e}; refine the radius grid and re-run")]
    GridTooCoarse { step: f64, max_step: f64 },

    #[error("radii {radii:?} violate the {variant} hypothesis {hypothesis}")]
    ThreeBallHypothesis {
        variant: &'static str,
        hypothesis: &'static str,
        radii: [f64; 3],
    },

    #[error("mass is numerically zero across the fit window [{lo}, {hi}]: order exceeds resolvable range")]
    NumericallyZero { lo: f64, hi: f64 },

    #[error("mass on the inner ball is below the guard threshold ({value:.3e})")]
    InnerMassGuard { value: f64 },

    #[error("normalization hypothesis sup_{{|x|<=1}}|u(x)| >= 1 fails (measured {measured:.6e})")]
    Normalization { measured: f64 },

    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
