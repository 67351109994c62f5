//! Solvers for the parabolic loci of the family: tongue roots on `|a| = 2`,
//! boundary curves continued in `r`, tips (multiplicity-3 system), extended
//! tongues in the annulus `1 < |a| < 2`, and the near-tip fixed-point probe.

mod boundary;
mod extended;
mod probe;
mod root;

pub use boundary::{
    classify_boundary_point, find_tip, find_tip_of, trace_boundary, trace_boundary_with,
    TipResult, TraceSettings,
};
pub use extended::{extended_tongue_slice, ExtendedSlice, ProfileSample};
pub use probe::{tip_probe, BifurcatedPair, ProbeKind, TipProbe};
pub use root::{find_root, TongueRoot};

use num_complex::Complex64;
use thiserror::Error;

use crate::cycle::TongueType;
use crate::lift::LiftError;

#[derive(Debug, Error)]
pub enum LocusError {
    #[error("winding index k = {k} out of range for period {p} (need 0 <= k <= 2^p - 2)")]
    WindingOutOfRange { p: u32, k: u64 },
    #[error("Newton iteration diverged while {context}; last point r = {r}, alpha = {alpha}, x = {x}")]
    NewtonDivergence {
        context: &'static str,
        r: f64,
        alpha: f64,
        x: f64,
    },
    #[error("fold detected: boundary is not a local graph over r near r = {0}")]
    FoldDetected(f64),
    #[error("singular Jacobian while {0}")]
    SingularJacobian(&'static str),
    #[error("solution collapsed to exact period {m}, expected {p}")]
    PeriodCollapse { p: u32, m: u32 },
    #[error("radius {0} outside the annulus domain (1, 2]")]
    OutOfAnnulus(f64),
    #[error("parabolic point attracting from both sides; one-sided attraction is violated")]
    TwoSidedAttraction,
    #[error("point does not satisfy the parabolic residuals (|value| = {value:.3e}, |multiplier - 1| = {multiplier:.3e})")]
    NotParabolic { value: f64, multiplier: f64 },
    #[error("located only {found} of the 3 fixed points near the seed")]
    MissingFixedPoints { found: usize },
    #[error("parameter is degenerate or inside the closed unit disk")]
    BadParameter,
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Which locus a boundary sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundarySide {
    Left,
    Right,
    Tip,
    /// Exterior extended-tongue boundary, parabolic multiplier `+1`.
    MultiplierPlusOne,
    /// Interior extended-tongue boundary, parabolic multiplier `-1`.
    MultiplierMinusOne,
}

impl std::fmt::Display for BoundarySide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BoundarySide::Left => "left",
            BoundarySide::Right => "right",
            BoundarySide::Tip => "tip",
            BoundarySide::MultiplierPlusOne => "multiplier+1",
            BoundarySide::MultiplierMinusOne => "multiplier-1",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for BoundarySide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(BoundarySide::Left),
            "right" => Ok(BoundarySide::Right),
            "tip" => Ok(BoundarySide::Tip),
            "multiplier+1" => Ok(BoundarySide::MultiplierPlusOne),
            "multiplier-1" => Ok(BoundarySide::MultiplierMinusOne),
            other => Err(format!("unknown boundary side {other:?}")),
        }
    }
}

/// One sample on a parabolic locus, in `(r, alpha)` coordinates with the
/// unreduced lifted angle `x` of the parabolic point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub r: f64,
    pub alpha: f64,
    /// Lifted angle; kept unreduced so that the winding `k` stays constant
    /// along a continuation.
    pub x: f64,
    pub multiplier: f64,
    /// Lift winding: `h^p(x) = x + k` along this locus.
    pub k: i64,
    pub period: u32,
    pub side: BoundarySide,
}

impl BoundaryPoint {
    pub fn a(&self) -> Complex64 {
        Complex64::from_polar(self.r, std::f64::consts::TAU * self.alpha)
    }
}

/// A traced boundary arc of one tongue, with strictly increasing `r`.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub tongue: TongueType,
    pub side: BoundarySide,
    pub samples: Vec<BoundaryPoint>,
    pub provenance: Provenance,
}

/// Step sizes and tolerances a curve was produced with.
#[derive(Debug, Clone, Copy)]
pub struct Provenance {
    pub r_step: f64,
    pub residual_tol: f64,
    pub reached_tip: bool,
}
