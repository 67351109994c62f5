//! Computation and rendering of the tongue structure in the parameter plane
//! of the degree-4 Blaschke family `B_a(z) = z^3 (z - a)/(1 - conj(a) z)`.
//!
//! The family preserves the unit circle; for `|a| >= 2` its circle
//! restriction is a degree-two cover, semiconjugate to the doubling map.
//! Parameters whose circle map carries an attracting cycle organize into
//! tongues indexed by a rational type `k/(2^p - 1)`. This crate computes
//! the associated loci and diagnostics:
//!
//! * [`map`] — evaluation, derivatives, critical points, parameter
//!   symmetries and escape bounds;
//! * [`lift`] — the circle-map lift, its derivatives and the semiconjugacy;
//! * [`cycle`] — critical-orbit tracking and cycle/type detection;
//! * [`locus`] — tongue roots on `|a| = 2`, boundary continuation, tips,
//!   extended tongues in the annulus `1 < |a| < 2`, and the near-tip
//!   fixed-point probe;
//! * [`index`] — holomorphic fixed-point indices in multiplier and residue
//!   form, and the attracting/repelling diagnosis of bifurcated pairs;
//! * [`render`] — parameter- and dynamical-plane scans and curve overlays;
//! * [`report`] — serializable reports and the CSV curve format.

pub mod cycle;
pub mod index;
pub mod lift;
pub mod locus;
pub mod map;
pub mod render;
pub mod report;
pub mod tolerances;

pub use cycle::{detect_cycle, detect_cycle_pair, type_of, CircleCycle, Stability, TongueType};
pub use lift::Lift;
pub use map::{canonicalize, critical_points, escape_radius, BlaschkeMap, ExtComplex, GMap, Param};
pub use tolerances::Tolerances;
