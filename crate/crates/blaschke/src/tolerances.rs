//! Central tolerance configuration shared by every solver and classifier.

/// Numerical tolerances used across the crate.
///
/// All solvers take a `Tolerances` value so that thresholds live in one
/// place instead of being scattered as magic numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Residual bound for root/boundary/tip solves.
    pub residual: f64,
    /// Newton step size below which an iteration is considered converged.
    pub newton_step: f64,
    /// Distance at which an orbit is assigned to a basin.
    pub basin: f64,
    /// `||z| - 1|` bound for treating a point as lying on the unit circle.
    pub circle: f64,
    /// `|multiplier -/+ 1|` bound for flagging a cycle as parabolic.
    pub parabolic: f64,
    /// Distance of a semiconjugacy value to the nearest `k/(2^p - 1)`
    /// accepted when assigning a type.
    pub tongue_type: f64,
    /// Absolute tolerance for the semiconjugacy limit.
    pub semiconjugacy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-12,
            newton_step: 1e-12,
            basin: 1e-9,
            circle: 1e-9,
            parabolic: 1e-6,
            tongue_type: 1e-6,
            semiconjugacy: 1e-8,
        }
    }
}

/// Orbits entering `|z| < INNER_CAPTURE` are attributed to the basin of 0.
/// Deliberately conservative; the superattracting fixed point at the origin
/// has local degree 3, so this threshold is reached quickly anyway.
pub const INNER_CAPTURE: f64 = 1e-6;

/// Default escape factor lambda for the certified escape radius
/// `lambda * (|a| + 1)`.
pub const ESCAPE_LAMBDA: f64 = 2.0;

/// Condition-number threshold at which boundary continuation hands the
/// solve over to the three-equation tip system.
pub const TIP_HANDOFF_CONDITION: f64 = 1e8;

/// `|second derivative|` threshold that also triggers the tip handoff.
pub const TIP_HANDOFF_SECOND_DERIV: f64 = 1e-4;
