//! Plane iteration of the critical orbits, detection of attracting cycles on
//! the unit circle, and the tongue type via the semiconjugacy.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::lift::Lift;
use crate::map::{critical_points, is_degenerate, BlaschkeMap, ExtComplex};
use crate::tolerances::{Tolerances, ESCAPE_LAMBDA, INNER_CAPTURE};

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("degenerate parameter")]
    DegenerateParameter,
    #[error("cycle detection requires |a| > 1, got |a| = {0}")]
    InsideUnitDisk(f64),
    #[error("not in any tongue")]
    NotInAnyTongue,
    #[error("parabolic boundary parameter, not tongue interior")]
    ParabolicBoundary,
    #[error("type undefined for |a| < 2; use extended-tongue membership")]
    TypeUndefinedInAnnulus,
    #[error("semiconjugacy value {value} is {distance:.3e} from the nearest admissible rational")]
    TypeNotRational { value: f64, distance: f64 },
}

/// Stability of a circle cycle, from its real multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Superattracting,
    Attracting,
    ParabolicPlusOne,
    ParabolicMinusOne,
    Repelling,
}

impl Stability {
    pub fn from_multiplier(multiplier: f64, tolerances: &Tolerances) -> Self {
        if (multiplier - 1.0).abs() < tolerances.parabolic {
            Stability::ParabolicPlusOne
        } else if (multiplier + 1.0).abs() < tolerances.parabolic {
            Stability::ParabolicMinusOne
        } else if multiplier.abs() < 1e-8 {
            Stability::Superattracting
        } else if multiplier.abs() < 1.0 {
            Stability::Attracting
        } else {
            Stability::Repelling
        }
    }

    pub fn is_attracting(self) -> bool {
        matches!(self, Stability::Attracting | Stability::Superattracting)
    }
}

/// A detected periodic cycle on the unit circle, in lift coordinates of the
/// rotated normal form (angles relative to `arg a`).
#[derive(Debug, Clone, PartialEq)]
pub struct CircleCycle {
    /// Lifted angles in `[0, 1)`, in dynamical order.
    pub points: Vec<f64>,
    pub period: usize,
    /// Real multiplier, the product of lift derivatives over the cycle.
    pub multiplier: f64,
    /// Index into `points` of the cycle point whose immediate basin holds
    /// the critical points (the limit of the critical orbit sampled every
    /// `period` steps).
    pub marked_index: usize,
    pub stability: Stability,
}

impl CircleCycle {
    pub fn marked_point(&self) -> f64 {
        self.points[self.marked_index]
    }
}

/// Rational type `k/(2^p - 1)` of a tongue, stored with the exact period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TongueType {
    k: u64,
    p: u32,
}

impl TongueType {
    /// Normalizes `k/(2^p - 1)` to its exact period under doubling.
    pub fn new(k: u64, p: u32) -> Self {
        assert!(p >= 1 && p < 63, "period out of range");
        let den = (1u64 << p) - 1;
        let k = k % den;
        for m in 1..p {
            if p % m != 0 {
                continue;
            }
            let small = (1u64 << m) - 1;
            if (k * small) % den == 0 {
                return Self { k: k * small / den, p: m };
            }
        }
        Self { k, p }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn period(&self) -> u32 {
        self.p
    }

    /// The type as a real number in `[0, 1)`.
    pub fn value(&self) -> f64 {
        self.k as f64 / ((1u64 << self.p) - 1) as f64
    }
}

impl std::fmt::Display for TongueType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.k, (1u64 << self.p) - 1)
    }
}

/// Iteration limits and thresholds for orbit classification.
#[derive(Debug, Clone, Copy)]
pub struct OrbitSettings {
    pub max_iters: usize,
    pub max_period: usize,
    pub escape_lambda: f64,
    /// `||z| - 1|` bound for counting a limit cycle as lying on the circle.
    pub circle_tol: f64,
    /// Closeness of successive period-`p` returns counted as convergence.
    pub return_tol: f64,
}

impl Default for OrbitSettings {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            max_period: 64,
            escape_lambda: ESCAPE_LAMBDA,
            circle_tol: 1e-9,
            return_tol: 1e-9,
        }
    }
}

/// Where an orbit ends up.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitFate {
    Escaped { iterations: usize },
    ToZero { iterations: usize },
    CircleCycle(CircleCycle),
    OffCircleCycle {
        points: Vec<Complex64>,
        period: usize,
        multiplier: Complex64,
    },
    Undecided,
}

/// Classifies the orbit of `start` under `B_a`.
///
/// Convergence to a period-`p` cycle requires three consecutive period-`p`
/// returns within `return_tol`, with non-increasing return distances so that
/// transits past a repelling cycle are not mistaken for convergence.
pub fn orbit_fate(a: Complex64, start: Complex64, settings: &OrbitSettings) -> OrbitFate {
    let map = BlaschkeMap::new(a);
    let escape = settings.escape_lambda * (a.norm() + 1.0);
    let window = settings.max_period + 3;
    let mut history: Vec<Complex64> = Vec::with_capacity(window);
    let mut z = start;
    for n in 0..settings.max_iters {
        if history.len() == window {
            history.remove(0);
        }
        history.push(z);
        if let Some((period, phase_step)) = converged_period(&history, n, settings) {
            // The returns converge before the orbit reaches its limit (the
            // gap is roughly return/(1 - multiplier)), so polish the marked
            // point with Newton before deciding whether the cycle sits on
            // the circle.
            let marked_offset = (period - (phase_step + 1) % period) % period;
            let raw = history[history.len() - period + marked_offset];
            let marked = polish_plane_fixed_point(&map, raw, period).unwrap_or(raw);
            let mut cycle = Vec::with_capacity(period);
            let mut w = marked;
            let mut on_circle = true;
            for _ in 0..period {
                cycle.push(w);
                on_circle &= (w.norm() - 1.0).abs() < settings.circle_tol;
                w = match map.eval_finite(w) {
                    ExtComplex::Finite(v) => v,
                    ExtComplex::Infinity => break,
                };
            }
            if cycle.len() == period {
                if on_circle {
                    if let Some(c) = build_circle_cycle(a, &cycle, period) {
                        return OrbitFate::CircleCycle(c);
                    }
                } else {
                    let multiplier = map.multiplier(cycle[0], period).unwrap_or(Complex64::ONE);
                    return OrbitFate::OffCircleCycle { points: cycle, period, multiplier };
                }
            }
        }
        z = match map.eval_finite(z) {
            ExtComplex::Finite(w) => w,
            ExtComplex::Infinity => return OrbitFate::Escaped { iterations: n + 1 },
        };
        if !z.is_finite() || z.norm() > escape {
            return OrbitFate::Escaped { iterations: n + 1 };
        }
        if z.norm() < INNER_CAPTURE {
            return OrbitFate::ToZero { iterations: n + 1 };
        }
    }
    OrbitFate::Undecided
}

/// Smallest period with three consecutive non-increasing returns below the
/// tolerance, together with the orbit-step index of the newest point modulo
/// that period (for locating the marked point).
fn converged_period(
    history: &[Complex64],
    step: usize,
    settings: &OrbitSettings,
) -> Option<(usize, usize)> {
    let len = history.len();
    for p in 1..=settings.max_period {
        if len < p + 3 {
            break;
        }
        let d0 = (history[len - 1] - history[len - 1 - p]).norm();
        if d0 >= settings.return_tol {
            continue;
        }
        let d1 = (history[len - 2] - history[len - 2 - p]).norm();
        let d2 = (history[len - 3] - history[len - 3 - p]).norm();
        if d1 < settings.return_tol
            && d2 < settings.return_tol
            && d0 <= d1 + 1e-15
            && d1 <= d2 + 1e-15
        {
            return Some((p, step % p));
        }
    }
    None
}

/// Newton polish of a fixed point of `B^p` in the plane, from a nearby
/// seed. Near-parabolic points (|(B^p)' - 1| below 1e-8) are returned as-is.
fn polish_plane_fixed_point(map: &BlaschkeMap, z0: Complex64, p: usize) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..30 {
        let mut w = z;
        let mut d = Complex64::ONE;
        for _ in 0..p {
            d *= map.derivative(w).ok()?;
            w = map.eval_finite(w).finite()?;
        }
        let fp = d - Complex64::ONE;
        if fp.norm() < 1e-8 {
            return Some(z);
        }
        let step = (w - z) / fp;
        z -= step;
        if step.norm() < 1e-14 {
            break;
        }
    }
    Some(z)
}

/// Converts a polished plane cycle into lift coordinates (its first entry
/// being the marked point) and classifies its stability.
fn build_circle_cycle(a: Complex64, plane_points: &[Complex64], period: usize) -> Option<CircleCycle> {
    let lift = Lift::new(a.norm(), a.arg() / TAU).ok()?;
    let alpha = a.arg() / TAU;
    let mut x = (plane_points[0].arg() / TAU - alpha).rem_euclid(1.0);

    // Polish the marked point with Newton on h^p(x) - x - k unless the
    // cycle is near-parabolic, where the detected point is kept.
    let k = (lift.iterate(x, period) - x).round();
    let d1 = lift.jet(x, period).d1;
    if (d1 - 1.0).abs() > 1e-4 {
        for _ in 0..40 {
            let j = lift.jet(x, period);
            let g = j.value - x - k;
            let gp = j.d1 - 1.0;
            let step = g / gp;
            x -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
    }

    let mut points = Vec::with_capacity(period);
    let mut multiplier = 1.0;
    let mut y = x.rem_euclid(1.0);
    for _ in 0..period {
        points.push(y);
        multiplier *= lift.derivative(y);
        y = lift.eval(y).rem_euclid(1.0);
    }
    // Exactness of the period: a shorter cycle would report duplicate points.
    for i in 0..period {
        for j in (i + 1)..period {
            if (points[i] - points[j]).abs() < 1e-7
                || (points[i] - points[j]).abs() > 1.0 - 1e-7
            {
                return None;
            }
        }
    }
    let tolerances = Tolerances::default();
    Some(CircleCycle {
        points,
        period,
        multiplier,
        marked_index: 0,
        stability: Stability::from_multiplier(multiplier, &tolerances),
    })
}

fn check_parameter(a: Complex64) -> Result<(), DynamicsError> {
    if is_degenerate(a) {
        return Err(DynamicsError::DegenerateParameter);
    }
    if a.norm() <= 1.0 {
        return Err(DynamicsError::InsideUnitDisk(a.norm()));
    }
    Ok(())
}

/// Tracks the orbit of `c_plus(a)` and returns the attracting or parabolic
/// circle cycle it converges to, if any. Orbits that escape, fall into the
/// basin of 0, converge to a cycle off the circle, or fail to resolve within
/// `max_iters` yield `None`.
pub fn detect_cycle(
    a: Complex64,
    max_period: usize,
    max_iters: usize,
) -> Result<Option<CircleCycle>, DynamicsError> {
    check_parameter(a)?;
    let (c_plus, _) = critical_points(a).map_err(|_| DynamicsError::DegenerateParameter)?;
    let settings = OrbitSettings { max_period, max_iters, ..OrbitSettings::default() };
    match orbit_fate(a, c_plus, &settings) {
        OrbitFate::CircleCycle(c) => Ok(Some(c)),
        _ => Ok(None),
    }
}

/// Runs cycle detection from both free critical points. For `|a| >= 2` the
/// two critical orbits are tied by the circle symmetry and agree; in the
/// annulus `1 < |a| < 2` they are independent and may settle on different
/// cycles.
pub fn detect_cycle_pair(
    a: Complex64,
    max_period: usize,
    max_iters: usize,
) -> Result<(Option<CircleCycle>, Option<CircleCycle>), DynamicsError> {
    check_parameter(a)?;
    let (c_plus, c_minus) = critical_points(a).map_err(|_| DynamicsError::DegenerateParameter)?;
    let settings = OrbitSettings { max_period, max_iters, ..OrbitSettings::default() };
    let from_plus = match orbit_fate(a, c_plus, &settings) {
        OrbitFate::CircleCycle(c) => Some(c),
        _ => None,
    };
    let from_minus = match orbit_fate(a, c_minus, &settings) {
        OrbitFate::CircleCycle(c) => Some(c),
        _ => None,
    };
    Ok((from_plus, from_minus))
}

/// The tongue type of `a`: the semiconjugacy value of the marked cycle
/// point, snapped to the nearest `k/(2^p - 1)` for the detected period.
pub fn type_of(a: Complex64) -> Result<TongueType, DynamicsError> {
    type_of_with(a, &OrbitSettings::default(), &Tolerances::default())
}

pub fn type_of_with(
    a: Complex64,
    settings: &OrbitSettings,
    tolerances: &Tolerances,
) -> Result<TongueType, DynamicsError> {
    if a.norm() < 2.0 {
        return Err(DynamicsError::TypeUndefinedInAnnulus);
    }
    let cycle = detect_cycle(a, settings.max_period, settings.max_iters)?
        .ok_or(DynamicsError::NotInAnyTongue)?;
    match cycle.stability {
        Stability::ParabolicPlusOne | Stability::ParabolicMinusOne => {
            return Err(DynamicsError::ParabolicBoundary)
        }
        Stability::Repelling => return Err(DynamicsError::NotInAnyTongue),
        _ => {}
    }
    let lift = Lift::new(a.norm(), a.arg() / TAU).map_err(|_| DynamicsError::DegenerateParameter)?;
    let tau = lift
        .semiconjugacy(cycle.marked_point(), tolerances.semiconjugacy)
        .map_err(|_| DynamicsError::TypeUndefinedInAnnulus)?
        .rem_euclid(1.0);
    let den = (1u64 << cycle.period) - 1;
    let k = (tau * den as f64).round() as u64 % den.max(1);
    let snapped = k as f64 / den as f64;
    let distance = (tau - snapped).abs().min((tau - snapped - 1.0).abs());
    if distance > tolerances.tongue_type {
        return Err(DynamicsError::TypeNotRational { value: tau, distance });
    }
    Ok(TongueType::new(k, cycle.period as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tongue_type_normalizes_exact_period() {
        // 5/15 is the period-2 point 1/3 in disguise.
        let t = TongueType::new(5, 4);
        assert_eq!(t.k(), 1);
        assert_eq!(t.period(), 2);
        assert_eq!(TongueType::new(0, 3), TongueType::new(0, 1));
        let t = TongueType::new(3, 4);
        assert_eq!((t.k(), t.period()), (3, 4));
        assert_eq!(t.to_string(), "3/15");
    }

    #[test]
    fn superattracting_fixed_point_at_root_of_fixed_tongue() {
        let cycle = detect_cycle(c(2.0, 0.0), 64, 50_000).unwrap().unwrap();
        assert_eq!(cycle.period, 1);
        assert!(cycle.points[0].min(1.0 - cycle.points[0]) < 1e-9);
        assert!(cycle.multiplier.abs() < 1e-9);
        assert_eq!(cycle.stability, Stability::Superattracting);
    }

    #[test]
    fn attracting_fixed_point_inside_fixed_tongue() {
        let cycle = detect_cycle(c(2.5, 0.0), 64, 50_000).unwrap().unwrap();
        assert_eq!(cycle.period, 1);
        assert!(cycle.multiplier.abs() < 1.0);
        assert!(cycle.stability.is_attracting());
    }

    #[test]
    fn no_circle_attractor_beyond_radius_three() {
        assert!(detect_cycle(c(3.2, 0.0), 64, 20_000).unwrap().is_none());
    }

    #[test]
    fn rejects_degenerate_and_inner_parameters() {
        assert_eq!(
            detect_cycle(c(1.0, 0.0), 8, 100),
            Err(DynamicsError::DegenerateParameter)
        );
        assert_eq!(
            detect_cycle(c(0.5, 0.0), 8, 100),
            Err(DynamicsError::InsideUnitDisk(0.5))
        );
    }

    #[test]
    fn type_of_fixed_tongue_parameters() {
        let t = type_of(c(2.0, 0.0)).unwrap();
        assert_eq!((t.k(), t.period()), (0, 1));
        assert_eq!(t.value(), 0.0);
        let t = type_of(c(2.9, 0.0)).unwrap();
        assert_eq!((t.k(), t.period()), (0, 1));
    }

    #[test]
    fn type_of_rejects_annulus_and_escape_region() {
        assert_eq!(type_of(c(1.5, 0.0)), Err(DynamicsError::TypeUndefinedInAnnulus));
        assert_eq!(type_of(c(3.5, 0.0)), Err(DynamicsError::NotInAnyTongue));
    }

    #[test]
    fn symmetric_parameters_share_period_and_multiplier() {
        let xi = Complex64::from_polar(1.0, TAU / 3.0);
        let a = c(2.43, 0.02);
        let base = detect_cycle(a, 64, 50_000).unwrap().unwrap();
        for b in [a * xi, a * xi * xi, a.conj()] {
            let other = detect_cycle(b, 64, 50_000).unwrap().unwrap();
            assert_eq!(other.period, base.period);
            assert!((other.multiplier - base.multiplier).abs() < 1e-6);
        }
    }

    #[test]
    fn annulus_pair_reports_both_critical_orbits() {
        let (plus, minus) = detect_cycle_pair(c(1.9, 0.0), 64, 50_000).unwrap();
        let plus = plus.unwrap();
        let minus = minus.unwrap();
        assert_eq!(plus.period, 1);
        assert_eq!(minus.period, 1);
        assert!((plus.multiplier - minus.multiplier).abs() < 1e-8);
    }
}
