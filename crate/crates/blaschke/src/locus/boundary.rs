//! Continuation of the saddle-node boundary of a tongue and the
//! multiplicity-3 tip solve.

use super::root::find_root;
use super::{BoundaryCurve, BoundaryPoint, BoundarySide, LocusError, Provenance};
use crate::cycle::TongueType;
use crate::lift::{IterateJet, Lift};
use crate::tolerances::{TIP_HANDOFF_CONDITION, TIP_HANDOFF_SECOND_DERIV};

#[derive(Debug, Clone, Copy)]
pub struct TraceSettings {
    pub r_step: f64,
    pub min_r_step: f64,
    pub residual_tol: f64,
    /// Append the tip as the final sample once the handoff solve succeeds.
    pub append_tip: bool,
}

impl Default for TraceSettings {
    fn default() -> Self {
        Self {
            r_step: 1e-3,
            min_r_step: 1e-7,
            residual_tol: 1e-10,
            append_tip: true,
        }
    }
}

/// Converged tip of a tongue with the residuals of the three defining
/// equations, re-evaluated at the solution.
#[derive(Debug, Clone, Copy)]
pub struct TipResult {
    pub point: BoundaryPoint,
    /// `|h^p(x) - x - k|`, `|(h^p)'(x) - 1|`, `|(h^p)''(x)|`.
    pub residuals: [f64; 3],
}

pub(super) fn solve2(a: [[f64; 2]; 2], rhs: [f64; 2]) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < 1e-300 || !det.is_finite() {
        return None;
    }
    Some([
        (rhs[0] * a[1][1] - rhs[1] * a[0][1]) / det,
        (rhs[1] * a[0][0] - rhs[0] * a[1][0]) / det,
    ])
}

fn solve3(a: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d.abs() < 1e-300 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for col in 0..3 {
        let mut m = a;
        for row in 0..3 {
            m[row][col] = rhs[row];
        }
        out[col] = det(&m) / d;
    }
    Some(out)
}

/// Crude 1-norm condition estimate of a 2x2 matrix.
fn condition2(a: [[f64; 2]; 2]) -> f64 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det == 0.0 {
        return f64::INFINITY;
    }
    let norm = (a[0][0].abs() + a[0][1].abs()).max(a[1][0].abs() + a[1][1].abs());
    let inv_norm = (a[1][1].abs() + a[0][1].abs()).max(a[1][0].abs() + a[0][0].abs()) / det.abs();
    norm * inv_norm
}

/// Newton solve of the saddle-node system at fixed radius:
/// `h^p(x) - x - k = 0`, `(h^p)'(x) - 1 = 0` in the unknowns `(alpha, x)`.
fn parabolic_corrector(
    r: f64,
    p: u32,
    k: i64,
    alpha0: f64,
    x0: f64,
    tol: f64,
) -> Result<(f64, f64, IterateJet), LocusError> {
    let mut alpha = alpha0;
    let mut x = x0;
    for _ in 0..60 {
        let lift = Lift::new(r, alpha)?;
        let j = lift.jet(x, p as usize);
        let f = [j.value - x - k as f64, j.d1 - 1.0];
        if f[0].abs() < tol && f[1].abs() < tol {
            return Ok((alpha, x, j));
        }
        let jac = [[j.da, j.d1 - 1.0], [j.d1_da, j.d2]];
        let step = solve2(jac, [-f[0], -f[1]])
            .ok_or(LocusError::SingularJacobian("correcting a boundary point"))?;
        if !step[0].is_finite() || !step[1].is_finite() || step[0].abs() > 0.3 || step[1].abs() > 0.3
        {
            return Err(LocusError::NewtonDivergence {
                context: "correcting a boundary point",
                r,
                alpha,
                x,
            });
        }
        alpha += step[0];
        x += step[1];
    }
    Err(LocusError::NewtonDivergence { context: "correcting a boundary point", r, alpha, x })
}

/// 1D Newton continuation of the attracting periodic point at fixed
/// `(r, alpha)`: solves `h^p(x) = x + k` from a nearby seed. Returns the
/// point and its multiplier, or `None` past the saddle-node.
fn attracting_point(lift: &Lift, p: u32, k: i64, x_seed: f64) -> Option<(f64, f64)> {
    let mut x = x_seed;
    for _ in 0..50 {
        let j = lift.jet(x, p as usize);
        let g = j.value - x - k as f64;
        let gp = j.d1 - 1.0;
        if gp.abs() < 1e-12 {
            return None;
        }
        let step = g / gp;
        x -= step;
        if (x - x_seed).abs() > 0.2 || !x.is_finite() {
            return None;
        }
        if step.abs() < 1e-14 {
            let j = lift.jet(x, p as usize);
            if (j.value - x - k as f64).abs() < 1e-10 {
                return Some((x, j.d1));
            }
            return None;
        }
    }
    None
}

/// Locates the parabolic boundary point on `|a| = 2` by walking `alpha`
/// outward from the root (tracking the attracting point) until the
/// multiplier climbs towards 1, then finishing with the two-equation
/// Newton solve.
fn boundary_start(
    root_alpha: f64,
    p: u32,
    k: i64,
    side: BoundarySide,
    tol: f64,
) -> Result<(f64, f64, IterateJet), LocusError> {
    let mut delta: f64 = match side {
        BoundarySide::Left => -1e-3,
        BoundarySide::Right => 1e-3,
        _ => unreachable!("trace sides are left/right"),
    };
    let mut alpha = root_alpha;
    let mut x = 0.0;
    loop {
        if (alpha - root_alpha).abs() > 1.0 / 3.0 {
            return Err(LocusError::NewtonDivergence {
                context: "walking to the boundary on |a| = 2",
                r: 2.0,
                alpha,
                x,
            });
        }
        let next_alpha = alpha + delta;
        match Lift::new(2.0, next_alpha)
            .ok()
            .and_then(|l| attracting_point(&l, p, k, x))
        {
            Some((nx, d1)) if d1 < 1.0 => {
                alpha = next_alpha;
                x = nx;
                if d1 > 0.9 {
                    if let Ok(found) = parabolic_corrector(2.0, p, k, alpha, x, tol) {
                        return Ok(found);
                    }
                    delta *= 0.5;
                }
            }
            _ => {
                // Stepped past the saddle-node (or onto the repelling
                // branch); retreat.
                delta *= 0.5;
                if delta.abs() < 1e-12 {
                    return parabolic_corrector(2.0, p, k, alpha, x, tol);
                }
            }
        }
    }
}

/// Traces one side of the boundary of the tongue `tau` from `|a| = 2`
/// towards its tip by predictor-corrector continuation in `r`. The returned
/// samples have strictly increasing `r`; when the corrector degenerates near
/// the tip the solve hands off to [`find_tip`] and (by default) appends the
/// tip as the final sample.
pub fn trace_boundary(
    tau: TongueType,
    side: BoundarySide,
    r_step: f64,
) -> Result<BoundaryCurve, LocusError> {
    trace_boundary_with(tau, side, &TraceSettings { r_step, ..TraceSettings::default() })
}

pub fn trace_boundary_with(
    tau: TongueType,
    side: BoundarySide,
    settings: &TraceSettings,
) -> Result<BoundaryCurve, LocusError> {
    assert!(
        matches!(side, BoundarySide::Left | BoundarySide::Right),
        "trace side must be left or right"
    );
    let p = tau.period();
    let k = tau.k() as i64;
    let root = find_root(p, tau.k())?;
    let tol = settings.residual_tol;

    let (alpha0, x0, jet0) = boundary_start(root.alpha, p, k, side, tol)?;
    let mut samples = vec![BoundaryPoint {
        r: 2.0,
        alpha: alpha0,
        x: x0,
        multiplier: jet0.d1,
        k,
        period: p,
        side,
    }];

    let mut step = settings.r_step;
    loop {
        let last = *samples.last().unwrap();
        let r_next = last.r + step;
        // Secant predictor once two samples exist.
        let (alpha_pred, x_pred) = if samples.len() >= 2 {
            let prev = samples[samples.len() - 2];
            let t = (r_next - last.r) / (last.r - prev.r);
            (
                last.alpha + t * (last.alpha - prev.alpha),
                last.x + t * (last.x - prev.x),
            )
        } else {
            (last.alpha, last.x)
        };
        match parabolic_corrector(r_next, p, k, alpha_pred, x_pred, tol) {
            Ok((alpha, x, jet)) => {
                samples.push(BoundaryPoint {
                    r: r_next,
                    alpha,
                    x,
                    multiplier: jet.d1,
                    k,
                    period: p,
                    side,
                });
                let jac = [[jet.da, jet.d1 - 1.0], [jet.d1_da, jet.d2]];
                if condition2(jac) > TIP_HANDOFF_CONDITION
                    || jet.d2.abs() < TIP_HANDOFF_SECOND_DERIV
                {
                    break;
                }
                step = (step * 1.5).min(settings.r_step);
            }
            Err(err) => {
                step *= 0.5;
                if step < settings.min_r_step {
                    if samples.len() < 2 {
                        return Err(err);
                    }
                    break;
                }
            }
        }
    }

    // The continuation only stops at the tip (the boundary is a graph over
    // r up to there); finish with the three-equation solve.
    let seed = *samples.last().unwrap();
    let tip = find_tip(tau, seed)?;
    let reached_tip = true;
    if settings.append_tip {
        samples.push(tip.point);
    }
    Ok(BoundaryCurve {
        tongue: tau,
        side,
        samples,
        provenance: Provenance {
            r_step: settings.r_step,
            residual_tol: settings.residual_tol,
            reached_tip,
        },
    })
}

/// Newton solve of the three-equation tip system
/// `h^p(x) - x - k = 0`, `(h^p)'(x) = 1`, `(h^p)''(x) = 0`
/// in `(r, alpha, x)`, seeded from a boundary point near the tip.
/// Derivatives in `x` and `alpha` are closed-form; the `r` column of the
/// Jacobian uses central differences with step 1e-7.
pub fn find_tip(tau: TongueType, seed: BoundaryPoint) -> Result<TipResult, LocusError> {
    let p = tau.period();
    let k = seed.k;
    let mut r = seed.r;
    let mut alpha = seed.alpha;
    let mut x = seed.x;
    const DR: f64 = 1e-7;

    let mut converged = false;
    for _ in 0..80 {
        let j = Lift::new(r, alpha)?.jet(x, p as usize);
        let f = [j.value - x - k as f64, j.d1 - 1.0, j.d2];
        if f[0].abs() < 1e-11 && f[1].abs() < 1e-11 && f[2].abs() < 1e-11 {
            converged = true;
            break;
        }
        let jp = Lift::new(r + DR, alpha)?.jet(x, p as usize);
        let jm = Lift::new(r - DR, alpha)?.jet(x, p as usize);
        let jac = [
            [(jp.value - jm.value) / (2.0 * DR), j.da, j.d1 - 1.0],
            [(jp.d1 - jm.d1) / (2.0 * DR), j.d1_da, j.d2],
            [(jp.d2 - jm.d2) / (2.0 * DR), j.d2_da, j.d3],
        ];
        let step = solve3(jac, [-f[0], -f[1], -f[2]])
            .ok_or(LocusError::SingularJacobian("solving the tip system"))?;
        if step.iter().any(|s| !s.is_finite() || s.abs() > 0.5) {
            return Err(LocusError::NewtonDivergence { context: "solving the tip system", r, alpha, x });
        }
        r += step[0];
        alpha += step[1];
        x += step[2];
        if step.iter().all(|s| s.abs() < 1e-15) {
            converged = true;
            break;
        }
    }
    let lift = Lift::new(r, alpha)?;
    let j = lift.jet(x, p as usize);
    let residuals = [(j.value - x - k as f64).abs(), (j.d1 - 1.0).abs(), j.d2.abs()];
    if !converged || residuals.iter().any(|&e| e > 1e-10) {
        return Err(LocusError::NewtonDivergence { context: "solving the tip system", r, alpha, x });
    }
    // Exact-period check over proper divisors: a multiplier-one point of
    // multiplicity three cannot hide a shorter exact period.
    for m in 1..p {
        if p % m != 0 {
            continue;
        }
        let v = lift.iterate(x, m as usize) - x;
        if (v - v.round()).abs() < 1e-8 {
            return Err(LocusError::PeriodCollapse { p, m });
        }
    }
    Ok(TipResult {
        point: BoundaryPoint {
            r,
            alpha,
            x,
            multiplier: j.d1,
            k,
            period: p,
            side: BoundarySide::Tip,
        },
        residuals,
    })
}

/// Convenience solve of the tip of `tau` without a caller-provided seed:
/// traces the left boundary coarsely and returns its tip.
pub fn find_tip_of(tau: TongueType) -> Result<TipResult, LocusError> {
    let settings = TraceSettings { r_step: 1e-2, append_tip: false, ..TraceSettings::default() };
    let curve = trace_boundary_with(tau, BoundarySide::Left, &settings)?;
    let seed = *curve.samples.last().unwrap();
    find_tip(tau, seed)
}

/// Classifies a parabolic point by the one-sided behavior of
/// `g(y) = h^p(y) - y - k` at `y = x +- 1e-4`:
/// negative on both sides means attracting from the right (left boundary),
/// positive on both sides the mirror image (right boundary), and a sign
/// change from negative to positive a two-sided repeller (tip). The
/// remaining pattern would be a two-sided attractor, which the one-cycle
/// structure of the family forbids; it flags a numerical artifact.
pub fn classify_boundary_point(pt: &BoundaryPoint) -> Result<BoundarySide, LocusError> {
    let lift = Lift::new(pt.r, pt.alpha)?;
    let p = pt.period as usize;
    let j = lift.jet(pt.x, p);
    let value = (j.value - pt.x - pt.k as f64).abs();
    let multiplier = (j.d1 - 1.0).abs();
    if value > 1e-8 || multiplier > 1e-6 {
        return Err(LocusError::NotParabolic { value, multiplier });
    }
    const DELTA: f64 = 1e-4;
    let g = |y: f64| lift.iterate(y, p) - y - pt.k as f64;
    let below = g(pt.x - DELTA);
    let above = g(pt.x + DELTA);
    match (below < 0.0, above < 0.0) {
        (true, true) => Ok(BoundarySide::Left),
        (false, false) => Ok(BoundarySide::Right),
        (true, false) => Ok(BoundarySide::Tip),
        (false, true) => Err(LocusError::TwoSidedAttraction),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed_tongue() -> TongueType {
        TongueType::new(0, 1)
    }

    #[test]
    fn fixed_tongue_boundary_starts_conjugate_on_root_circle() {
        let right = trace_boundary_with(
            fixed_tongue(),
            BoundarySide::Right,
            &TraceSettings { r_step: 1e-2, append_tip: false, ..TraceSettings::default() },
        )
        .unwrap();
        let left = trace_boundary_with(
            fixed_tongue(),
            BoundarySide::Left,
            &TraceSettings { r_step: 1e-2, append_tip: false, ..TraceSettings::default() },
        )
        .unwrap();
        let a_plus = right.samples[0];
        let a_minus = left.samples[0];
        assert!(a_plus.alpha > 1e-4);
        assert!((a_plus.alpha + a_minus.alpha).abs() < 1e-9);
        assert!((a_plus.x + a_minus.x).abs() < 1e-8);
        for s in [&a_plus, &a_minus] {
            assert!((s.multiplier - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fixed_tongue_sides_meet_at_the_real_tip() {
        for side in [BoundarySide::Left, BoundarySide::Right] {
            let curve = trace_boundary_with(
                fixed_tongue(),
                side,
                &TraceSettings { r_step: 5e-3, ..TraceSettings::default() },
            )
            .unwrap();
            assert!(curve.provenance.reached_tip);
            let tip = curve.samples.last().unwrap();
            assert_eq!(tip.side, BoundarySide::Tip);
            assert!((tip.r - 3.0).abs() < 1e-9, "side {side:?}: r = {}", tip.r);
            assert!(tip.alpha.abs() < 1e-9);
            assert!(tip.x.abs() < 1e-7);
            let mut prev = 0.0;
            for s in &curve.samples {
                assert!(s.r > prev, "r must increase strictly");
                prev = s.r;
            }
        }
    }

    #[test]
    fn tip_solve_is_exact_at_the_fixed_tongue() {
        let seed = BoundaryPoint {
            r: 2.95,
            alpha: 2e-4,
            x: 0.02,
            multiplier: 1.0,
            k: 0,
            period: 1,
            side: BoundarySide::Right,
        };
        let tip = find_tip(fixed_tongue(), seed).unwrap();
        assert!((tip.point.r - 3.0).abs() < 1e-10);
        assert!(tip.point.alpha.abs() < 1e-10);
        assert!(tip.point.x.abs() < 1e-9);
        assert!(tip.residuals.iter().all(|&e| e < 1e-10));
    }

    #[test]
    fn second_derivative_vanishes_at_zero_for_every_radius() {
        for r in [1.2, 1.9, 2.4, 3.0, 3.7] {
            let lift = Lift::new(r, 0.17).unwrap();
            assert_eq!(lift.second_derivative(0.0), 0.0);
        }
    }

    #[test]
    fn classification_of_traced_points() {
        let settings = TraceSettings { r_step: 1e-2, append_tip: true, ..TraceSettings::default() };
        for (side, want) in [
            (BoundarySide::Left, BoundarySide::Left),
            (BoundarySide::Right, BoundarySide::Right),
        ] {
            let curve = trace_boundary_with(fixed_tongue(), side, &settings).unwrap();
            let mid = curve
                .samples
                .iter()
                .find(|s| (s.r - 2.5).abs() < 5e-3)
                .expect("sample near r = 2.5");
            assert_eq!(classify_boundary_point(mid).unwrap(), want);
            let tip = curve.samples.last().unwrap();
            assert_eq!(classify_boundary_point(tip).unwrap(), BoundarySide::Tip);
        }
    }

    #[test]
    fn classify_rejects_non_parabolic_input() {
        let pt = BoundaryPoint {
            r: 2.5,
            alpha: 0.0,
            x: 0.1,
            multiplier: 0.5,
            k: 0,
            period: 1,
            side: BoundarySide::Left,
        };
        assert!(matches!(
            classify_boundary_point(&pt),
            Err(LocusError::NotParabolic { .. })
        ));
    }

    #[test]
    fn period_two_tongue_boundary_is_traceable() {
        let tau = TongueType::new(1, 2);
        let curve = trace_boundary_with(
            tau,
            BoundarySide::Right,
            &TraceSettings { r_step: 1e-2, ..TraceSettings::default() },
        )
        .unwrap();
        assert!(curve.provenance.reached_tip);
        let tip = curve.samples.last().unwrap();
        assert!(tip.r > 2.0 && tip.r < 3.0);
        // Re-check the parabolic residuals independently along the curve.
        for s in &curve.samples {
            let lift = Lift::new(s.r, s.alpha).unwrap();
            let j = lift.jet(s.x, 2);
            assert!((j.value - s.x - s.k as f64).abs() < 1e-9);
            if s.side != BoundarySide::Tip {
                assert!((j.d1 - 1.0).abs() < 1e-9);
            }
        }
    }
}
