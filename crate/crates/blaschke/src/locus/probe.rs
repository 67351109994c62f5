//! Near-tip probe: locates the three fixed points of `B_a^p` that emerge
//! from a multiplicity-3 parabolic point, one on the circle via the lift
//! and two symmetric ones off the circle via complex Newton.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::LocusError;
use crate::lift::Lift;
use crate::map::{is_degenerate, BlaschkeMap, ExtComplex};
use crate::tolerances::Tolerances;

/// The symmetric pair of fixed points off the circle with their multipliers
/// (complex conjugates of each other).
#[derive(Debug, Clone, Copy)]
pub struct BifurcatedPair {
    /// The point outside the unit circle.
    pub z_plus: Complex64,
    /// Its mirror `1/conj(z_plus)` inside.
    pub z_minus: Complex64,
    pub rho_plus: Complex64,
    pub rho_minus: Complex64,
}

/// What the probe found near the former parabolic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    /// An attracting cycle on the circle: the parameter is in the tongue.
    OnCircleAttracting,
    /// A parabolic point on the circle: the parameter is on the boundary.
    OnBoundaryParabolic,
    /// The parabolic point has split into a repelling circle point and a
    /// symmetric pair off the circle.
    BifurcatedPair,
}

/// Result of [`tip_probe`].
#[derive(Debug, Clone)]
pub struct TipProbe {
    pub a: Complex64,
    pub period: u32,
    pub kind: ProbeKind,
    /// Fixed point of `B^p` on the circle (plane coordinates).
    pub z_circle: Complex64,
    /// Its lift angle in `[0, 1)`.
    pub x_circle: f64,
    /// Its real multiplier.
    pub eta: f64,
    pub pair: Option<BifurcatedPair>,
    /// The two neighboring circle fixed points when all three lie on the
    /// circle (parameter inside the tongue).
    pub circle_companions: Option<(Complex64, Complex64)>,
}

/// A circle fixed point of `h^p` in lift coordinates.
#[derive(Debug, Clone, Copy)]
struct CirclePoint {
    x: f64,
    multiplier: f64,
}

/// All fixed points of the circle map of period dividing `p`, found by
/// bracketing the integer crossings of `e(x) = h^p(x) - x` on a grid, plus
/// tangential (parabolic) solutions located through the zeros of
/// `(h^p)' - 1`.
fn circle_fixed_points(lift: &Lift, p: usize) -> Vec<CirclePoint> {
    let n = 512 * p;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let e: Vec<f64> = grid.iter().map(|&x| lift.iterate(x, p) - x).collect();
    let mut found: Vec<CirclePoint> = Vec::new();

    let mut push = |x: f64, lift: &Lift| {
        let x = x.rem_euclid(1.0);
        if found.iter().any(|c| {
            let d = (c.x - x).abs();
            d < 1e-9 || d > 1.0 - 1e-9
        }) {
            return;
        }
        let j = lift.jet(x, p);
        let res = j.value - x;
        if (res - res.round()).abs() < 1e-9 {
            found.push(CirclePoint { x, multiplier: j.d1 });
        }
    };

    for w in 0..n {
        let (lo, hi) = (grid[w], grid[w + 1]);
        let (elo, ehi) = (e[w], e[w + 1]);
        let m_min = elo.min(ehi).ceil() as i64;
        let m_max = elo.max(ehi).floor() as i64;
        for m in m_min..=m_max {
            // Bisect e(x) = m on [lo, hi].
            let target = m as f64;
            let (mut a, mut b) = (lo, hi);
            let increasing = ehi >= elo;
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                let v = lift.iterate(mid, p) - mid;
                if (v <= target) == increasing {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            push(0.5 * (a + b), lift);
        }
        // Tangential roots: local extrema of e where e is near an integer.
        let dlo = lift.jet(lo, p).d1 - 1.0;
        let dhi = lift.jet(hi, p).d1 - 1.0;
        if dlo.signum() != dhi.signum() {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                let d = lift.jet(mid, p).d1 - 1.0;
                if (d <= 0.0) == (dlo <= 0.0) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            push(0.5 * (a + b), lift);
        }
    }
    found.sort_by(|u, v| u.x.total_cmp(&v.x));
    found
}

/// Keeps only points whose exact period is `p`.
fn exact_period(lift: &Lift, points: Vec<CirclePoint>, p: usize) -> Vec<CirclePoint> {
    points
        .into_iter()
        .filter(|c| {
            for m in 1..p {
                if p % m != 0 {
                    continue;
                }
                let v = lift.iterate(c.x, m) - c.x;
                if (v - v.round()).abs() < 1e-8 {
                    return false;
                }
            }
            true
        })
        .collect()
}

/// Complex Newton for a fixed point of `B^p` from a seed; `None` when it
/// fails to converge or leaves the neighborhood.
fn plane_fixed_point(map: &BlaschkeMap, seed: Complex64, p: usize) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..80 {
        let mut w = z;
        let mut d = Complex64::ONE;
        for _ in 0..p {
            d *= map.derivative(w).ok()?;
            w = match map.eval_finite(w) {
                ExtComplex::Finite(v) => v,
                ExtComplex::Infinity => return None,
            };
        }
        let fp = d - Complex64::ONE;
        if fp.norm() < 1e-13 {
            return None;
        }
        let step = (w - z) / fp;
        z -= step;
        if !z.is_finite() || (z - seed).norm() > 0.3 {
            return None;
        }
        if step.norm() < 1e-14 {
            let res = (map.iterate(ExtComplex::Finite(z), p).finite()? - z).norm();
            return (res < 1e-10).then_some(z);
        }
    }
    None
}

/// Locates the three fixed points of `B_a^p` near the former parabolic
/// point of a tip of period `p` and classifies the configuration. Index
/// computation is delegated to the index module.
pub fn tip_probe(a: Complex64, p: u32) -> Result<TipProbe, LocusError> {
    if is_degenerate(a) || a.norm() <= 1.0 {
        return Err(LocusError::BadParameter);
    }
    let tolerances = Tolerances::default();
    let alpha = a.arg() / TAU;
    let lift = Lift::new(a.norm(), alpha)?;
    let map = BlaschkeMap::new(a);
    let points = exact_period(&lift, circle_fixed_points(&lift, p as usize), p as usize);
    if points.is_empty() {
        return Err(LocusError::MissingFixedPoints { found: 0 });
    }
    let to_plane = |x: f64| Complex64::from_polar(1.0, TAU * (x + alpha));

    // Attracting or parabolic circle point: the parameter is in the tongue
    // or on its boundary and no off-circle pair exists.
    if let Some(attracting) = points
        .iter()
        .find(|c| c.multiplier.abs() < 1.0 - tolerances.parabolic)
    {
        let idx = points.iter().position(|c| c.x == attracting.x).unwrap();
        let companions = if points.len() >= 3 {
            let prev = points[(idx + points.len() - 1) % points.len()];
            let next = points[(idx + 1) % points.len()];
            Some((to_plane(prev.x), to_plane(next.x)))
        } else {
            None
        };
        return Ok(TipProbe {
            a,
            period: p,
            kind: ProbeKind::OnCircleAttracting,
            z_circle: to_plane(attracting.x),
            x_circle: attracting.x,
            eta: attracting.multiplier,
            pair: None,
            circle_companions: companions,
        });
    }
    if let Some(parabolic) = points
        .iter()
        .find(|c| (c.multiplier - 1.0).abs() < tolerances.parabolic)
    {
        return Ok(TipProbe {
            a,
            period: p,
            kind: ProbeKind::OnBoundaryParabolic,
            z_circle: to_plane(parabolic.x),
            x_circle: parabolic.x,
            eta: parabolic.multiplier,
            pair: None,
            circle_companions: None,
        });
    }

    // Every circle point repels: search for the symmetric off-circle pair
    // around each of them, preferring the tightest triplet. Once one
    // off-circle fixed point is found, its mirror 1/conj(z) is itself a
    // fixed point by the circle symmetry, so the partner is polished from
    // the mirrored seed.
    let mut best: Option<(f64, CirclePoint, BifurcatedPair)> = None;
    let directions = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(1.0, 1.0) * std::f64::consts::FRAC_1_SQRT_2,
        Complex64::new(-1.0, 1.0) * std::f64::consts::FRAC_1_SQRT_2,
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ];
    'search: for c in &points {
        let z0 = to_plane(c.x);
        for delta in [1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 2e-1] {
            for dir in directions {
                let seed = z0 * (Complex64::ONE + delta * dir);
                let Some(w) = plane_fixed_point(&map, seed, p as usize) else {
                    continue;
                };
                if (w.norm() - 1.0).abs() < 1e-8 {
                    continue;
                }
                let Some(mirror) = plane_fixed_point(&map, Complex64::ONE / w.conj(), p as usize)
                else {
                    continue;
                };
                let (z_plus, z_minus) =
                    if w.norm() >= mirror.norm() { (w, mirror) } else { (mirror, w) };
                if (z_plus - Complex64::ONE / z_minus.conj()).norm() > 1e-8 {
                    continue;
                }
                let (Ok(rho_plus), Ok(rho_minus)) = (
                    map.multiplier(z_plus, p as usize),
                    map.multiplier(z_minus, p as usize),
                ) else {
                    continue;
                };
                let diameter = (z_plus - z0).norm() + (z_minus - z0).norm();
                let pair = BifurcatedPair { z_plus, z_minus, rho_plus, rho_minus };
                if best.as_ref().is_none_or(|(d, _, _)| diameter < *d) {
                    best = Some((diameter, *c, pair));
                }
                continue 'search;
            }
        }
    }
    // Fallback: farther from the tip the pair separates from the circle
    // point beyond the reach of local seeds; sweep the annulus globally.
    if best.is_none() {
        'sweep: for radius in [1.05, 0.95, 1.15, 0.87, 1.3, 0.77] {
            for j in 0..48 {
                let seed = Complex64::from_polar(radius, TAU * j as f64 / 48.0);
                let Some(w) = plane_fixed_point(&map, seed, p as usize) else {
                    continue;
                };
                if (w.norm() - 1.0).abs() < 1e-8 || !(0.5..=2.0).contains(&w.norm()) {
                    continue;
                }
                let Some(mirror) = plane_fixed_point(&map, Complex64::ONE / w.conj(), p as usize)
                else {
                    continue;
                };
                let (z_plus, z_minus) =
                    if w.norm() >= mirror.norm() { (w, mirror) } else { (mirror, w) };
                if (z_plus - Complex64::ONE / z_minus.conj()).norm() > 1e-8 {
                    continue;
                }
                let (Ok(rho_plus), Ok(rho_minus)) = (
                    map.multiplier(z_plus, p as usize),
                    map.multiplier(z_minus, p as usize),
                ) else {
                    continue;
                };
                let circle = *points
                    .iter()
                    .min_by(|u, v| {
                        let du = (to_plane(u.x) - z_plus).norm();
                        let dv = (to_plane(v.x) - z_plus).norm();
                        du.total_cmp(&dv)
                    })
                    .unwrap();
                let diameter =
                    (z_plus - to_plane(circle.x)).norm() + (z_minus - to_plane(circle.x)).norm();
                best = Some((
                    diameter,
                    circle,
                    BifurcatedPair { z_plus, z_minus, rho_plus, rho_minus },
                ));
                break 'sweep;
            }
        }
    }
    let (_, circle, pair) = best.ok_or(LocusError::MissingFixedPoints { found: 1 })?;
    Ok(TipProbe {
        a,
        period: p,
        kind: ProbeKind::BifurcatedPair,
        z_circle: to_plane(circle.x),
        x_circle: circle.x,
        eta: circle.multiplier,
        pair: Some(pair),
        circle_companions: None,
    })
}
