//! Extended fixed tongue in the annulus `1 < |a| <= 2`: continuation of the
//! circle fixed point and its parabolic boundaries at multiplier `+1`
//! (exterior) and `-1` (interior, period doubling).

use super::boundary::solve2;
use super::{BoundaryPoint, BoundarySide, LocusError};
use crate::lift::Lift;
use crate::tolerances::Tolerances;

/// One sample of the continued fixed point at fixed radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub alpha: f64,
    pub x: f64,
    pub multiplier: f64,
}

/// Slice of the extended fixed tongue at fixed radius `r`, for `alpha >= 0`;
/// the `alpha < 0` half is its mirror under conjugation.
#[derive(Debug, Clone)]
pub struct ExtendedSlice {
    pub r: f64,
    /// Exterior boundary: the fixed point reaches multiplier `+1` here.
    pub alpha_plus_one: BoundaryPoint,
    /// Interior boundary at multiplier `-1`; present iff `r <= 5/3` (up to
    /// the parabolic tolerance at `r = 5/3` itself where it sits at
    /// `alpha = 0`).
    pub alpha_minus_one: Option<BoundaryPoint>,
    /// Multiplier profile of the continued fixed point, sampled from
    /// `alpha = 0` to the exterior boundary; strictly increasing.
    pub profile: Vec<ProfileSample>,
}

impl ExtendedSlice {
    /// Mirror of a sample under the conjugation symmetry `alpha -> -alpha`.
    pub fn mirror(pt: &BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint { alpha: -pt.alpha, x: -pt.x, ..*pt }
    }
}

/// Continues the fixed point of the lift at fixed `(r, alpha)` from a seed.
fn fixed_point(lift: &Lift, x_seed: f64) -> Option<(f64, f64)> {
    let mut x = x_seed;
    for _ in 0..60 {
        let g = lift.eval(x) - x;
        let gp = lift.derivative(x) - 1.0;
        if gp.abs() < 1e-12 {
            return None;
        }
        let step = g / gp;
        x -= step;
        if !x.is_finite() || (x - x_seed).abs() > 0.2 {
            return None;
        }
        if step.abs() < 1e-14 {
            return Some((x, lift.derivative(x)));
        }
    }
    None
}

/// Newton solve of `h(x) = x`, `h'(x) = target` in `(alpha, x)` at fixed
/// `r`. `target` is `+1` on the exterior boundary and `-1` on the interior
/// one.
fn parabolic_fixed_point(
    r: f64,
    target: f64,
    alpha0: f64,
    x0: f64,
) -> Result<(f64, f64, f64), LocusError> {
    let mut alpha = alpha0;
    let mut x = x0;
    for _ in 0..60 {
        let lift = Lift::new(r, alpha)?;
        let j = lift.jet(x, 1);
        let f = [j.value - x, j.d1 - target];
        if f[0].abs() < 1e-12 && f[1].abs() < 1e-12 {
            return Ok((alpha, x, j.d1));
        }
        let jac = [[j.da, j.d1 - 1.0], [j.d1_da, j.d2]];
        let step = solve2(jac, [-f[0], -f[1]])
            .ok_or(LocusError::SingularJacobian("solving an extended-tongue boundary point"))?;
        if step.iter().any(|s| !s.is_finite() || s.abs() > 0.3) {
            return Err(LocusError::NewtonDivergence {
                context: "solving an extended-tongue boundary point",
                r,
                alpha,
                x,
            });
        }
        alpha += step[0];
        x += step[1];
    }
    Err(LocusError::NewtonDivergence {
        context: "solving an extended-tongue boundary point",
        r,
        alpha,
        x,
    })
}

/// Computes the slice of the extended fixed tongue at radius `r` in
/// `(1, 2]`: continues the fixed point `x(alpha)` from `x(0) = 0` as `alpha`
/// increases (`x` strictly decreasing, multiplier strictly increasing),
/// records where the multiplier crosses `-1` (interior boundary, present
/// iff the multiplier at `alpha = 0` is at most `-1`), and solves for the
/// multiplier `+1` point (exterior boundary).
pub fn extended_tongue_slice(r: f64) -> Result<ExtendedSlice, LocusError> {
    if !(r > 1.0 && r <= 2.0) {
        return Err(LocusError::OutOfAnnulus(r));
    }
    let tolerances = Tolerances::default();
    let mult_at_zero = Lift::new(r, 0.0)?.derivative(0.0);

    let mut profile = vec![ProfileSample { alpha: 0.0, x: 0.0, multiplier: mult_at_zero }];
    let mut minus_one: Option<BoundaryPoint> = None;
    if (mult_at_zero + 1.0).abs() < tolerances.parabolic {
        // r = 5/3 up to tolerance: the interior boundary touches alpha = 0.
        minus_one = Some(BoundaryPoint {
            r,
            alpha: 0.0,
            x: 0.0,
            multiplier: mult_at_zero,
            k: 0,
            period: 1,
            side: BoundarySide::MultiplierMinusOne,
        });
    }

    let mut alpha = 0.0;
    let mut x = 0.0;
    let mut mult = mult_at_zero;
    let mut step = 1e-3;
    let plus_one = loop {
        let next_alpha = alpha + step;
        match Lift::new(r, next_alpha).ok().and_then(|l| fixed_point(&l, x)) {
            Some((nx, nm)) if nm < 1.0 => {
                // Interior crossing of multiplier -1 between two samples.
                if minus_one.is_none() && mult < -1.0 && nm >= -1.0 {
                    let (ba, bx, bm) = parabolic_fixed_point(r, -1.0, next_alpha, nx)?;
                    minus_one = Some(BoundaryPoint {
                        r,
                        alpha: ba,
                        x: bx,
                        multiplier: bm,
                        k: 0,
                        period: 1,
                        side: BoundarySide::MultiplierMinusOne,
                    });
                }
                alpha = next_alpha;
                x = nx;
                mult = nm;
                profile.push(ProfileSample { alpha, x, multiplier: mult });
                if mult > 0.9 {
                    if let Ok((ba, bx, bm)) = parabolic_fixed_point(r, 1.0, alpha, x) {
                        break BoundaryPoint {
                            r,
                            alpha: ba,
                            x: bx,
                            multiplier: bm,
                            k: 0,
                            period: 1,
                            side: BoundarySide::MultiplierPlusOne,
                        };
                    }
                    step *= 0.5;
                }
            }
            _ => {
                step *= 0.5;
                if step < 1e-12 {
                    let (ba, bx, bm) = parabolic_fixed_point(r, 1.0, alpha, x)?;
                    break BoundaryPoint {
                        r,
                        alpha: ba,
                        x: bx,
                        multiplier: bm,
                        k: 0,
                        period: 1,
                        side: BoundarySide::MultiplierPlusOne,
                    };
                }
            }
        }
    };

    Ok(ExtendedSlice { r, alpha_plus_one: plus_one, alpha_minus_one: minus_one, profile })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_boundary_touches_axis_at_five_thirds() {
        let slice = extended_tongue_slice(5.0 / 3.0).unwrap();
        let m = slice.alpha_minus_one.expect("interior boundary at r = 5/3");
        assert!(m.alpha.abs() < 1e-9);
        assert!((m.multiplier + 1.0).abs() < 1e-6);
    }

    #[test]
    fn interior_boundary_exists_iff_radius_at_most_five_thirds() {
        for r in [1.1, 1.3, 1.5] {
            let slice = extended_tongue_slice(r).unwrap();
            let m = slice.alpha_minus_one.expect("interior boundary");
            assert!(m.alpha > 0.0);
            assert!((m.multiplier + 1.0).abs() < 1e-10, "r = {r}");
        }
        for r in [1.7, 1.9, 2.0] {
            assert!(extended_tongue_slice(r).unwrap().alpha_minus_one.is_none(), "r = {r}");
        }
    }

    #[test]
    fn slice_boundaries_stay_below_one_sixth() {
        for r in [1.05, 1.2, 1.5, 1.8, 2.0] {
            let slice = extended_tongue_slice(r).unwrap();
            assert!(slice.alpha_plus_one.alpha < 1.0 / 6.0, "r = {r}");
            assert!(slice.alpha_plus_one.alpha > 0.0);
            if let Some(m) = slice.alpha_minus_one {
                assert!(m.alpha < slice.alpha_plus_one.alpha);
            }
        }
    }

    #[test]
    fn multiplier_profile_is_strictly_increasing() {
        // dx/dalpha = 3/(1 - multiplier) > 0 along the continued branch, so
        // x moves up with alpha and the even derivative profile rises with it.
        let slice = extended_tongue_slice(1.4).unwrap();
        for w in slice.profile.windows(2) {
            assert!(w[1].multiplier > w[0].multiplier);
            assert!(w[1].x > w[0].x);
        }
    }

    #[test]
    fn period_doubling_past_the_interior_boundary() {
        // Just inside the interior boundary the fixed point has multiplier
        // slightly below -1 and an attracting period-2 cycle of the lift
        // exists nearby.
        let r = 1.2;
        let slice = extended_tongue_slice(r).unwrap();
        let m = slice.alpha_minus_one.unwrap();
        let alpha = m.alpha - 1e-3;
        let lift = Lift::new(r, alpha).unwrap();
        // Iterate the doubled map from a perturbed seed, reduced mod 1.
        let mut x = m.x + 1e-3;
        for _ in 0..4000 {
            let y = lift.eval(lift.eval(x));
            x = y - y.floor();
        }
        let j2 = lift.jet(x, 2);
        assert!((j2.value - x - (j2.value - x).round()).abs() < 1e-9);
        assert!(j2.d1.abs() < 1.0, "doubled multiplier {}", j2.d1);
        // And it is a genuine 2-cycle, not the fixed point.
        assert!((lift.eval(x) - x - (lift.eval(x) - x).round()).abs() > 1e-4);
    }

    #[test]
    fn rejects_radii_outside_annulus() {
        assert!(matches!(extended_tongue_slice(1.0), Err(LocusError::OutOfAnnulus(_))));
        assert!(matches!(extended_tongue_slice(2.3), Err(LocusError::OutOfAnnulus(_))));
    }
}
