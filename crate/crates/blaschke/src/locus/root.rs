//! Tongue roots: the superattracting parameters on `|a| = 2`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::LocusError;
use crate::cycle::TongueType;
use crate::lift::Lift;

/// Root of the tongue with winding `k` and period `p`: the unique
/// `a = 2 e^{2 pi i alpha}`, `alpha` in `[0, 1/3)`, whose critical orbit is
/// periodic with `h^p(0) = k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TongueRoot {
    pub p: u32,
    pub k: u64,
    pub tongue: TongueType,
    pub alpha: f64,
    pub residual: f64,
}

impl TongueRoot {
    pub fn a(&self) -> Complex64 {
        Complex64::from_polar(2.0, TAU * self.alpha)
    }

    pub fn r(&self) -> f64 {
        2.0
    }
}

fn critical_value(alpha: f64, p: u32) -> f64 {
    // r = 2 is inside Lift's domain, and the collapsed critical point sits
    // at lift angle 0.
    Lift::new(2.0, alpha).expect("r = 2 is non-degenerate").iterate(0.0, p as usize)
}

/// Finds the tongue root by bisection of `alpha -> h^p_{2,alpha}(0)` over
/// `[0, 1/3)`. The map is strictly increasing of degree `2^p - 1` in
/// `alpha`, so each `k` in `0..=2^p - 2` has exactly one solution.
pub fn find_root(p: u32, k: u64) -> Result<TongueRoot, LocusError> {
    assert!(p >= 1 && p < 60, "period out of range");
    if k > (1u64 << p) - 2 {
        return Err(LocusError::WindingOutOfRange { p, k });
    }
    let target = k as f64;
    let mut lo = 0.0f64;
    let mut hi = 1.0 / 3.0;
    // h^p_{2,0}(0) = 0 and h^p_{2,1/3}(0) = 2^p - 1 > target.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if critical_value(mid, p) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (alpha, residual) = [lo, hi]
        .into_iter()
        .map(|a| (a, (critical_value(a, p) - target).abs()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    Ok(TongueRoot {
        p,
        k,
        tongue: TongueType::new(k, p),
        alpha,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{detect_cycle, type_of};

    #[test]
    fn fixed_tongue_root_is_two() {
        let root = find_root(1, 0).unwrap();
        assert_eq!(root.alpha, 0.0);
        assert!(root.residual < 1e-12);
        assert!((root.a() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn period_two_winding_zero_collapses_to_fixed_root() {
        let root = find_root(2, 0).unwrap();
        assert!(root.alpha.abs() < 1e-15);
        assert_eq!(root.tongue, TongueType::new(0, 1));
    }

    #[test]
    fn period_two_winding_one_has_type_one_third() {
        let root = find_root(2, 1).unwrap();
        assert!(root.alpha > 0.0 && root.alpha < 1.0 / 3.0);
        assert!(root.residual < 1e-12);
        let t = type_of(root.a()).unwrap();
        assert_eq!((t.k(), t.period()), (1, 2));
        assert!((t.value() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn roots_are_superattracting() {
        for (p, k) in [(1, 0), (2, 1), (3, 2), (3, 5)] {
            let root = find_root(p, k).unwrap();
            let cycle = detect_cycle(root.a(), 64, 50_000).unwrap().unwrap();
            assert!(cycle.multiplier.abs() < 1e-8, "p = {p}, k = {k}");
            assert!(cycle.period as u32 == root.tongue.period());
        }
    }

    #[test]
    fn winding_out_of_range_is_rejected() {
        assert!(matches!(
            find_root(2, 3),
            Err(LocusError::WindingOutOfRange { p: 2, k: 3 })
        ));
    }

    #[test]
    fn roots_are_strictly_ordered_in_winding() {
        let p = 4;
        let mut prev = -1.0;
        for k in 0..(1u64 << p) - 1 {
            let root = find_root(p, k).unwrap();
            assert!(root.alpha > prev, "k = {k}");
            assert!(root.residual < 1e-12, "k = {k}");
            prev = root.alpha;
        }
    }
}
