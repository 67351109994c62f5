//! The degree-4 Blaschke family `B_{a,t}(z) = e^{2 pi i t} z^3 (z - a) / (1 - conj(a) z)`
//! together with the companion family `G_{a,b}(z) = b z^3 (z - a) / (1 - a z)`:
//! evaluation on the extended plane, derivatives, free critical points,
//! parameter symmetries and certified escape bounds.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

/// `|a| = 1` within this bound is treated as the degenerate cubic member.
const UNIT_MODULUS_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum CoreError {
    #[error("derivative at pole")]
    DerivativeAtPole,
    #[error("degenerate family member")]
    DegenerateFamilyMember,
    #[error("escape factor must exceed 1, got {0}")]
    InvalidEscapeFactor(f64),
}

/// A point of the Riemann sphere: either a finite complex number or the
/// point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

/// True for the parameters where the family degenerates: `a = 0` collapses
/// to `z^4` and `|a| = 1` collapses to the cubic `-a z^3` (zero, pole and
/// both free critical points collide).
pub fn is_degenerate(a: Complex64) -> bool {
    a == Complex64::ZERO || (a.norm() - 1.0).abs() < UNIT_MODULUS_TOL
}

/// One member of the family, `B_{a,t}`. `t = 0` gives the principal family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeMap {
    pub a: Complex64,
    /// Rotation parameter, mod 1.
    pub t: f64,
}

impl BlaschkeMap {
    pub fn new(a: Complex64) -> Self {
        Self { a, t: 0.0 }
    }

    pub fn with_rotation(a: Complex64, t: f64) -> Self {
        Self { a, t }
    }

    fn rotation(&self) -> Complex64 {
        if self.t == 0.0 {
            Complex64::ONE
        } else {
            Complex64::from_polar(1.0, TAU * self.t)
        }
    }

    /// Evaluates the map on the extended plane. Total: the pole is sent to
    /// infinity and infinity is fixed.
    pub fn eval(&self, z: ExtComplex) -> ExtComplex {
        let z = match z {
            ExtComplex::Infinity => return ExtComplex::Infinity,
            ExtComplex::Finite(z) => z,
        };
        let rot = self.rotation();
        if self.a == Complex64::ZERO {
            let z2 = z * z;
            return ExtComplex::Finite(rot * z2 * z2);
        }
        if (self.a.norm() - 1.0).abs() < UNIT_MODULUS_TOL {
            // Zero and pole cancel: the map is the cubic -a z^3.
            return ExtComplex::Finite(-self.a * rot * z * z * z);
        }
        let denom = Complex64::ONE - self.a.conj() * z;
        if denom == Complex64::ZERO {
            return ExtComplex::Infinity;
        }
        ExtComplex::Finite(rot * z * z * z * (z - self.a) / denom)
    }

    /// Convenience wrapper for finite inputs.
    pub fn eval_finite(&self, z: Complex64) -> ExtComplex {
        self.eval(ExtComplex::Finite(z))
    }

    /// `B'_{a,t}(z)` in closed form.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64, CoreError> {
        let rot = self.rotation();
        if self.a == Complex64::ZERO {
            return Ok(rot * 4.0 * z * z * z);
        }
        if (self.a.norm() - 1.0).abs() < UNIT_MODULUS_TOL {
            return Ok(-self.a * rot * 3.0 * z * z);
        }
        let denom = Complex64::ONE - self.a.conj() * z;
        if denom == Complex64::ZERO {
            return Err(CoreError::DerivativeAtPole);
        }
        let z2 = z * z;
        let num = (4.0 * z2 * z - 3.0 * self.a * z2) * denom + self.a.conj() * z2 * z * (z - self.a);
        Ok(rot * num / (denom * denom))
    }

    /// `B^n(z)` on the extended plane.
    pub fn iterate(&self, z: ExtComplex, n: usize) -> ExtComplex {
        let mut w = z;
        for _ in 0..n {
            w = self.eval(w);
            if w.is_infinity() {
                return ExtComplex::Infinity;
            }
        }
        w
    }

    /// Multiplier `(B^p)'(z)` along the orbit of `z` (chain rule). Errors if
    /// the orbit hits the pole or leaves the finite plane.
    pub fn multiplier(&self, z: Complex64, p: usize) -> Result<Complex64, CoreError> {
        let mut w = z;
        let mut m = Complex64::ONE;
        for _ in 0..p {
            m *= self.derivative(w)?;
            w = match self.eval_finite(w) {
                ExtComplex::Finite(v) => v,
                ExtComplex::Infinity => return Err(CoreError::DerivativeAtPole),
            };
        }
        Ok(m)
    }
}

/// Free critical points of `B_a`, ordered so that `|c_plus| >= |c_minus|`.
///
/// The radicand `(|a|^2 - 4)(|a|^2 - 1)` is non-negative for `|a| >= 2` and
/// `|a| <= 1`; there both points are real multiples of `a/|a|` and satisfy
/// `c_plus = 1/conj(c_minus)` exactly (the minus point is computed as the
/// reciprocal so the product identity holds to roundoff). For `1 < |a| < 2`
/// the radicand is negative and both points land on the unit circle;
/// `c_plus` is then the one with argument in `[arg a, arg a + 1/2)` turns,
/// which is a convention.
pub fn critical_points(a: Complex64) -> Result<(Complex64, Complex64), CoreError> {
    if a == Complex64::ZERO {
        return Err(CoreError::DegenerateFamilyMember);
    }
    let rho = a.norm();
    let unit = a / rho;
    let s = (rho * rho - 4.0) * (rho * rho - 1.0);
    if s >= 0.0 {
        let u_plus = (2.0 + rho * rho + s.sqrt()) / (3.0 * rho);
        let u_minus = 1.0 / u_plus;
        Ok((unit * u_plus, unit * u_minus))
    } else {
        let re = (2.0 + rho * rho) / (3.0 * rho);
        let im = (-s).sqrt() / (3.0 * rho);
        let c = Complex64::new(re, im);
        Ok((unit * c, unit * c.conj()))
    }
}

/// Certified escape radius `lambda (|a| + 1)`: with the circle-preserving
/// normalization, any orbit beyond it grows by at least the factor `lambda`
/// per step.
pub fn escape_radius(a: Complex64, lambda: f64) -> Result<f64, CoreError> {
    if lambda <= 1.0 {
        return Err(CoreError::InvalidEscapeFactor(lambda));
    }
    Ok(lambda * (a.norm() + 1.0))
}

/// Which of the six conformally-conjugate representatives a given parameter
/// was: the input equals `xi^rotation * c` with `xi = e^{2 pi i/3}` and `c`
/// the canonical parameter, conjugated first when `conjugated` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryTag {
    pub rotation: u8,
    pub conjugated: bool,
}

/// A parameter reduced to its canonical representative under the order-3
/// rotation and conjugation symmetries of the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Param {
    /// Canonical representative.
    pub a: Complex64,
    pub r: f64,
    /// `arg(a)/2pi` of the canonical representative, in `[0, 1/6]`.
    pub alpha: f64,
    pub tag: SymmetryTag,
}

impl Param {
    /// Reconstructs the parameter that was passed to [`canonicalize`].
    pub fn original(&self) -> Complex64 {
        let xi = Complex64::from_polar(1.0, TAU * f64::from(self.tag.rotation) / 3.0);
        let c = if self.tag.conjugated { self.a.conj() } else { self.a };
        xi * c
    }
}

/// Reduces `a` modulo the symmetries `a -> xi a`, `a -> xi conj(a)`
/// (`xi^3 = 1`) to the representative with `arg(a)/2pi` in `[0, 1/6]`.
/// Idempotent.
pub fn canonicalize(a: Complex64) -> Param {
    if a == Complex64::ZERO {
        return Param {
            a,
            r: 0.0,
            alpha: 0.0,
            tag: SymmetryTag { rotation: 0, conjugated: false },
        };
    }
    let r = a.norm();
    let theta = a.arg() / TAU;
    let mut alpha = theta.rem_euclid(1.0 / 3.0);
    if alpha >= 1.0 / 3.0 {
        // rem_euclid can round up to the modulus itself.
        alpha = 0.0;
    }
    let mut rotation = ((theta - alpha) * 3.0).round() as i64;
    let mut conjugated = false;
    if alpha > 1.0 / 6.0 {
        alpha = 1.0 / 3.0 - alpha;
        conjugated = true;
        rotation += 1;
    }
    let tag = SymmetryTag {
        rotation: rotation.rem_euclid(3) as u8,
        conjugated,
    };
    Param {
        a: Complex64::from_polar(r, TAU * alpha),
        r,
        alpha,
        tag,
    }
}

/// The companion family `G_{a,b}(z) = b z^3 (z - a)/(1 - a z)`, not symmetric
/// with respect to the unit circle. `B_{r,t}` embeds as `G_{r, e^{2 pi i t}}`
/// for real `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GMap {
    pub a: Complex64,
    pub b: Complex64,
}

impl GMap {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn eval(&self, z: ExtComplex) -> ExtComplex {
        let z = match z {
            ExtComplex::Infinity => return ExtComplex::Infinity,
            ExtComplex::Finite(z) => z,
        };
        let denom = Complex64::ONE - self.a * z;
        if denom == Complex64::ZERO {
            return ExtComplex::Infinity;
        }
        ExtComplex::Finite(self.b * z * z * z * (z - self.a) / denom)
    }

    /// Free critical points, the roots of `3 a z^2 - 2(a^2 - 2) z + 3 a`.
    /// They satisfy `c_plus * c_minus = 1` and neither vanishes for
    /// `a` outside `{0, infinity}`.
    pub fn critical_points(&self) -> Result<(Complex64, Complex64), CoreError> {
        if self.a == Complex64::ZERO {
            return Err(CoreError::DegenerateFamilyMember);
        }
        let a = self.a;
        let s = ((a * a - 4.0) * (a * a - 1.0)).sqrt();
        let c_plus = (2.0 + a * a + s) / (3.0 * a);
        let c_minus = (2.0 + a * a - s) / (3.0 * a);
        Ok((c_plus, c_minus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_fixes_parabolic_point_at_real_tip() {
        let map = BlaschkeMap::new(c(3.0, 0.0));
        let w = map.eval_finite(c(1.0, 0.0)).finite().unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eval_degenerates_to_quartic_at_zero() {
        let map = BlaschkeMap::new(Complex64::ZERO);
        let w = map.eval_finite(c(2.0, 0.0)).finite().unwrap();
        assert!((w - c(16.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eval_degenerates_to_cubic_on_unit_modulus() {
        let map = BlaschkeMap::new(c(1.0, 0.0));
        for z in [c(0.3, 0.4), c(-1.2, 0.7), c(2.0, 0.0)] {
            let w = map.eval_finite(z).finite().unwrap();
            assert!((w + z * z * z).norm() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn eval_sends_pole_and_infinity_to_infinity() {
        let a = c(2.5, 0.0);
        let map = BlaschkeMap::new(a);
        assert!(map.eval_finite(Complex64::ONE / a.conj()).is_infinity());
        assert!(map.eval(ExtComplex::Infinity).is_infinity());
    }

    #[test]
    fn eval_preserves_unit_circle() {
        let map = BlaschkeMap::with_rotation(c(2.3, 0.7), 0.41);
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / 64.0);
            let w = map.eval_finite(z).finite().unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eval_respects_circle_symmetry() {
        // B(1/conj(z)) = 1/conj(B(z)) away from zeros and poles.
        let map = BlaschkeMap::with_rotation(c(1.7, -0.4), 0.13);
        for z in [c(0.3, 0.2), c(1.4, -0.8), c(-0.5, 1.1)] {
            let lhs = map.eval_finite(Complex64::ONE / z.conj()).finite().unwrap();
            let rhs = Complex64::ONE / map.eval_finite(z).finite().unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn derivative_is_one_at_real_tip() {
        let map = BlaschkeMap::new(c(3.0, 0.0));
        let d = map.derivative(c(1.0, 0.0)).unwrap();
        assert!((d - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn derivative_vanishes_at_collapsed_critical_point() {
        let map = BlaschkeMap::new(c(2.0, 0.0));
        let d = map.derivative(c(1.0, 0.0)).unwrap();
        assert!(d.norm() < 1e-14);
    }

    #[test]
    fn derivative_vanishes_at_origin() {
        for a in [c(2.7, 0.3), c(0.4, -0.2), c(1.5, 1.5)] {
            let map = BlaschkeMap::new(a);
            assert!(map.derivative(Complex64::ZERO).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_errors_at_pole() {
        let a = c(2.0, 0.0);
        let map = BlaschkeMap::new(a);
        assert_eq!(
            map.derivative(Complex64::ONE / a.conj()),
            Err(CoreError::DerivativeAtPole)
        );
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let map = BlaschkeMap::with_rotation(c(2.4, 0.9), 0.27);
        let h = 1e-6;
        for z in [c(0.4, 0.3), c(1.3, -0.5), c(-0.8, 0.9), c(0.1, 1.6)] {
            let d = map.derivative(z).unwrap();
            let fd = (map.eval_finite(z + c(h, 0.0)).finite().unwrap()
                - map.eval_finite(z - c(h, 0.0)).finite().unwrap())
                / (2.0 * h);
            assert!((d - fd).norm() / d.norm().max(1.0) < 1e-6, "z = {z}");
        }
    }

    #[test]
    fn critical_points_collide_at_modulus_two_and_one() {
        let (cp, cm) = critical_points(c(2.0, 0.0)).unwrap();
        assert!((cp - Complex64::ONE).norm() < 1e-14);
        assert!((cm - Complex64::ONE).norm() < 1e-14);
        let (cp, cm) = critical_points(c(1.0, 0.0)).unwrap();
        assert!((cp - Complex64::ONE).norm() < 1e-14);
        assert!((cm - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn critical_points_at_real_tip() {
        let (cp, cm) = critical_points(c(3.0, 0.0)).unwrap();
        let expected = (11.0 + 40.0_f64.sqrt()) / 9.0;
        assert!((cp.re - expected).abs() < 1e-12);
        assert!((cp * cm - Complex64::ONE).norm() < 1e-14);
        let map = BlaschkeMap::new(c(3.0, 0.0));
        assert!(map.derivative(cp).unwrap().norm() < 1e-10);
        assert!(map.derivative(cm).unwrap().norm() < 1e-10);
    }

    #[test]
    fn critical_points_land_on_circle_in_annulus() {
        for a in [c(1.5, 0.0), c(1.2, 0.9), c(-0.3, 1.6)] {
            let (cp, cm) = critical_points(a).unwrap();
            assert!((cp.norm() - 1.0).abs() < 1e-12, "a = {a}");
            assert!((cm.norm() - 1.0).abs() < 1e-12, "a = {a}");
            let map = BlaschkeMap::new(a);
            assert!(map.derivative(cp).unwrap().norm() < 1e-10, "a = {a}");
            assert!(map.derivative(cm).unwrap().norm() < 1e-10, "a = {a}");
            // Convention: c_plus at argument in [arg a, arg a + 1/2) turns.
            let rel = (cp / a).arg();
            assert!((0.0..std::f64::consts::PI).contains(&rel), "a = {a}");
        }
    }

    #[test]
    fn critical_points_symmetric_outside_disk_two() {
        for a in [c(2.5, 0.4), c(-2.1, 1.3), c(0.0, 3.2)] {
            let (cp, cm) = critical_points(a).unwrap();
            assert!((cp - Complex64::ONE / cm.conj()).norm() < 1e-12, "a = {a}");
            assert!(cp.norm() >= cm.norm());
        }
    }

    #[test]
    fn critical_points_reject_zero() {
        assert_eq!(
            critical_points(Complex64::ZERO),
            Err(CoreError::DegenerateFamilyMember)
        );
    }

    #[test]
    fn canonicalize_folds_rotation() {
        let p = canonicalize(c(3.0, 0.0) * Complex64::from_polar(1.0, TAU / 3.0));
        assert!((p.a - c(3.0, 0.0)).norm() < 1e-12);
        assert_eq!(p.tag, SymmetryTag { rotation: 1, conjugated: false });
    }

    #[test]
    fn canonicalize_folds_conjugation() {
        let p = canonicalize(c(2.65675, -0.0389604));
        assert!((p.a - c(2.65675, 0.0389604)).norm() < 1e-12);
        assert!(p.tag.conjugated);
    }

    #[test]
    fn canonicalize_fixes_canonical_input() {
        let p = canonicalize(c(2.5, 0.0));
        assert!((p.a - c(2.5, 0.0)).norm() < 1e-15);
        assert_eq!(p.tag, SymmetryTag { rotation: 0, conjugated: false });
    }

    #[test]
    fn canonicalize_is_idempotent_and_invertible() {
        for a in [c(2.0, -1.7), c(-1.4, 0.2), c(0.3, 2.9), c(-2.0, -2.0)] {
            let p = canonicalize(a);
            assert!((0.0..=1.0 / 6.0 + 1e-15).contains(&p.alpha), "a = {a}");
            let q = canonicalize(p.a);
            assert!((q.a - p.a).norm() < 1e-12, "a = {a}");
            assert!((p.original() - a).norm() < 1e-12, "a = {a}");
        }
    }

    #[test]
    fn canonicalize_identifies_symmetry_classes() {
        let xi = Complex64::from_polar(1.0, TAU / 3.0);
        for a in [c(2.3, 0.4), c(1.1, -0.8)] {
            let base = canonicalize(a).a;
            for k in 0..3 {
                let rot = a * xi.powu(k);
                assert!((canonicalize(rot).a - base).norm() < 1e-12);
                assert!((canonicalize(rot.conj()).a - base).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn escape_radius_formula_and_growth() {
        assert_eq!(escape_radius(Complex64::ZERO, 2.0).unwrap(), 2.0);
        let a = c(3.0, 0.0);
        let r = escape_radius(a, 2.0).unwrap();
        assert_eq!(r, 8.0);
        let map = BlaschkeMap::new(a);
        let z = c(9.0, 0.0);
        let w = map.eval_finite(z).finite().unwrap();
        assert!(w.norm() > 2.0 * z.norm());
        assert_eq!(
            escape_radius(a, 1.0),
            Err(CoreError::InvalidEscapeFactor(1.0))
        );
    }

    #[test]
    fn gmap_fixes_origin_with_local_degree_three() {
        let g = GMap::new(c(2.2, 0.5), c(0.8, -0.6));
        assert_eq!(g.eval(ExtComplex::Finite(Complex64::ZERO)), ExtComplex::Finite(Complex64::ZERO));
        // G(z)/z^3 -> -a b as z -> 0, so G vanishes to exactly third order.
        let h = c(1e-5, 0.0);
        let lead = g.eval(ExtComplex::Finite(h)).finite().unwrap() / (h * h * h);
        assert!((lead + g.a * g.b).norm() < 1e-4);
    }

    #[test]
    fn gmap_critical_product_is_one() {
        for (a, b) in [
            (c(2.0, 1.0), c(1.0, 0.0)),
            (c(0.5, -0.3), c(0.0, 2.0)),
            (c(-1.8, 0.9), c(0.4, 0.4)),
        ] {
            let g = GMap::new(a, b);
            let (cp, cm) = g.critical_points().unwrap();
            assert!((cp * cm - Complex64::ONE).norm() < 1e-10, "a = {a}");
        }
    }
}
