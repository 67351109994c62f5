//! Lift of the circle restriction of the family in the `(r, alpha)`
//! parametrization, with closed-form derivatives up to third order and the
//! semiconjugacy to the doubling map.

use thiserror::Error;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Error, PartialEq)]
pub enum LiftError {
    #[error("lift undefined at radius {0}; requires r > 1")]
    DegenerateRadius(f64),
    #[error("semiconjugacy undefined below |a| = 2 (got r = {0})")]
    SemiconjugacyUndefined(f64),
}

/// Lift `h(x) = 3x + 3 alpha + arg((e^{2 pi i x} - r)/(1 - r e^{2 pi i x}))/(2 pi)`
/// of the circle map, evaluated through the identity
///
/// ```text
/// h(x) = 2x + 3 alpha + atan2(-sin(2 pi x), r - cos(2 pi x)) / pi
/// ```
///
/// For `r > 1` the vector `r - e^{2 pi i x}` stays in the right half plane,
/// so the atan2 branch is continuous in `x`, agrees with the principal
/// branch at `x = 0`, and satisfies the degree identity `h(x+1) = h(x) + 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lift {
    pub r: f64,
    pub alpha: f64,
}

/// `h^p` and its partial derivatives at one point, accumulated along the
/// orbit by the chain rule. `d*` are derivatives in `x`, `*_da` in `alpha`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IterateJet {
    /// `h^p(x)` (unreduced lift value).
    pub value: f64,
    /// `(h^p)'(x)`.
    pub d1: f64,
    /// `(h^p)''(x)`.
    pub d2: f64,
    /// `(h^p)'''(x)`.
    pub d3: f64,
    /// `d h^p / d alpha`.
    pub da: f64,
    /// `d (h^p)' / d alpha`.
    pub d1_da: f64,
    /// `d (h^p)'' / d alpha`.
    pub d2_da: f64,
}

impl Lift {
    pub fn new(r: f64, alpha: f64) -> Result<Self, LiftError> {
        if !(r > 1.0) {
            return Err(LiftError::DegenerateRadius(r));
        }
        Ok(Self { r, alpha })
    }

    /// `h(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let (s, c) = (TAU * x).sin_cos();
        2.0 * x + 3.0 * self.alpha + (-s).atan2(self.r - c) / PI
    }

    /// `h'(x) = 3 + (1 - r^2)/(1 + r^2 - 2 r cos(2 pi x))`. Independent of
    /// `alpha`; its minimum over `x` sits at `x = 0` where it equals
    /// `3 + (1 + r)/(1 - r)`.
    pub fn derivative(&self, x: f64) -> f64 {
        let r = self.r;
        let d = 1.0 + r * r - 2.0 * r * (TAU * x).cos();
        3.0 + (1.0 - r * r) / d
    }

    /// `h''(x)`.
    pub fn second_derivative(&self, x: f64) -> f64 {
        let r = self.r;
        let (s, c) = (TAU * x).sin_cos();
        let d = 1.0 + r * r - 2.0 * r * c;
        4.0 * PI * r * (r * r - 1.0) * s / (d * d)
    }

    /// `h'''(x)`.
    pub fn third_derivative(&self, x: f64) -> f64 {
        let r = self.r;
        let (s, c) = (TAU * x).sin_cos();
        let d = 1.0 + r * r - 2.0 * r * c;
        8.0 * PI * PI * r * (r * r - 1.0) * (c * d - 4.0 * r * s * s) / (d * d * d)
    }

    /// One lift step split into integer and fractional parts, so that long
    /// compositions never feed a large argument to `sin`/`cos`. The input
    /// fractional part must lie in `[0, 1)`.
    fn step_split(&self, int: f64, frac: f64) -> (f64, f64) {
        let y = self.eval(frac);
        let fl = y.floor();
        (2.0 * int + fl, y - fl)
    }

    /// `h^p(x)`. Exact integer bookkeeping keeps the trigonometric
    /// evaluations on arguments in `[0, 1)`.
    pub fn iterate(&self, x: f64, p: usize) -> f64 {
        let mut int = x.floor();
        let mut frac = x - int;
        for _ in 0..p {
            (int, frac) = self.step_split(int, frac);
        }
        int + frac
    }

    /// `h^p` with first to third `x`-derivatives and the `alpha`-derivatives
    /// of value, first and second derivative.
    pub fn jet(&self, x: f64, p: usize) -> IterateJet {
        let mut int = x.floor();
        let mut frac = x - int;
        let mut j = IterateJet {
            value: 0.0,
            d1: 1.0,
            ..IterateJet::default()
        };
        for _ in 0..p {
            let h1 = self.derivative(frac);
            let h2 = self.second_derivative(frac);
            let h3 = self.third_derivative(frac);
            let d3 = h3 * j.d1 * j.d1 * j.d1 + 3.0 * h2 * j.d1 * j.d2 + h1 * j.d3;
            let d2 = h2 * j.d1 * j.d1 + h1 * j.d2;
            let d2_da = h3 * j.da * j.d1 * j.d1
                + 2.0 * h2 * j.d1 * j.d1_da
                + h2 * j.da * j.d2
                + h1 * j.d2_da;
            let d1_da = h2 * j.da * j.d1 + h1 * j.d1_da;
            let da = h1 * j.da + 3.0;
            let d1 = h1 * j.d1;
            (int, frac) = self.step_split(int, frac);
            j = IterateJet { value: 0.0, d1, d2, d3, da, d1_da, d2_da };
        }
        j.value = int + frac;
        j
    }

    /// Supremum of the displacement `|h(x) - 2x|` over a grid, used as the
    /// geometric tail constant for the semiconjugacy limit.
    pub fn sup_displacement(&self) -> f64 {
        const GRID: usize = 256;
        let mut m: f64 = 0.0;
        for i in 0..GRID {
            let x = i as f64 / GRID as f64;
            m = m.max((self.eval(x) - 2.0 * x).abs());
        }
        // The displacement 3 alpha + arg(..)/(2 pi) has bounded slope;
        // pad for the gap between grid points.
        m + 1e-3
    }

    /// Semiconjugacy `H(x) = lim h^n(x)/2^n` to the doubling map, computed
    /// by iterating until the tail bound `M/2^n` drops below `tol`. Defined
    /// for `r >= 2`, where the circle map is a degree-two cover.
    pub fn semiconjugacy(&self, x: f64, tol: f64) -> Result<f64, LiftError> {
        if self.r < 2.0 {
            return Err(LiftError::SemiconjugacyUndefined(self.r));
        }
        let m = self.sup_displacement();
        let n = ((m / tol).log2().ceil() as usize).clamp(1, 52);
        let shift = x.floor();
        let mut int = 0.0;
        let mut frac = x - shift;
        for _ in 0..n {
            (int, frac) = self.step_split(int, frac);
        }
        Ok(shift + (int + frac) / (1u64 << n) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_anchors() {
        let l = Lift::new(2.0, 0.0).unwrap();
        assert!(l.eval(0.0).abs() < 1e-15);
        assert!((l.eval(1.0) - 2.0).abs() < 1e-15);
        let l3 = Lift::new(3.0, 0.0).unwrap();
        assert!(l3.eval(0.0).abs() < 1e-15);
        assert!((l3.derivative(0.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_anchors() {
        assert!(Lift::new(2.0, 0.0).unwrap().derivative(0.0).abs() < 1e-14);
        assert!((Lift::new(5.0 / 3.0, 0.0).unwrap().derivative(0.0) + 1.0).abs() < 1e-13);
        assert!((Lift::new(2.0, 0.0).unwrap().derivative(0.5) - 24.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_minimum_at_zero() {
        let l = Lift::new(2.4, 0.1).unwrap();
        let min = l.derivative(0.0);
        for i in 1..200 {
            let x = i as f64 / 200.0;
            assert!(l.derivative(x) >= min);
        }
    }

    #[test]
    fn degree_two_identity() {
        for (r, alpha) in [(2.0, 0.0), (1.3, 0.21), (2.9, 0.05), (4.0, 0.3)] {
            let l = Lift::new(r, alpha).unwrap();
            for i in 0..50 {
                let x = -1.7 + 0.1 * i as f64;
                assert!(
                    (l.eval(x + 1.0) - l.eval(x) - 2.0).abs() < 1e-10,
                    "r = {r}, x = {x}"
                );
            }
        }
    }

    #[test]
    fn iterate_degree_identity() {
        // h^p(x+1) = h^p(x) + 2^p.
        let l = Lift::new(2.2, 0.07).unwrap();
        for p in 1..=8 {
            for i in 0..10 {
                let x = 0.09 * i as f64;
                let lhs = l.iterate(x + 1.0, p);
                let rhs = l.iterate(x, p) + (1u64 << p) as f64;
                assert!((lhs - rhs).abs() < 1e-8, "p = {p}, x = {x}");
            }
        }
    }

    #[test]
    fn strictly_increasing_in_alpha() {
        let base = Lift::new(2.5, 0.1).unwrap();
        let up = Lift::new(2.5, 0.1 + 1e-6).unwrap();
        for i in 0..100 {
            let x = i as f64 / 100.0;
            assert!(up.eval(x) > base.eval(x));
        }
    }

    #[test]
    fn monotone_for_large_radius() {
        for i in 0..400 {
            let x = i as f64 / 400.0;
            assert!(Lift::new(2.0, 0.0).unwrap().derivative(x) >= 0.0);
            assert!(Lift::new(3.0, 0.0).unwrap().derivative(x) >= 1.0 - 1e-12);
            assert!(Lift::new(3.5, 0.0).unwrap().derivative(x) >= 1.0);
        }
    }

    #[test]
    fn continuity_against_raw_log_branch() {
        // The closed form must agree with the defining expression
        // 3x + 3a + arg(w)/(2 pi) up to the integer branch constant; check
        // that h is continuous and increasing across x = 0 where the
        // principal branch of the raw expression jumps.
        let l = Lift::new(2.0, 0.0).unwrap();
        let mut prev = l.eval(-0.51);
        for i in 1..=102 {
            let x = -0.51 + 0.01 * i as f64;
            let v = l.eval(x);
            assert!(v >= prev - 1e-12, "jump at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let l = Lift::new(2.3, 0.08).unwrap();
        let h = 1e-5;
        for i in 0..40 {
            let x = -0.5 + i as f64 * 0.025;
            let d1 = (l.eval(x + h) - l.eval(x - h)) / (2.0 * h);
            assert!((d1 - l.derivative(x)).abs() < 1e-7, "x = {x}");
            let d2 = (l.derivative(x + h) - l.derivative(x - h)) / (2.0 * h);
            assert!((d2 - l.second_derivative(x)).abs() < 1e-5, "x = {x}");
            let d3 = (l.second_derivative(x + h) - l.second_derivative(x - h)) / (2.0 * h);
            assert!(
                (d3 - l.third_derivative(x)).abs() < 1e-3 * l.third_derivative(x).abs().max(1.0),
                "x = {x}"
            );
        }
    }

    #[test]
    fn jet_matches_finite_differences() {
        let r = 2.4;
        let alpha = 0.06;
        let l = Lift::new(r, alpha).unwrap();
        let p = 4;
        let x = 0.37;
        let j = l.jet(x, p);
        let h = 1e-6;

        assert!((j.value - l.iterate(x, p)).abs() < 1e-12);
        let d1 = (l.iterate(x + h, p) - l.iterate(x - h, p)) / (2.0 * h);
        assert!((j.d1 - d1).abs() < 1e-5 * j.d1.abs().max(1.0));
        let d2 = (l.jet(x + h, p).d1 - l.jet(x - h, p).d1) / (2.0 * h);
        assert!((j.d2 - d2).abs() < 1e-4 * j.d2.abs().max(1.0));
        let d3 = (l.jet(x + h, p).d2 - l.jet(x - h, p).d2) / (2.0 * h);
        assert!((j.d3 - d3).abs() < 1e-3 * j.d3.abs().max(1.0));

        let lp = Lift::new(r, alpha + h).unwrap();
        let lm = Lift::new(r, alpha - h).unwrap();
        let da = (lp.iterate(x, p) - lm.iterate(x, p)) / (2.0 * h);
        assert!((j.da - da).abs() < 1e-5 * j.da.abs().max(1.0));
        let d1_da = (lp.jet(x, p).d1 - lm.jet(x, p).d1) / (2.0 * h);
        assert!((j.d1_da - d1_da).abs() < 1e-4 * j.d1_da.abs().max(1.0));
        let d2_da = (lp.jet(x, p).d2 - lm.jet(x, p).d2) / (2.0 * h);
        assert!((j.d2_da - d2_da).abs() < 1e-3 * j.d2_da.abs().max(1.0));
    }

    #[test]
    fn rejects_degenerate_radius() {
        assert_eq!(Lift::new(1.0, 0.0), Err(LiftError::DegenerateRadius(1.0)));
        assert_eq!(Lift::new(0.5, 0.0), Err(LiftError::DegenerateRadius(0.5)));
    }

    #[test]
    fn semiconjugacy_fixes_zero_at_root() {
        let l = Lift::new(2.0, 0.0).unwrap();
        assert!(l.semiconjugacy(0.0, 1e-10).unwrap().abs() < 1e-10);
    }

    #[test]
    fn semiconjugacy_translation_and_functional_equation() {
        let tol = 1e-9;
        for (r, alpha, x) in [(2.0, 0.11, 0.3), (2.7, 0.02, 0.83), (3.4, 0.29, -0.4)] {
            let l = Lift::new(r, alpha).unwrap();
            let hx = l.semiconjugacy(x, tol).unwrap();
            let hx1 = l.semiconjugacy(x + 1.0, tol).unwrap();
            assert!((hx1 - hx - 1.0).abs() < tol, "r = {r}");
            let hh = l.semiconjugacy(l.eval(x), tol).unwrap();
            assert!((hh - 2.0 * hx).abs() < 4.0 * tol, "r = {r}");
        }
    }

    #[test]
    fn semiconjugacy_rejects_small_radius() {
        let l = Lift::new(1.7, 0.0).unwrap();
        assert!(matches!(
            l.semiconjugacy(0.2, 1e-8),
            Err(LiftError::SemiconjugacyUndefined(_))
        ));
    }
}
