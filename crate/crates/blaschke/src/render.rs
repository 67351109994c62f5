//! Parameter- and dynamical-plane scans with the tongue classification
//! legend, curve overlays, and raster output (PPM always, PNG optional).

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;
use std::io::Write;
use thiserror::Error;

use crate::cycle::{orbit_fate, OrbitFate, OrbitSettings, Stability};
use crate::lift::Lift;
use crate::locus::{BoundaryCurve, BoundarySide};
use crate::map::{critical_points, is_degenerate, BlaschkeMap, ExtComplex};
use crate::tolerances::{ESCAPE_LAMBDA, INNER_CAPTURE};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("scan spec is for the wrong plane: expected a {want} scan")]
    WrongPlane { want: &'static str },
    #[error("degenerate parameter for a dynamical scan")]
    DegenerateParameter,
    #[error("zero-pixel scan")]
    EmptyScan,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("png encoding failed: {0}")]
    Png(#[from] image::ImageError),
}

/// Which plane a scan rasterizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanPlane {
    Parameter,
    Dynamical { a: Complex64 },
}

/// Geometry and iteration limits of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
    pub pixels_x: u32,
    pub pixels_y: u32,
    pub max_iters: usize,
    pub max_period: usize,
    pub escape_lambda: f64,
    pub plane: ScanPlane,
}

impl ScanSpec {
    pub fn parameter(center: Complex64, width: f64, height: f64, px: u32, py: u32) -> Self {
        Self {
            center,
            width,
            height,
            pixels_x: px,
            pixels_y: py,
            max_iters: 2000,
            max_period: 32,
            escape_lambda: ESCAPE_LAMBDA,
            plane: ScanPlane::Parameter,
        }
    }

    pub fn dynamical(
        a: Complex64,
        center: Complex64,
        width: f64,
        height: f64,
        px: u32,
        py: u32,
    ) -> Self {
        Self {
            plane: ScanPlane::Dynamical { a },
            ..Self::parameter(center, width, height, px, py)
        }
    }

    /// Complex coordinate of the pixel center `(ix, iy)`; row 0 is the top.
    pub fn coordinate(&self, ix: u32, iy: u32) -> Complex64 {
        let fx = (ix as f64 + 0.5) / self.pixels_x as f64 - 0.5;
        let fy = 0.5 - (iy as f64 + 0.5) / self.pixels_y as f64;
        self.center + Complex64::new(fx * self.width, fy * self.height)
    }

    /// Pixel holding a complex coordinate, if inside the rectangle.
    pub fn pixel(&self, z: Complex64) -> Option<(u32, u32)> {
        let fx = (z - self.center).re / self.width + 0.5;
        let fy = 0.5 - (z - self.center).im / self.height;
        if !(0.0..1.0).contains(&fx) || !(0.0..1.0).contains(&fy) {
            return None;
        }
        Some((
            (fx * self.pixels_x as f64) as u32,
            (fy * self.pixels_y as f64) as u32,
        ))
    }
}

/// Pixel classification legend shared by both scans. The `u8` value is the
/// code written to grid dumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum PixelClass {
    /// Degenerate family member (`a = 0`, `|a| = 1`).
    Degenerate = 0,
    /// Orbit escaped to infinity.
    Escape = 1,
    /// Orbit fell into the basin of 0.
    ToZero = 2,
    /// Attracting circle cycle of period 1.
    CirclePeriod1 = 3,
    /// Attracting circle cycle of period 2.
    CirclePeriod2 = 4,
    /// Attracting circle cycle of period 3.
    CirclePeriod3 = 5,
    /// Attracting circle cycle of some other period.
    CircleOther = 6,
    /// Attracting cycle off the unit circle.
    OffCircle = 7,
    /// Not resolved within the iteration budget.
    Undecided = 8,
    /// Dynamical plane: basin of the cycle holding the orbit of c_plus.
    BasinPlus = 9,
    /// Dynamical plane: basin of a cycle holding c_minus but not c_plus.
    BasinMinus = 10,
}

impl PixelClass {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Classified scan: one class code and one auxiliary datum (period or
/// escape time) per pixel, row-major from the top-left.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedGrid {
    pub spec: ScanSpec,
    pub classes: Vec<PixelClass>,
    pub aux: Vec<u32>,
}

impl ClassifiedGrid {
    pub fn class_at(&self, ix: u32, iy: u32) -> PixelClass {
        self.classes[(iy * self.spec.pixels_x + ix) as usize]
    }

    /// Grid dump, one `ix,iy,class,aux` record per pixel.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "ix,iy,class,aux")?;
        for iy in 0..self.spec.pixels_y {
            for ix in 0..self.spec.pixels_x {
                let i = (iy * self.spec.pixels_x + ix) as usize;
                writeln!(out, "{ix},{iy},{},{}", self.classes[i].code(), self.aux[i])?;
            }
        }
        Ok(())
    }
}

/// Classifies one parameter by the fate of the orbit of `c_plus`.
pub fn classify_parameter(a: Complex64, spec: &ScanSpec) -> (PixelClass, u32) {
    if is_degenerate(a) {
        return (PixelClass::Degenerate, 0);
    }
    let Ok((c_plus, _)) = critical_points(a) else {
        return (PixelClass::Degenerate, 0);
    };
    let settings = OrbitSettings {
        max_iters: spec.max_iters,
        max_period: spec.max_period,
        escape_lambda: spec.escape_lambda,
        // Accumulation on the circle for rendering purposes.
        circle_tol: 1e-6,
        return_tol: 1e-9,
    };
    match orbit_fate(a, c_plus, &settings) {
        OrbitFate::Escaped { iterations } => (PixelClass::Escape, iterations as u32),
        OrbitFate::ToZero { iterations } => (PixelClass::ToZero, iterations as u32),
        OrbitFate::CircleCycle(c) => {
            let class = match c.period {
                1 => PixelClass::CirclePeriod1,
                2 => PixelClass::CirclePeriod2,
                3 => PixelClass::CirclePeriod3,
                _ => PixelClass::CircleOther,
            };
            (class, c.period as u32)
        }
        OrbitFate::OffCircleCycle { period, .. } => (PixelClass::OffCircle, period as u32),
        OrbitFate::Undecided => (PixelClass::Undecided, spec.max_iters as u32),
    }
}

/// Scans the parameter plane: per pixel, the orbit of `c_plus(a)` decides
/// the class. Deterministic for a fixed spec.
pub fn scan_parameter_plane(spec: &ScanSpec) -> Result<ClassifiedGrid, RenderError> {
    if spec.plane != ScanPlane::Parameter {
        return Err(RenderError::WrongPlane { want: "parameter" });
    }
    if spec.pixels_x == 0 || spec.pixels_y == 0 {
        return Err(RenderError::EmptyScan);
    }
    let rows: Vec<Vec<(PixelClass, u32)>> = (0..spec.pixels_y)
        .into_par_iter()
        .map(|iy| {
            (0..spec.pixels_x)
                .map(|ix| classify_parameter(spec.coordinate(ix, iy), spec))
                .collect()
        })
        .collect();
    Ok(collect_rows(spec, rows))
}

fn collect_rows(spec: &ScanSpec, rows: Vec<Vec<(PixelClass, u32)>>) -> ClassifiedGrid {
    let n = (spec.pixels_x * spec.pixels_y) as usize;
    let mut classes = Vec::with_capacity(n);
    let mut aux = Vec::with_capacity(n);
    for row in rows {
        for (c, x) in row {
            classes.push(c);
            aux.push(x);
        }
    }
    ClassifiedGrid { spec: *spec, classes, aux }
}

/// An attracting or parabolic target cycle for basin assignment in the
/// dynamical plane.
#[derive(Debug, Clone)]
struct TargetCycle {
    points: Vec<Complex64>,
    period: usize,
    parabolic: bool,
}

/// Finds the cycle the orbit of `start` settles on; falls back to a
/// lift-based search for parabolic circle cycles, which plain iteration
/// cannot resolve within any practical budget.
fn target_cycle(a: Complex64, start: Complex64, settings: &OrbitSettings) -> Option<TargetCycle> {
    match orbit_fate(a, start, settings) {
        OrbitFate::CircleCycle(c) => {
            let alpha = a.arg() / TAU;
            let points = c
                .points
                .iter()
                .map(|&x| Complex64::from_polar(1.0, TAU * (x + alpha)))
                .collect();
            let parabolic = matches!(
                c.stability,
                Stability::ParabolicPlusOne | Stability::ParabolicMinusOne
            );
            Some(TargetCycle { points, period: c.period, parabolic })
        }
        OrbitFate::OffCircleCycle { points, period, .. } => {
            Some(TargetCycle { points, period, parabolic: false })
        }
        _ => parabolic_circle_cycle(a, settings.max_period.min(8)),
    }
}

/// Searches the circle map for a parabolic cycle of period up to `max_p`
/// (multiplier within 1e-5 of 1).
fn parabolic_circle_cycle(a: Complex64, max_p: usize) -> Option<TargetCycle> {
    let alpha = a.arg() / TAU;
    let lift = Lift::new(a.norm(), alpha).ok()?;
    for p in 1..=max_p {
        let n = 256 * p;
        let mut best: Option<(f64, f64)> = None;
        for i in 0..n {
            let x = i as f64 / n as f64;
            let j = lift.jet(x, p);
            let res = j.value - x;
            if (res - res.round()).abs() > 1e-4 || (j.d1 - 1.0).abs() > 0.3 {
                continue;
            }
            // Move to the critical point of h^p(x) - x nearby, where a
            // saddle-node sits if there is one.
            let mut y = x;
            for _ in 0..40 {
                let jj = lift.jet(y, p);
                if jj.d2.abs() < 1e-12 {
                    break;
                }
                let step = (jj.d1 - 1.0) / jj.d2;
                y -= step;
                if step.abs() < 1e-13 {
                    break;
                }
            }
            let jj = lift.jet(y, p);
            let res = jj.value - y;
            let fixed = (res - res.round()).abs();
            if fixed < 1e-6
                && (jj.d1 - 1.0).abs() < 1e-5
                && best.is_none_or(|(f, _)| fixed < f)
            {
                best = Some((fixed, y));
            }
        }
        if let Some((_, x0)) = best {
            let mut points = Vec::with_capacity(p);
            let mut y = x0.rem_euclid(1.0);
            for _ in 0..p {
                points.push(Complex64::from_polar(1.0, TAU * (y + alpha)));
                y = lift.eval(y).rem_euclid(1.0);
            }
            return Some(TargetCycle { points, period: p, parabolic: true });
        }
    }
    None
}

/// Capture radius for attracting targets; convergence is geometric, so the
/// orbit reaches it quickly.
const ATTRACTING_CAPTURE: f64 = 1e-6;

/// Capture radius for parabolic targets, tested only at the end of the
/// iteration budget: the approach is algebraic (roughly `n^{-1/2}` at a
/// multiplicity-3 point), so transits along the repelling directions have
/// left this neighborhood by then while petal orbits remain inside it.
const PARABOLIC_CAPTURE: f64 = 2.5e-2;

fn captured_attracting(z: Complex64, target: &TargetCycle) -> bool {
    !target.parabolic
        && target
            .points
            .iter()
            .any(|&w| (z - w).norm() < ATTRACTING_CAPTURE)
}

fn captured_parabolic(map: &BlaschkeMap, z: Complex64, target: &TargetCycle) -> bool {
    if !target.parabolic {
        return false;
    }
    let mut nearest = f64::INFINITY;
    let mut w_near = Complex64::ZERO;
    for &w in &target.points {
        let d = (z - w).norm();
        if d < nearest {
            nearest = d;
            w_near = w;
        }
    }
    if nearest >= PARABOLIC_CAPTURE {
        return false;
    }
    // The next period-return must move inward.
    let mut v = z;
    for _ in 0..target.period {
        v = match map.eval_finite(v) {
            ExtComplex::Finite(u) => u,
            ExtComplex::Infinity => return false,
        };
    }
    (v - w_near).norm() <= nearest
}

/// Scans the dynamical plane of `B_a`: black for the basin of 0, a
/// blue-to-red ramp (by escape time) for the basin of infinity, green for
/// the basin of the cycle that attracts the orbit of `c_plus`, yellow for a
/// cycle attracting `c_minus` but not `c_plus`.
pub fn scan_dynamical_plane(a: Complex64, spec: &ScanSpec) -> Result<ClassifiedGrid, RenderError> {
    match spec.plane {
        ScanPlane::Dynamical { a: spec_a } if spec_a == a => {}
        _ => return Err(RenderError::WrongPlane { want: "dynamical" }),
    }
    if is_degenerate(a) || a.norm() <= 1.0 {
        return Err(RenderError::DegenerateParameter);
    }
    if spec.pixels_x == 0 || spec.pixels_y == 0 {
        return Err(RenderError::EmptyScan);
    }
    let settings = OrbitSettings {
        max_iters: spec.max_iters.max(20_000),
        max_period: spec.max_period,
        escape_lambda: spec.escape_lambda,
        circle_tol: 1e-6,
        return_tol: 1e-9,
    };
    let (c_plus, c_minus) = critical_points(a).map_err(|_| RenderError::DegenerateParameter)?;
    let target_plus = target_cycle(a, c_plus, &settings);
    let target_minus = target_cycle(a, c_minus, &settings);
    // For |a| >= 2 the two critical orbits land on the same cycle; drop the
    // duplicate target so those pixels read as the c_plus basin.
    let target_minus = match (&target_plus, target_minus) {
        (Some(tp), Some(tm)) => {
            let same = tp.period == tm.period
                && tm.points.iter().any(|w| (w - tp.points[0]).norm() < 1e-6);
            if same {
                None
            } else {
                Some(tm)
            }
        }
        (_, tm) => tm,
    };

    let map = BlaschkeMap::new(a);
    let escape = spec.escape_lambda * (a.norm() + 1.0);
    let rows: Vec<Vec<(PixelClass, u32)>> = (0..spec.pixels_y)
        .into_par_iter()
        .map(|iy| {
            let mut row = Vec::with_capacity(spec.pixels_x as usize);
            for ix in 0..spec.pixels_x {
                let mut z = spec.coordinate(ix, iy);
                let mut result = None;
                for n in 0..spec.max_iters {
                    if z.norm() > escape {
                        result = Some((PixelClass::Escape, n as u32));
                        break;
                    }
                    if z.norm() < INNER_CAPTURE {
                        result = Some((PixelClass::ToZero, n as u32));
                        break;
                    }
                    if let Some(t) = &target_plus {
                        if captured_attracting(z, t) {
                            result = Some((PixelClass::BasinPlus, n as u32));
                            break;
                        }
                    }
                    if let Some(t) = &target_minus {
                        if captured_attracting(z, t) {
                            result = Some((PixelClass::BasinMinus, n as u32));
                            break;
                        }
                    }
                    z = match map.eval_finite(z) {
                        ExtComplex::Finite(w) => w,
                        ExtComplex::Infinity => {
                            result = Some((PixelClass::Escape, n as u32));
                            break;
                        }
                    };
                    if !z.is_finite() {
                        result = Some((PixelClass::Escape, n as u32));
                        break;
                    }
                }
                // Parabolic basins are decided at the end of the budget.
                let result = result.unwrap_or_else(|| {
                    let plus = target_plus
                        .as_ref()
                        .is_some_and(|t| captured_parabolic(&map, z, t));
                    let minus = target_minus
                        .as_ref()
                        .is_some_and(|t| captured_parabolic(&map, z, t));
                    if plus {
                        (PixelClass::BasinPlus, spec.max_iters as u32)
                    } else if minus {
                        (PixelClass::BasinMinus, spec.max_iters as u32)
                    } else {
                        (PixelClass::Undecided, spec.max_iters as u32)
                    }
                });
                row.push(result);
            }
            row
        })
        .collect();
    Ok(collect_rows(spec, rows))
}

/// Plain RGB raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB triples.
    pub data: Vec<u8>,
}

impl Raster {
    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let mut data = Vec::with_capacity((width * height * 3) as usize);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Self { width, height, data }
    }

    pub fn set(&mut self, ix: u32, iy: u32, rgb: [u8; 3]) {
        if ix < self.width && iy < self.height {
            let i = ((iy * self.width + ix) * 3) as usize;
            self.data[i..i + 3].copy_from_slice(&rgb);
        }
    }

    /// Binary PPM (P6, 8-bit).
    pub fn write_ppm(&self, out: &mut impl Write) -> std::io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.data)
    }

    pub fn write_png(&self, path: &std::path::Path) -> Result<(), RenderError> {
        let img = image::RgbImage::from_raw(self.width, self.height, self.data.clone())
            .expect("raster buffer matches dimensions");
        img.save_with_format(path, image::ImageFormat::Png)?;
        Ok(())
    }
}

/// Parameter-plane palette: red for escape, black for the basin of zero,
/// orange / strong green / violet for circle cycles of period 1 / 2 / 3,
/// pallid green for other circle periods, pink for attracting cycles off
/// the circle, blue otherwise.
pub fn parameter_color(class: PixelClass, _aux: u32) -> [u8; 3] {
    match class {
        PixelClass::Degenerate => [128, 0, 0],
        PixelClass::Escape => [255, 0, 0],
        PixelClass::ToZero => [0, 0, 0],
        PixelClass::CirclePeriod1 => [255, 165, 0],
        PixelClass::CirclePeriod2 => [0, 176, 80],
        PixelClass::CirclePeriod3 => [148, 0, 211],
        PixelClass::CircleOther => [182, 255, 182],
        PixelClass::OffCircle => [255, 105, 180],
        PixelClass::Undecided | PixelClass::BasinPlus | PixelClass::BasinMinus => [0, 0, 255],
    }
}

/// Dynamical-plane palette: escape times ramp linearly from blue to red on
/// a log scale (256 steps), the basin of 0 is black, the basin holding
/// `c_plus` green, the one holding only `c_minus` yellow.
pub fn dynamical_color(class: PixelClass, aux: u32, max_iters: usize) -> [u8; 3] {
    match class {
        PixelClass::Escape => {
            let t = ((aux.max(1) as f64).ln() / (max_iters.max(2) as f64).ln()).clamp(0.0, 1.0);
            let step = (t * 255.0).round() as u8;
            [step, 0, 255 - step]
        }
        PixelClass::ToZero => [0, 0, 0],
        PixelClass::BasinPlus => [0, 170, 0],
        PixelClass::BasinMinus => [255, 215, 0],
        _ => [40, 40, 40],
    }
}

/// Renders a classified parameter grid through the parameter palette.
pub fn rasterize_parameter(grid: &ClassifiedGrid) -> Raster {
    let mut raster = Raster::filled(grid.spec.pixels_x, grid.spec.pixels_y, [0, 0, 0]);
    for iy in 0..grid.spec.pixels_y {
        for ix in 0..grid.spec.pixels_x {
            let i = (iy * grid.spec.pixels_x + ix) as usize;
            raster.set(ix, iy, parameter_color(grid.classes[i], grid.aux[i]));
        }
    }
    raster
}

/// Renders a classified dynamical grid through the dynamical palette.
pub fn rasterize_dynamical(grid: &ClassifiedGrid) -> Raster {
    let mut raster = Raster::filled(grid.spec.pixels_x, grid.spec.pixels_y, [0, 0, 0]);
    for iy in 0..grid.spec.pixels_y {
        for ix in 0..grid.spec.pixels_x {
            let i = (iy * grid.spec.pixels_x + ix) as usize;
            raster.set(
                ix,
                iy,
                dynamical_color(grid.classes[i], grid.aux[i], grid.spec.max_iters),
            );
        }
    }
    raster
}

fn draw_segment(raster: &mut Raster, spec: &ScanSpec, from: Complex64, to: Complex64, rgb: [u8; 3]) {
    let px = (to - from).norm() / (spec.width / spec.pixels_x as f64);
    let steps = (px.ceil() as usize).clamp(1, 100_000) * 2;
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let z = from + (to - from) * t;
        if let Some((ix, iy)) = spec.pixel(z) {
            raster.set(ix, iy, rgb);
        }
    }
}

fn draw_circle(raster: &mut Raster, spec: &ScanSpec, radius: f64, rgb: [u8; 3]) {
    let steps = (spec.pixels_x.max(spec.pixels_y) as usize) * 8;
    for s in 0..steps {
        let z = Complex64::from_polar(radius, TAU * s as f64 / steps as f64);
        if let Some((ix, iy)) = spec.pixel(z) {
            raster.set(ix, iy, rgb);
        }
    }
}

/// Overlay color of a traced locus: multiplier-one curves (tongue
/// boundaries and exterior extended boundaries) in green, period-doubling
/// multiplier-minus-one curves in blue.
fn side_color(side: BoundarySide) -> [u8; 3] {
    match side {
        BoundarySide::MultiplierMinusOne => [0, 90, 255],
        _ => [0, 160, 40],
    }
}

/// Draws boundary curves over an optional parameter scan, with the
/// reference circles `|a| = 1` and `|a| = 2` in red. Curve points outside
/// the rectangle are clipped silently.
pub fn render_tongue_overlay(
    curves: &[BoundaryCurve],
    spec: &ScanSpec,
    background: Option<&ClassifiedGrid>,
) -> Raster {
    let mut raster = match background {
        Some(grid) => rasterize_parameter(grid),
        None => Raster::filled(spec.pixels_x, spec.pixels_y, [255, 255, 255]),
    };
    draw_circle(&mut raster, spec, 1.0, [255, 0, 0]);
    draw_circle(&mut raster, spec, 2.0, [255, 0, 0]);
    for curve in curves {
        let rgb = side_color(curve.side);
        for w in curve.samples.windows(2) {
            draw_segment(&mut raster, spec, w[0].a(), w[1].a(), rgb);
        }
        if curve.samples.len() == 1 {
            if let Some((ix, iy)) = spec.pixel(curve.samples[0].a()) {
                raster.set(ix, iy, rgb);
            }
        }
    }
    raster
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parameter_classification_anchors() {
        let spec = ScanSpec::parameter(c(0.0, 0.0), 8.0, 8.0, 4, 4);
        // Inside the unit disk the free critical orbit escapes.
        assert_eq!(classify_parameter(c(0.5, 0.0), &spec).0, PixelClass::Escape);
        // Inside the fixed tongue: period-1 circle attractor.
        assert_eq!(classify_parameter(c(2.5, 0.0), &spec).0, PixelClass::CirclePeriod1);
        // Just inside the disjoint hyperbolic component near the tip.
        let spec_fine = ScanSpec { max_iters: 20_000, ..spec };
        assert_eq!(
            classify_parameter(c(2.7355, 0.0316), &spec_fine).0,
            PixelClass::OffCircle
        );
    }

    #[test]
    fn parameter_scan_is_deterministic() {
        let spec = ScanSpec::parameter(c(0.2, 0.1), 6.0, 6.0, 24, 16);
        let g1 = scan_parameter_plane(&spec).unwrap();
        let g2 = scan_parameter_plane(&spec).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn parameter_scan_rejects_dynamical_spec() {
        let spec = ScanSpec::dynamical(c(2.0, 0.0), c(0.0, 0.0), 4.0, 4.0, 4, 4);
        assert!(matches!(
            scan_parameter_plane(&spec),
            Err(RenderError::WrongPlane { .. })
        ));
    }

    #[test]
    fn dynamical_scan_anchors_at_root() {
        let a = c(2.0, 0.0);
        let mut spec = ScanSpec::dynamical(a, c(0.0, 0.0), 6.0, 6.0, 8, 8);
        spec.max_iters = 5_000;
        let grid = scan_dynamical_plane(a, &spec).unwrap();
        // z near 0 is inside the immediate basin of 0; far pixels escape.
        let near_zero = spec.pixel(c(0.1, 0.0)).unwrap();
        assert_eq!(grid.class_at(near_zero.0, near_zero.1), PixelClass::ToZero);
        let far = spec.pixel(c(2.9, 2.9)).unwrap();
        assert_eq!(grid.class_at(far.0, far.1), PixelClass::Escape);
    }

    #[test]
    fn dynamical_scan_finds_parabolic_basin_at_the_tip() {
        let a = c(3.0, 0.0);
        let mut spec = ScanSpec::dynamical(a, c(1.0, 0.0), 0.5, 0.5, 16, 16);
        spec.max_iters = 5_000;
        let grid = scan_dynamical_plane(a, &spec).unwrap();
        // A circle point near z = 1 but away from it converges into the
        // parabolic point whose petal holds the critical point.
        let probe = Complex64::from_polar(1.0, 0.05);
        let (ix, iy) = spec.pixel(probe).unwrap();
        assert_eq!(grid.class_at(ix, iy), PixelClass::BasinPlus);
    }

    #[test]
    fn ppm_bytes_are_stable() {
        let mut r = Raster::filled(2, 2, [1, 2, 3]);
        r.set(1, 1, [255, 0, 255]);
        let mut buf = Vec::new();
        r.write_ppm(&mut buf).unwrap();
        assert_eq!(&buf[..11], b"P6\n2 2\n255\n");
        assert_eq!(buf.len(), 11 + 12);
        assert_eq!(&buf[11 + 9..], &[255, 0, 255]);
    }

    #[test]
    fn overlay_draws_reference_circles() {
        let spec = ScanSpec::parameter(c(0.0, 0.0), 5.0, 5.0, 64, 64);
        let raster = render_tongue_overlay(&[], &spec, None);
        let (ix, iy) = spec.pixel(c(2.0, 0.0)).unwrap();
        let i = ((iy * raster.width + ix) * 3) as usize;
        assert_eq!(&raster.data[i..i + 3], &[255, 0, 0]);
    }
}
