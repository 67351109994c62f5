//! Canned scan and overlay recipes for the atlas figures.

use blaschke::cycle::TongueType;
use blaschke::locus::{
    extended_tongue_slice, trace_boundary_with, BoundaryCurve, BoundaryPoint, BoundarySide,
    LocusError, Provenance, TraceSettings,
};
use blaschke::render::{
    render_tongue_overlay, scan_dynamical_plane, scan_parameter_plane, rasterize_dynamical,
    rasterize_parameter, Raster, RenderError, ScanSpec,
};
use num_complex::Complex64;

#[derive(Debug)]
pub enum ReproduceError {
    Locus(LocusError),
    Render(RenderError),
}

impl std::fmt::Display for ReproduceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReproduceError::Locus(e) => write!(f, "{e}"),
            ReproduceError::Render(e) => write!(f, "{e}"),
        }
    }
}

impl From<LocusError> for ReproduceError {
    fn from(e: LocusError) -> Self {
        Self::Locus(e)
    }
}

impl From<RenderError> for ReproduceError {
    fn from(e: RenderError) -> Self {
        Self::Render(e)
    }
}

pub const FIGURES: &[&str] = &[
    "fig2", "fig3a", "fig4", "fig5a", "fig5b", "fig5c", "fig5d", "fig6",
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn parameter_scan(center: Complex64, w: f64, h: f64, pixels: u32, max_iters: usize) -> ScanSpec {
    let mut spec = ScanSpec::parameter(center, w, h, pixels, pixels);
    spec.max_iters = max_iters;
    spec
}

fn dynamical_scan(a: Complex64, pixels: u32, max_iters: usize) -> ScanSpec {
    let mut spec = ScanSpec::dynamical(a, c(0.0, 0.0), 3.2, 3.2, pixels, pixels);
    spec.max_iters = max_iters;
    spec
}

/// Renders one figure at the given resolution; returns the raster.
pub fn reproduce(figure: &str, pixels: u32) -> Result<Raster, ReproduceError> {
    match figure {
        // Full parameter plane: tongues live inside |a| < 3.
        "fig2" => {
            let spec = parameter_scan(c(0.0, 0.0), 8.0, 8.0, pixels, 2000);
            Ok(rasterize_parameter(&scan_parameter_plane(&spec)?))
        }
        // The wedge 0 < alpha < 1/6 carries one copy of every tongue.
        "fig3a" => {
            let spec = parameter_scan(c(1.6, 1.4), 3.2, 2.8, pixels, 2000);
            Ok(rasterize_parameter(&scan_parameter_plane(&spec)?))
        }
        // Zoom on the tip of the fixed tongue with its neighbor component.
        "fig4" => {
            let spec = parameter_scan(c(2.78, 0.05), 0.6, 0.4, pixels, 8000);
            Ok(rasterize_parameter(&scan_parameter_plane(&spec)?))
        }
        "fig5a" => dynamical_figure(c(3.0, 0.0), pixels),
        "fig5b" => dynamical_figure(c(2.65675, 0.0389604), pixels),
        "fig5c" => dynamical_figure(c(2.55309, 0.063042), pixels),
        "fig5d" => dynamical_figure(c(2.64732, 0.0421017), pixels),
        "fig6" => fig6(pixels),
        other => Err(ReproduceError::Render(RenderError::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            format!("unknown figure id {other:?} (known: {FIGURES:?})"),
        )))),
    }
}

fn dynamical_figure(a: Complex64, pixels: u32) -> Result<Raster, ReproduceError> {
    let spec = dynamical_scan(a, pixels, 2000);
    Ok(rasterize_dynamical(&scan_dynamical_plane(a, &spec)?))
}

/// Rotates a curve by a third of a turn `k` times, optionally mirroring it
/// across the real axis first.
fn symmetric_copy(samples: &[BoundaryPoint], rotation: u8, mirror: bool) -> Vec<BoundaryPoint> {
    samples
        .iter()
        .map(|s| {
            let alpha = if mirror { -s.alpha } else { s.alpha };
            let x = if mirror { -s.x } else { s.x };
            BoundaryPoint {
                alpha: alpha + f64::from(rotation) / 3.0,
                x,
                ..*s
            }
        })
        .collect()
}

/// Boundary curves of the three symmetric extended fixed tongues: exterior
/// multiplier +1 curves (continued into the tongue boundaries up to the
/// tips) and interior multiplier -1 period-doubling curves, over the
/// reference circles |a| = 1 and |a| = 2.
fn fig6(pixels: u32) -> Result<Raster, ReproduceError> {
    let tau = TongueType::new(0, 1);
    let mut curves: Vec<BoundaryCurve> = Vec::new();

    // Annulus part: slices of the extended fixed tongue.
    let mut plus: Vec<BoundaryPoint> = Vec::new();
    let mut minus: Vec<BoundaryPoint> = Vec::new();
    let mut r: f64 = 1.02;
    while r <= 2.0 + 1e-9 {
        if let Ok(slice) = extended_tongue_slice(r.min(2.0)) {
            plus.push(slice.alpha_plus_one);
            if let Some(m) = slice.alpha_minus_one {
                minus.push(m);
            }
        }
        r += 0.005;
    }
    let provenance = Provenance { r_step: 0.005, residual_tol: 1e-10, reached_tip: false };
    for rotation in 0..3u8 {
        for mirror in [false, true] {
            curves.push(BoundaryCurve {
                tongue: tau,
                side: BoundarySide::MultiplierPlusOne,
                samples: symmetric_copy(&plus, rotation, mirror),
                provenance,
            });
            curves.push(BoundaryCurve {
                tongue: tau,
                side: BoundarySide::MultiplierMinusOne,
                samples: symmetric_copy(&minus, rotation, mirror),
                provenance,
            });
        }
    }

    // Tongue part above |a| = 2: both boundary arcs up to the tip.
    let settings = TraceSettings { r_step: 5e-3, ..TraceSettings::default() };
    for side in [BoundarySide::Left, BoundarySide::Right] {
        let curve = trace_boundary_with(tau, side, &settings)?;
        for rotation in 0..3u8 {
            curves.push(BoundaryCurve {
                tongue: tau,
                side,
                samples: symmetric_copy(&curve.samples, rotation, false),
                provenance: curve.provenance,
            });
        }
    }

    let spec = ScanSpec::parameter(c(0.0, 0.0), 6.4, 6.4, pixels, pixels);
    Ok(render_tongue_overlay(&curves, &spec, None))
}
