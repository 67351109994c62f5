//! Holomorphic fixed-point indices in multiplier and residue form, and the
//! attracting/repelling diagnosis of a bifurcated pair via the index sum.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::locus::{ProbeKind, TipProbe};
use crate::map::{BlaschkeMap, ExtComplex};
use crate::tolerances::Tolerances;

#[derive(Debug, Error, PartialEq)]
pub enum IndexError {
    #[error("multiplier is 1; use the residue form")]
    MultiplierOne,
    #[error("contour not isolating: winding number {winding} around the contour")]
    ContourNotIsolating { winding: i64 },
    #[error("probe carries no off-circle pair to diagnose")]
    MissingPair,
    #[error("index sum predicts |rho|^2 = {predicted}, directly computed {measured}; discrepancy beyond 1e-6")]
    InconsistentDiagnosis { predicted: f64, measured: f64 },
}

/// `i(z) = 1/(1 - rho)` for a fixed point of multiplier `rho != 1`.
pub fn index_multiplier(multiplier: Complex64) -> Result<Complex64, IndexError> {
    if (multiplier - Complex64::ONE).norm() < 1e-12 {
        return Err(IndexError::MultiplierOne);
    }
    Ok(Complex64::ONE / (Complex64::ONE - multiplier))
}

/// Number of quadrature nodes; the integrand is analytic on the contour so
/// the trapezoid rule converges exponentially in the node count.
const QUADRATURE_NODES: usize = 1024;

/// Holomorphic index of the fixed point `z0` of `B^p` as the residue of
/// `1/(z - B^p(z))`, by trapezoid quadrature on the circle of the given
/// radius.
///
/// The same sweep computes the winding number of `z - B^p(z)` along the
/// contour (argument principle). Winding 1 is the isolated simple case;
/// larger windings are accepted only when `z0` is parabolic with multiplier
/// 1, where the residue is the finite index of the multiple fixed point.
/// Anything else means another fixed point sits inside the contour.
pub fn index_residue(
    map: &BlaschkeMap,
    p: usize,
    z0: Complex64,
    radius: f64,
) -> Result<Complex64, IndexError> {
    index_residue_with_nodes(map, p, z0, radius, QUADRATURE_NODES)
}

/// [`index_residue`] with an explicit node count (doubling it is a cheap
/// convergence check).
pub fn index_residue_with_nodes(
    map: &BlaschkeMap,
    p: usize,
    z0: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<Complex64, IndexError> {
    let mut sum = Complex64::ZERO;
    let mut winding = 0.0;
    let mut prev_arg = f64::NAN;
    let mut first_arg = f64::NAN;
    for j in 0..nodes {
        let angle = TAU * j as f64 / nodes as f64;
        let dz = Complex64::from_polar(radius, angle);
        let z = z0 + dz;
        let g = match map.iterate(ExtComplex::Finite(z), p) {
            ExtComplex::Finite(w) => z - w,
            // 1/(z - B^p(z)) -> 0 where the iterate blows up.
            ExtComplex::Infinity => {
                prev_arg = f64::NAN;
                continue;
            }
        };
        sum += dz / g;
        let arg = g.arg();
        if !first_arg.is_finite() {
            first_arg = arg;
        } else if prev_arg.is_finite() {
            winding += wrap_angle(arg - prev_arg);
        }
        prev_arg = arg;
    }
    if prev_arg.is_finite() && first_arg.is_finite() {
        winding += wrap_angle(first_arg - prev_arg);
    }
    let winding = (winding / TAU).round() as i64;
    if winding != 1 {
        let parabolic = map
            .multiplier(z0, p)
            .map(|m| (m - Complex64::ONE).norm() < Tolerances::default().parabolic)
            .unwrap_or(false);
        if !(winding > 1 && parabolic) {
            return Err(IndexError::ContourNotIsolating { winding });
        }
    }
    Ok(sum / nodes as f64)
}

fn wrap_angle(mut delta: f64) -> f64 {
    if delta > std::f64::consts::PI {
        delta -= TAU;
    } else if delta < -std::f64::consts::PI {
        delta += TAU;
    }
    delta
}

/// How the three fixed points near a former multiplicity-3 parabolic point
/// are configured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairClass {
    PairAttracting,
    PairRepelling,
    OnCircleAttracting,
    Parabolic,
}

impl std::fmt::Display for PairClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PairClass::PairAttracting => "pair-attracting",
            PairClass::PairRepelling => "pair-repelling",
            PairClass::OnCircleAttracting => "on-circle-attracting",
            PairClass::Parabolic => "parabolic",
        };
        f.write_str(s)
    }
}

/// Indices and multipliers of the three fixed points of `B_a^p` near a tip,
/// with the pair diagnosis quantities.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub a: Complex64,
    pub period: u32,
    /// Fixed point on the circle and its real multiplier.
    pub z_circle: Complex64,
    pub eta: f64,
    /// The other two fixed points (off the circle in the bifurcated regime,
    /// on it inside the tongue).
    pub z_plus: Complex64,
    pub z_minus: Complex64,
    pub rho_plus: Complex64,
    pub rho_minus: Complex64,
    pub index_circle: Complex64,
    pub index_plus: Complex64,
    pub index_minus: Complex64,
    /// Sum of the three indices (a real quantity).
    pub index_sum: Complex64,
    /// `index_sum - index_circle`, the pair's contribution.
    pub pair_index_sum: f64,
    /// `rho_plus - 1` split into real and imaginary parts.
    pub epsilon: (f64, f64),
    pub classification: PairClass,
}

/// Diagnoses the configuration found by the probe through the holomorphic
/// index sum: with `epsilon = rho - 1`, the pair's index sum equals
/// `-2 epsilon_r / |epsilon|^2` and `|rho|^2 = 1 + 2 epsilon_r (1 - 1/sum)`,
/// so a sum above 1 with `epsilon_r < 0` forces `|rho| < 1`. The prediction
/// is cross-checked against the directly computed multiplier; a discrepancy
/// beyond 1e-6 is reported as a numerical fault.
pub fn diagnose_pair(probe: &TipProbe) -> Result<IndexReport, IndexError> {
    match probe.kind {
        ProbeKind::BifurcatedPair => {
            let pair = probe.pair.as_ref().ok_or(IndexError::MissingPair)?;
            let index_circle = index_multiplier(Complex64::new(probe.eta, 0.0))?;
            let index_plus = index_multiplier(pair.rho_plus)?;
            let index_minus = index_multiplier(pair.rho_minus)?;
            let index_sum = index_circle + index_plus + index_minus;
            let pair_index_sum = (index_plus + index_minus).re;
            let eps = pair.rho_plus - Complex64::ONE;
            let predicted = 1.0 + 2.0 * eps.re * (1.0 - 1.0 / pair_index_sum);
            let measured = pair.rho_plus.norm_sqr();
            if (predicted - measured).abs() > 1e-6 {
                return Err(IndexError::InconsistentDiagnosis { predicted, measured });
            }
            let classification = if measured < 1.0 {
                PairClass::PairAttracting
            } else {
                PairClass::PairRepelling
            };
            Ok(IndexReport {
                a: probe.a,
                period: probe.period,
                z_circle: probe.z_circle,
                eta: probe.eta,
                z_plus: pair.z_plus,
                z_minus: pair.z_minus,
                rho_plus: pair.rho_plus,
                rho_minus: pair.rho_minus,
                index_circle,
                index_plus,
                index_minus,
                index_sum,
                pair_index_sum,
                epsilon: (eps.re, eps.im),
                classification,
            })
        }
        ProbeKind::OnCircleAttracting => {
            let map = BlaschkeMap::new(probe.a);
            let (z_plus, z_minus) = probe
                .circle_companions
                .unwrap_or((probe.z_circle, probe.z_circle));
            let rho_plus = map.multiplier(z_plus, probe.period as usize).unwrap_or_default();
            let rho_minus = map.multiplier(z_minus, probe.period as usize).unwrap_or_default();
            let index_circle = index_multiplier(Complex64::new(probe.eta, 0.0))?;
            let index_plus = index_multiplier(rho_plus)?;
            let index_minus = index_multiplier(rho_minus)?;
            let index_sum = index_circle + index_plus + index_minus;
            let eps = rho_plus - Complex64::ONE;
            Ok(IndexReport {
                a: probe.a,
                period: probe.period,
                z_circle: probe.z_circle,
                eta: probe.eta,
                z_plus,
                z_minus,
                rho_plus,
                rho_minus,
                index_circle,
                index_plus,
                index_minus,
                index_sum,
                pair_index_sum: (index_plus + index_minus).re,
                epsilon: (eps.re, eps.im),
                classification: PairClass::OnCircleAttracting,
            })
        }
        ProbeKind::OnBoundaryParabolic => {
            // The circle point has multiplier 1: only the residue form is
            // finite there.
            let map = BlaschkeMap::new(probe.a);
            let index_circle =
                index_residue(&map, probe.period as usize, probe.z_circle, 1e-2)?;
            Ok(IndexReport {
                a: probe.a,
                period: probe.period,
                z_circle: probe.z_circle,
                eta: probe.eta,
                z_plus: probe.z_circle,
                z_minus: probe.z_circle,
                rho_plus: Complex64::ONE,
                rho_minus: Complex64::ONE,
                index_circle,
                index_plus: Complex64::ZERO,
                index_minus: Complex64::ZERO,
                index_sum: index_circle,
                pair_index_sum: 0.0,
                epsilon: (0.0, 0.0),
                classification: PairClass::Parabolic,
            })
        }
    }
}
