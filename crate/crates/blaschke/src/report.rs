//! Serializable reports and the CSV curve interchange format.
//!
//! Curve CSVs carry the header `r,alpha,x,multiplier,side,k,period` with one
//! sample per row at 17 significant digits. Root/tip reports serialize as
//! JSON objects `{p, k, tau, r, alpha, a_re, a_im, residuals}`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use thiserror::Error;

use crate::cycle::TongueType;
use crate::index::IndexReport;
use crate::locus::{
    BoundaryCurve, BoundaryPoint, BoundarySide, ExtendedSlice, TipResult, TongueRoot,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv parse error at line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// JSON report for a tongue root or tip.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LocusReport {
    pub p: u32,
    pub k: u64,
    /// The type `k/(2^p - 1)` as a string and as a real value.
    pub tau: String,
    pub tau_value: f64,
    pub r: f64,
    pub alpha: f64,
    pub a_re: f64,
    pub a_im: f64,
    /// Named residuals, re-evaluated at the solution.
    pub residuals: BTreeMap<String, f64>,
}

impl LocusReport {
    pub fn from_root(root: &TongueRoot) -> Self {
        let a = root.a();
        let mut residuals = BTreeMap::new();
        residuals.insert("critical_orbit".to_string(), root.residual);
        Self {
            p: root.p,
            k: root.k,
            tau: root.tongue.to_string(),
            tau_value: root.tongue.value(),
            r: 2.0,
            alpha: root.alpha,
            a_re: a.re,
            a_im: a.im,
            residuals,
        }
    }

    pub fn from_tip(tau: TongueType, tip: &TipResult) -> Self {
        let a = tip.point.a();
        let mut residuals = BTreeMap::new();
        residuals.insert("value".to_string(), tip.residuals[0]);
        residuals.insert("multiplier".to_string(), tip.residuals[1]);
        residuals.insert("second_derivative".to_string(), tip.residuals[2]);
        Self {
            p: tau.period(),
            k: tau.k(),
            tau: tau.to_string(),
            tau_value: tau.value(),
            r: tip.point.r,
            alpha: tip.point.alpha,
            a_re: a.re,
            a_im: a.im,
            residuals,
        }
    }
}

/// JSON report of an extended-tongue slice at fixed radius.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SliceReport {
    pub r: f64,
    pub alpha_plus_one: f64,
    pub x_plus_one: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_minus_one: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_minus_one: Option<f64>,
    /// `(alpha, x, multiplier)` samples of the continued fixed point.
    pub profile: Vec<(f64, f64, f64)>,
}

impl SliceReport {
    pub fn from_slice(slice: &ExtendedSlice) -> Self {
        Self {
            r: slice.r,
            alpha_plus_one: slice.alpha_plus_one.alpha,
            x_plus_one: slice.alpha_plus_one.x,
            alpha_minus_one: slice.alpha_minus_one.map(|pt| pt.alpha),
            x_minus_one: slice.alpha_minus_one.map(|pt| pt.x),
            profile: slice
                .profile
                .iter()
                .map(|s| (s.alpha, s.x, s.multiplier))
                .collect(),
        }
    }
}

/// JSON report of the near-tip probe and index diagnosis.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProbeReport {
    pub a_re: f64,
    pub a_im: f64,
    pub period: u32,
    pub z_circle_re: f64,
    pub z_circle_im: f64,
    pub eta: f64,
    pub z_plus_re: f64,
    pub z_plus_im: f64,
    pub z_minus_re: f64,
    pub z_minus_im: f64,
    pub rho_re: f64,
    pub rho_im: f64,
    pub index_circle_re: f64,
    pub index_circle_im: f64,
    pub index_plus_re: f64,
    pub index_plus_im: f64,
    pub index_minus_re: f64,
    pub index_minus_im: f64,
    pub index_sum_re: f64,
    pub index_sum_im: f64,
    pub pair_index_sum: f64,
    pub epsilon_re: f64,
    pub epsilon_im: f64,
    pub classification: String,
}

impl ProbeReport {
    pub fn from_report(report: &IndexReport) -> Self {
        Self {
            a_re: report.a.re,
            a_im: report.a.im,
            period: report.period,
            z_circle_re: report.z_circle.re,
            z_circle_im: report.z_circle.im,
            eta: report.eta,
            z_plus_re: report.z_plus.re,
            z_plus_im: report.z_plus.im,
            z_minus_re: report.z_minus.re,
            z_minus_im: report.z_minus.im,
            rho_re: report.rho_plus.re,
            rho_im: report.rho_plus.im,
            index_circle_re: report.index_circle.re,
            index_circle_im: report.index_circle.im,
            index_plus_re: report.index_plus.re,
            index_plus_im: report.index_plus.im,
            index_minus_re: report.index_minus.re,
            index_minus_im: report.index_minus.im,
            index_sum_re: report.index_sum.re,
            index_sum_im: report.index_sum.im,
            pair_index_sum: report.pair_index_sum,
            epsilon_re: report.epsilon.0,
            epsilon_im: report.epsilon.1,
            classification: report.classification.to_string(),
        }
    }
}

pub const CURVE_CSV_HEADER: &str = "r,alpha,x,multiplier,side,k,period";

/// Writes one curve in the interchange format (17 significant digits).
pub fn write_curve_csv(curve: &BoundaryCurve, out: &mut impl Write) -> Result<(), ReportError> {
    writeln!(out, "{CURVE_CSV_HEADER}")?;
    for s in &curve.samples {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{}",
            s.r, s.alpha, s.x, s.multiplier, s.side, s.k, s.period
        )?;
    }
    Ok(())
}

/// Parses the curve interchange format back into boundary points.
pub fn parse_curve_csv(text: &str) -> Result<Vec<BoundaryPoint>, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CURVE_CSV_HEADER => {}
        other => {
            return Err(ReportError::Csv {
                line: 1,
                message: format!("bad header {:?}", other.map(|(_, h)| h)),
            })
        }
    }
    let mut samples = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(ReportError::Csv {
                line: i + 1,
                message: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let bad = |message: String| ReportError::Csv { line: i + 1, message };
        let f = |s: &str| s.parse::<f64>().map_err(|e| bad(e.to_string()));
        samples.push(BoundaryPoint {
            r: f(fields[0])?,
            alpha: f(fields[1])?,
            x: f(fields[2])?,
            multiplier: f(fields[3])?,
            side: fields[4].parse::<BoundarySide>().map_err(bad)?,
            k: fields[5].parse::<i64>().map_err(|e| bad(e.to_string()))?,
            period: fields[6].parse::<u32>().map_err(|e| bad(e.to_string()))?,
        });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::{find_root, find_tip_of, trace_boundary_with, TraceSettings};

    #[test]
    fn root_report_serializes_and_revalidates() {
        let root = find_root(2, 1).unwrap();
        let report = LocusReport::from_root(&root);
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: LocusReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.tau, "1/3");
        assert_eq!(back.r, 2.0);
    }

    #[test]
    fn tip_report_carries_three_residuals() {
        let tau = TongueType::new(0, 1);
        let tip = find_tip_of(tau).unwrap();
        let report = LocusReport::from_tip(tau, &tip);
        assert_eq!(report.residuals.len(), 3);
        assert!(report.residuals.values().all(|&v| v < 1e-10));
        let json = serde_json::to_string(&report).unwrap();
        let back: LocusReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn curve_csv_round_trips_exactly() {
        let curve = trace_boundary_with(
            TongueType::new(0, 1),
            crate::locus::BoundarySide::Right,
            &TraceSettings { r_step: 5e-2, ..TraceSettings::default() },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&curve, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed = parse_curve_csv(&text).unwrap();
        assert_eq!(parsed.len(), curve.samples.len());
        for (a, b) in parsed.iter().zip(&curve.samples) {
            // 17 significant digits reproduce f64 exactly.
            assert_eq!(a, b);
        }
    }

    #[test]
    fn curve_csv_rejects_malformed_input() {
        assert!(parse_curve_csv("nope\n1,2,3").is_err());
        let text = format!("{CURVE_CSV_HEADER}\n1.0,2.0,3.0\n");
        assert!(parse_curve_csv(&text).is_err());
        let text = format!("{CURVE_CSV_HEADER}\n1.0,0.1,0.2,1.0,sideways,0,1\n");
        assert!(parse_curve_csv(&text).is_err());
    }
}
