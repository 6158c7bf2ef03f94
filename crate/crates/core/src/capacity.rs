//! Poincaré capacity pcap(K) = λ_{Ĉ\K}(∞)/λ_Ĉ(∞) of compact plane sets.
//!
//! The complement is solved in the chart w = 1/(z − c) with c a point of K;
//! there the spherical metric has density 2 at w = 0, so pcap(K) = μ(0)/2
//! where μ is the chart density of the hyperbolic metric. pcap(K) also
//! equals π′_K(∞) for the normalized universal covering π_K of Ĉ\K, and this
//! identity is the only way the covering derivative is computed here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{CompactSpec, PointCount};
use crate::grid::Chart;
use crate::point::{BBox, Point};
use crate::solver::{extrapolate, solve_domain, Level};

/// Direction of the per-level values as h decreases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

impl Trend {
    pub fn of(levels: &[Level]) -> Trend {
        let up = levels.windows(2).any(|w| w[1].value > w[0].value);
        let down = levels.windows(2).any(|w| w[1].value < w[0].value);
        match (up, down) {
            (true, true) => Trend::Mixed,
            (true, false) => Trend::Increasing,
            (false, true) => Trend::Decreasing,
            (false, false) => Trend::Constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub pcap: f64,
    pub levels: Vec<Level>,
    pub extrapolated: f64,
    pub order: Option<f64>,
    pub point_count_class: PointCount,
    pub trend: Trend,
    /// Inversion center and chart window used (absent when no solve ran).
    pub center: Option<Point>,
    pub bbox: Option<BBox>,
}

/// Chart window for the complement of `k` about `center`.
///
/// If `center` is an interior point of K the chart image is bounded by
/// 1/inner_radius. Otherwise K is thin at the center and the window is
/// truncated at |w| = 4/radius(K), i.e. at plane distance radius(K)/4 from
/// the center, where the truncation nodes get model boundary data.
pub fn capacity_window(k: &CompactSpec, center: Point, h_max: f64) -> BBox {
    let inner = k.inner_radius(center);
    let half = if inner > 0.0 {
        1.0 / inner + 2.0 * h_max
    } else {
        4.0 / k.radius_about(center)
    };
    BBox::square(half)
}

/// pcap(K) from solves at each spacing in `h_list` (chart units).
pub fn pcap(k: &CompactSpec, h_list: &[f64]) -> Result<CapacityReport> {
    pcap_in_window(k, h_list, None)
}

/// As [`pcap`], with an explicit chart window.
pub fn pcap_in_window(
    k: &CompactSpec,
    h_list: &[f64],
    window: Option<BBox>,
) -> Result<CapacityReport> {
    k.validate()?;
    let class = k.point_count()?;
    if class.is_degenerate() {
        return Ok(CapacityReport {
            pcap: 0.0,
            levels: Vec::new(),
            extrapolated: 0.0,
            order: None,
            point_count_class: class,
            trend: Trend::Constant,
            center: None,
            bbox: None,
        });
    }
    if h_list.len() < 3 {
        return Err(Error::InvalidInput(
            "pcap needs at least three levels".into(),
        ));
    }
    let center = k.anchor();
    let h_max = h_list.iter().cloned().fold(0.0, f64::max);
    let bbox = window.unwrap_or_else(|| capacity_window(k, center, h_max));
    let region = k.complement_region();
    let chart = Chart::Inversion { center };
    let levels = h_list
        .iter()
        .map(|&h| {
            let field = solve_domain(&region, chart, bbox, h)?;
            Ok(Level {
                h,
                value: field.density_at_infinity()? / 2.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = extrapolate(levels)?;
    Ok(CapacityReport {
        pcap: report.extrapolated.max(0.0),
        trend: Trend::of(&report.levels),
        levels: report.levels,
        extrapolated: report.extrapolated,
        order: report.order,
        point_count_class: class,
        center: Some(center),
        bbox: Some(bbox),
    })
}

/// π′_K(∞), realized through the identity π′_K(∞) = pcap(K).
pub fn covering_derivative(k: &CompactSpec, h_list: &[f64]) -> Result<f64> {
    if k.point_count()?.is_degenerate() {
        return Err(Error::Precondition(
            "the covering derivative needs at least three points".into(),
        ));
    }
    Ok(pcap(k, h_list)?.extrapolated)
}

/// Logarithmic capacity of a closed disk (its radius) or a segment (a
/// quarter of its length).
pub fn cap_connected_oracle(k: &CompactSpec) -> Result<f64> {
    k.validate()?;
    match k {
        CompactSpec::Disk { radius, .. } => Ok(*radius),
        CompactSpec::Segment { a, b } if a != b => Ok(a.dist(*b) / 4.0),
        _ => Err(Error::UnsupportedOracle(
            "closed-form capacity is available for disks and segments only".into(),
        )),
    }
}
