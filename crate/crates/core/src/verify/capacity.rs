use serde::Serialize;

use crate::capacity::{pcap, CapacityReport};
use crate::error::{Error, Result};
use crate::geometry::CompactSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacitySubmultReport {
    pub k1: CapacityReport,
    pub k2: CapacityReport,
    pub union: CapacityReport,
    pub intersection: CapacityReport,
    /// pcap(K₁ ∪ K₂) · pcap(K₁ ∩ K₂).
    pub lhs: f64,
    /// pcap(K₁) · pcap(K₂).
    pub rhs: f64,
    pub tolerance: f64,
    /// lhs ≤ rhs · (1 + tol).
    pub holds: bool,
}

/// pcap(K₁ ∪ K₂) · pcap(K₁ ∩ K₂) ≤ pcap(K₁) · pcap(K₂) within relative `tol`,
/// each capacity extrapolated over `h_list`. A degenerate intersection (at
/// most two points) has capacity 0, so the left side vanishes.
pub fn verify_capacity_submult(
    k1: &CompactSpec,
    k2: &CompactSpec,
    h_list: &[f64],
    tol: f64,
) -> Result<CapacitySubmultReport> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let union = CompactSpec::Union(vec![k1.clone(), k2.clone()]);
    let inter = CompactSpec::Intersection(vec![k1.clone(), k2.clone()]);
    let r1 = pcap(k1, h_list)?;
    let r2 = if k2 == k1 {
        r1.clone()
    } else {
        pcap(k2, h_list)?
    };
    let ri = pcap(&inter, h_list)?;
    let ru = pcap(&union, h_list)?;
    let lhs = ru.pcap * ri.pcap;
    let rhs = r1.pcap * r2.pcap;
    Ok(CapacitySubmultReport {
        holds: lhs <= rhs * (1.0 + tol),
        k1: r1,
        k2: r2,
        union: ru,
        intersection: ri,
        lhs,
        rhs,
        tolerance: tol,
    })
}
