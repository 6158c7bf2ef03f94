use crate::error::{Error, Result};
use crate::geometry::RegionSpec;
use crate::point::Point;
use crate::verify::eval::{evaluators, Mode, PdeOptions};

/// Points ξ + d·(toward − ξ)/|toward − ξ| for each distance d.
pub fn radial_approach(xi: Point, toward: Point, distances: &[f64]) -> Result<Vec<Point>> {
    let dir = toward - xi;
    let n = dir.norm();
    if !(n > 0.0) {
        return Err(Error::InvalidInput(
            "approach direction is degenerate".into(),
        ));
    }
    Ok(distances.iter().map(|&d| xi + dir * (d / n)).collect())
}

/// λ_Ω/λ_U along `approach`, for U ⊆ Ω and approach points in U tending to
/// the boundary point ξ of U.
pub fn boundary_ratio(
    omega: &RegionSpec,
    u: &RegionSpec,
    xi: Point,
    approach: &[Point],
    mode: Mode,
    opts: &PdeOptions,
) -> Result<Vec<f64>> {
    omega.validate()?;
    u.validate()?;
    if u.is_member(xi) {
        return Err(Error::Precondition(format!(
            "ξ = ({}, {}) is an interior point of U, not a boundary point",
            xi.x, xi.y
        )));
    }
    for &z in approach {
        if !u.is_member(z) {
            return Err(Error::domain(z, "approach point is not in U"));
        }
        if !omega.is_member(z) {
            return Err(Error::domain(z, "approach point is not in Ω, so U ⊄ Ω"));
        }
    }
    let evals = evaluators(&[omega, u], mode, opts)?;
    approach
        .iter()
        .map(|&z| Ok(evals[0].density(z)? / evals[1].density(z)?))
        .collect()
}
