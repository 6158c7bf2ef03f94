//! Plane and sphere regions: CSG trees over analytic primitives, compact sets,
//! and the JSON file format describing both.

mod compact;
mod json;
mod region;

pub use compact::{CompactSpec, PointCount};
pub use json::{compact_to_json, parse_compact, parse_region, region_to_json};
pub use region::{Primitive, RegionSpec};
