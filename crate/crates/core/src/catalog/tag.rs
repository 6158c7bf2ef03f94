//! Text tags naming catalog metrics, e.g. `disk:0,0,2` or `wedge:0,0,0.785,1.571`.

use std::str::FromStr;

use crate::catalog::metric::ClosedFormMetric;
use crate::error::{Error, Result};
use crate::point::Point;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn numbers(args: &str, n: usize, name: &str) -> Result<Vec<f64>> {
    let vals = args
        .split(',')
        .map(|s| {
            let x: f64 = s
                .trim()
                .parse()
                .map_err(|_| err(format!("bad number {s:?} in {name} tag")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(err(format!("non-finite number in {name} tag")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != n {
        return Err(err(format!(
            "{name} tag takes {n} numbers, got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

/// Parses a catalog tag. Half-plane normals are normalized.
pub fn parse_tag(tag: &str) -> Result<ClosedFormMetric> {
    let tag = tag.trim();
    let (name, args) = match tag.split_once(':') {
        Some((n, a)) => (n.trim().to_ascii_lowercase(), Some(a)),
        None => (tag.to_ascii_lowercase(), None),
    };
    let need = |n: usize| -> Result<Vec<f64>> {
        match args {
            Some(a) => numbers(a, n, &name),
            None => Err(err(format!("{name} tag needs {n} numbers after ':'"))),
        }
    };
    let metric = match name.as_str() {
        "sphere" | "unitdisk" => {
            if args.is_some() {
                return Err(err(format!("{name} tag takes no arguments")));
            }
            if name == "sphere" {
                ClosedFormMetric::Sphere
            } else {
                ClosedFormMetric::UnitDisk
            }
        }
        "disk" | "exteriordisk" | "punctureddisk" => {
            let v = need(3)?;
            let center = Point::new(v[0], v[1]);
            let radius = v[2];
            match name.as_str() {
                "disk" => ClosedFormMetric::Disk { center, radius },
                "exteriordisk" => ClosedFormMetric::ExteriorDisk { center, radius },
                _ => ClosedFormMetric::PuncturedDisk { center, radius },
            }
        }
        "halfplane" => {
            let v = need(4)?;
            let n = Point::new(v[2], v[3]);
            let len = n.norm();
            if !(len > 0.0 && len.is_finite()) {
                return Err(err("half-plane normal must be nonzero"));
            }
            ClosedFormMetric::HalfPlane {
                anchor: Point::new(v[0], v[1]),
                normal: n * (1.0 / len),
            }
        }
        "annulus" => {
            let v = need(4)?;
            ClosedFormMetric::Annulus {
                center: Point::new(v[0], v[1]),
                r_in: v[2],
                r_out: v[3],
            }
        }
        "wedge" => {
            let v = need(4)?;
            ClosedFormMetric::Wedge {
                vertex: Point::new(v[0], v[1]),
                bisector: v[2],
                opening: v[3],
            }
        }
        other => return Err(err(format!("unknown catalog tag {other:?}"))),
    };
    metric.validate().map_err(|e| err(e.to_string()))?;
    Ok(metric)
}

impl FromStr for ClosedFormMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_tag(s)
    }
}
