//! Reader and writer for the JSON region-spec file format.
//!
//! ```json
//! {"type":"disk","center":[0,0],"radius":1}
//! {"type":"halfplane","anchor":[0,0],"normal":[0,1]}
//! {"type":"diskcomplement","center":[0,0],"radius":1}
//! {"type":"punctures","points":[[-1,0],[1,0]]}
//! {"type":"union","args":[...]}   {"type":"intersection","args":[...]}
//! {"type":"complement","arg":{...}}
//! {"type":"segment","a":[-2,0],"b":[2,0]}
//! ```
//!
//! Unknown keys are rejected. The same vocabulary describes compact sets,
//! where `disk` means the closed disk and `punctures` (or `points`) the
//! finite point set itself.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::compact::CompactSpec;
use crate::geometry::region::{Primitive, RegionSpec};
use crate::point::Point;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn object<'a>(v: &'a Value) -> Result<(&'a str, &'a Map<String, Value>)> {
    let obj = v
        .as_object()
        .ok_or_else(|| err("region node must be an object"))?;
    let ty = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| err("region node needs a string \"type\""))?;
    Ok((ty, obj))
}

fn only_keys(obj: &Map<String, Value>, ty: &str, allowed: &[&str]) -> Result<()> {
    for k in obj.keys() {
        if k != "type" && !allowed.contains(&k.as_str()) {
            return Err(err(format!("unknown key \"{k}\" for type \"{ty}\"")));
        }
    }
    for k in allowed {
        if !obj.contains_key(*k) {
            return Err(err(format!("missing key \"{k}\" for type \"{ty}\"")));
        }
    }
    Ok(())
}

fn number(v: &Value, what: &str) -> Result<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| err(format!("{what} must be a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(err(format!("{what} must be finite")))
    }
}

fn point(v: &Value, what: &str) -> Result<Point> {
    match v.as_array().map(Vec::as_slice) {
        Some([x, y]) => Ok(Point::new(number(x, what)?, number(y, what)?)),
        _ => Err(err(format!("{what} must be a two-element array"))),
    }
}

fn point_list(v: &Value, what: &str) -> Result<Vec<Point>> {
    v.as_array()
        .ok_or_else(|| err(format!("{what} must be an array of points")))?
        .iter()
        .map(|p| point(p, what))
        .collect()
}

fn args<'a>(v: &'a Value) -> Result<&'a Vec<Value>> {
    let a = v
        .as_array()
        .ok_or_else(|| err("\"args\" must be an array"))?;
    if a.is_empty() {
        return Err(err("\"args\" must not be empty"));
    }
    Ok(a)
}

fn region_node(v: &Value) -> Result<RegionSpec> {
    let (ty, obj) = object(v)?;
    let spec = match ty {
        "disk" | "diskcomplement" => {
            only_keys(obj, ty, &["center", "radius"])?;
            let center = point(&obj["center"], "center")?;
            let radius = number(&obj["radius"], "radius")?;
            if ty == "disk" {
                RegionSpec::disk(center, radius)
            } else {
                RegionSpec::disk_complement(center, radius)
            }
        }
        "halfplane" => {
            only_keys(obj, ty, &["anchor", "normal"])?;
            RegionSpec::half_plane(
                point(&obj["anchor"], "anchor")?,
                point(&obj["normal"], "normal")?,
            )
        }
        "punctures" => {
            only_keys(obj, ty, &["points"])?;
            RegionSpec::punctured_plane(point_list(&obj["points"], "points")?)
        }
        "fullplane" => {
            only_keys(obj, ty, &[])?;
            RegionSpec::full_plane()
        }
        "segment" => {
            only_keys(obj, ty, &["a", "b"])?;
            RegionSpec::segment(point(&obj["a"], "a")?, point(&obj["b"], "b")?)
        }
        "union" | "intersection" => {
            only_keys(obj, ty, &["args"])?;
            let parsed = args(&obj["args"])?
                .iter()
                .map(region_node)
                .collect::<Result<Vec<_>>>()?;
            if ty == "union" {
                RegionSpec::union(parsed)
            } else {
                RegionSpec::intersection(parsed)
            }
        }
        "complement" => {
            only_keys(obj, ty, &["arg"])?;
            RegionSpec::complement(region_node(&obj["arg"])?)
        }
        other => return Err(err(format!("unknown region type \"{other}\""))),
    };
    Ok(spec)
}

fn compact_node(v: &Value) -> Result<CompactSpec> {
    let (ty, obj) = object(v)?;
    let spec = match ty {
        "disk" => {
            only_keys(obj, ty, &["center", "radius"])?;
            CompactSpec::disk(
                point(&obj["center"], "center")?,
                number(&obj["radius"], "radius")?,
            )
        }
        "segment" => {
            only_keys(obj, ty, &["a", "b"])?;
            CompactSpec::segment(point(&obj["a"], "a")?, point(&obj["b"], "b")?)
        }
        "punctures" | "points" => {
            only_keys(obj, ty, &["points"])?;
            CompactSpec::points(point_list(&obj["points"], "points")?)
        }
        "union" | "intersection" => {
            only_keys(obj, ty, &["args"])?;
            let parsed = args(&obj["args"])?
                .iter()
                .map(compact_node)
                .collect::<Result<Vec<_>>>()?;
            if ty == "union" {
                CompactSpec::Union(parsed)
            } else {
                CompactSpec::Intersection(parsed)
            }
        }
        "halfplane" | "diskcomplement" | "complement" | "fullplane" => {
            return Err(err(format!(
                "type \"{ty}\" does not describe a compact set"
            )))
        }
        other => return Err(err(format!("unknown region type \"{other}\""))),
    };
    Ok(spec)
}

/// Parses and validates a region-spec document.
pub fn parse_region(text: &str) -> Result<RegionSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let spec = region_node(&v)?;
    spec.validate()?;
    Ok(spec)
}

/// Parses and validates a compact-set document.
pub fn parse_compact(text: &str) -> Result<CompactSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let spec = compact_node(&v)?;
    spec.validate()?;
    Ok(spec)
}

fn pt(p: Point) -> Value {
    json!([p.x, p.y])
}

pub fn region_to_json(spec: &RegionSpec) -> Value {
    match spec {
        RegionSpec::Primitive(p) => match p {
            Primitive::Disk { center, radius } => {
                json!({"type": "disk", "center": pt(*center), "radius": radius})
            }
            Primitive::HalfPlane {
                anchor,
                inward_normal,
            } => json!({"type": "halfplane", "anchor": pt(*anchor), "normal": pt(*inward_normal)}),
            Primitive::DiskComplement { center, radius } => {
                json!({"type": "diskcomplement", "center": pt(*center), "radius": radius})
            }
            Primitive::PuncturedPlane { punctures } => json!({
                "type": "punctures",
                "points": punctures.iter().map(|q| pt(*q)).collect::<Vec<_>>()
            }),
            Primitive::FullPlane => json!({"type": "fullplane"}),
            Primitive::Segment { a, b } => json!({"type": "segment", "a": pt(*a), "b": pt(*b)}),
        },
        RegionSpec::Union(args) => {
            json!({"type": "union", "args": args.iter().map(region_to_json).collect::<Vec<_>>()})
        }
        RegionSpec::Intersection(args) => json!({
            "type": "intersection",
            "args": args.iter().map(region_to_json).collect::<Vec<_>>()
        }),
        RegionSpec::Complement(arg) => json!({"type": "complement", "arg": region_to_json(arg)}),
    }
}

pub fn compact_to_json(spec: &CompactSpec) -> Value {
    match spec {
        CompactSpec::Disk { center, radius } => {
            json!({"type": "disk", "center": pt(*center), "radius": radius})
        }
        CompactSpec::Segment { a, b } => json!({"type": "segment", "a": pt(*a), "b": pt(*b)}),
        CompactSpec::Points(ps) => json!({
            "type": "points",
            "points": ps.iter().map(|q| pt(*q)).collect::<Vec<_>>()
        }),
        CompactSpec::Union(args) => {
            json!({"type": "union", "args": args.iter().map(compact_to_json).collect::<Vec<_>>()})
        }
        CompactSpec::Intersection(args) => json!({
            "type": "intersection",
            "args": args.iter().map(compact_to_json).collect::<Vec<_>>()
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_node_type() {
        let text = r#"{"type":"union","args":[
            {"type":"disk","center":[0,0],"radius":1},
            {"type":"halfplane","anchor":[0,0],"normal":[0,1]},
            {"type":"intersection","args":[
                {"type":"diskcomplement","center":[1,1],"radius":0.5},
                {"type":"punctures","points":[[3,3],[4,4]]}]},
            {"type":"complement","arg":{"type":"segment","a":[-2,0],"b":[2,0]}}]}"#;
        let spec = parse_region(text).unwrap();
        assert_eq!(
            parse_region(&region_to_json(&spec).to_string()).unwrap(),
            spec
        );
    }

    #[test]
    fn rejects_unknown_and_missing_keys() {
        assert!(
            parse_region(r#"{"type":"disk","center":[0,0],"radius":1,"color":"red"}"#).is_err()
        );
        assert!(parse_region(r#"{"type":"disk","center":[0,0]}"#).is_err());
        assert!(parse_region(r#"{"type":"blob"}"#).is_err());
        assert!(parse_region(r#"{"type":"union","args":[]}"#).is_err());
        assert!(parse_region(r#"{"type":"disk","center":[0],"radius":1}"#).is_err());
        assert!(parse_region(r#"{"type":"disk","center":[0,0],"radius":-1}"#).is_err());
        assert!(parse_region("[1,2").is_err());
    }

    #[test]
    fn compact_documents() {
        let k = parse_compact(r#"{"type":"punctures","points":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(
            k,
            CompactSpec::points(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)])
        );
        assert!(parse_compact(r#"{"type":"halfplane","anchor":[0,0],"normal":[0,1]}"#).is_err());
        let k = parse_compact(r#"{"type":"segment","a":[-2,0],"b":[2,0]}"#).unwrap();
        assert_eq!(parse_compact(&compact_to_json(&k).to_string()).unwrap(), k);
    }
}
