//! Parsers for the small textual arguments: numbers, points, lists, boxes.

use std::fmt;

use poincare::{BBox, Point};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgError(pub String);

impl fmt::Display for ArgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ArgError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ArgError> {
    Err(ArgError(msg.into()))
}

/// A parsed comma-separated list, kept as one argument value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct NumberList(pub Vec<f64>);

impl std::ops::Deref for NumberList {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A finite number, either a decimal literal or a quotient `a/b`.
pub fn parse_number(s: &str) -> Result<f64, ArgError> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a
                .trim()
                .parse()
                .map_err(|_| ArgError(format!("bad numerator in {s:?}")))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|_| ArgError(format!("bad denominator in {s:?}")))?;
            if b == 0.0 {
                return err(format!("zero denominator in {s:?}"));
            }
            a / b
        }
        None => s
            .parse()
            .map_err(|_| ArgError(format!("not a number: {s:?}")))?,
    };
    if !v.is_finite() {
        return err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

/// Comma-separated numbers; at least one.
pub fn parse_list(s: &str) -> Result<Vec<f64>, ArgError> {
    if s.trim().is_empty() {
        return err("empty list");
    }
    s.split(',').map(parse_number).collect()
}

/// A list of spacings, positive and strictly decreasing.
pub fn parse_spacings(s: &str) -> Result<NumberList, ArgError> {
    let hs = parse_list(s)?;
    if hs.iter().any(|h| *h <= 0.0) {
        return err("spacings must be positive");
    }
    if hs.windows(2).any(|w| w[1] >= w[0]) {
        return err("spacings must be strictly decreasing");
    }
    Ok(NumberList(hs))
}

/// As [`parse_list`], wrapped for use as a single argument.
pub fn parse_number_list(s: &str) -> Result<NumberList, ArgError> {
    parse_list(s).map(NumberList)
}

/// A positive spacing or tolerance.
pub fn parse_positive(s: &str) -> Result<f64, ArgError> {
    let v = parse_number(s)?;
    if v <= 0.0 {
        return err(format!("{s:?} must be positive"));
    }
    Ok(v)
}

pub fn parse_point(s: &str) -> Result<Point, ArgError> {
    let v = parse_list(s)?;
    match v[..] {
        [x, y] => Ok(Point::new(x, y)),
        _ => err(format!("expected x,y, got {s:?}")),
    }
}

/// A density query location: a plane point or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryPoint {
    Finite(Point),
    Infinity,
}

pub fn parse_query(s: &str) -> Result<QueryPoint, ArgError> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(QueryPoint::Infinity),
        t => parse_point(t).map(QueryPoint::Finite),
    }
}

/// `xmin,xmax,ymin,ymax` with nonempty extent on both axes.
pub fn parse_bbox(s: &str) -> Result<BBox, ArgError> {
    let v = parse_list(s)?;
    match v[..] {
        [x0, x1, y0, y1] if x0 < x1 && y0 < y1 => Ok(BBox::new(x0, x1, y0, y1)),
        [_, _, _, _] => err(format!("box {s:?} is empty")),
        _ => err(format!("expected xmin,xmax,ymin,ymax, got {s:?}")),
    }
}
