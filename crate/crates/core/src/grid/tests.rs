use std::f64::consts::PI;

use super::*;
use crate::geometry::RegionSpec;

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

#[test]
fn unit_disk_interior_count_matches_area() {
    let h = 1.0 / 64.0;
    let g = discretize(
        &RegionSpec::unit_disk(),
        Chart::Identity,
        BBox::square(1.2),
        h,
    )
    .unwrap();
    let expected = PI * (1.0 - 2.0 * h).powi(2) / (h * h);
    let n = g.count(NodeClass::Interior) as f64;
    assert!((n - expected).abs() / expected < 0.02, "{n} vs {expected}");
    assert_eq!(g.count(NodeClass::Edge), 0);
    let origin = g.node_at(Point::ORIGIN).unwrap();
    assert_eq!(g.class[origin], NodeClass::Interior);
}

#[test]
fn interior_nodes_have_no_exterior_neighbours() {
    let region = RegionSpec::union(vec![
        RegionSpec::disk(p(-0.5, 0.0), 1.0),
        RegionSpec::disk(p(0.5, 0.0), 1.0),
    ]);
    let g = discretize(
        &region,
        Chart::Identity,
        BBox::new(-1.7, 1.7, -1.2, 1.2),
        1.0 / 32.0,
    )
    .unwrap();
    for k in 0..g.len() {
        if g.class[k] == NodeClass::Interior {
            for n in g.neighbors(k) {
                assert_ne!(g.class[n.unwrap()], NodeClass::Exterior);
            }
        }
        if g.class[k] == NodeClass::Band {
            let z = g.plane_point(k).unwrap();
            let d = region.smooth_distance(z);
            let near_exterior = g
                .neighbors(k)
                .iter()
                .flatten()
                .any(|&n| g.class[n] == NodeClass::Exterior);
            assert!(d <= 2.0 * g.h || near_exterior);
        }
    }
}

#[test]
fn exterior_disk_in_inversion_chart() {
    let g = discretize(
        &RegionSpec::disk_complement(Point::ORIGIN, 1.0),
        Chart::inversion(),
        BBox::square(0.9),
        1.0 / 32.0,
    )
    .unwrap();
    let origin = g.node_at(Point::ORIGIN).unwrap();
    assert_eq!(g.class[origin], NodeClass::Interior);
    for k in 0..g.len() {
        let r = g.node(k).norm();
        let frame = g.neighbors(k).iter().any(Option::is_none);
        if r >= 1.0 {
            assert_eq!(g.class[k], NodeClass::Exterior);
        } else if frame {
            assert_eq!(g.class[k], NodeClass::Edge);
        } else if r < 1.0 - 2.0 * g.h - 1e-12 {
            assert_eq!(g.class[k], NodeClass::Interior, "{}", g.node(k));
        }
    }
}

#[test]
fn three_puncture_rings() {
    let pts = vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)];
    let region = RegionSpec::punctured_plane(pts.clone());
    let h = 1.0 / 128.0;
    assert!(discretize(&region, Chart::Identity, BBox::square(2.0), h).is_err());
    let g = discretize_window(&region, BBox::square(2.0), h).unwrap();
    for q in pts {
        let k = g.node_at(q).unwrap();
        assert_eq!(g.class[k], NodeClass::Exterior);
        let ring = (0..g.len())
            .filter(|&k| g.class[k] == NodeClass::Ring && g.node(k).dist(q) <= 4.0 * h)
            .count();
        // Lattice points in a disk of radius 4 minus the centre.
        assert_eq!(ring, 48);
    }
}

#[test]
fn non_hyperbolic_and_empty_inputs() {
    let one = RegionSpec::punctured_plane(vec![Point::ORIGIN]);
    assert!(matches!(
        discretize_window(&one, BBox::square(1.0), 0.1).and_then(|_| discretize(
            &one,
            Chart::inversion(),
            BBox::square(1.0),
            0.1
        )),
        Err(Error::Precondition(_))
    ));
    let far = RegionSpec::disk(p(10.0, 10.0), 0.5);
    assert!(matches!(
        discretize(&far, Chart::Identity, BBox::square(1.0), 0.1),
        Err(Error::EmptyGrid)
    ));
    assert!(discretize(
        &RegionSpec::unit_disk(),
        Chart::inversion(),
        BBox::square(1.0),
        0.1
    )
    .is_err());
}

#[test]
fn masks_follow_connectivity() {
    let annulus = RegionSpec::intersection(vec![
        RegionSpec::disk(Point::ORIGIN, 2.0),
        RegionSpec::disk_complement(Point::ORIGIN, 0.5),
    ]);
    let g = discretize(&annulus, Chart::Identity, BBox::square(2.2), 1.0 / 16.0).unwrap();
    let mask = component_mask(&g, p(1.25, 0.0)).unwrap();
    let all = g
        .class
        .iter()
        .filter(|c| **c != NodeClass::Exterior)
        .count();
    assert_eq!(mask.iter().filter(|m| **m).count(), all);

    let two = RegionSpec::union(vec![
        RegionSpec::disk(p(-2.0, 0.0), 1.0),
        RegionSpec::disk(p(2.0, 0.0), 1.0),
    ]);
    let g = discretize(
        &two,
        Chart::Identity,
        BBox::new(-3.2, 3.2, -1.2, 1.2),
        1.0 / 16.0,
    )
    .unwrap();
    let left = component_mask(&g, p(-2.0, 0.0)).unwrap();
    let right = component_mask(&g, p(2.0, 0.0)).unwrap();
    assert!(left.iter().zip(&right).all(|(a, b)| !(a & b)));
    assert!(left[g.node_at(p(-2.0, 0.5)).unwrap()]);
    assert!(component_mask(&g, p(0.0, 0.0)).is_err());
}

#[test]
fn eroded_masks_are_nested_and_exhaust() {
    let disk = RegionSpec::unit_disk();
    let h = 1.0 / 32.0;
    let mut prev: Option<Vec<bool>> = None;
    for delta in [0.4, 0.2, 0.1, 0.05] {
        let g = discretize(&erode(&disk, delta), Chart::Identity, BBox::square(1.1), h).unwrap();
        let mask: Vec<bool> = g.class.iter().map(|c| *c != NodeClass::Exterior).collect();
        if let Some(prev) = &prev {
            assert!(prev.iter().zip(&mask).all(|(a, b)| !a || *b));
        }
        prev = Some(mask);
    }
    let full = discretize(&disk, Chart::Identity, BBox::square(1.1), h).unwrap();
    let tiny = discretize(&erode(&disk, 1e-9), Chart::Identity, BBox::square(1.1), h).unwrap();
    assert_eq!(
        full.class
            .iter()
            .filter(|c| **c != NodeClass::Exterior)
            .count(),
        tiny.class
            .iter()
            .filter(|c| **c != NodeClass::Exterior)
            .count()
    );
}

#[test]
fn chart_round_trip() {
    let chart = Chart::Inversion {
        center: p(0.5, -1.0),
    };
    let z = p(2.0, 3.0);
    let w = chart.from_plane(z).unwrap();
    assert!(chart.to_plane(w).unwrap().dist(z) < 1e-14);
    assert!(chart.to_plane(Point::ORIGIN).is_none());
    assert!(chart.from_plane(p(0.5, -1.0)).is_none());
}
