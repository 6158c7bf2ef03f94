//! Replays the checked-in fuzz seeds through the same checks the fuzz
//! targets make, so the corpus is exercised on every test run.

use std::fs;
use std::path::PathBuf;

use poincare::catalog::parse_tag;
use poincare::geometry::{compact_to_json, parse_compact, parse_region, region_to_json};
use poincare::Point;
use poincare_cli::args::{parse_bbox, parse_list, parse_point, parse_query, parse_spacings};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let bytes = fs::read(&path).unwrap();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                String::from_utf8_lossy(&bytes).into_owned(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn region_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_region") {
        let Ok(region) = parse_region(&text) else { continue };
        accepted += 1;
        let out = region_to_json(&region).to_string();
        let again = parse_region(&out).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(region_to_json(&again).to_string(), out, "{name}");
        let _ = region.validate();
    }
    assert!(accepted >= 8);
}

#[test]
fn compact_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_compact") {
        let Ok(k) = parse_compact(&text) else { continue };
        accepted += 1;
        let again = parse_compact(&compact_to_json(&k).to_string()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(again, k, "{name}");
        if k.validate().is_ok() {
            let _ = k.point_count();
        }
    }
    assert!(accepted >= 6);
}

#[test]
fn tag_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("catalog_tag") {
        let Ok(metric) = parse_tag(&text) else { continue };
        accepted += 1;
        let again = parse_tag(&metric.to_string()).unwrap_or_else(|e| panic!("{name}: {e}"));
        let z = Point::new(0.25, 0.5);
        if let (Ok(a), Ok(b)) = (metric.density(z), again.density(z)) {
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{name}");
        }
    }
    assert!(accepted >= 8);
}

#[test]
fn cli_arg_seeds() {
    for (name, text) in seeds("cli_args") {
        if let Ok(v) = parse_list(&text) {
            assert!(!v.is_empty() && v.iter().all(|x| x.is_finite()), "{name}");
        }
        if let Ok(h) = parse_spacings(&text) {
            assert!(h.windows(2).all(|w| w[1] < w[0]) && h.iter().all(|&x| x > 0.0), "{name}");
        }
        if let Ok(b) = parse_bbox(&text) {
            assert!(b.xmin < b.xmax && b.ymin < b.ymax, "{name}");
        }
        let _ = parse_point(&text);
        let _ = parse_query(&text);
    }
}
