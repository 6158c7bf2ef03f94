#![no_main]

use libfuzzer_sys::fuzz_target;
use poincare_cli::args::{parse_bbox, parse_list, parse_point, parse_query, parse_spacings};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_list(text) {
        assert!(!v.is_empty() && v.iter().all(|x| x.is_finite()));
    }
    if let Ok(h) = parse_spacings(text) {
        assert!(h.windows(2).all(|w| w[1] < w[0]) && h.iter().all(|&x| x > 0.0));
    }
    if let Ok(b) = parse_bbox(text) {
        assert!(b.xmin < b.xmax && b.ymin < b.ymax);
    }
    let _ = parse_point(text);
    let _ = parse_query(text);
});
