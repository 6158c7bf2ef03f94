#![no_main]

use libfuzzer_sys::fuzz_target;
use poincare::catalog::parse_tag;
use poincare::Point;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(metric) = parse_tag(text) else { return };
    // Display gives a tag back. Normals are renormalized on parse, so
    // compare densities rather than text.
    let again = parse_tag(&metric.to_string()).expect("displayed tag parses");
    let z = Point::new(0.25, 0.5);
    if let (Ok(a), Ok(b)) = (metric.density(z), again.density(z)) {
        assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0) || (a.is_infinite() && b.is_infinite()));
    }
});
